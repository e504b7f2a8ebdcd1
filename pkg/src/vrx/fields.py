"""Truncated fields, residue products and reconstruction from generators.

A ``Field`` is a family of modes n -> (linear map on states).  Modes are
evaluated lazily on basis labels and memoized; a mode whose evaluation would
leave the truncation raises ``TruncationEscape`` and counts as unavailable,
never as zero.
"""

import random

from .errors import HypothesisUnverified, NotFound, TruncationEscape, WindowRejected
from .exactnum import binom
from .instance import axpy, lincomb, scale, sub_states, unit
from .report import CheckReport
from .vertexcore import AdmissibleWindow, as_state, canonical_hs, locality_order

_ESCAPE = object()


class Field:
    """Modes of a truncated field on the states of ``V``.

    ``wt`` is the weight of the field (a mode n shifts weight by wt - n - 1)
    or None when unknown; ``n0_const`` is a label-independent truncation
    witness for instances without an exact lower weight bound.
    """

    def __init__(self, V, fn, wt=None, n0_const=None, name="field"):
        self.V = V
        self._fn = fn
        self.wt = wt
        self.n0_const = n0_const
        self.name = name
        self._memo = {}

    def mode_label(self, n, lab):
        key = (n, lab)
        r = self._memo.get(key)
        if r is None:
            try:
                r = self._fn(n, lab)
            except TruncationEscape:
                self._memo[key] = _ESCAPE
                raise
            self._memo[key] = r
        elif r is _ESCAPE:
            raise TruncationEscape(f"{self.name}({n}) unavailable on {lab}")
        return r

    def mode(self, n, state):
        R = self.V.base
        acc = {}
        for lab, c in state.items():
            if n >= self.n0_label(lab):
                continue
            axpy(R, acc, c, self.mode_label(n, lab))
        return acc

    def n0_label(self, lab):
        """An n0 with mode(n) lab = 0 for all n >= n0."""
        V = self.V
        if self.n0_const is not None:
            return self.n0_const
        if self.wt is None or not V.lo_exact:
            raise ValueError(f"no truncation witness for {self.name}")
        return self.wt + V.weight(lab) - V.lo

    def n0(self, state):
        return max((self.n0_label(lab) for lab in state), default=0)

    def __repr__(self):
        return f"<Field {self.name}>"


def field_of_state(V, u, name=None):
    """Y(u, z) restricted to the truncation."""
    u = as_state(V, u)
    ws = V.state_weights(u)
    wt = ws[0] if len(ws) == 1 else None
    n0c = None
    if not V.lo_exact:
        n0c = max((V.n0(a, b) for a in u for b in V.all_labels()), default=0)
    if wt is None and V.lo_exact and u:
        raise ValueError("field_of_state needs a homogeneous state")
    return Field(V, lambda n, lab: V.nth_product(u, n, unit(lab, V.base)),
                 wt=wt if u else 0, n0_const=n0c if u else (n0c or 0),
                 name=name or f"Y({V.show(u)})")


def identity_field(V):
    return field_of_state(V, V.vacuum, name="Id")


def residue_product(a, m, b):
    """The m-th residue product a_m b."""
    V = a.V
    R = V.base
    sign_m = (-1) ** (m % 2)

    def fn(n, lab):
        x = unit(lab, R)
        acc = {}
        top1 = b.n0_label(lab) - n
        top2 = a.n0_label(lab)
        if m >= 0:
            top1, top2 = min(top1, m + 1), min(top2, m + 1)
        for i in range(max(top1, 0)):
            c = (-1) ** i * binom(m, i)
            if c:
                axpy(R, acc, R.from_int(c), a.mode(m - i, b.mode(n + i, x)))
        for i in range(max(top2, 0)):
            c = -sign_m * (-1) ** i * binom(m, i)
            if c:
                axpy(R, acc, R.from_int(c), b.mode(m + n - i, a.mode(i, x)))
        return acc

    wt = a.wt + b.wt - m - 1 if a.wt is not None and b.wt is not None else None
    n0c = None
    if a.n0_const is not None and b.n0_const is not None:
        ca, cb = a.n0_const, b.n0_const
        n0c = cb if ca <= 0 else max(cb, ca + cb - m - 1)
    return Field(V, fn, wt=wt, n0_const=n0c, name=f"({a.name})_{m}({b.name})")


class DeltaOperator:
    """delta^(i): a(n) -> (-1)^i C(n, i) a(n - i)."""

    def __init__(self, i):
        if i < 0:
            raise ValueError("order must be nonnegative")
        self.i = i

    def __call__(self, a):
        i = self.i
        R = a.V.base
        if i == 0:
            return a

        def fn(n, lab):
            c = (-1) ** i * binom(n, i)
            if not c:
                return {}
            return scale(R, R.from_int(c), a.mode(n - i, unit(lab, R)))

        wt = None if a.wt is None else a.wt + i
        n0c = None if a.n0_const is None else a.n0_const + i
        return Field(a.V, fn, wt=wt, n0_const=n0c, name=f"delta{i}({a.name})")


def field_combination(terms, name="comb"):
    """Sum of c * field over (c, field) pairs with a common weight."""
    V = terms[0][1].V
    R = V.base
    wts = {f.wt for _, f in terms}
    wt = wts.pop() if len(wts) == 1 else None
    consts = [f.n0_const for _, f in terms]
    n0c = max(consts) if all(c is not None for c in consts) else None

    def fn(n, lab):
        x = unit(lab, R)
        return lincomb(R, [(c, f.mode(n, x)) for c, f in terms])

    return Field(V, fn, wt=wt, n0_const=n0c, name=name)


def field_difference(a, b):
    return field_combination([(1, a), (-1, b)], name=f"{a.name}-{b.name}")


# -- comparisons ----------------------------------------------------------------

def _mode_range(f, lab, V, spread=None):
    """Modes n of f worth testing on ``lab``: from the top weight down to n0."""
    top = f.n0_label(lab)
    if f.wt is not None:
        bottom = f.wt + V.weight(lab) - V.hi - 1
    else:
        bottom = top - (spread or (V.hi - V.lo + 2))
    return range(bottom, top + 2)


def compare_fields(a, b, samples, report, spread=None):
    """Record mode-by-mode agreement where both sides are available."""
    V = a.V
    for lab in samples:
        x = unit(lab, V.base)
        for n in _mode_range(a, lab, V, spread):
            def run(n=n, x=x):
                return a.mode(n, x) == b.mode(n, x)
            report.attempt(run, lambda n=n, lab=lab: {"n": n, "x": V.label_str(lab),
                                                      "a": a.name, "b": b.name})
    return report


def check_resprod_matches_state(V, u, m, v, max_weight=None):
    """residue_product(Y(u), m, Y(v)) = Y(u(m)v) wherever both are available."""
    u, v = as_state(V, u), as_state(V, v)
    rep = CheckReport("resprod_vs_state", V.spec)
    try:
        uv = V.nth_product(u, m, v)
    except TruncationEscape:
        rep.record(None)
        return rep
    lhs = residue_product(field_of_state(V, u), m, field_of_state(V, v))
    if uv:
        rhs = field_of_state(V, uv)
    else:
        rhs = Field(V, lambda n, lab: {}, wt=lhs.wt, n0_const=lhs.n0_const, name="0")
    return compare_fields(lhs, rhs, V.all_labels(max_weight), rep)


def check_residue_creation(a, b, m, created_b=None):
    """a_m b is creative and creates a(m) v, where b creates v.

    That is (a_m b)(n) vacuum = 0 for n >= 0 and (a_m b)(-1) vacuum = a(m) v.
    """
    V = a.V
    rep = CheckReport("residue_creation", V.spec)
    vac = V.vacuum
    try:
        bv = b.mode(-1, vac) if created_b is None else created_b
        target = a.mode(m, bv)
    except TruncationEscape:
        rep.record(None)
        return rep
    ab = residue_product(a, m, b)
    top = ab.n0(vac)
    for n in range(-1, max(top, 0) + 2):
        rep.attempt(lambda n=n: ab.mode(n, vac) == (target if n == -1 else {}),
                    {"n": n})
    return rep


def field_locality_order(a, c, t_max, samples=None, box=None):
    """Smallest t with (z-w)^t [a(z), c(w)] = 0 on the grid, and a witness at t-1."""
    V = a.V
    R = V.base
    if samples is None:
        samples = V.all_labels()
    box = box if box is not None else max(V.hi - V.lo, 2) + 2
    last = None
    for t in range(t_max + 1):
        sign_t = (-1) ** (t % 2)
        violation, admitted = None, 0
        for lab in samples:
            x = unit(lab, R)
            for r in range(-box, box + 1):
                for s in range(-box, box + 1):
                    try:
                        terms = []
                        for i in range(t + 1):
                            co = (-1) ** i * binom(t, i)
                            terms.append((co, a.mode(r + t - i, c.mode(s + i, x))))
                            terms.append((-co * sign_t, c.mode(s + t - i, a.mode(r + i, x))))
                        res = lincomb(R, terms)
                    except TruncationEscape:
                        continue
                    admitted += 1
                    if res:
                        violation = {"t": t, "r": r, "s": s, "x": V.label_str(lab)}
                        break
                if violation:
                    break
            if violation:
                break
        if violation is None:
            if admitted == 0:
                raise NotFound(f"nothing available at t={t}")
            return t, last
        last = violation
    raise NotFound(f"locality order exceeds {t_max}")


def check_dong_locality(a, b, c, m, t_max, samples=None, box=None):
    """Locality order of a_m b against c; raises NotFound."""
    return field_locality_order(residue_product(a, m, b), c, t_max, samples, box)


def check_delta_hs_on_fields(a, b, m, ell, samples=None):
    """delta^(l)(a_m b) = sum_{i+j=l} (delta^(i) a)_m (delta^(j) b), mode by mode."""
    V = a.V
    rep = CheckReport("delta_hs", V.spec)
    lhs = DeltaOperator(ell)(residue_product(a, m, b))
    rhs = field_combination([(1, residue_product(DeltaOperator(i)(a), m, DeltaOperator(ell - i)(b)))
                             for i in range(ell + 1)], name="sum")
    samples = samples if samples is not None else V.all_labels()
    return compare_fields(lhs, rhs, samples, rep)


def check_delta_iterative(a, i, j, samples=None):
    """delta^(i) delta^(j) = C(i+j, i) delta^(i+j) on a field."""
    V = a.V
    rep = CheckReport("delta_iterative", V.spec)
    lhs = DeltaOperator(i)(DeltaOperator(j)(a))
    rhs = field_combination([(binom(i + j, i), DeltaOperator(i + j)(a))])
    samples = samples if samples is not None else V.all_labels()
    return compare_fields(lhs, rhs, samples, rep)


def check_field_tc(d, F, samples=None, max_m=None, name="tc"):
    """[D_k, d(n)] x = sum_{i=1}^k (-1)^i C(n, i) d(n-i) D_{k-i} x."""
    V = d.V
    R = V.base
    rep = CheckReport(name, V.spec)
    samples = samples if samples is not None else V.all_labels()
    max_m = F.cutoff if max_m is None else min(max_m, F.cutoff)
    for lab in samples:
        x = unit(lab, R)
        for k in range(max_m + 1):
            for n in _mode_range(d, lab, V):
                def run(k=k, n=n, x=x):
                    lhs = sub_states(R, F.apply(k, d.mode(n, x)), d.mode(n, F.apply(k, x)))
                    rhs = lincomb(R, [((-1) ** i * binom(n, i), d.mode(n - i, F.apply(k - i, x)))
                                      for i in range(1, k + 1)])
                    return lhs == rhs
                rep.attempt(run, lambda k=k, n=n, lab=lab: {"m": k, "n": n, "x": V.label_str(lab)})
    return rep


def check_tc_closure(a, b, F, m, samples=None, max_m=None):
    """If a and b are translation covariant against F then so is a_m b."""
    pre_a = check_field_tc(a, F, samples, max_m)
    pre_b = check_field_tc(b, F, samples, max_m)
    if not (pre_a.ok and pre_b.ok):
        raise HypothesisUnverified("operands are not translation covariant")
    rep = check_field_tc(residue_product(a, m, b), F, samples, max_m, name="tc_closure")
    rep.details = {"m": m}
    return rep


def check_null_field_lemma(d, V=None, t_max=8, samples=None, max_m=None):
    """A covariant, local, creative field creating 0 vanishes on the truncation."""
    V = V or d.V
    R = V.base
    rep = CheckReport("null_field", V.spec)
    F = canonical_hs(V)
    vac = V.vacuum
    samples = samples if samples is not None else V.all_labels()
    if not check_field_tc(d, F, samples, max_m).ok:
        raise HypothesisUnverified("field is not translation covariant")
    for n in range(0, d.n0(vac) + 1):
        try:
            if d.mode(n, vac):
                raise HypothesisUnverified("field is not creative")
        except TruncationEscape:
            continue
    for lab in samples:
        try:
            field_locality_order(d, field_of_state(V, lab), t_max, samples=samples, box=3)
        except NotFound:
            raise HypothesisUnverified(f"no locality with {V.label_str(lab)}")
    created = d.mode(-1, vac)
    rep.details = {"creates": V.state_json(created), "applicable": not created}
    if created:
        return rep
    # d(-m-1) vacuum = D_m d(-1) vacuum = 0, then d vanishes on every sample
    top = max(V.hi - V.lo, 0)
    for m in range(top + 1):
        rep.attempt(lambda m=m: not d.mode(-m - 1, vac), {"vacuumMode": -m - 1})
    for lab in samples:
        x = unit(lab, R)
        for n in _mode_range(d, lab, V):
            rep.attempt(lambda n=n, x=x: not d.mode(n, x), lambda n=n, lab=lab: {
                "n": n, "x": V.label_str(lab)})
    return rep


def random_difference_fields(V, count, seed=0, max_weight=None, mrange=2):
    """Fields residue_product(Y(u), t, Y(v)) - Y(u(t)v) for random u, v, t."""
    rng = random.Random(seed)
    labels = V.all_labels(max_weight)
    out = []
    while len(out) < count:
        u, v = rng.choice(labels), rng.choice(labels)
        t = rng.randint(-mrange, mrange)
        try:
            uv = V.product(u, t, v)
        except TruncationEscape:
            continue
        rp = residue_product(field_of_state(V, u), t, field_of_state(V, v))
        if uv:
            d = field_difference(rp, field_of_state(V, uv))
        else:
            d = field_combination([(1, rp)], name=rp.name)
        out.append(((u, t, v), d))
    return out


# -- reconstruction ----------------------------------------------------------------

def _instance_word(V, lab, gens):
    """A word ((g, m), ...) with lab = g1(m1) ... gk(mk) vacuum, if the instance knows one."""
    from .virasoro import OMEGA, VirasoroRing
    from .hsderiv import CommHSVertexRing
    if isinstance(V, VirasoroRing) and gens == [{OMEGA: V.base.one()}]:
        return [(0, 1 - p) for p in lab]
    if isinstance(V, CommHSVertexRing) and gens == [{1: V.base.one()}] and V.carrier.deg >= 1:
        return [(0, -1)] * lab
    return None


def _bfs_words(V, gens, max_weight, max_len=6, mrange=None):
    R = V.base
    mrange = mrange if mrange is not None else max(V.hi - V.lo, 2) + 1
    found = {}
    frontier = [((), dict(V.vacuum))]
    if len(V.vacuum) == 1:
        found[next(iter(V.vacuum))] = ()
    targets = set(V.all_labels(max_weight))
    for _ in range(max_len):
        nxt = []
        for word, state in frontier:
            for gi, g in enumerate(gens):
                for m in range(-mrange, mrange + 1):
                    try:
                        s = V.nth_product(g, m, state)
                    except TruncationEscape:
                        continue
                    if len(s) == 1:
                        lab, c = next(iter(s.items()))
                        if lab in targets and R.is_one(c) and lab not in found:
                            found[lab] = ((gi, m),) + word
                            nxt.append((((gi, m),) + word, s))
        frontier = nxt
        if targets <= set(found):
            break
    return found


def check_generator_hypotheses(V, gens, t_max=8):
    """Generators are creative, pairwise local and translation covariant."""
    F = canonical_hs(V)
    fields = [field_of_state(V, g) for g in gens]
    for f in fields:
        for n in range(0, f.n0(V.vacuum)):
            if f.mode(n, V.vacuum):
                raise HypothesisUnverified(f"{f.name} is not creative")
        if not check_field_tc(f, F, V.all_labels(min(V.hi, 4)), max_m=3).ok:
            raise HypothesisUnverified(f"{f.name} is not translation covariant")
    for a in gens:
        for b in gens:
            try:
                locality_order(V, a, b, t_max, max_weight=min(V.hi, 4))
            except NotFound:
                raise HypothesisUnverified("generators are not mutually local")
    return fields


def reconstruct_from_generators(V, generators, max_weight=None, sample_weight=None):
    """Fields of generated basis states as nested residue products.

    Returns ({label: Field}, report); the report compares each reconstructed
    field with field_of_state mode by mode.
    """
    gens = [as_state(V, g) for g in generators]
    top = V.hi if max_weight is None else min(V.hi, max_weight)
    fields = check_generator_hypotheses(V, gens) if gens else []
    ident = identity_field(V)
    words = {}
    for lab in V.all_labels(top):
        w = _instance_word(V, lab, gens)
        if w is not None:
            words[lab] = tuple(w)
    missing = [lab for lab in V.all_labels(top) if lab not in words]
    if missing and gens:
        for lab, w in _bfs_words(V, gens, top).items():
            words.setdefault(lab, w)
    if not gens:
        words = {lab: () for lab in V.vacuum}
    built = {}

    def build(word):
        if word in built:
            return built[word]
        if not word:
            f = ident
        else:
            gi, m = word[0]
            f = residue_product(fields[gi], m, build(word[1:]))
        built[word] = f
        return f

    rep = CheckReport("reconstruct", V.spec)
    out = {}
    samples = V.all_labels(sample_weight if sample_weight is not None else top)
    for lab in sorted(words, key=lambda l: V.label_index()[l]):
        f = build(words[lab])
        out[lab] = f
        compare_fields(f, field_of_state(V, lab), samples, rep)
    rep.details = {"reconstructed": len(out),
                   "labels": len(V.all_labels(top)),
                   "unreached": [V.label_str(l) for l in V.all_labels(top) if l not in out]}
    return out, rep


# -- Taylor expansion and field property ---------------------------------------------

def check_formal_taylor(V, u, p, q, w, window=None):
    """Residual of sum_m (-1)^(p-m) D_m u(q) D_(p-m) w = C(-(q-p)-1, p) u(q-p) w.

    The right side is the y^p coefficient of Y(u, z+y) under the binomial
    expansion convention.
    """
    u, w = as_state(V, u), as_state(V, w)
    R = V.base
    window = window or AdmissibleWindow(V)
    for wu in V.state_weights(u):
        for ww in V.state_weights(w):
            W = wu + ww + p - q - 1
            inner = [ww + p - m for m in range(p + 1)] + \
                    [wu + ww + p - m - q - 1 for m in range(p + 1)]
            if not all(window.weight_ok(x) for x in inner + [W]):
                raise WindowRejected("taylor")
    lhs = lincomb(R, [((-1) ** (p - m), V.D(m, V.nth_product(u, q, V.D(p - m, w))))
                      for m in range(p + 1)])
    rhs = lincomb(R, [(binom(-(q - p) - 1, p), V.nth_product(u, q - p, w))])
    return sub_states(R, lhs, rhs)


def taylor_suite(V, max_weight, bound, max_p=None):
    rep = CheckReport("taylor", V.spec)
    window = AdmissibleWindow(V)
    samples = [unit(lab, V.base) for lab in V.all_labels(max_weight)]
    max_p = bound if max_p is None else max_p
    for u in samples:
        for w in samples:
            for p in range(max_p + 1):
                for q in range(-bound, bound + 1):
                    rep.attempt(lambda: not check_formal_taylor(V, u, p, q, w, window),
                                lambda: {"u": V.state_json(u), "w": V.state_json(w),
                                         "p": p, "q": q})
    return rep


def check_field_property_from_locality(V, u, v, t=None, t_max=8):
    """If Y(u) and Y(v) are local of order t then u(n)v = 0 for n >= t."""
    u, v = as_state(V, u), as_state(V, v)
    rep = CheckReport("field_from_locality", V.spec)
    if t is None:
        t, _ = locality_order(V, u, v, t_max)
    rep.details = {"t": t}
    for n in range(t, max(V.state_n0(u, v), t) + 3):
        rep.attempt(lambda n=n: not V.nth_product(u, n, v), {"n": n})
    return rep
