"""Identity checkers for truncated vertex rings.

Every checker works on a ``VertexRing`` and on states (dicts).  Before
evaluating an identity the ``AdmissibleWindow`` decides, from operand weights
alone, whether every term stays inside the truncation; rejected cases are
reported as skipped.  Evaluation is lazy as well, so an escape that slips past
the window is a skip and never a failure.
"""

from itertools import product as cartesian

from .errors import NotFound, TruncationEscape, WindowRejected
from .exactnum import binom
from .hsderiv import HSFamily, check_hs_property, check_iterative
from .instance import axpy, lincomb, sub_states, unit
from .linalg import Submodule
from .report import CheckReport


def as_state(V, x):
    return x if isinstance(x, dict) else unit(x, V.base)


class AdmissibleWindow:
    """Conservative weight bookkeeping for one instance."""

    def __init__(self, V):
        self.V = V

    def weight_ok(self, w):
        """A state of weight w is either inside the window or exactly zero."""
        V = self.V
        if w > V.hi:
            return V.hi_exact
        if w < V.lo:
            return V.lo_exact
        return True

    def product_ok(self, wx, wy, n_min):
        """Every x(n)y with n >= n_min, for x, y of the given weights, is exact."""
        nb = self.V.n0_weight_bound(wx, wy)
        if n_min >= nb:
            return True
        return self.weight_ok(wx + wy - n_min - 1) and self.weight_ok(wx + wy - nb)

    def single_ok(self, wx, wy, n):
        return self.weight_ok(wx + wy - n - 1)

    # per-identity admission; weights are of homogeneous operands
    def jacobi(self, wu, wv, ww, r, s, t):
        W = wu + wv + ww - r - s - t - 2
        return (self.weight_ok(W) and self.product_ok(wu, wv, t)
                and self.product_ok(wv, ww, s) and self.product_ok(wu, ww, r))

    def commutator(self, wu, wv, ww, r, s):
        W = wu + wv + ww - r - s - 2
        return (self.weight_ok(W) and self.product_ok(wu, wv, 0)
                and self.single_ok(wv, ww, s) and self.single_ok(wu, ww, r))

    def associator(self, wu, wv, ww, s, t):
        W = wu + wv + ww - s - t - 2
        return (self.weight_ok(W) and self.single_ok(wu, wv, t)
                and self.product_ok(wv, ww, s) and self.product_ok(wu, ww, 0))

    def locality(self, wu, wv, ww, r, s, t):
        W = wu + wv + ww - r - s - t - 2
        if not self.weight_ok(W):
            return False
        return all(self.single_ok(wv, ww, s + i) and self.single_ok(wu, ww, r + i)
                   for i in range(t + 1))

    def skew(self, wu, wv, n):
        return self.product_ok(wu, wv, n) and self.single_ok(wv, wu, n)

    def mode_shift(self, wu, ww, i, n):
        return self.weight_ok(wu + i) and self.weight_ok(wu + ww - (n - i) - 1)

    def translation(self, wu, ww, m, n):
        X = wu + ww - n - 1
        return (self.weight_ok(X) and self.weight_ok(X + m)
                and all(self.weight_ok(ww + k) for k in range(m + 1)))


def _weights(V, x):
    return V.state_weights(x)


def _admit(V, pred, *states_and_ints):
    """Apply a weight predicate to every combination of homogeneous weights."""
    states = [s for s in states_and_ints if isinstance(s, dict)]
    ints = [s for s in states_and_ints if not isinstance(s, dict)]
    for ws in cartesian(*[_weights(V, s) or [0] for s in states]):
        if not pred(*ws, *ints):
            return False
    return True


def _js(V, x):
    return V.state_json(x)


# -- canonical HS derivation ----------------------------------------------------

def canonical_hs(V, cutoff=None):
    """D_m(u) = u(-m-1) vacuum, tabulated on basis labels up to ``cutoff``."""
    if cutoff is None:
        cutoff = max(V.hi - V.lo, 0)
    labels = V.all_labels()
    tables = []
    for m in range(cutoff + 1):
        t = {}
        for lab in labels:
            try:
                t[lab] = V.D(m, unit(lab, V.base))
            except TruncationEscape:
                t[lab] = None
        tables.append(t)
    trivial = all(not img for m in range(1, cutoff + 1) for img in tables[m].values())
    F = HSFamily(V.base, tables, cutoff, iterative=False,
                 trivial=trivial and V.hi_exact, name="canonical")
    if check_iterative(F, [unit(lab, V.base) for lab in labels]).ok:
        F.iterative = True
    return F


def check_canonical_hs(V, max_weight=None, ns=None):
    """Canonical HS is iterative and HS for the n-th products in ``ns``."""
    F = canonical_hs(V)
    samples = [unit(lab, V.base) for lab in V.all_labels(max_weight)]
    rep = check_iterative(F, samples, V.spec)
    rep.check = "canonical_hs"
    if ns is None:
        ns = range(-2, 2)
    for n in ns:
        sub = check_hs_property(F, lambda x, y, n=n: V.nth_product(x, n, y),
                                [(u, v) for u in samples for v in samples], instance=V.spec)
        rep.merge(sub)
    return rep


# -- truncation axiom and vacuum -------------------------------------------------

def check_truncation_axiom(V, u, v):
    """Smallest n0 with u(n)v = 0 for all n >= n0, found by descending scan."""
    u, v = as_state(V, u), as_state(V, v)
    n = V.state_n0(u, v) - 1
    while True:
        try:
            r = V.nth_product(u, n, v)
        except TruncationEscape:
            return n + 1
        if r:
            return n + 1
        n -= 1
        if n < V.state_n0(u, v) - 1 - (V.hi - V.lo) - 2:
            return n + 1


def check_vacuum_theorem(V, max_weight=None, spread=None):
    """vacuum(n) v = delta_{n,-1} v for every basis label within the window."""
    rep = CheckReport("vacuum", V.spec)
    spread = spread if spread is not None else (V.hi - V.lo) + 2
    for lab in V.all_labels(max_weight):
        v = unit(lab, V.base)
        for n in range(-spread, spread + 1):
            def run(n=n, v=v):
                r = V.nth_product(V.vacuum, n, v)
                return r == (v if n == -1 else {})
            rep.attempt(run, lambda n=n, lab=lab: {"n": n, "v": V.label_str(lab)})
    return rep


# -- Jacobi and its specializations ---------------------------------------------

def _cut(V, x, y, start):
    """Upper bound on i with x(start + i)y possibly nonzero."""
    return max(V.state_n0(x, y) - start, 0)


def jacobi_sides(V, u, v, w, r, s, t):
    R = V.base
    lhs = []
    for i in range(_cut(V, u, v, t)):
        c = binom(r, i)
        if c:
            lhs.append((c, V.nth_product(V.nth_product(u, t + i, v), r + s - i, w)))
    rhs = []
    top = t + 1 if t >= 0 else max(_cut(V, v, w, s), _cut(V, u, w, r))
    sign_t = (-1) ** (t % 2)
    for i in range(top):
        c = (-1) ** i * binom(t, i)
        if not c:
            continue
        a = V.nth_product(u, r + t - i, V.nth_product(v, s + i, w))
        b = V.nth_product(v, s + t - i, V.nth_product(u, r + i, w))
        rhs.append((c, a))
        rhs.append((-c * sign_t, b))
    return lincomb(R, lhs), lincomb(R, rhs)


def check_jacobi(V, u, v, w, r, s, t, window=None):
    """Residual lhs - rhs of the Jacobi identity; raises WindowRejected."""
    u, v, w = as_state(V, u), as_state(V, v), as_state(V, w)
    window = window or AdmissibleWindow(V)
    if not _admit(V, window.jacobi, u, v, w, r, s, t):
        raise WindowRejected("jacobi")
    lhs, rhs = jacobi_sides(V, u, v, w, r, s, t)
    return sub_states(V.base, lhs, rhs)


def commutator_residual(V, u, v, w, r, s):
    R = V.base
    left = sub_states(R, V.nth_product(u, r, V.nth_product(v, s, w)),
                      V.nth_product(v, s, V.nth_product(u, r, w)))
    right = lincomb(R, [(binom(r, i), V.nth_product(V.nth_product(u, i, v), r + s - i, w))
                        for i in range(_cut(V, u, v, 0))])
    return sub_states(R, left, right)


def check_commutator_formula(V, u, v, w, r, s, window=None):
    u, v, w = as_state(V, u), as_state(V, v), as_state(V, w)
    window = window or AdmissibleWindow(V)
    if not _admit(V, window.commutator, u, v, w, r, s):
        raise WindowRejected("commutator")
    return commutator_residual(V, u, v, w, r, s)


def associator_residual(V, u, v, w, s, t):
    R = V.base
    left = V.nth_product(V.nth_product(u, t, v), s, w)
    top = t + 1 if t >= 0 else max(_cut(V, v, w, s), _cut(V, u, w, 0))
    sign_t = (-1) ** (t % 2)
    terms = []
    for i in range(top):
        c = (-1) ** i * binom(t, i)
        if c:
            terms.append((c, V.nth_product(u, t - i, V.nth_product(v, s + i, w))))
            terms.append((-c * sign_t, V.nth_product(v, s + t - i, V.nth_product(u, i, w))))
    return sub_states(R, left, lincomb(R, terms))


def check_associator_formula(V, u, v, w, s, t, window=None):
    u, v, w = as_state(V, u), as_state(V, v), as_state(V, w)
    window = window or AdmissibleWindow(V)
    if not _admit(V, window.associator, u, v, w, s, t):
        raise WindowRejected("associator")
    return associator_residual(V, u, v, w, s, t)


def locality_residual(V, u, v, w, r, s, t):
    R = V.base
    sign_t = (-1) ** (t % 2)
    terms = []
    for i in range(t + 1):
        c = (-1) ** i * binom(t, i)
        terms.append((c, V.nth_product(u, r + t - i, V.nth_product(v, s + i, w))))
        terms.append((-c * sign_t, V.nth_product(v, s + t - i, V.nth_product(u, r + i, w))))
    return lincomb(R, terms)


def locality_order(V, u, v, t_max, samples=None, box=None, max_weight=None):
    """Smallest t <= t_max for which the locality relation holds on the grid.

    Returns ``(t, witness)`` where the witness is a violating (r, s, w) at
    t - 1, or None when t = 0.  Raises NotFound if no t works or if the
    window admits nothing for some candidate t.
    """
    u, v = as_state(V, u), as_state(V, v)
    window = AdmissibleWindow(V)
    if samples is None:
        samples = [unit(lab, V.base) for lab in V.all_labels(max_weight)]
    if box is None:
        box = max(V.hi - V.lo, 2) + 2
    last_violation = None
    for t in range(t_max + 1):
        violation, admitted = None, 0
        for w in samples:
            for r in range(-box, box + 1):
                for s in range(-box, box + 1):
                    if not _admit(V, window.locality, u, v, w, r, s, t):
                        continue
                    try:
                        res = locality_residual(V, u, v, w, r, s, t)
                    except TruncationEscape:
                        continue
                    admitted += 1
                    if res:
                        violation = {"t": t, "r": r, "s": s, "w": _js(V, w),
                                     "residual": _js(V, res)}
                        break
                if violation:
                    break
            if violation:
                break
        if violation is None:
            if admitted == 0:
                raise NotFound(f"no admissible samples at t={t}")
            return t, last_violation
        last_violation = violation
    raise NotFound(f"locality order exceeds {t_max}")


def check_locality_symmetry(V, pairs, t_max, **kw):
    rep = CheckReport("locality", V.spec)
    for u, v in pairs:
        def run(u=u, v=v):
            try:
                a, _ = locality_order(V, u, v, t_max, **kw)
                b, _ = locality_order(V, v, u, t_max, **kw)
            except NotFound:
                raise WindowRejected("locality not found")
            return a == b
        rep.attempt(run, lambda u=u, v=v: {"u": _js(V, as_state(V, u)), "v": _js(V, as_state(V, v))})
    return rep


# -- HS consequences ----------------------------------------------------------------

def check_mode_shift(V, u, i, n, w, window=None):
    """Residual of (D_i u)(n) w = (-1)^i C(n, i) u(n - i) w."""
    u, w = as_state(V, u), as_state(V, w)
    window = window or AdmissibleWindow(V)
    if not _admit(V, window.mode_shift, u, w, i, n):
        raise WindowRejected("mode_shift")
    R = V.base
    lhs = V.nth_product(V.D(i, u), n, w)
    rhs = lincomb(R, [((-1) ** i * binom(n, i), V.nth_product(u, n - i, w))])
    return sub_states(R, lhs, rhs)


def check_skew_symmetry(V, u, v, n, window=None):
    """Residual of v(n)u = (-1)^(n+1) sum_i (-1)^i D_i(u(n+i)v)."""
    u, v = as_state(V, u), as_state(V, v)
    window = window or AdmissibleWindow(V)
    if not _admit(V, window.skew, u, v, n):
        raise WindowRejected("skew")
    R = V.base
    lhs = V.nth_product(v, n, u)
    terms = [((-1) ** (n + 1 + i), V.D(i, V.nth_product(u, n + i, v)))
             for i in range(_cut(V, u, v, n))]
    return sub_states(R, lhs, lincomb(R, terms))


def check_translation_covariance(V, u, m, n, w, window=None):
    """Residual of [D_m, u(n)] w = sum_{i=1}^m (-1)^i C(n, i) u(n-i) D_{m-i} w."""
    u, w = as_state(V, u), as_state(V, w)
    window = window or AdmissibleWindow(V)
    if not _admit(V, window.translation, u, w, m, n):
        raise WindowRejected("tc")
    R = V.base
    lhs = sub_states(R, V.D(m, V.nth_product(u, n, w)), V.nth_product(u, n, V.D(m, w)))
    rhs = lincomb(R, [((-1) ** i * binom(n, i), V.nth_product(u, n - i, V.D(m - i, w)))
                      for i in range(1, m + 1)])
    return sub_states(R, lhs, rhs)


def check_commuting_criterion(V, u, v, samples=None, box=None):
    """[u(r), v(s)] = 0 on the grid iff u(n)v = 0 for all n >= 0."""
    u, v = as_state(V, u), as_state(V, v)
    rep = CheckReport("commuting_criterion", V.spec)
    window = AdmissibleWindow(V)
    modes_vanish = True
    for n in range(0, V.state_n0(u, v)):
        try:
            if V.nth_product(u, n, v):
                modes_vanish = False
                break
        except TruncationEscape:
            continue
    if samples is None:
        samples = [unit(lab, V.base) for lab in V.all_labels()]
    if box is None:
        box = max(V.hi - V.lo, 2) + 1
    brackets_vanish = True
    R = V.base
    for w in samples:
        for r in range(-box, box + 1):
            for s in range(-box, box + 1):
                if not _admit(V, window.commutator, u, v, w, r, s):
                    continue
                try:
                    br = sub_states(R, V.nth_product(u, r, V.nth_product(v, s, w)),
                                    V.nth_product(v, s, V.nth_product(u, r, w)))
                except TruncationEscape:
                    continue
                if br:
                    brackets_vanish = False
                    break
            if not brackets_vanish:
                break
        if not brackets_vanish:
            break
    rep.details = {"modesVanish": modes_vanish, "bracketsVanish": brackets_vanish}
    rep.record(modes_vanish == brackets_vanish, dict(rep.details))
    return rep


def check_weak_associativity(V, u, v, w, s, t):
    """Residual of weak associativity in mode form; optional, outside default suites.

    With r = n0(u, w) the modes u(r + i) kill w, and expanding (z+w)^r by the
    binomial convention gives
    sum_i C(r, i) (u(t+i)v)(r+s-i) w = sum_i (-1)^i C(t, i) u(r+t-i) v(s+i) w.
    """
    u, v, w = as_state(V, u), as_state(V, v), as_state(V, w)
    R = V.base
    r = V.state_n0(u, w)
    lhs = lincomb(R, [(binom(r, i), V.nth_product(V.nth_product(u, t + i, v), r + s - i, w))
                      for i in range(_cut(V, u, v, t))])
    top = t + 1 if t >= 0 else _cut(V, v, w, s)
    rhs = lincomb(R, [((-1) ** i * binom(t, i), V.nth_product(u, r + t - i, V.nth_product(v, s + i, w)))
                      for i in range(top)])
    return sub_states(R, lhs, rhs)


# -- generated subring ------------------------------------------------------------

def generated_subring(V, generators, max_weight=None):
    """Span closure of g(n) applied repeatedly to the vacuum.

    Returns {weight: {"dim": d, "size" or "rank": ..., "full": bool}} and the
    per-weight Submodules.
    """
    R = V.base
    top = V.hi if max_weight is None else min(V.hi, max_weight)
    weights = [w for w in range(V.lo, top + 1)]
    idx = {w: {lab: k for k, lab in enumerate(V.labels(w))} for w in weights}
    mods = {w: Submodule(R, len(idx[w])) for w in weights}

    def vec(w, state):
        out = [R.zero()] * len(idx[w])
        for lab, c in state.items():
            out[idx[w][lab]] = c
        return out

    def state_of(w, g):
        labs = V.labels(w)
        return {labs[k]: c for k, c in enumerate(g) if not R.is_zero(c)}

    queue = []

    def add(state):
        by_w = {}
        for lab, c in state.items():
            by_w.setdefault(V.weight(lab), {})[lab] = c
        for w, part in by_w.items():
            if w in mods and mods[w].add(vec(w, part)):
                queue.append((w, part))

    add(dict(V.vacuum))
    gens = [as_state(V, g) for g in generators]
    while queue:
        w, s = queue.pop()
        for g in gens:
            for wg in V.state_weights(g):
                gpart = {lab: c for lab, c in g.items() if V.weight(lab) == wg}
                n_hi = V.n0_weight_bound(wg, w)
                n_lo = wg + w - top - 1
                for n in range(n_lo, n_hi):
                    try:
                        add(V.nth_product(gpart, n, s))
                    except TruncationEscape:
                        continue
    info = {}
    for w in weights:
        d = len(idx[w])
        full = Submodule(R, d, [[R.one() if k == j else R.zero() for k in range(d)]
                                for j in range(d)])
        info[w] = {"dim": d, "full": mods[w] == full,
                   "generators": len(mods[w].generators())}
    return info, mods


# -- grid suites --------------------------------------------------------------

def _samples(V, max_weight, min_weight=None):
    return [unit(lab, V.base) for lab in V.all_labels(max_weight, min_weight)]


def jacobi_suite(V, max_weight, bound, samples=None):
    rep = CheckReport("jacobi", V.spec)
    window = AdmissibleWindow(V)
    samples = samples if samples is not None else _samples(V, max_weight)
    rng = range(-bound, bound + 1)
    for u in samples:
        for v in samples:
            for w in samples:
                for r in rng:
                    for s in rng:
                        for t in rng:
                            if not _admit(V, window.jacobi, u, v, w, r, s, t):
                                rep.record(None)
                                continue
                            rep.attempt(
                                lambda: not jacobi_sides_residual(V, u, v, w, r, s, t),
                                lambda: {"u": _js(V, u), "v": _js(V, v), "w": _js(V, w),
                                         "r": r, "s": s, "t": t})
    return rep


def jacobi_sides_residual(V, u, v, w, r, s, t):
    lhs, rhs = jacobi_sides(V, u, v, w, r, s, t)
    return sub_states(V.base, lhs, rhs)


def _pair_suite(name, V, samples, bound, admit, residual):
    rep = CheckReport(name, V.spec)
    rng = range(-bound, bound + 1)
    for u in samples:
        for v in samples:
            for w in samples:
                for a in rng:
                    for b in rng:
                        if not _admit(V, admit, u, v, w, a, b):
                            rep.record(None)
                            continue
                        rep.attempt(lambda: not residual(V, u, v, w, a, b),
                                    lambda: {"u": _js(V, u), "v": _js(V, v), "w": _js(V, w),
                                             "a": a, "b": b})
    return rep


def commutator_suite(V, max_weight, bound):
    W = AdmissibleWindow(V)
    return _pair_suite("commutator", V, _samples(V, max_weight), bound, W.commutator,
                       commutator_residual)


def associator_suite(V, max_weight, bound):
    W = AdmissibleWindow(V)
    return _pair_suite("associator", V, _samples(V, max_weight), bound, W.associator,
                       associator_residual)


def skew_suite(V, max_weight, bound):
    rep = CheckReport("skew", V.spec)
    window = AdmissibleWindow(V)
    samples = _samples(V, max_weight)
    for u in samples:
        for v in samples:
            for n in range(-bound, bound + 1):
                def run(u=u, v=v, n=n):
                    return not check_skew_symmetry(V, u, v, n, window)
                rep.attempt(run, lambda u=u, v=v, n=n: {"u": _js(V, u), "v": _js(V, v), "n": n})
    return rep


def mode_shift_suite(V, max_weight, bound, max_i=None):
    rep = CheckReport("mode_shift", V.spec)
    window = AdmissibleWindow(V)
    samples = _samples(V, max_weight)
    max_i = bound if max_i is None else max_i
    for u in samples:
        for w in samples:
            for i in range(max_i + 1):
                for n in range(-bound, bound + 1):
                    def run(u=u, w=w, i=i, n=n):
                        return not check_mode_shift(V, u, i, n, w, window)
                    rep.attempt(run, lambda u=u, w=w, i=i, n=n: {
                        "u": _js(V, u), "w": _js(V, w), "i": i, "n": n})
    return rep


def translation_suite(V, max_weight, bound, max_m=None):
    rep = CheckReport("tc", V.spec)
    window = AdmissibleWindow(V)
    samples = _samples(V, max_weight)
    max_m = bound if max_m is None else max_m
    for u in samples:
        for w in samples:
            for m in range(max_m + 1):
                for n in range(-bound, bound + 1):
                    def run(u=u, w=w, m=m, n=n):
                        return not check_translation_covariance(V, u, m, n, w, window)
                    rep.attempt(run, lambda u=u, w=w, m=m, n=n: {
                        "u": _js(V, u), "w": _js(V, w), "m": m, "n": n})
    return rep


def locality_suite(V, max_weight, t_max=8, box=None):
    """Locality order of every sample pair exists and is symmetric."""
    samples = _samples(V, max_weight)
    pairs = [(a, b) for k, a in enumerate(samples) for b in samples[k:]]
    return check_locality_symmetry(V, pairs, t_max, max_weight=max_weight, box=box)


def vacuum_suite(V, max_weight, bound=None):
    return check_vacuum_theorem(V, max_weight, bound)


def hs_suite(V, max_weight, bound=None):
    return check_canonical_hs(V, max_weight)


SUITES = {
    "vacuum": vacuum_suite,
    "jacobi": jacobi_suite,
    "commutator": commutator_suite,
    "associator": associator_suite,
    "skew": skew_suite,
    "modeshift": mode_shift_suite,
    "tc": translation_suite,
    "locality": locality_suite,
    "hs": hs_suite,
}
