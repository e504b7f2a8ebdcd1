"""Center, idempotents, units, direct sums, images of idempotents and tensor products."""

from dataclasses import dataclass, field
from math import lcm

from .basering import RingElement, coerce
from .errors import BaseMismatch, InfiniteSearchSpace, NotIdempotent, TruncationEscape
from .hsderiv import check_hs_property
from .instance import VertexRing, axpy, lincomb, sub_states, unit
from .linalg import Submodule, kernel
from .report import CheckReport
from .vertexcore import canonical_hs

SEARCH_LIMIT = 1 << 16


def as_state(V, x):
    """States pass through; ints, strings and ring elements are scalar multiples of the vacuum."""
    if isinstance(x, dict):
        return x
    if isinstance(x, (int, str, RingElement)):
        c = coerce(V.base, x)
        return {lab: V.base.mul(c, a) for lab, a in V.vacuum.items()
                if not V.base.is_zero(V.base.mul(c, a))}
    return unit(x, V.base)


def _vec(V, labels, state):
    idx = {lab: k for k, lab in enumerate(labels)}
    out = [V.base.zero()] * len(labels)
    for lab, c in state.items():
        out[idx[lab]] = c
    return out


def _state(V, labels, vec):
    return {lab: c for lab, c in zip(labels, vec) if not V.base.is_zero(c)}


def _mode_range(V, wx, wy, max_result=None):
    top = V.hi if max_result is None else max_result
    return range(wx + wy - top - 1, V.n0_weight_bound(wx, wy))


# -- center ---------------------------------------------------------------------

@dataclass
class CenterData:
    """Per-weight D-constant submodules with their certification level."""

    V: object
    by_weight: dict = field(default_factory=dict)
    report: CheckReport = None

    def generators(self):
        """Generators over all certified weights; unverified weights are left out."""
        out = []
        for w in sorted(self.by_weight):
            info = self.by_weight[w]
            if info["level"] == "unverified":
                continue
            out.extend(_state(self.V, info["labels"], g) for g in info["module"].generators())
        return out

    def contains(self, state):
        parts = {}
        for lab, c in state.items():
            parts.setdefault(self.V.weight(lab), {})[lab] = c
        for w, part in parts.items():
            info = self.by_weight.get(w)
            if info is None or info["level"] == "unverified" or not info["module"].contains(_vec(self.V, info["labels"], part)):
                return False
        return True

    def is_everything(self):
        return all(info["module"].size() == _full_size(self.V, len(info["labels"]))
                   if self.V.base.finite else
                   info["module"] == _full(self.V, len(info["labels"]))
                   for info in self.by_weight.values())

    def to_json(self):
        out = {}
        for w in sorted(self.by_weight):
            info = self.by_weight[w]
            gens = [] if info["level"] == "unverified" else info["module"].generators()
            out[str(w)] = {
                "dim": len(info["labels"]),
                "level": info["level"],
                "cutoff": info["cutoff"],
                "generators": [self.V.state_json(_state(self.V, info["labels"], g)) for g in gens],
            }
        return out


def _full(V, d):
    R = V.base
    return Submodule(R, d, [[R.one() if i == j else R.zero() for i in range(d)] for j in range(d)])


def _full_size(V, d):
    return V.base.size() ** d


def center_truncated(V, max_weight=None):
    """States killed by every available D_m, m >= 1, computed weight by weight."""
    R = V.base
    top = V.hi if max_weight is None else min(V.hi, max_weight)
    data = CenterData(V)
    for w in range(V.lo, top + 1):
        labels = V.labels(w)
        if not labels:
            continue
        rows = []
        cutoff = 0
        for m in range(1, V.hi - w + 1):
            try:
                images = [V.D(m, unit(lab, R)) for lab in labels]
            except TruncationEscape:
                break
            cutoff = m
            targets = sorted({t for img in images for t in img}, key=lambda l: V.label_index()[l])
            for t in targets:
                rows.append([img.get(t, R.zero()) for img in images])
        tried = cutoff > 0
        # central states also satisfy u(n)x = 0 for n != -1; these rows tighten truncated weights
        for x in V.all_labels():
            for n in _mode_range(V, w, V.weight(x)):
                if n == -1:
                    continue
                try:
                    images = [V.product(lab, n, x) for lab in labels]
                except TruncationEscape:
                    continue
                tried = True
                for t in sorted({t for img in images for t in img}, key=lambda l: V.label_index()[l]):
                    rows.append([img.get(t, R.zero()) for img in images])
        ker = kernel(R, rows, len(labels)) if rows else _full(V, len(labels))
        if V.hi_exact and cutoff == V.hi - w:
            level = "exact"
        elif not tried and cutoff < V.hi - w + (0 if V.hi_exact else 1):
            level = "unverified"
        else:
            level = "truncation-bounded"
        data.by_weight[w] = {"labels": labels, "module": ker, "cutoff": cutoff, "level": level}
    rep = CheckReport("center", V.spec)
    samples = V.all_labels(top)
    for u in data.generators():
        wu = V.state_weights(u)[0]
        for x in samples:
            for n in _mode_range(V, wu, V.weight(x)):
                if n == -1:
                    continue
                rep.attempt(lambda n=n, x=x: not V.nth_product(u, n, unit(x, R)),
                            lambda n=n, x=x: {"u": V.state_json(u), "n": n, "x": V.label_str(x)})
    data.report = rep
    return data


# -- idempotents and units -------------------------------------------------------

def is_idempotent(V, e):
    """e(n)e = delta_{n,-1} e on all available n."""
    e = as_state(V, e)
    lo = -(V.hi - V.lo) - 2
    for n in range(lo, V.state_n0(e, e)):
        try:
            r = V.nth_product(e, n, e)
        except TruncationEscape:
            continue
        if r != (e if n == -1 else {}):
            return False
    return True


def find_idempotents(V, candidates=None, center=None):
    """All idempotents in the weight-0 part of the center (finite bases), else among candidates."""
    R = V.base
    center = center or center_truncated(V)
    if candidates is None:
        if not getattr(R, "finite", False):
            raise InfiniteSearchSpace(f"{R} is infinite; supply candidates")
        info = center.by_weight.get(0)
        if info is None:
            return []
        size = info["module"].size()
        if size > SEARCH_LIMIT:
            raise InfiniteSearchSpace(f"center has {size} weight-0 elements")
        candidates = [_state(V, info["labels"], vec) for vec in info["module"].elements()]
    out = []
    for e in candidates:
        e = as_state(V, e)
        if is_idempotent(V, e):
            if not center.contains(e):
                raise AssertionError("idempotent outside the computed center")
            out.append(e)
    return out


def check_unit(V, a, b, center=None):
    """a(n)b = delta_{n,-1} vacuum implies b(n)a = delta_{n,-1} vacuum and a, b central."""
    a, b = as_state(V, a), as_state(V, b)
    rep = CheckReport("unit", V.spec)
    lo = -(V.hi - V.lo) - 2

    def unit_pair(x, y):
        for n in range(lo, V.state_n0(x, y)):
            try:
                r = V.nth_product(x, n, y)
            except TruncationEscape:
                continue
            if r != (V.vacuum if n == -1 else {}):
                return False
        return True

    hyp = unit_pair(a, b)
    rep.details = {"hypothesis": hyp}
    if not hyp:
        return rep
    center = center or center_truncated(V)
    rep.record(unit_pair(b, a), {"conclusion": "b(n)a"})
    rep.record(center.contains(a), {"conclusion": "a central"})
    rep.record(center.contains(b), {"conclusion": "b central"})
    return rep


def find_unit_inverse(V, a, center=None):
    """Search for b with a(n)b = delta_{n,-1} vacuum; weight forces wt b = -wt a."""
    a = as_state(V, a)
    R = V.base
    ws = V.state_weights(a)
    if len(ws) != 1:
        raise InfiniteSearchSpace("unit search needs a homogeneous state")
    labels = V.labels(-ws[0])
    if not labels:
        return None
    if not R.finite:
        raise InfiniteSearchSpace(f"{R} is infinite")
    if R.size() ** len(labels) > SEARCH_LIMIT:
        raise InfiniteSearchSpace("candidate space too large")
    found = None
    for vec in _full(V, len(labels)).elements():
        b = _state(V, labels, vec)
        if check_unit(V, a, b, center).details.get("hypothesis"):
            if found is not None:
                raise AssertionError("unit inverse is not unique")
            found = b
    return found


def characteristic_of_vertex_ring(V):
    """The additive order of the vacuum (0 for infinite order)."""
    R = V.base
    out = 1
    for c in V.vacuum.values():
        o = R.additive_order(c)
        if o == 0:
            return 0
        out = lcm(out, o)
    return out


# -- direct sums -------------------------------------------------------------------

def _window(parts):
    inexact_hi = [p.hi for p in parts if not p.hi_exact]
    inexact_lo = [p.lo for p in parts if not p.lo_exact]
    hi = min(inexact_hi) if inexact_hi else max(p.hi for p in parts)
    lo = max(inexact_lo) if inexact_lo else min(p.lo for p in parts)
    return lo, hi, not inexact_lo, not inexact_hi


class DirectSum(VertexRing):
    """U + V with componentwise modes; labels are (0, a) and (1, b)."""

    def __init__(self, U, V):
        super().__init__()
        if U.base != V.base:
            raise BaseMismatch(f"{U.base} vs {V.base}")
        self.parts = (U, V)
        self.base = U.base
        self.lo, self.hi, self.lo_exact, self.hi_exact = _window(self.parts)
        self.vacuum = {}
        for k, P in enumerate(self.parts):
            for lab, c in P.vacuum.items():
                self.vacuum[(k, lab)] = c
        self.spec = f"dsum({U.spec},{V.spec})"

    def labels(self, w):
        if w < self.lo or w > self.hi:
            return []
        return [(k, lab) for k, P in enumerate(self.parts) for lab in P.labels(w)]

    def weight(self, label):
        return self.parts[label[0]].weight(label[1])

    def label_str(self, label):
        return f"{'UV'[label[0]]}:{self.parts[label[0]].label_str(label[1])}"

    def n0(self, u, v):
        if u[0] != v[0]:
            return self.lo - 1 - max(self.hi, 0) * 2
        return self.parts[u[0]].n0(u[1], v[1])

    def n0_weight_bound(self, wu, wv):
        return max(P.n0_weight_bound(wu, wv) for P in self.parts)

    def product(self, u, n, v):
        if u[0] != v[0]:
            return {}
        return super().product(u, n, v)

    def _product(self, u, n, v):
        k = u[0]
        return {(k, lab): c for lab, c in self.parts[k].product(u[1], n, v[1]).items()}

    def component_vacuum(self, k):
        return {(k, lab): c for lab, c in self.parts[k].vacuum.items()}


def direct_sum(U, V):
    return DirectSum(U, V)


class ImageRing(VertexRing):
    """The ideal e(-1)V as a vertex ring with vacuum e, in parent coordinates."""

    def __init__(self, parent, e, name=None):
        super().__init__()
        self.parent = parent
        self.base = parent.base
        self.e = dict(e)
        self.vacuum = dict(e)
        self.lo, self.hi = parent.lo, parent.hi
        self.lo_exact, self.hi_exact = parent.lo_exact, parent.hi_exact
        self.spec = name or f"image({parent.spec})"
        labels = parent.all_labels()
        self._all = labels
        self.module = Submodule(parent.base, len(labels))
        for lab in labels:
            try:
                img = parent.nth_product(self.e, -1, unit(lab, parent.base))
            except TruncationEscape:
                continue
            self.module.add(_vec(parent, labels, img))
        gens = [_state(parent, labels, g) for g in self.module.generators()]
        self._gens = gens
        support = {lab for g in gens for lab in g}
        self._labels = {}
        for lab in labels:
            if lab in support:
                self._labels.setdefault(parent.weight(lab), []).append(lab)

    def labels(self, w):
        return list(self._labels.get(w, ()))

    def weight(self, label):
        return self.parent.weight(label)

    def label_str(self, label):
        return self.parent.label_str(label)

    def generators(self, w):
        return [g for g in self._gens if self.parent.state_weights(g) == [w]]

    def contains(self, state):
        return self.module.contains(_vec(self.parent, self._all, state))

    def is_coordinate(self):
        """True when the image is spanned by parent basis vectors."""
        R = self.base
        units = Submodule(R, len(self._all),
                          [_vec(self.parent, self._all, unit(lab, R)) for lab in self.all_labels()])
        return units == self.module

    def n0(self, u, v):
        return self.parent.n0(u, v)

    def n0_weight_bound(self, wu, wv):
        return self.parent.n0_weight_bound(wu, wv)

    def product(self, u, n, v):
        return self.parent.product(u, n, v)

    def size(self):
        return self.module.size()


def check_ideal(I):
    """Closure of an image under all available left modes and D_m."""
    P = I.parent
    R = P.base
    rep = CheckReport("ideal", I.spec)
    for g in I._gens:
        wg = P.state_weights(g)
        for x in P.all_labels():
            xs = unit(x, R)
            for w in wg:
                for n in _mode_range(P, P.weight(x), w):
                    rep.attempt(lambda n=n, xs=xs: I.contains(P.nth_product(xs, n, g)),
                                lambda n=n, x=x: {"x": P.label_str(x), "n": n})
        for m in range(1, P.hi - P.lo + 1):
            rep.attempt(lambda m=m: I.contains(P.D(m, g)), {"m": m})
    return rep


def decompose_by_idempotent(V, e):
    """(e(-1)V, (1-e)(-1)V) with vacua e and 1 - e, each verified to be an ideal."""
    e = as_state(V, e)
    if not is_idempotent(V, e):
        raise NotIdempotent("e(n)e differs from delta_{n,-1} e")
    f = sub_states(V.base, V.vacuum, e)
    A = ImageRing(V, e, name=f"image({V.spec},e)")
    B = ImageRing(V, f, name=f"image({V.spec},1-e)")
    rep = check_ideal(A).merge(check_ideal(B))
    rep.check = "decompose"
    return A, B, rep


def check_structure_constants_equal(A, U, relabel, max_weight=None):
    """A's products on labels agree with U's after ``relabel``: U label -> A label."""
    rep = CheckReport("structure_constants", A.spec)
    labels = U.all_labels(max_weight)
    for u in labels:
        for v in labels:
            for n in _mode_range(U, U.weight(u), U.weight(v), max_weight):
                def run(u=u, n=n, v=v):
                    a = A.product(relabel(u), n, relabel(v))
                    b = {relabel(lab): c for lab, c in U.product(u, n, v).items()}
                    return a == b
                rep.attempt(run, lambda u=u, n=n, v=v: {"u": U.label_str(u), "n": n,
                                                        "v": U.label_str(v)})
    return rep


# -- tensor products ---------------------------------------------------------------

class TensorProduct(VertexRing):
    """U (x) V with (a(x)b)(n) = sum_{i+j=n-1} a(i) (x) b(j) on pairs of labels."""

    def __init__(self, U, V, cap=None):
        super().__init__()
        if U.base != V.base:
            raise BaseMismatch(f"{U.base} vs {V.base}")
        self.U, self.V = U, V
        self.base = U.base
        hi = min(U.hi + V.lo, V.hi + U.lo)
        if cap is not None:
            hi = min(hi, cap)
        self.lo, self.hi = U.lo + V.lo, hi
        self.lo_exact = U.lo_exact and V.lo_exact
        self.hi_exact = U.hi_exact and V.hi_exact and hi == U.hi + V.hi
        R = self.base
        self.vacuum = {}
        for a, c in U.vacuum.items():
            for b, d in V.vacuum.items():
                self.vacuum[(a, b)] = R.mul(c, d)
        self.spec = f"tensor({U.spec},{V.spec})"

    def labels(self, w):
        out = []
        for wa in range(self.U.lo, self.U.hi + 1):
            wb = w - wa
            if wb < self.V.lo or wb > self.V.hi:
                continue
            for a in self.U.labels(wa):
                for b in self.V.labels(wb):
                    out.append((a, b))
        return out if self.lo <= w <= self.hi else []

    def weight(self, label):
        return self.U.weight(label[0]) + self.V.weight(label[1])

    def label_str(self, label):
        return f"{self.U.label_str(label[0])}(x){self.V.label_str(label[1])}"

    def n0(self, u, v):
        return self.U.n0(u[0], v[0]) + self.V.n0(u[1], v[1])

    def n0_weight_bound(self, wu, wv):
        return wu + wv - self.lo

    def _product(self, u, n, v):
        R = self.base
        U, V = self.U, self.V
        acc = {}
        nu = U.n0(u[0], v[0])
        nv = V.n0(u[1], v[1])
        for i in range(n - nv, nu):
            j = n - 1 - i
            if j >= nv:
                continue
            left = U.product(u[0], i, v[0])
            if not left:
                continue
            right = V.product(u[1], j, v[1])
            for a, c in left.items():
                for b, d in right.items():
                    axpy(R, acc, R.one(), {(a, b): R.mul(c, d)})
        return acc

    def pure(self, x, y):
        """x (x) y for states x of U and y of V."""
        R = self.base
        return {(a, b): R.mul(c, d) for a, c in x.items() for b, d in y.items()
                if not R.is_zero(R.mul(c, d))}


def tensor_product(U, V, cap=None):
    return TensorProduct(U, V, cap)


def check_tensor_hs(T, max_weight=None):
    """Canonical HS of U (x) V equals D'_m = sum_{i+j=m} D_i (x) D_j and is HS."""
    R = T.base
    rep = CheckReport("tensor_hs", T.spec)
    labels = T.all_labels(max_weight)
    for (a, b) in labels:
        for m in range(0, T.hi - T.weight((a, b)) + 1):
            def run(a=a, b=b, m=m):
                lhs = T.D(m, unit((a, b), R))
                rhs = lincomb(R, [(1, T.pure(T.U.D(i, unit(a, R)), T.V.D(m - i, unit(b, R))))
                                  for i in range(m + 1)])
                return lhs == rhs
            rep.attempt(run, lambda a=a, b=b, m=m: {"u": T.label_str((a, b)), "m": m})
    F = canonical_hs(T)
    samples = [unit(lab, R) for lab in labels]
    for n in (-2, -1, 0, 1):
        rep.merge(check_hs_property(F, lambda x, y, n=n: T.nth_product(x, n, y),
                                    [(x, y) for x in samples for y in samples], instance=T.spec))
    return rep


# -- endomorphisms and ideals ------------------------------------------------------

def check_endo_iso(V, center=None, max_weight=None):
    """a -> a(-1) embeds the center into the endomorphisms commuting with all modes and D_m."""
    R = V.base
    center = center or center_truncated(V)
    rep = CheckReport("endo_iso", V.spec)
    gens = center.generators()
    labels = V.all_labels(max_weight)
    for a in gens:
        phi = lambda s, a=a: V.nth_product(a, -1, s)
        rep.attempt(lambda: phi(V.vacuum) == a, {"injective": V.state_json(a)})
        for x in labels:
            xs = unit(x, R)
            for y in labels:
                ys = unit(y, R)
                for n in _mode_range(V, V.weight(x), V.weight(y)):
                    rep.attempt(lambda n=n, xs=xs, ys=ys: phi(V.nth_product(xs, n, ys)) ==
                                V.nth_product(xs, n, phi(ys)),
                                lambda n=n, x=x, y=y: {"a": V.state_json(a), "x": V.label_str(x),
                                                       "n": n, "y": V.label_str(y)})
            for m in range(1, V.hi - V.weight(x) + 1):
                rep.attempt(lambda m=m, xs=xs: phi(V.D(m, xs)) == V.D(m, phi(xs)),
                            {"a": V.state_json(a), "m": m})
        for b in gens:
            rep.attempt(lambda b=b: V.nth_product(a, -1, V.nth_product(b, -1, V.vacuum)) ==
                        V.nth_product(V.nth_product(a, -1, b), -1, V.vacuum),
                        {"compose": True})
    return rep


class PrincipalIdeal:
    """Span closure of v under left modes of basis states and under D_m."""

    def __init__(self, V, v, max_weight=None):
        self.V = V
        R = V.base
        self.labels = V.all_labels(max_weight)
        self.module = Submodule(R, len(self.labels))
        label_set = set(self.labels)
        queue = []

        def add(state):
            state = {k: c for k, c in state.items() if k in label_set}
            if state and self.module.add(_vec(V, self.labels, state)):
                queue.append(state)

        add(as_state(V, v))
        while queue:
            g = queue.pop()
            wg = V.state_weights(g)
            for x in self.labels:
                xs = unit(x, R)
                for w in wg:
                    for n in _mode_range(V, V.weight(x), w):
                        try:
                            add(V.nth_product(xs, n, g))
                        except TruncationEscape:
                            continue
            for m in range(1, V.hi - V.lo + 1):
                try:
                    add(V.D(m, g))
                except TruncationEscape:
                    continue

    def contains(self, state):
        return self.module.contains(_vec(self.V, self.labels, state))

    def size(self):
        return self.module.size()

    def elements(self):
        for vec in self.module.elements():
            yield _state(self.V, self.labels, vec)

    def key(self):
        return self.module.key()

    def __eq__(self, other):
        return isinstance(other, PrincipalIdeal) and self.module == other.module

    def __hash__(self):
        return hash(self.key())


def principal_ideal(V, v, max_weight=None):
    return PrincipalIdeal(V, v, max_weight)
