"""Hasse-Schmidt derivations and the passage between commutative rings and vertex rings.

An ``HSFamily`` stores the maps D_0..D_N as explicit tables on basis labels.
A commutative ring carrying an iterative HS derivation becomes a vertex ring
with u(n)v = D_{-n-1}(u) v for n < 0 and u(n)v = 0 for n >= 0;
``recover_hs_comm`` runs the construction backwards.
"""

from math import factorial

from .errors import NonvanishingPositiveMode, NotIterative, TruncationEscape
from .exactnum import binom
from .instance import VertexRing, axpy, lincomb, scale, sub_states
from .report import CheckReport


class HSFamily:
    """Tables D_0..D_cutoff of endomorphisms on a labelled module.

    ``tables[m][label]`` is the state D_m(label), or None when it falls
    outside the truncation.
    """

    def __init__(self, base, tables, cutoff, iterative=False, trivial=False, name="hs"):
        self.base = base
        self.tables = tables
        self.cutoff = cutoff
        self.iterative = iterative
        self.trivial = trivial
        self.name = name

    def apply(self, m, state):
        if m == 0:
            return dict(state)
        if m < 0:
            raise ValueError("negative index")
        if m > self.cutoff:
            if self.trivial:
                return {}
            raise TruncationEscape(f"D_{m} beyond cutoff {self.cutoff}")
        table = self.tables[m]
        acc = {}
        for lab, c in state.items():
            img = table.get(lab)
            if img is None:
                raise TruncationEscape(f"D_{m}({lab}) unavailable")
            axpy(self.base, acc, c, img)
        return acc

    def with_flags(self, **kw):
        out = HSFamily(self.base, self.tables, self.cutoff, self.iterative, self.trivial, self.name)
        for k, v in kw.items():
            setattr(out, k, v)
        return out

    def same_tables(self, other, labels=None):
        """Structural equality of D_1..D_min(cutoff) on the given labels."""
        top = min(self.cutoff, other.cutoff)
        for m in range(1, top + 1):
            labs = labels if labels is not None else set(self.tables[m]) | set(other.tables[m])
            for lab in labs:
                a, b = self.tables[m].get(lab), other.tables[m].get(lab)
                if a is None or b is None:
                    continue
                if a != b:
                    return False
        return True


class PolyCarrier:
    """k[x] truncated at degree ``deg``; labels are exponents.

    Weights are minus the degree, which makes the divided-power derivation
    raise weight by m like any canonical HS derivation.  With ``deg = 0`` and
    ``truncated=False`` this is the base ring k itself.
    """

    def __init__(self, base, var="x", deg=0, truncated=True):
        self.base = base
        self.var = var
        self.deg = deg
        self.truncated = truncated and deg > 0
        self.lo = -deg
        self.hi = 0
        self.lo_exact = not self.truncated
        self.one = {0: base.one()}

    @property
    def labels(self):
        return list(range(self.deg + 1))

    def weight(self, label):
        return -label

    def label_str(self, label):
        if label == 0:
            return "1"
        return self.var if label == 1 else f"{self.var}^{label}"

    def mul(self, a, b):
        if a + b > self.deg:
            if self.truncated:
                raise TruncationEscape(f"degree {a + b} above {self.deg}")
            return {}
        return {a + b: self.base.one()}

    def mul_states(self, x, y):
        acc = {}
        for a, c in x.items():
            for b, d in y.items():
                axpy(self.base, acc, self.base.mul(c, d), self.mul(a, b))
        return acc

    def describe(self):
        if self.deg == 0 and not self.truncated:
            return str(self.base)
        return f"poly:{self.base}:{self.var}:deg={self.deg}"


def scalar_carrier(R):
    """The ring R as a rank-one module over itself."""
    return PolyCarrier(R, "x", 0, truncated=False)


def trivial_hs(carrier, N):
    """The family (Id, 0, 0, ...) up to cutoff N."""
    labels = carrier.labels
    tables = [{lab: {lab: carrier.base.one()} for lab in labels}]
    tables += [{lab: {} for lab in labels} for _ in range(N)]
    return HSFamily(carrier.base, tables, N, iterative=True, trivial=True, name="trivial")


def divided_power_hs(carrier, N):
    """D_m(x^n) = C(n, m) x^(n-m), the standard iterative family on k[x]."""
    if carrier.deg < N:
        raise ValueError("carrier degree bound must be at least the cutoff")
    R = carrier.base
    tables = []
    for m in range(N + 1):
        t = {}
        for n in carrier.labels:
            c = R.from_int(binom(n, m))
            t[n] = {} if R.is_zero(c) or n < m else {n - m: c}
        tables.append(t)
    return HSFamily(R, tables, N, iterative=True, trivial=(N == 0), name="divided-power")


def _sample_pairs(samples):
    return [(u, v) for u in samples for v in samples] if samples and not isinstance(samples[0], tuple) else list(samples)


def check_hs_property(F, product, samples, name="hs_property", instance="?"):
    """D_m(uv) = sum_{i+j=m} D_i(u) D_j(v) for m <= cutoff over sample pairs.

    ``product`` is a bilinear map on states.  Truncation escapes are skips.
    """
    R = F.base
    rep = CheckReport(name, instance)
    for u, v in _sample_pairs(samples):
        for m in range(F.cutoff + 1):
            def run(u=u, v=v, m=m):
                lhs = F.apply(m, product(u, v))
                rhs = lincomb(R, [(1, product(F.apply(i, u), F.apply(m - i, v)))
                                  for i in range(m + 1)])
                return lhs == rhs
            rep.attempt(run, lambda u=u, v=v, m=m: {"u": _js(u), "v": _js(v), "m": m})
    return rep


def check_iterative(F, samples, instance="?"):
    """D_i D_j = C(i+j, i) D_{i+j} on samples for i + j <= cutoff."""
    R = F.base
    rep = CheckReport("iterative", instance)
    for u in samples:
        for i in range(1, F.cutoff + 1):
            for j in range(1, F.cutoff + 1 - i):
                def run(u=u, i=i, j=j):
                    return F.apply(i, F.apply(j, u)) == scale(R, R.from_int(binom(i + j, i)), F.apply(i + j, u))
                rep.attempt(run, lambda u=u, i=i, j=j: {"u": _js(u), "i": i, "j": j})
    return rep


def check_inverse_series(F, samples, instance="?"):
    """sum_{i+j=p} (-1)^j D_i D_j u = 0 for 1 <= p <= cutoff."""
    R = F.base
    rep = CheckReport("inverse_series", instance)
    for u in samples:
        for p in range(1, F.cutoff + 1):
            def run(u=u, p=p):
                return not lincomb(R, [((-1) ** j, F.apply(p - j, F.apply(j, u)))
                                       for j in range(p + 1)])
            rep.attempt(run, lambda u=u, p=p: {"u": _js(u), "p": p})
    return rep


def check_power_rule(F, samples, instance="?"):
    """D_1^m = m! D_m, the divided-power normalization."""
    R = F.base
    rep = CheckReport("power_rule", instance)
    for u in samples:
        for m in range(1, F.cutoff + 1):
            def run(u=u, m=m):
                x = u
                for _ in range(m):
                    x = F.apply(1, x)
                return x == scale(R, R.from_int(factorial(m)), F.apply(m, u))
            rep.attempt(run, lambda u=u, m=m: {"u": _js(u), "m": m})
    return rep


def _js(state):
    return sorted([str(k), str(v)] for k, v in state.items())


class CommHSVertexRing(VertexRing):
    """The vertex ring of a commutative ring with an iterative HS derivation."""

    hi_exact = True

    def __init__(self, carrier, F, spec=None):
        super().__init__()
        self.carrier = carrier
        self.family = F
        self.base = carrier.base
        self.lo, self.hi = carrier.lo, carrier.hi
        self.lo_exact = carrier.lo_exact
        self.vacuum = dict(carrier.one)
        self._by_weight = {}
        for lab in carrier.labels:
            self._by_weight.setdefault(carrier.weight(lab), []).append(lab)
        if spec is None:
            tag = "comm" if F.trivial else "commhs"
            spec = f"{tag}:{carrier.describe()}"
        self.spec = spec

    def labels(self, w):
        return list(self._by_weight.get(w, ()))

    def weight(self, label):
        return self.carrier.weight(label)

    def label_str(self, label):
        return self.carrier.label_str(label)

    def n0(self, u, v):
        return 0

    def n0_weight_bound(self, wu, wv):
        return 0

    def _product(self, u, n, v):
        m = -n - 1
        if self.weight(u) + m > self.hi:
            # D_m raises weight by m, and nothing lives above the top weight
            return {}
        Du = self.family.apply(m, {u: self.base.one()})
        return self.carrier.mul_states(Du, {v: self.base.one()})


def vertex_from_hs_comm(carrier, F, spec=None):
    """Vertex ring with u(n)v = D_{-n-1}(u) v (n < 0) and 0 (n >= 0)."""
    if not F.iterative:
        raise NotIterative("the HS family is not flagged iterative")
    return CommHSVertexRing(carrier, F, spec)


class RecoveredCarrier:
    """The (-1)-product ring of a vertex ring whose nonnegative modes vanish."""

    def __init__(self, V):
        self.V = V
        self.base = V.base
        self.one = dict(V.vacuum)
        self.lo, self.hi = V.lo, V.hi
        self.lo_exact = V.lo_exact

    @property
    def labels(self):
        return self.V.all_labels()

    def weight(self, label):
        return self.V.weight(label)

    def label_str(self, label):
        return self.V.label_str(label)

    def mul(self, a, b):
        return self.V.product(a, -1, b)

    def mul_states(self, x, y):
        return self.V.nth_product(x, -1, y)

    def describe(self):
        return f"recovered({self.V.spec})"


def recover_hs_comm(V):
    """Return the (-1)-product carrier and canonical HS of V.

    Raises NonvanishingPositiveMode with a witness (u, n, v) when some mode
    u(n), n >= 0, acts nontrivially within the truncation.
    """
    from .vertexcore import canonical_hs

    labels = V.all_labels()
    for u in labels:
        for v in labels:
            for n in range(0, max(V.n0(u, v), 0)):
                try:
                    r = V.product(u, n, v)
                except TruncationEscape:
                    continue
                if r:
                    raise NonvanishingPositiveMode(
                        f"{V.label_str(u)}({n}){V.label_str(v)} = {V.show(r)}",
                        (u, n, v))
    return RecoveredCarrier(V), canonical_hs(V)


def carrier_structure_constants(carrier):
    """All defined products a*b of carrier labels, for round-trip comparisons."""
    out = {}
    for a in carrier.labels:
        for b in carrier.labels:
            try:
                out[(a, b)] = carrier.mul_states({a: carrier.base.one()}, {b: carrier.base.one()})
            except TruncationEscape:
                pass
    return out


__all__ = [
    "HSFamily", "PolyCarrier", "scalar_carrier", "trivial_hs", "divided_power_hs",
    "check_hs_property", "check_iterative", "check_inverse_series", "check_power_rule",
    "CommHSVertexRing", "vertex_from_hs_comm", "recover_hs_comm", "RecoveredCarrier",
    "carrier_structure_constants", "sub_states",
]
