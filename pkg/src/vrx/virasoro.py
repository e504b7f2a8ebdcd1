"""The Virasoro vertex ring M_k(c', 0) by straightening.

Basis labels are partitions (n1 >= ... >= nk >= 2) standing for
L(-n1)...L(-nk)v0; the empty tuple is the vacuum and ``(2,)`` is omega.
``L(j)`` acts by commuting past the leftmost factor with the bracket
[L(m), L(n)] = (m-n)L(m+n) + delta_{m+n,0} C(m+1,3) K until it reaches v0.
Products of composite states go through the associator formula on the first
factor, with omega(n) = L(n-1).
"""

from functools import lru_cache
from math import factorial

from .basering import Integers, ModN, coerce
from .errors import NotAVirasoroVector, NotFound, TruncationEscape
from .exactnum import binom
from .instance import VertexRing, axpy, lincomb, scale, sub_states, unit
from .report import CheckReport

VACUUM = ()
OMEGA = (2,)


def vir_bracket(m, n, cprime, R=None):
    """[L(m), L(n)] as (coefficient of L(m+n), coefficient of K)."""
    central = binom(m + 1, 3) if m + n == 0 else 0
    if R is None:
        return m - n, central * cprime
    return R.from_int(m - n), R.mul(R.from_int(central), cprime)


@lru_cache(maxsize=None)
def partitions(w, min_part=2, max_part=None):
    """Partitions of w into parts >= min_part, as descending tuples, largest first."""
    if max_part is None:
        max_part = w
    if w == 0:
        return ((),)
    out = []
    for first in range(min(w, max_part), min_part - 1, -1):
        for rest in partitions(w - first, min_part, first):
            out.append((first,) + rest)
    return tuple(out)


class VirasoroEngine:
    """Straightening over a base ring with quasicentral charge ``cprime``.

    ``min_part = 2`` gives M(c', 0) where L(m)v0 = 0 for m >= -1;
    ``min_part = 1`` gives the Verma module where L(m)v0 = 0 for m >= 0.
    """

    def __init__(self, R, cprime, min_part=2):
        self.R = R
        self.cprime = cprime
        self.min_part = min_part
        self._L = {}
        self._P = {}

    def apply_L(self, j, lam):
        """L(j) applied to the basis monomial ``lam``."""
        key = (j, lam)
        r = self._L.get(key)
        if r is not None:
            return r
        R = self.R
        if sum(lam) - j < 0:
            r = {}
        elif -j >= (lam[0] if lam else self.min_part):
            r = {(-j,) + lam: R.one()}
        elif not lam:
            r = {}
        else:
            n1, rest = lam[0], lam[1:]
            acc = {}
            # L(j) L(-n1) rest = L(-n1) L(j) rest + [L(j), L(-n1)] rest
            axpy(R, acc, R.one(), self.apply_L_state(-n1, self.apply_L(j, rest)))
            a, k = vir_bracket(j, -n1, self.cprime, R)
            if not R.is_zero(a):
                axpy(R, acc, a, self.apply_L(j - n1, rest))
            if not R.is_zero(k):
                axpy(R, acc, k, {rest: R.one()})
            r = acc
        self._L[key] = r
        return r

    def apply_L_state(self, j, state):
        acc = {}
        for lam, c in state.items():
            axpy(self.R, acc, c, self.apply_L(j, lam))
        return acc

    def omega_mode(self, n, state):
        return self.apply_L_state(n - 1, state)

    def product(self, lam, n, mu):
        """lam(n)mu without truncation; lam and mu are basis monomials."""
        key = (lam, n, mu)
        r = self._P.get(key)
        if r is not None:
            return r
        R = self.R
        wl, wm = sum(lam), sum(mu)
        if wl + wm - n - 1 < 0:
            r = {}
        elif not lam:
            r = {mu: R.one()} if n == -1 else {}
        elif lam == OMEGA:
            r = self.apply_L(n - 1, mu)
        else:
            # lam = omega(t) w with t = 1 - m1; associator formula in t < 0
            t, w = 1 - lam[0], lam[1:]
            acc = {}
            ww = sum(w)
            # first sum: omega(t-i) (w(n+i) mu), zero once n+i >= wt(w)+wt(mu)
            for i in range(max(ww + wm - n, 0)):
                c = (-1) ** i * binom(t, i)
                inner = self.product(w, n + i, mu)
                if inner:
                    axpy(R, acc, R.from_int(c), self.omega_mode(t - i, inner))
            # second sum: -(-1)^t w(n+t-i) (omega(i) mu), zero once i >= wt(mu)+2
            sign_t = (-1) ** (t % 2)
            for i in range(wm + 2):
                c = -sign_t * (-1) ** i * binom(t, i)
                inner = self.omega_mode(i, {mu: R.one()})
                for nu, d in inner.items():
                    p = self.product(w, n + t - i, nu)
                    if p:
                        axpy(R, acc, R.mul(R.from_int(c), d), p)
            r = acc
        self._P[key] = r
        return r

    def dm_recursive(self, m, lam):
        """D_m by the division-free recursion on the first factor."""
        R = self.R
        if not lam:
            return {lam: R.one()} if m == 0 else {}
        n1, rest = lam[0], lam[1:]
        acc = {}
        n = -n1 + 1
        for i in range(m + 1):
            # (D_i omega)(n) = (-1)^i C(n, i) L(n - i - 1)
            c = (-1) ** i * binom(n, i)
            if c:
                inner = self.dm_recursive(m - i, rest)
                axpy(R, acc, R.from_int(c), self.apply_L_state(n - i - 1, inner))
        return acc


def _lift(R, c):
    if isinstance(R, Integers):
        return c
    if isinstance(R, ModN):
        return R.lift(c)
    raise ValueError(f"no integer lift over {R}")


class VirasoroRing(VertexRing):
    """Truncation of M_k(c', 0) at weight N.

    Over Z/n the default construction straightens over Z with an integer lift
    of c' and reduces; ``native=True`` straightens directly over the base.
    """

    lo = 0
    lo_exact = True
    hi_exact = False

    def __init__(self, base, cprime, N, lift=None, native=False):
        super().__init__()
        self.base = base
        self.cprime = coerce(base, cprime)
        self.hi = N
        self.N = N
        self.vacuum = {VACUUM: base.one()}
        self.omega = {OMEGA: base.one()}
        self.native = native or isinstance(base, Integers) or not isinstance(base, ModN)
        if self.native:
            self.lift = None
            self.engine = VirasoroEngine(base, self.cprime)
        else:
            self.lift = _lift(base, self.cprime) if lift is None else lift
            if base.from_int(self.lift) != self.cprime:
                raise ValueError("lift does not reduce to c'")
            self.engine = VirasoroEngine(Integers(), self.lift)
        cp = base.to_str(self.cprime)
        self.spec = f"virasoro:{base}:{cp}"
        if lift is not None:
            self.spec += f":lift={lift}"
        if native and isinstance(base, ModN):
            self.spec += ":native"

    def labels(self, w):
        if w < 0 or w > self.N:
            return []
        return list(partitions(w))

    def weight(self, label):
        return sum(label)

    def label_str(self, label):
        if not label:
            return "1"
        return "".join(f"L(-{p})" for p in label) + "1"

    def n0(self, u, v):
        return sum(u) + sum(v)

    def _reduce(self, state):
        if self.native:
            return state
        R = self.base
        out = {}
        for lab, c in state.items():
            d = R.from_int(c)
            if not R.is_zero(d):
                out[lab] = d
        return out

    def _product(self, u, n, v):
        return self._reduce(self.engine.product(u, n, v))

    def apply_L(self, j, state):
        """L(j) on a state; TruncationEscape above weight N."""
        acc = {}
        for lam, c in state.items():
            if sum(lam) - j > self.N:
                raise TruncationEscape(f"L({j}) leaves weight {self.N}")
            axpy(self.base, acc, c, self._reduce(self.engine.apply_L(j, lam)))
        return acc

    def dm_recursive(self, m, state):
        acc = {}
        for lam, c in state.items():
            if sum(lam) + m > self.N:
                raise TruncationEscape(f"D_{m} leaves weight {self.N}")
            axpy(self.base, acc, c, self._reduce(self.engine.dm_recursive(m, lam)))
        return acc


def build_M(base, cprime, N, lift=None, native=False):
    """The truncated Virasoro vertex ring M_base(c', 0) up to weight N."""
    return VirasoroRing(base, cprime, N, lift=lift, native=native)


def apply_mode(V, j, state):
    return V.apply_L(j, state)


def dm_recursive(V, m, state):
    return V.dm_recursive(m, state)


class VermaModule:
    """Scaffold: the Verma module with basis parts >= 1."""

    def __init__(self, base, cprime, N):
        self.base = base
        self.N = N
        self.engine = VirasoroEngine(base, coerce(base, cprime), min_part=1)

    def labels(self, w):
        return list(partitions(w, 1))

    def apply_L(self, j, state):
        return self.engine.apply_L_state(j, state)


def check_verma_field_property(Ver, extra=3):
    """L(n) u(n1..nk) = 0 whenever n exceeds n1 + ... + nk."""
    rep = CheckReport("verma_field", f"verma:{Ver.base}")
    for w in range(Ver.N + 1):
        for lam in Ver.labels(w):
            for n in range(w + 1, w + 1 + extra):
                rep.record(not Ver.apply_L(n, {lam: Ver.base.one()}),
                           {"n": n, "u": list(lam)})
    return rep


# -- checks ----------------------------------------------------------------------

def graded_dimensions(V):
    return [len(V.labels(w)) for w in range(V.hi + 1)]


def check_l0_grading(V):
    """L(0) acts by w on weight w."""
    rep = CheckReport("l0_grading", V.spec)
    R = V.base
    for w in range(V.hi + 1):
        for lab in V.labels(w):
            u = unit(lab, R)
            rep.attempt(lambda: V.nth_product(V.omega, 1, u) == scale(R, R.from_int(w), u),
                        lambda: {"u": V.label_str(lab)})
    return rep


def check_dm_power(V, max_m=6):
    """m! D_m = L(-1)^m on basis states of weight <= N - m."""
    rep = CheckReport("dm_power", V.spec)
    R = V.base
    for m in range(max_m + 1):
        for lab in V.all_labels(V.hi - m):
            u = unit(lab, R)

            def run(u=u, m=m):
                x = u
                for _ in range(m):
                    x = V.apply_L(-1, x)
                return x == scale(R, R.from_int(factorial(m)), V.dm_recursive(m, u))
            rep.attempt(run, lambda lab=lab, m=m: {"u": V.label_str(lab), "m": m})
    return rep


def check_dm_canonical(V, max_m=None):
    """The D_m recursion agrees with u(-m-1) vacuum on every basis state."""
    rep = CheckReport("dm_canonical", V.spec)
    max_m = V.hi if max_m is None else max_m
    for m in range(max_m + 1):
        for lab in V.all_labels(V.hi - m):
            u = unit(lab, V.base)
            rep.attempt(lambda: V.dm_recursive(m, u) == V.D(m, u),
                        lambda: {"u": V.label_str(lab), "m": m})
    return rep


def structure_constants(V, max_weight):
    """{(u, n, v): u(n)v} for basis labels and results of weight <= max_weight."""
    out = {}
    labels = V.all_labels(max_weight)
    for u in labels:
        for v in labels:
            wu, wv = V.weight(u), V.weight(v)
            for n in range(wu + wv - max_weight - 1, V.n0(u, v)):
                out[(u, n, v)] = V.product(u, n, v)
    return out


def check_base_change(VZ, Vk, max_weight):
    """Structure constants of Vk equal those of VZ reduced into Vk's base."""
    rep = CheckReport("base_change", Vk.spec)
    R = Vk.base
    a = structure_constants(VZ, max_weight)
    b = structure_constants(Vk, max_weight)
    for key in sorted(set(a) | set(b)):
        red = {}
        for lab, c in a.get(key, {}).items():
            d = R.from_int(c)
            if not R.is_zero(d):
                red[lab] = d
        rep.record(red == b.get(key, {}), {"u": list(key[0]), "n": key[1], "v": list(key[2])})
    return rep


def _mode_L(V, nu, j, state):
    """L'(j) = nu(j+1) on the target."""
    return V.nth_product(nu, j + 1, state)


def check_virasoro_vector(V, nu, cprime, max_weight=None, box=None):
    """The modes L(n) = nu(n+1) satisfy the Virasoro relations with K = c'."""
    R = V.base
    c = coerce(R, cprime)
    rep = CheckReport("virasoro_vector", V.spec)
    samples = [unit(lab, R) for lab in V.all_labels(max_weight)]
    box = 3 if box is None else box
    wn = V.state_weights(nu)
    if wn != [2]:
        rep.details["weights"] = wn
    from .vertexcore import AdmissibleWindow
    win = AdmissibleWindow(V)
    for w in samples:
        ww = V.state_weights(w)[0]
        for m in range(-box, box + 1):
            for n in range(-box, box + 1):
                if not all(win.weight_ok(x) for x in (ww - n, ww - m, ww - m - n)):
                    rep.record(None)
                    continue

                def run(w=w, m=m, n=n):
                    left = sub_states(R, _mode_L(V, nu, m, _mode_L(V, nu, n, w)),
                                      _mode_L(V, nu, n, _mode_L(V, nu, m, w)))
                    a, k = vir_bracket(m, n, c, R)
                    right = scale(R, a, _mode_L(V, nu, m + n, w))
                    right = axpy(R, right, k, w) if not R.is_zero(k) else right
                    return left == right
                rep.attempt(run, lambda w=w, m=m, n=n: {"m": m, "n": n, "w": V.state_json(w)})
    return rep


def check_voa_axioms(V, omega=None, cprime=None):
    """Finite weight spaces, bounded below grading, L(0) = weight, L(-1)^m = m! D_m."""
    omega = V.omega if omega is None else omega
    R = V.base
    rep = CheckReport("voa_axioms", V.spec)
    rep.record(all(len(V.labels(w)) < float("inf") for w in V.weights()), {"axiom": "a"})
    rep.record(V.lo_exact and V.lo == 0 and not V.labels(-1), {"axiom": "b"})
    rep.record(V.state_weights(omega) == [2], {"axiom": "omega weight"})
    for w in V.weights():
        for lab in V.labels(w):
            u = unit(lab, R)
            rep.attempt(lambda: V.nth_product(omega, 1, u) == scale(R, R.from_int(w), u),
                        {"axiom": "c", "u": V.label_str(lab)})
    target = V
    if isinstance(R, ModN) and not V.native:
        target = VirasoroRing(Integers(), V.lift, V.hi)
        rep.details["axiomDVia"] = "integer lift"
    sub = check_dm_power(target, min(6, target.hi))
    rep.merge(sub)
    return rep


def initial_morphism(target, nu, cprime, max_weight=None, source=None):
    """The morphism M(c', 0) -> target sending omega to nu, with a report."""
    R = target.base
    N = target.hi if max_weight is None else max_weight
    vv = check_virasoro_vector(target, nu, cprime, max_weight=min(N, 4), box=3)
    if not vv.ok:
        raise NotAVirasoroVector(f"candidate fails the Virasoro relations: {vv.first_failure}")
    M = source or build_M(R, cprime, N)
    table = {}
    for w in range(N + 1):
        for lam in M.labels(w):
            x = dict(target.vacuum)
            for p in reversed(lam):
                x = _mode_L(target, nu, -p, x)
            table[lam] = x

    def alpha(state):
        acc = {}
        for lab, c in state.items():
            axpy(R, acc, c, table[lab])
        return acc

    rep = CheckReport("initial_morphism", target.spec)
    rep.record(alpha(M.vacuum) == target.vacuum, {"vacuum": True})
    labels = M.all_labels(N)
    for u in labels:
        for v in labels:
            for n in range(sum(u) + sum(v) - N - 1, M.n0(u, v)):
                def run(u=u, n=n, v=v):
                    return alpha(M.product(u, n, v)) == target.nth_product(table[u], n, table[v])
                rep.attempt(run, lambda u=u, n=n, v=v: {"u": list(u), "n": n, "v": list(v)})
    return table, rep


def check_omega_locality4(V, t_max=8, max_weight=None, expect=None):
    """Locality order of omega with itself; passes when it is at most 4."""
    from .vertexcore import locality_order
    rep = CheckReport("omega_locality", V.spec)
    try:
        t, witness = locality_order(V, V.omega, V.omega, t_max, max_weight=max_weight)
    except NotFound as e:
        rep.record(False, {"error": str(e)})
        return rep
    rep.details = {"order": t}
    if witness is not None:
        rep.details["witness"] = witness
    rep.record(t <= 4 if expect is None else t == expect, {"order": t})
    return rep
