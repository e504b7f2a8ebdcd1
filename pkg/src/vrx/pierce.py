"""Idempotent Boolean ring, finite Stone space, Pierce stalks and von Neumann regularity.

Everything here is the finite discrete case: the Stone space is a finite set of
atoms, every subset is clopen and sections are point-indexed tuples.
"""

from dataclasses import dataclass
from itertools import combinations, product as iproduct

from .basering import ModN
from .errors import NotExhaustive, PreconditionFailed, InfiniteSearchSpace, TruncationEscape
from .instance import add_states, sub_states, unit
from .linalg import Submodule, kernel
from .report import CheckReport
from .structure import (SEARCH_LIMIT, DirectSum, ImageRing, _mode_range, _state, _vec,
                        as_state, center_truncated, check_ideal, find_idempotents,
                        principal_ideal)


def state_key(V, s):
    return tuple((lab, s[lab]) for lab in V.sorted_labels(s))


def _times(V, e, f):
    return V.nth_product(e, -1, f)


class BooleanRing:
    """Idempotents of V with e+f = e+f-2ef and ef = e(-1)f."""

    def __init__(self, V, elements):
        self.V = V
        R = V.base
        self.elements = sorted((dict(e) for e in elements), key=lambda s: state_key(V, s))
        self.keys = {state_key(V, e): k for k, e in enumerate(self.elements)}
        self.zero = {}
        self.one = dict(V.vacuum)
        self._R = R

    def __len__(self):
        return len(self.elements)

    def index(self, e):
        return self.keys.get(state_key(self.V, e))

    def meet(self, e, f):
        return _times(self.V, e, f)

    def xor(self, e, f):
        R = self._R
        ef = self.meet(e, f)
        two_ef = add_states(R, ef, ef)
        return sub_states(R, add_states(R, e, f), two_ef)

    def join(self, e, f):
        return sub_states(self._R, add_states(self._R, e, f), self.meet(e, f))

    def complement(self, e):
        return sub_states(self._R, self.one, e)

    def le(self, e, f):
        return self.meet(e, f) == e

    def check_axioms(self):
        """Exhaustive Boolean ring axioms over the element list."""
        rep = CheckReport("boolean_ring", self.V.spec)
        E = self.elements
        rep.record(self.index(self.zero) is not None, {"missing": "0"})
        rep.record(self.index(self.one) is not None, {"missing": "1"})
        for e in E:
            rep.record(self.meet(e, e) == e, {"square": self.V.state_json(e)})
            rep.record(self.xor(e, e) == {}, {"nilpotent": self.V.state_json(e)})
            rep.record(self.xor(e, self.complement(e)) == self.one, {"complement": self.V.state_json(e)})
        for e, f in iproduct(E, repeat=2):
            w = lambda: {"e": self.V.state_json(e), "f": self.V.state_json(f)}
            rep.record(self.index(self.xor(e, f)) is not None, w)
            rep.record(self.index(self.meet(e, f)) is not None, w)
            rep.record(self.meet(e, f) == self.meet(f, e), w)
            rep.record(self.xor(e, f) == self.xor(f, e), w)
        for e, f, g in iproduct(E, repeat=3):
            w = lambda: {"e": self.V.state_json(e), "f": self.V.state_json(f), "g": self.V.state_json(g)}
            rep.record(self.meet(self.meet(e, f), g) == self.meet(e, self.meet(f, g)), w)
            rep.record(self.xor(self.xor(e, f), g) == self.xor(e, self.xor(f, g)), w)
            rep.record(self.meet(e, self.xor(f, g)) == self.xor(self.meet(e, f), self.meet(e, g)), w)
        return rep


def boolean_ring(V, center=None):
    try:
        elements = find_idempotents(V, center=center)
    except InfiniteSearchSpace as exc:
        raise NotExhaustive(str(exc)) from exc
    return BooleanRing(V, elements)


@dataclass
class StonePoint:
    """A maximal ideal of B, held by its atom; ``ideal`` lists the idempotents e with e a = 0."""

    atom: dict
    ideal: list


def stone_space(B):
    """Atoms of B, each with the maximal ideal it determines."""
    points = []
    for a in B.elements:
        if not a:
            continue
        if all(B.meet(e, a) in ({}, a) for e in B.elements):
            points.append(StonePoint(a, [e for e in B.elements if B.meet(e, a) == {}]))
    return points


def check_partition(B, points):
    """Atoms are pairwise orthogonal and sum to 1."""
    rep = CheckReport("partition", B.V.spec)
    for p, q in combinations(points, 2):
        rep.record(B.meet(p.atom, q.atom) == {}, {"atoms": [B.V.state_json(p.atom), B.V.state_json(q.atom)]})
    total = {}
    for p in points:
        total = B.xor(total, p.atom)
    rep.record(total == B.one, {"sum": B.V.state_json(total)})
    return rep


def regular_ideal_Mbar(V, point):
    """M-bar = (1 - e_M)(-1)V together with its two-sidedness report."""
    f = sub_states(V.base, V.vacuum, point.atom)
    ideal = ImageRing(V, f, name=f"mbar({V.spec})")
    return ideal, check_ideal(ideal)


# -- the bundle ---------------------------------------------------------------------

def _weight_module(V, e, w):
    labels = V.labels(w)
    M = Submodule(V.base, len(labels))
    for lab in labels:
        try:
            M.add(_vec(V, labels, _times(V, e, unit(lab, V.base))))
        except TruncationEscape:
            continue
    return M


def _weight_size(V, w):
    n = len(V.labels(w))
    return V.base.size() ** n


def stalk_descriptor(V, atom, stalk):
    """A readable descriptor of e(-1)V."""
    R = V.base
    if isinstance(V, DirectSum) and stalk.is_coordinate():
        comps = {lab[0] for lab in stalk.all_labels()}
        if len(comps) == 1:
            return V.parts[comps.pop()].spec
    labels = V.all_labels()
    if len(labels) == 1 and isinstance(R, ModN):
        return f"zmod:{R.additive_order(atom[labels[0]])}"
    return stalk.spec


@dataclass
class Stalk:
    point: StonePoint
    ring: ImageRing
    descriptor: str


class PierceBundle:
    """Finite Pierce bundle: one stalk e_M(-1)V per Stone point."""

    def __init__(self, V, B, points, stalks):
        self.V = V
        self.B = B
        self.points = points
        self.stalks = stalks

    def section(self, v):
        """sigma_v as a tuple of stalk components."""
        return tuple(_times(self.V, s.point.atom, v) for s in self.stalks)

    def check_sizes(self):
        """Per weight, the stalk sizes multiply to the size of V (finite bases only)."""
        V = self.V
        rep = CheckReport("stalk_sizes", V.spec)
        for w in V.weights():
            if not V.labels(w):
                continue
            prod = 1
            for s in self.stalks:
                prod *= _weight_module(V, s.point.atom, w).size()
            rep.record(prod == _weight_size(V, w), {"weight": w, "product": prod})
        return rep


def build_pierce_bundle(V, center=None):
    B = boolean_ring(V, center)
    points = stone_space(B)
    stalks = []
    for k, p in enumerate(points):
        ring = ImageRing(V, p.atom, name=f"stalk({V.spec},{k})")
        stalks.append(Stalk(p, ring, stalk_descriptor(V, p.atom, ring)))
    return PierceBundle(V, B, points, stalks)


def idempotents_in(V, ring, center=None):
    """Idempotents of V lying in the image ring (exhaustive over its weight-0 part)."""
    center = center or center_truncated(V)
    info = center.by_weight.get(0)
    if info is None:
        return []
    if not V.base.finite:
        raise NotExhaustive(f"{V.base} is infinite")
    if info["module"].size() > SEARCH_LIMIT:
        raise NotExhaustive("too many central weight-0 elements")
    cands = [_state(V, info["labels"], vec) for vec in info["module"].elements()]
    cands = [c for c in cands if ring is None or ring.contains(c)]
    return find_idempotents(V, candidates=cands, center=center)


def is_indecomposable(V, center=None):
    """Only 0 and 1 are idempotent."""
    return len(idempotents_in(V, None, center)) <= 2


def check_stalk_indecomposable(bundle, center=None):
    V = bundle.V
    center = center or center_truncated(V)
    rep = CheckReport("stalk_indecomposable", V.spec)
    for s in bundle.stalks:
        ids = idempotents_in(V, s.ring, center)
        keys = {state_key(V, e) for e in ids}
        rep.record(keys == {(), state_key(V, s.point.atom)},
                   {"stalk": s.descriptor, "idempotents": [V.state_json(e) for e in ids]})
    return rep


def _map_rows(V, atoms, labels):
    """Rows of v -> (a(-1)v for a in atoms) in coordinates of ``labels``."""
    R = V.base
    rows = []
    images_by_atom = []
    for a in atoms:
        images_by_atom.append([_times(V, a, unit(lab, R)) for lab in labels])
    for images in images_by_atom:
        for t in sorted({t for img in images for t in img}, key=lambda l: V.label_index()[l]):
            rows.append([img.get(t, R.zero()) for img in images])
    return rows


def check_global_sections_iso(V, bundle=None, max_weight=None):
    """v -> sigma_v is bijective onto sections and respects every product on the grid."""
    R = V.base
    bundle = bundle or build_pierce_bundle(V)
    rep = CheckReport("global_sections_iso", V.spec)
    atoms = [s.point.atom for s in bundle.stalks]
    labels = V.all_labels()
    ker = kernel(R, _map_rows(V, atoms, labels), len(labels))
    rep.record(ker.is_zero(), {"injective": [V.state_json(_state(V, labels, g)) for g in ker.generators()]})
    for k, s in enumerate(bundle.stalks):
        for g in s.ring._gens:
            sec = bundle.section(g)
            want = tuple(g if j == k else {} for j in range(len(atoms)))
            rep.record(sec == want, {"surjective": V.state_json(g), "point": k})
    rep.record(bundle.section(V.vacuum) == tuple(atoms), {"vacuum": True})
    grid = V.all_labels(max_weight)
    for u in grid:
        su = bundle.section(unit(u, R))
        for v in grid:
            sv = bundle.section(unit(v, R))
            for n in _mode_range(V, V.weight(u), V.weight(v), max_weight):
                def run(u=u, v=v, n=n, su=su, sv=sv):
                    lhs = bundle.section(V.product(u, n, v))
                    rhs = tuple(V.nth_product(a, n, b) for a, b in zip(su, sv))
                    return lhs == rhs
                rep.attempt(run, lambda u=u, n=n, v=v: {"u": V.label_str(u), "n": n, "v": V.label_str(v)})
    return rep


# -- regular ideals and von Neumann regularity --------------------------------------

def _image_module(V, e):
    return ImageRing(V, e).module


def regular_ideals(B):
    """The distinct submodules e(-1)V, e in B, keyed by their canonical form."""
    out = {}
    for e in B.elements:
        M = _image_module(B.V, e)
        out.setdefault(M.key(), (e, M))
    return out


def all_ideals(V, limit=SEARCH_LIMIT):
    """Every 2-sided ideal as a sum of principal ideals; None when V is too large."""
    R = V.base
    labels = V.all_labels()
    if not R.finite or R.size() ** len(labels) > limit:
        return None
    principals = {}
    for vec in Submodule(R, len(labels), [[R.one() if i == j else R.zero() for i in range(len(labels))]
                                          for j in range(len(labels))]).elements():
        P = principal_ideal(V, _state(V, labels, vec))
        principals.setdefault(P.key(), P.module)
    found = dict(principals)
    frontier = list(found.values())
    while frontier:
        nxt = []
        for A in frontier:
            for P in principals.values():
                S = Submodule(R, len(labels), A.generators() + P.generators())
                if S.key() not in found:
                    found[S.key()] = S
                    nxt.append(S)
        frontier = nxt
    return found


def regular_ideal_lattice(V, bundle=None):
    """Subsets U of the Stone space against the ideals J[U] of sections supported in U."""
    R = V.base
    bundle = bundle or build_pierce_bundle(V)
    B = bundle.B
    pts = bundle.points
    rep = CheckReport("regular_ideal_lattice", V.spec)
    labels = V.all_labels()
    lattice = {}
    for r in range(len(pts) + 1):
        for U in combinations(range(len(pts)), r):
            eU = {}
            for k in U:
                eU = B.xor(eU, pts[k].atom)
            J = _image_module(V, eU)
            lattice[U] = J
            # U[J] = points where J is not inside M-bar
            back = tuple(k for k, p in enumerate(pts)
                         if any(_times(V, p.atom, _state(V, labels, g)) for g in J.generators()))
            rep.record(back == U, {"U": list(U), "recovered": list(back)})
            # short exact sequence: J[U] is the kernel of restriction to the complement
            rest = [pts[k].atom for k in range(len(pts)) if k not in U]
            K = kernel(R, _map_rows(V, rest, labels), len(labels)) if rest else \
                Submodule(R, len(labels), [[R.one() if i == j else R.zero() for i in range(len(labels))]
                                           for j in range(len(labels))])
            rep.record(K == J, {"exact_at": list(U)})
    regs = regular_ideals(B)
    for key, (e, M) in regs.items():
        U = tuple(k for k, p in enumerate(pts) if B.meet(e, p.atom))
        rep.record(lattice[U] == M, {"J": V.state_json(e)})
    distinct = {J.key() for J in lattice.values()}
    rep.record(len(distinct) == len(lattice), {"distinct": len(distinct)})
    ideals = all_ideals(V)
    rep.details = {"regularIdeals": len(regs), "subsets": len(lattice),
                   "allIdeals": None if ideals is None else len(ideals)}
    return rep


def _candidates(V, limit=SEARCH_LIMIT):
    R = V.base
    labels = V.all_labels()
    if R.finite and R.size() ** len(labels) <= limit:
        full = Submodule(R, len(labels), [[R.one() if i == j else R.zero() for i in range(len(labels))]
                                          for j in range(len(labels))])
        return [_state(V, labels, vec) for vec in full.elements()], True
    return [unit(lab, R) for lab in labels], False


def is_vnr(V, B=None):
    """Every principal ideal is e(-1)V for an idempotent e.

    Returns (verdict, witness, exhaustive); the witness is the first offending state.
    """
    B = B or boolean_ring(V)
    regs = regular_ideals(B)
    cands, exhaustive = _candidates(V)
    for v in cands:
        P = principal_ideal(V, v)
        if P.key() not in regs:
            return False, v, exhaustive
    return True, None, exhaustive


def is_simple(V, ring):
    """Every nonzero element of the image ring generates all of it."""
    R = V.base
    if not R.finite or ring.size() > SEARCH_LIMIT:
        raise NotExhaustive("stalk too large for an exhaustive simplicity check")
    labels = V.all_labels()
    for vec in ring.module.elements():
        s = _state(V, labels, vec)
        if not s:
            continue
        if not principal_ideal(V, s).module == ring.module:
            return False, s
    return True, None


def check_vnr_simple_stalks(V, bundle=None):
    bundle = bundle or build_pierce_bundle(V)
    rep = CheckReport("vnr_simple_stalks", V.spec)
    vnr, witness, exhaustive = is_vnr(V, bundle.B)
    simple = []
    for s in bundle.stalks:
        ok, w = is_simple(V, s.ring)
        simple.append({"stalk": s.descriptor, "simple": ok,
                       "witness": None if w is None else V.state_json(w)})
    all_simple = all(x["simple"] for x in simple)
    rep.record(vnr == all_simple, {"vnr": vnr, "stalks": simple})
    rep.details = {"vnr": vnr, "exhaustive": exhaustive, "stalks": simple,
                   "witness": None if witness is None else V.state_json(witness)}
    return rep


def check_center_vnr(V):
    """For vNr V the center, with product a(-1)b, is von Neumann regular."""
    R = V.base
    vnr, witness, _ = is_vnr(V)
    if not vnr:
        raise PreconditionFailed(f"{V.spec} is not von Neumann regular")
    center = center_truncated(V)
    labels = V.all_labels()
    C = Submodule(R, len(labels))
    for g in center.generators():
        C.add(_vec(V, labels, g))
    if C.size() == 0 or C.size() > SEARCH_LIMIT:
        raise NotExhaustive("center too large to enumerate")
    elems = [_state(V, labels, vec) for vec in C.elements()]
    ids = [e for e in elems if _times(V, e, e) == e]
    gens = [_state(V, labels, g) for g in C.generators()]
    ideals_e = {Submodule(R, len(labels), [_vec(V, labels, _times(V, e, g)) for g in gens]).key()
                for e in ids}
    rep = CheckReport("center_vnr", V.spec)
    for c in elems:
        P = Submodule(R, len(labels), [_vec(V, labels, _times(V, c, g)) for g in gens])
        rep.record(P.key() in ideals_e, {"c": V.state_json(c)})
    rep.details = {"centerSize": C.size(), "idempotents": len(ids)}
    return rep
