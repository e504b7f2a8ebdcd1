"""Exact submodules of R^d for R = Z, Z/n, or finite products of these.

Everything reduces to integer lattices in Hermite normal form.  A submodule of
(Z/n)^d is stored as the lattice L of its integer lifts, which contains n*Z^d,
so the normal form is canonical and equality is row-by-row equality.  Over a
product ring the module splits into one submodule per factor.
"""

import itertools

from .basering import Integers, ModN, Product


def hnf(rows, ncols):
    """Row Hermite normal form of an integer matrix; zero rows are dropped."""
    A = [list(r) for r in rows if any(r)]
    r = 0
    for col in range(ncols):
        while True:
            nz = [i for i in range(r, len(A)) if A[i][col] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(A[i][col]))
            A[r], A[piv] = A[piv], A[r]
            done = True
            pr = A[r]
            for i in range(r + 1, len(A)):
                if A[i][col]:
                    q = A[i][col] // pr[col]
                    A[i] = [a - q * b for a, b in zip(A[i], pr)]
                    if A[i][col]:
                        done = False
            if done:
                break
        if r < len(A) and A[r][col] != 0:
            if A[r][col] < 0:
                A[r] = [-a for a in A[r]]
            pr = A[r]
            for i in range(r):
                q = A[i][col] // pr[col]
                if q:
                    A[i] = [a - q * b for a, b in zip(A[i], pr)]
            r += 1
            A = A[:r] + [row for row in A[r:] if any(row)]
    return A[:r]


def int_kernel(M, ncols):
    """Basis (in normal form) of {x in Z^ncols : M x = 0}."""
    m = len(M)
    B = []
    for j in range(ncols):
        B.append([M[i][j] for i in range(m)] + [1 if k == j else 0 for k in range(ncols)])
    H = hnf(B, m + ncols)
    K = [row[m:] for row in H if not any(row[:m])]
    return hnf(K, ncols)


def _pivot(row):
    for k, a in enumerate(row):
        if a:
            return k
    return None


class _Lattice:
    """Integer lattice in HNF, optionally containing modulus * Z^d."""

    def __init__(self, dim, modulus=0, rows=()):
        self.dim = dim
        self.modulus = modulus
        base = [] if not modulus else [[modulus if k == j else 0 for k in range(dim)]
                                        for j in range(dim)]
        self.rows = hnf(base + [list(r) for r in rows], dim)

    def _reduce(self, v):
        v = list(v)
        rows = {_pivot(r): r for r in self.rows}
        for c in range(self.dim):
            if v[c] == 0:
                continue
            r = rows.get(c)
            if r is None or v[c] % r[c]:
                return v, False
            q = v[c] // r[c]
            v = [a - q * b for a, b in zip(v, r)]
        return v, True

    def contains(self, v):
        return self._reduce(v)[1]

    def add(self, v):
        if self.contains(v):
            return False
        self.rows = hnf(self.rows + [list(v)], self.dim)
        return True

    def key(self):
        return tuple(tuple(r) for r in self.rows)

    def size(self):
        if not self.modulus:
            return 1 if not self.rows else 0
        out = 1
        for r in self.rows:
            out *= self.modulus // r[_pivot(r)]
        return out

    def elements(self):
        n = self.modulus
        ranges = [range(n // r[_pivot(r)]) for r in self.rows]
        for cs in itertools.product(*ranges):
            v = [0] * self.dim
            for c, r in zip(cs, self.rows):
                if c:
                    v = [a + c * b for a, b in zip(v, r)]
            yield [a % n for a in v]

    def generators(self):
        if self.modulus:
            out = []
            for r in self.rows:
                g = [a % self.modulus for a in r]
                if any(g):
                    out.append(g)
            return out
        return [list(r) for r in self.rows]


class Submodule:
    """A submodule of R^dim given by generators; payload vectors are lists."""

    def __init__(self, ring, dim, gens=()):
        self.ring = ring
        self.dim = dim
        if isinstance(ring, Product):
            self.parts = [Submodule(f, dim) for f in ring.factors]
        elif isinstance(ring, Integers):
            self.lat = _Lattice(dim)
        elif isinstance(ring, ModN):
            self.lat = _Lattice(dim, ring.n)
        else:
            raise NotImplementedError(f"module algebra over {ring} is not supported")
        for g in gens:
            self.add(g)

    def add(self, v):
        """Add a generator; return True when the module grew."""
        if isinstance(self.ring, Product):
            grew = False
            for k, part in enumerate(self.parts):
                grew |= part.add([x[k] for x in v])
            return grew
        return self.lat.add(v)

    def contains(self, v):
        if isinstance(self.ring, Product):
            return all(p.contains([x[k] for x in v]) for k, p in enumerate(self.parts))
        return self.lat.contains(v)

    def key(self):
        if isinstance(self.ring, Product):
            return tuple(p.key() for p in self.parts)
        return self.lat.key()

    def __eq__(self, other):
        return isinstance(other, Submodule) and self.ring == other.ring and \
            self.dim == other.dim and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __le__(self, other):
        return all(other.contains(g) for g in self.generators())

    def is_zero(self):
        return not self.generators()

    def size(self):
        """Number of elements; 0 stands for infinitely many."""
        if isinstance(self.ring, Product):
            out = 1
            for p in self.parts:
                s = p.size()
                if s == 0:
                    return 0
                out *= s
            return out
        return self.lat.size()

    def elements(self):
        """Enumerate all elements (finite rings only) in a canonical order."""
        if isinstance(self.ring, Product):
            for combo in itertools.product(*(list(p.elements()) for p in self.parts)):
                yield [tuple(c[j] for c in combo) for j in range(self.dim)]
            return
        if not self.ring.finite:
            raise ValueError("cannot enumerate a module over an infinite ring")
        yield from self.lat.elements()

    def generators(self):
        if isinstance(self.ring, Product):
            out = []
            zero = [f.zero() for f in self.ring.factors]
            for k, p in enumerate(self.parts):
                for g in p.generators():
                    vec = []
                    for x in g:
                        t = list(zero)
                        t[k] = x
                        vec.append(tuple(t))
                    out.append(vec)
            return out
        return self.lat.generators()


def kernel(ring, A, ncols):
    """Submodule {x in R^ncols : A x = 0} for a matrix given as payload rows."""
    if isinstance(ring, Product):
        out = Submodule(ring, ncols)
        for k, f in enumerate(ring.factors):
            sub = kernel(f, [[x[k] for x in row] for row in A], ncols)
            zero = [g.zero() for g in ring.factors]
            for g in sub.generators():
                vec = []
                for x in g:
                    t = list(zero)
                    t[k] = x
                    vec.append(tuple(t))
                out.add(vec)
        return out
    if isinstance(ring, Integers):
        return Submodule(ring, ncols, int_kernel(A, ncols))
    if isinstance(ring, ModN):
        n = ring.n
        m = len(A)
        M = [list(row) + [n if k == i else 0 for k in range(m)] for i, row in enumerate(A)]
        K = int_kernel(M, ncols + m)
        return Submodule(ring, ncols, [[a % n for a in row[:ncols]] for row in K])
    raise NotImplementedError(f"module algebra over {ring} is not supported")
