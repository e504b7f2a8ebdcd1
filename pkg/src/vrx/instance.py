"""Sparse states and the truncated vertex ring interface.

A state is a plain dict mapping basis labels to nonzero base-ring payloads.
Every concrete vertex ring supplies a weight-graded label set, a vacuum
state, and an exact product oracle on labels; ``nth_product`` extends it
bilinearly.

Truncation bookkeeping: labels exist for weights ``lo..hi``.  A side of the
window is *exact* when the full ring has nothing beyond it, so a product
landing there is exactly zero; otherwise such a product raises
``TruncationEscape``.
"""

from .errors import TruncationEscape

_ESCAPE = object()


def axpy(R, acc, c, vec):
    """acc += c * vec in place, dropping zero coefficients."""
    one = R.one()
    for k, v in vec.items():
        t = v if c == one else R.mul(c, v)
        if k in acc:
            t = R.add(acc[k], t)
        if R.is_zero(t):
            acc.pop(k, None)
        else:
            acc[k] = t
    return acc


def add_states(R, a, b):
    return axpy(R, dict(a), R.one(), b)


def sub_states(R, a, b):
    return axpy(R, dict(a), R.neg(R.one()), b)


def scale(R, c, vec):
    if R.is_zero(c):
        return {}
    return axpy(R, {}, c, vec)


def lincomb(R, terms):
    """Sum of c * vec over (c, vec) pairs; c may be a Python int."""
    acc = {}
    for c, vec in terms:
        if isinstance(c, int):
            c = R.from_int(c)
        if not R.is_zero(c):
            axpy(R, acc, c, vec)
    return acc


def unit(label, R):
    return {label: R.one()}


class VertexRing:
    """Abstract weight-truncated vertex ring over a base ring.

    Subclasses set ``base``, ``lo``, ``hi``, ``lo_exact``, ``hi_exact``,
    ``vacuum`` and ``spec`` and implement ``labels``, ``weight``, ``_product``
    and ``n0``.
    """

    base = None
    lo = 0
    hi = 0
    lo_exact = True
    hi_exact = False
    spec = "?"

    def __init__(self):
        self._memo = {}

    # -- basis -----------------------------------------------------------
    def labels(self, w):
        raise NotImplementedError

    def weight(self, label):
        raise NotImplementedError

    def weights(self):
        return range(self.lo, self.hi + 1)

    def all_labels(self, max_weight=None, min_weight=None):
        top = self.hi if max_weight is None else min(self.hi, max_weight)
        bottom = self.lo if min_weight is None else max(self.lo, min_weight)
        out = []
        for w in range(bottom, top + 1):
            out.extend(self.labels(w))
        return out

    def generators(self, w):
        """Spanning states of weight ``w``; unit vectors by default."""
        return [unit(lab, self.base) for lab in self.labels(w)]

    def all_generators(self, max_weight=None, min_weight=None):
        top = self.hi if max_weight is None else min(self.hi, max_weight)
        bottom = self.lo if min_weight is None else max(self.lo, min_weight)
        out = []
        for w in range(bottom, top + 1):
            out.extend((w, g) for g in self.generators(w))
        return out

    def dims(self):
        return {w: len(self.labels(w)) for w in self.weights()}

    def label_str(self, label):
        return str(label)

    def show(self, state):
        if not state:
            return "0"
        parts = []
        for lab in self.sorted_labels(state):
            parts.append(f"{self.base.to_str(state[lab])}*{self.label_str(lab)}")
        return " + ".join(parts)

    def state_json(self, state):
        return [[self.label_str(lab), self.base.to_str(state[lab])]
                for lab in self.sorted_labels(state)]

    def sorted_labels(self, state):
        order = self.label_index()
        return sorted(state, key=lambda lab: order.get(lab, len(order)))

    def label_index(self):
        idx = getattr(self, "_label_index", None)
        if idx is None:
            idx = {lab: k for k, lab in enumerate(self.all_labels())}
            self._label_index = idx
        return idx

    def to_vector(self, state):
        idx = self.label_index()
        v = [self.base.zero()] * len(idx)
        for lab, c in state.items():
            v[idx[lab]] = c
        return v

    def from_vector(self, vec):
        labs = self.all_labels()
        return {labs[k]: c for k, c in enumerate(vec) if not self.base.is_zero(c)}

    def state_weight(self, state):
        """The common weight of a homogeneous nonzero state, else None."""
        ws = {self.weight(lab) for lab in state}
        return ws.pop() if len(ws) == 1 else None

    def state_weights(self, state):
        return sorted({self.weight(lab) for lab in state})

    # -- products --------------------------------------------------------
    def n0(self, u, v):
        """Integer with u(n)v = 0 for every n >= it (labels)."""
        raise NotImplementedError

    def n0_weight_bound(self, wu, wv):
        """Bound on n0(u, v) valid for all labels of the given weights."""
        return wu + wv - self.lo

    def _gate(self, u, n, v):
        """Return True when the product is exactly zero without computation."""
        if n >= self.n0(u, v):
            return True
        w = self.weight(u) + self.weight(v) - n - 1
        if w > self.hi:
            if self.hi_exact:
                return True
            raise TruncationEscape(f"weight {w} above {self.hi}")
        if w < self.lo:
            if self.lo_exact:
                return True
            raise TruncationEscape(f"weight {w} below {self.lo}")
        return False

    def product(self, u, n, v):
        """u(n)v for basis labels; exact or TruncationEscape."""
        key = (u, n, v)
        r = self._memo.get(key)
        if r is None:
            try:
                r = {} if self._gate(u, n, v) else self._product(u, n, v)
            except TruncationEscape:
                self._memo[key] = _ESCAPE
                raise
            self._memo[key] = r
        elif r is _ESCAPE:
            raise TruncationEscape(f"{u}({n}){v} leaves the truncation")
        return r

    def _product(self, u, n, v):
        raise NotImplementedError

    def nth_product(self, x, n, y):
        """Bilinear extension of ``product`` to states."""
        R = self.base
        acc = {}
        for u, a in x.items():
            for v, b in y.items():
                r = self.product(u, n, v)
                if r:
                    axpy(R, acc, R.mul(a, b), r)
        return acc

    def state_n0(self, x, y):
        best = None
        for u in x:
            for v in y:
                k = self.n0(u, v)
                best = k if best is None else max(best, k)
        return best if best is not None else 0

    def mode(self, x, n, y):
        """Alias of nth_product reading as the mode x(n) acting on y."""
        return self.nth_product(x, n, y)

    def D(self, m, x):
        """Canonical HS derivation D_m(x) = x(-m-1) vacuum."""
        return self.nth_product(x, -m - 1, self.vacuum)

    def __repr__(self):
        return f"<{type(self).__name__} {self.spec}>"
