"""Generalized binomial coefficients and the identities they satisfy.

Python integers are arbitrary precision, so they serve directly as the
integer type of the package.  ``binom(m, n)`` accepts any integers ``m``
and ``n``::

    >>> binom(-1, 2)
    1
    >>> binom(-2, 3)
    -4
    >>> binom(3, 5)
    0
"""

from dataclasses import dataclass, field
from functools import lru_cache
from math import factorial


@lru_cache(maxsize=1 << 16)
def binom(m, n):
    """C(m, n) = m(m-1)...(m-n+1)/n! for n >= 1, 1 for n == 0, 0 for n < 0."""
    if n < 0:
        return 0
    if n == 0:
        return 1
    num = 1
    for k in range(n):
        num *= m - k
    return num // factorial(n)


def binomial_expansion_coeffs(m, max_power):
    """Coefficients [C(m,0), ..., C(m,max_power)] of (z+w)^m in powers of w.

    Uses the incremental product C(m,k+1) = C(m,k)(m-k)/(k+1).
    """
    if max_power < 0:
        raise ValueError("max_power must be nonnegative")
    out = [1]
    c = 1
    for k in range(max_power):
        c = c * (m - k) // (k + 1)
        out.append(c)
    return out


def _bi1(m, r, n):
    lhs = binom(m, n)
    rhs = (-1) ** n * binom(n - m - 1, n)
    return lhs, rhs


def _bi2(m, r, n):
    return binom(m, n), binom(m - 1, n) + binom(m - 1, n - 1)


def _bi3(m, r, n):
    rhs = sum(binom(r, i) * binom(m - r, n - i) for i in range(n + 1))
    return binom(m, n), rhs


def _bi4(m, r, n):
    rhs = sum((-1) ** i * binom(r, i) * binom(r + m - i, n - i)
              for i in range(n + 1))
    return binom(m, n), rhs


IDENTITIES = {
    "bi1": (_bi1, "C(m,n) = (-1)^n C(n-m-1,n)", False),
    "bi2": (_bi2, "C(m,n) = C(m-1,n) + C(m-1,n-1)", False),
    "bi3": (_bi3, "C(m,n) = sum_i C(r,i) C(m-r,n-i)", True),
    "bi4": (_bi4, "C(m,n) = sum_i (-1)^i C(r,i) C(r+m-i,n-i)", True),
}


@dataclass
class IdentityReport:
    identity: str
    statement: str
    range: tuple
    passed: bool
    checked: int
    counterexample: dict = field(default=None)

    def to_json(self):
        out = {
            "identity": self.identity,
            "statement": self.statement,
            "range": list(self.range),
            "pass": self.passed,
            "checked": self.checked,
        }
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out


def check_binomial_identities(range_m, range_r, range_n):
    """Exhaustively test the four binomial identities.

    Ranges are |m| <= range_m, |r| <= range_r, 0 <= n <= range_n.  The
    identities without an r parameter are checked once per (m, n).
    Returns one IdentityReport per identity.
    """
    if min(range_m, range_r, range_n) < 0:
        raise ValueError("ranges must be nonnegative")
    reports = []
    for name, (fn, statement, uses_r) in IDENTITIES.items():
        checked = 0
        bad = None
        rs = range(-range_r, range_r + 1) if uses_r else (0,)
        for m in range(-range_m, range_m + 1):
            for r in rs:
                for n in range(range_n + 1):
                    lhs, rhs = fn(m, r, n)
                    checked += 1
                    if lhs != rhs:
                        bad = {"m": m, "n": n, "lhs": lhs, "rhs": rhs}
                        if uses_r:
                            bad["r"] = r
                        break
                if bad:
                    break
            if bad:
                break
        reports.append(IdentityReport(name, statement,
                                      (range_m, range_r, range_n),
                                      bad is None, checked, bad))
    return reports
