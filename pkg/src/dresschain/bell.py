"""Standard and generalized Bell polynomials over the sigma jet.

The standard polynomials Y_n = B_n(sigma) satisfy B_n = phi^{-1} D^n phi
when sigma = phi'/phi, which gives the recursion B_{n+1} = D B_n + sigma B_n
with B_0 = 1.

The generalized table B_{n,k} is built two independent ways:

* the defining recurrences
      B_{n,0} = 1
      B_{n,k} = B_{n-1,k} + D B_{n-1,k-1}           (1 <= k <= n-1)
      B_{n,n} = D B_{n-1,n-1} + B_n
* the explicit binomial sum
      B_{n,k} = sum_{i=0}^{k-1} C(n-i, n-k+1) B_{n,i} D^{k-i-1} sigma

Cross-checking the two routes is the strongest internal test available, so
both are kept and compared term by term in the test suite.
"""

from __future__ import annotations

from math import comb

from .diffpoly import DiffPoly

_SIGMA = DiffPoly.sigma(0)


def bell_standard(n: int) -> DiffPoly:
    """Standard Bell polynomial B_n(sigma), exact.

    B_0 = 1, B_1 = s, B_2 = s' + s^2, B_3 = s'' + 3 s s' + s^3, ...
    """
    if n < 0:
        raise IndexError("n must be >= 0")
    b = DiffPoly.constant(1)
    for _ in range(n):
        b = b.total_derivative() + _SIGMA * b
    return b


def bell_generalized_recurrence(n: int, k: int) -> DiffPoly:
    """B_{n,k}(sigma) via the defining recurrences."""
    _check(n, k)
    return _recurrence_table(n)[(n, k)]


def bell_generalized_explicit(n: int, k: int) -> DiffPoly:
    """B_{n,k}(sigma) via the explicit binomial sum.

    The sum refers to entries B_{n,i} with i < k of the same row, so rows
    are filled in increasing k.
    """
    _check(n, k)
    row = {0: DiffPoly.constant(1)}
    # precompute D^m sigma
    dsig = [_SIGMA]
    for _ in range(max(k - 1, 0)):
        dsig.append(dsig[-1].total_derivative())
    for kk in range(1, k + 1):
        acc = DiffPoly.zero()
        for i in range(kk):
            acc = acc + row[i].scale(comb(n - i, n - kk + 1)) * dsig[kk - i - 1]
        row[kk] = acc
    return row[k]


def _check(n, k):
    if n < 0 or k < 0 or k > n:
        raise IndexError("need 0 <= k <= n, got n=%d k=%d" % (n, k))


def _recurrence_table(n_max):
    table = {(n, 0): DiffPoly.constant(1) for n in range(n_max + 1)}
    for n in range(1, n_max + 1):
        for k in range(1, n):
            table[(n, k)] = table[(n - 1, k)] + table[(n - 1, k - 1)].total_derivative()
        table[(n, n)] = table[(n - 1, n - 1)].total_derivative() + bell_standard(n)
    return table


class BellTable:
    """Memoized table of B_{n,k} for 0 <= k <= n <= n_max (immutable)."""

    def __init__(self, n_max: int, route: str = "recurrence"):
        if n_max < 0:
            raise IndexError("n_max must be >= 0")
        self.n_max = n_max
        if route == "recurrence":
            self._entries = _recurrence_table(n_max)
        elif route == "explicit":
            self._entries = {
                (n, k): bell_generalized_explicit(n, k)
                for n in range(n_max + 1)
                for k in range(n + 1)
            }
        else:
            raise ValueError("route must be 'recurrence' or 'explicit'")

    def __getitem__(self, nk):
        n, k = nk
        _check(n, k)
        if n > self.n_max:
            raise IndexError("table built up to n_max=%d" % self.n_max)
        return self._entries[(n, k)]

    def items(self):
        return self._entries.items()
