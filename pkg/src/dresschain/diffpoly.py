"""Exact differential polynomials in one dependent variable.

A DiffPoly is a polynomial with rational coefficients in the jet variables
s, s', s'', ... of a single scalar function.  The derivative index k is the
position in the exponent tuple, so the monomial s^(0)**2 * s^(1) is stored
as {(2, 1): Fraction(1)}.  Arithmetic is exact; evaluation substitutes the
numeric values carried by a Jet.

The total derivative D acts by the Leibniz rule and maps s^(k) to s^(k+1).
"""

from __future__ import annotations

from fractions import Fraction

from .errors import OrderTooLowError


def _trim(exps):
    """Drop trailing zero exponents so keys are canonical."""
    e = list(exps)
    while e and e[-1] == 0:
        e.pop()
    return tuple(e)


class DiffPoly:
    """Differential polynomial with exact rational coefficients.

    Parameters
    ----------
    terms : dict, optional
        Map from exponent tuple (e0, e1, ..., em) to a coefficient that
        Fraction() accepts.  Zero coefficients are dropped, exponent
        tuples are trimmed of trailing zeros.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for exps, coeff in (terms or {}).items():
            c = Fraction(coeff)
            if c == 0:
                continue
            key = _trim(exps)
            if any(e < 0 for e in key):
                raise ValueError("negative exponent in %r" % (exps,))
            clean[key] = clean.get(key, Fraction(0)) + c
        self.terms = {k: v for k, v in clean.items() if v != 0}

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def constant(cls, c):
        return cls({(): c})

    @classmethod
    def sigma(cls, k=0):
        """The single jet variable s^(k)."""
        return cls({tuple([0] * k + [1]): 1})

    # -- ring operations ----------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        out = dict(self.terms)
        for exps, c in other.terms.items():
            out[exps] = out.get(exps, Fraction(0)) + c
        return DiffPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return DiffPoly({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                n = max(len(e1), len(e2))
                exps = tuple(
                    (e1[i] if i < len(e1) else 0) + (e2[i] if i < len(e2) else 0)
                    for i in range(n)
                )
                out[exps] = out.get(exps, Fraction(0)) + c1 * c2
        return DiffPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power")
        out = DiffPoly.constant(1)
        for _ in range(n):
            out = out * self
        return out

    def scale(self, c):
        return DiffPoly({e: Fraction(c) * v for e, v in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, DiffPoly):
            other = _coerce(other)
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self):
        return not self.terms

    # -- calculus ------------------------------------------------------

    def max_order(self):
        """Highest derivative index appearing with nonzero exponent."""
        m = -1
        for exps in self.terms:
            if exps:
                m = max(m, len(exps) - 1)
        return m

    def total_derivative(self):
        """Apply D by the Leibniz rule, sending s^(k) to s^(k+1)."""
        out = {}
        for exps, coeff in self.terms.items():
            for k, ek in enumerate(exps):
                if ek == 0:
                    continue
                new = list(exps) + [0]
                new[k] -= 1
                new[k + 1] += 1
                key = _trim(new)
                out[key] = out.get(key, Fraction(0)) + coeff * ek
        return DiffPoly(out)

    def evaluate(self, jet):
        """Evaluate at a Jet, substituting jet.values[k] for s^(k).

        Raises OrderTooLowError if the polynomial uses a derivative the
        jet does not carry.
        """
        if self.max_order() > jet.order:
            raise OrderTooLowError(
                "polynomial needs derivative order %d, jet has %d"
                % (self.max_order(), jet.order)
            )
        total = 0j
        for exps, coeff in self.terms.items():
            val = complex(coeff)
            for k, ek in enumerate(exps):
                if ek:
                    val *= jet.values[k] ** ek
            total += val
        return total

    # -- rendering -----------------------------------------------------

    def render(self):
        """Canonical text form: terms sorted by total degree then by
        lexicographic exponent order; derivative k prints as s^(k)."""
        if not self.terms:
            return "0"
        keyed = sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), kv[0]))
        parts = []
        for i, (exps, coeff) in enumerate(keyed):
            factors = []
            for k, ek in enumerate(exps):
                if ek == 0:
                    continue
                factors.append("s^(%d)" % k + ("^%d" % ek if ek > 1 else ""))
            mag = abs(coeff)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = str(mag) + "*" + "*".join(factors)
            if i == 0:
                parts.append(("-" if coeff < 0 else "") + body)
            else:
                parts.append(("- " if coeff < 0 else "+ ") + body)
        return " ".join(parts)

    def __repr__(self):
        return "DiffPoly(%s)" % self.render()


def _coerce(x):
    if isinstance(x, DiffPoly):
        return x
    return DiffPoly.constant(x)


class Jet:
    """Numeric jet (f, f', ..., f^(m)) of a scalar function at a point."""

    __slots__ = ("values",)

    def __init__(self, values):
        vals = tuple(complex(v) for v in values)
        if not vals:
            raise ValueError("a jet needs at least the value itself")
        self.values = vals

    @property
    def order(self):
        return len(self.values) - 1

    def __getitem__(self, k):
        if k > self.order:
            raise OrderTooLowError("jet of order %d has no entry %d" % (self.order, k))
        return self.values[k]

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __repr__(self):
        return "Jet(%r)" % (self.values,)


def total_derivative(p: DiffPoly) -> DiffPoly:
    return p.total_derivative()


def evaluate(p: DiffPoly, jet: Jet) -> complex:
    return p.evaluate(jet)
