"""
Truncated complex Laurent series.

A :class:`TruncatedSeries` stores the coefficients of

    s(x) = c[0] x**lowest + c[1] x**(lowest+1) + ... + O(x**trunc)

where ``trunc = lowest + len(c)`` is the exponent of the first term that is
*not* known. Every operation propagates ``trunc`` so a result never claims
more precision than its inputs determine.

These series carry the local expansions of a covering map near its branch
points and poles: frames ``z(x)`` obtained by reversion, fractional powers
``lambda**(mu/k)``, residues and Schwarzian derivatives.
"""

from __future__ import annotations

import cmath
from numbers import Number

import numpy as np

from .errors import DomainError, NotInvertibleError, PrecisionError

DEFAULT_ORDER = 12
# Smallest leading coefficient accepted as a divisor.
DIVISION_FLOOR = 1e-13


class TruncatedSeries:
    """Finite Laurent series with a tracked truncation order.

    Parameters
    ----------
    coeffs : sequence of complex
        Coefficients starting at ``x**lowest``.
    lowest : int
        Exponent of the first stored coefficient (may be negative).
    """

    __slots__ = ("lowest", "coeffs")

    def __init__(self, coeffs, lowest=0):
        c = np.array(coeffs, dtype=complex).ravel()
        c.setflags(write=False)
        self.coeffs = c
        self.lowest = int(lowest)

    # -- construction -----------------------------------------------------

    @classmethod
    def variable(cls, order=DEFAULT_ORDER):
        """The series ``x + O(x**order)``."""
        if order < 2:
            raise PrecisionError("variable needs order >= 2")
        return cls([1.0] + [0.0] * (order - 2), lowest=1)

    @classmethod
    def constant(cls, value, order=DEFAULT_ORDER):
        return cls([value] + [0.0] * (order - 1), lowest=0)

    @classmethod
    def from_poly(cls, coeffs_low_first, order=DEFAULT_ORDER, lowest=0):
        """Exact polynomial, padded (or cut) to the requested truncation order."""
        c = list(coeffs_low_first)
        n = order - lowest
        c = (c + [0.0] * n)[:n]
        return cls(c, lowest=lowest)

    # -- basic properties -------------------------------------------------

    @property
    def trunc(self):
        """Exponent of the first untracked term."""
        return self.lowest + len(self.coeffs)

    def coefficient(self, k):
        if k >= self.trunc:
            raise PrecisionError(f"x^{k} is beyond truncation order {self.trunc}")
        if k < self.lowest:
            return 0j
        return complex(self.coeffs[k - self.lowest])

    def __getitem__(self, k):
        return self.coefficient(k)

    def truncate(self, order):
        """Drop every term with exponent >= ``order``."""
        if order >= self.trunc:
            return self
        n = max(order - self.lowest, 0)
        return TruncatedSeries(self.coeffs[:n], self.lowest)

    def valuation(self, tol=0.0):
        """Exponent of the first coefficient with modulus > ``tol``."""
        nz = np.nonzero(np.abs(self.coeffs) > tol)[0]
        if len(nz) == 0:
            raise PrecisionError("series vanishes to its truncation order")
        return self.lowest + int(nz[0])

    def strip(self, tol=0.0):
        """Remove leading coefficients with modulus <= ``tol``."""
        v = self.valuation(tol)
        return TruncatedSeries(self.coeffs[v - self.lowest:], v)

    def with_lowest(self, lowest):
        """Re-express with a smaller (zero padded) or larger lowest exponent.

        Raising ``lowest`` discards the leading coefficients, which must then
        be known to vanish; that is the caller's responsibility.
        """
        if lowest <= self.lowest:
            pad = np.zeros(self.lowest - lowest, dtype=complex)
            return TruncatedSeries(np.concatenate([pad, self.coeffs]), lowest)
        return TruncatedSeries(self.coeffs[lowest - self.lowest:], lowest)

    def __repr__(self):
        terms = ", ".join(f"{c:.6g}" for c in self.coeffs[:6])
        more = ", ..." if len(self.coeffs) > 6 else ""
        return f"TruncatedSeries([{terms}{more}], lowest={self.lowest}, trunc={self.trunc})"

    def __call__(self, x):
        """Evaluate the tracked part at ``x``."""
        x = np.asarray(x, dtype=complex)
        acc = np.zeros_like(x)
        for c in self.coeffs[::-1]:
            acc = acc * x + c
        return acc * x ** self.lowest

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, TruncatedSeries):
            return other
        if isinstance(other, (Number, np.number)):
            # Scalars are exact: give them the same window as self.
            n = max(self.trunc, 1)
            return TruncatedSeries([other] + [0.0] * (n - 1), 0)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        lo = min(self.lowest, other.lowest)
        hi = min(self.trunc, other.trunc)
        out = np.zeros(max(hi - lo, 0), dtype=complex)
        for s in (self, other):
            n = min(len(s.coeffs), hi - s.lowest)
            if n > 0:
                out[s.lowest - lo: s.lowest - lo + n] += s.coeffs[:n]
        return TruncatedSeries(out, lo)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(-self.coeffs, self.lowest)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (Number, np.number)):
            return TruncatedSeries(self.coeffs * other, self.lowest)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        a, b = _strip_exact(self), _strip_exact(other)
        # A factor with no known nonzero term is O(x**trunc).
        if a is None:
            return TruncatedSeries([], self.trunc + (other.lowest if b is None else b.lowest))
        if b is None:
            return TruncatedSeries([], other.trunc + a.lowest)
        n = min(len(a.coeffs), len(b.coeffs))
        prod = np.convolve(a.coeffs[:n], b.coeffs[:n])[:n]
        return TruncatedSeries(prod, a.lowest + b.lowest)

    __rmul__ = __mul__

    def inverse(self):
        """Multiplicative inverse; the leading stored coefficient must be nonzero."""
        c = self.coeffs
        if len(c) == 0 or abs(c[0]) < DIVISION_FLOOR:
            raise NotInvertibleError(
                "leading coefficient below division floor; strip() the series first"
            )
        n = len(c)
        inv = np.zeros(n, dtype=complex)
        inv[0] = 1.0 / c[0]
        for k in range(1, n):
            inv[k] = -np.dot(c[1:k + 1], inv[k - 1::-1][:k]) / c[0]
        return TruncatedSeries(inv, -self.lowest)

    def __truediv__(self, other):
        if isinstance(other, (Number, np.number)):
            if abs(other) < DIVISION_FLOOR:
                raise NotInvertibleError("division by a vanishing scalar")
            return TruncatedSeries(self.coeffs / other, self.lowest)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n):
        if not isinstance(n, (int, np.integer)):
            raise TypeError("use power() for non-integer exponents")
        if n < 0:
            return self.inverse() ** (-n)
        out = TruncatedSeries([1.0] + [0.0] * (len(self.coeffs) - 1), 0)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def shift(self, k):
        """Multiply by ``x**k``."""
        return TruncatedSeries(self.coeffs, self.lowest + k)

    def derivative(self):
        exps = np.arange(self.lowest, self.trunc)
        d = self.coeffs * exps
        out = TruncatedSeries(d, self.lowest - 1)
        if self.lowest == 0:
            # d/dx of a power series is a power series.
            out = TruncatedSeries(d[1:], 0)
        return out

    def integral(self):
        """Antiderivative with zero constant term; needs no x**-1 term."""
        exps = np.arange(self.lowest, self.trunc) + 1
        if self.lowest <= -1 < self.trunc and self.coefficient(-1) != 0:
            raise DomainError("x^-1 term has no Laurent antiderivative")
        safe = np.where(exps == 0, 1, exps)
        c = np.where(exps == 0, 0, self.coeffs / safe)
        return TruncatedSeries(c, self.lowest + 1)

    # -- transcendental operations ----------------------------------------

    def power(self, num, den=1, root=None):
        """Rational power ``self**(num/den)``.

        The series must have the form ``c x**v (1 + u(x))`` with ``v*num``
        divisible by ``den``. The branch is fixed by ``root``, a ``den``-th
        root of ``c``; it defaults to the principal one.
        """
        v = self.lowest
        c0 = complex(self.coeffs[0]) if len(self.coeffs) else 0j
        if abs(c0) < DIVISION_FLOOR:
            raise NotInvertibleError("power() needs a nonzero leading coefficient")
        if (v * num) % den:
            raise DomainError(f"x^{v} to the power {num}/{den} is not a Laurent series")
        if root is None:
            root = cmath.exp(cmath.log(c0) / den)
        elif abs(root ** den - c0) > 1e-9 * max(1.0, abs(c0)):
            raise DomainError("root is not a root of the leading coefficient")
        e = num / den
        f = self.coeffs / c0
        n = len(f)
        w = np.zeros(n, dtype=complex)
        w[0] = 1.0
        for j in range(1, n):
            k = np.arange(1, j + 1)
            w[j] = np.sum(((e + 1) * k - j) * f[k] * w[j - k]) / j
        lead = root ** num if num >= 0 else 1.0 / root ** (-num)
        return TruncatedSeries(w * lead, v * num // den)

    def log(self):
        """Principal logarithm of a power series with nonzero constant term."""
        if self.lowest != 0 or abs(self.coeffs[0]) < DIVISION_FLOOR:
            raise DomainError("log() needs a power series with nonzero constant term")
        tail = (self.derivative() / self).integral()
        return tail.with_lowest(0) + cmath.log(self.coeffs[0])

    # -- composition and reversion ----------------------------------------

    def compose(self, inner):
        """``self(inner(x))``; ``inner`` must vanish at 0."""
        return compose(self, inner)

    def revert(self):
        return revert(self)

    def residue(self):
        return residue(self)

    def schwarzian(self):
        return schwarzian(self)


def _strip_exact(s):
    """Drop leading coefficients that are exactly zero; None if all are."""
    nz = np.flatnonzero(s.coeffs)
    if len(nz) == 0:
        return None
    k = int(nz[0])
    return s if k == 0 else TruncatedSeries(s.coeffs[k:], s.lowest + k)


def compose(outer, inner):
    """Coefficients of ``outer(inner(x))`` through the order they are determined.

    ``inner`` must have a zero constant term. Negative powers in ``outer`` are
    allowed when the leading coefficient of ``inner`` is nonzero.
    """
    if inner.lowest < 1:
        head = inner.coeffs[: 1 - inner.lowest]
        if np.any(head != 0):
            raise DomainError("inner series must vanish at 0")
        inner = inner.with_lowest(1)
    v = inner.valuation()
    inner = inner.with_lowest(v)
    cap = v * outer.trunc
    exps = range(outer.lowest, outer.trunc)
    neg = [j for j in exps if j < 0]
    inv = inner.inverse() if neg else None

    acc = None
    # Horner on the nonnegative part, down to x**0.
    for j in range(outer.trunc - 1, -1, -1):
        a = outer.coefficient(j)
        acc = (acc * inner + a) if acc is not None else TruncatedSeries.constant(a, cap)
    for j in neg:
        term = (inv ** (-j)) * outer.coeffs[j - outer.lowest]
        acc = term if acc is None else acc + term
    if acc is None:
        return TruncatedSeries([], cap)
    return acc.truncate(cap)


def revert(s):
    """Compositional inverse of ``s = c1 x + c2 x**2 + ...``."""
    if s.lowest < 1:
        head = s.coeffs[: 1 - s.lowest]
        scale = np.max(np.abs(s.coeffs)) if len(s.coeffs) else 0.0
        if np.any(np.abs(head) > 1e-14 * max(scale, 1.0)):
            raise NotInvertibleError("series has a nonzero constant term")
        s = s.with_lowest(1)
    c1 = s.coefficient(1) if s.trunc > 1 else 0j
    if abs(c1) < DIVISION_FLOOR:
        raise NotInvertibleError("linear coefficient vanishes")
    n = s.trunc
    g = np.zeros(n - 1, dtype=complex)
    g[0] = 1.0 / c1
    for k in range(2, n):
        approx = compose(s, TruncatedSeries(g, 1))
        g[k - 1] -= approx.coefficient(k) / c1
    return TruncatedSeries(g, 1)


def residue(s):
    """Coefficient of ``x**-1``."""
    if s.trunc <= -1:
        raise PrecisionError("x^-1 lies beyond the truncation order")
    return s.coefficient(-1)


def schwarzian(s):
    """``{z; x}`` at ``x = 0`` for ``z = s(x)``: z'''/z' - 3/2 (z''/z')**2."""
    if s.lowest < 0:
        raise DomainError("Schwarzian needs a series regular at 0")
    if s.trunc < 4:
        raise PrecisionError("Schwarzian needs truncation order >= 4")
    a1, a2, a3 = s.coefficient(1), s.coefficient(2), s.coefficient(3)
    if abs(a1) < DIVISION_FLOOR:
        raise DomainError("z'(0) vanishes")
    return 6.0 * a3 / a1 - 6.0 * (a2 / a1) ** 2
