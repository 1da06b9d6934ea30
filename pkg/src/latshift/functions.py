"""One-periodic integrands, led by the product Bernoulli test function.

The reference integrand is f(x) = prod_i (1 + B2(x_i)) with B2 the degree-2
Bernoulli polynomial.  Its integral is exactly 1, its Fourier coefficients
are known in closed form and strictly positive, and its autocorrelation has
a closed form through B4 -- which makes it the workhorse for every exactness
check in this package.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from typing import Sequence

from .lattice import DyadicPoint
from .summation import kahan_sum

# evaluated about x = 1/2 so that x and 1 - x give bitwise-equal results
# for dyadic x (the offset and the squaring are exact)
_B2_C = 1.0 / 12.0
_B4_C = 7.0 / 240.0

TWO_PI_SQ = 2.0 * math.pi**2

# largest bit depth for which per-coordinate factor tables are cached
_TABLE_DEPTH_LIMIT = 20


def bernoulli2(x: float) -> float:
    """B2(x) = x^2 - x + 1/6 for x in [0, 1)."""
    u = x - 0.5
    return u * u - _B2_C


def bernoulli4(x: float) -> float:
    """B4(x) = x^4 - 2x^3 + x^2 - 1/30 for x in [0, 1)."""
    u2 = (x - 0.5) ** 2
    return u2 * u2 - 0.5 * u2 + _B4_C


class PeriodicFunction(ABC):
    """A real integrand on [0,1)^s, one-periodic in every coordinate.

    Exact dyadic evaluation is the primary interface; float evaluation
    exists for the idealized real-shift estimator.  known_integral and the
    Fourier model are optional: operations that need them fail fast when
    they are absent.
    """

    #: exact value of the integral when known, else None
    known_integral: float | None = None

    @property
    @abstractmethod
    def s(self) -> int:
        """Dimension."""

    @abstractmethod
    def eval(self, point: DyadicPoint) -> float:
        """Value at an exact dyadic point."""

    @abstractmethod
    def eval_real(self, xs: Sequence[float]) -> float:
        """Value at float coordinates in [0, 1)."""

    def fourier_coeff(self, h: Sequence[int]) -> float:
        raise NotImplementedError(f"{type(self).__name__} has no Fourier coefficient model")

    def coefficient_tail_bound(self, bound: int, power: int) -> float:
        """Bound on the coefficient mass sum |f^(h)|^power outside |h_i| <= bound."""
        raise NotImplementedError(f"{type(self).__name__} has no coefficient tail bound")


class ProductBernoulliFn(PeriodicFunction):
    """f(x) = prod_i (1 + B2(x_i)); the integral is exactly 1.

    Fourier coefficients factor per coordinate with g(0) = 1 and
    g(h) = 1 / (2 pi^2 h^2) otherwise, all real and strictly positive.

    Parameters
    ----------
    s : int
        Dimension.
    """

    known_integral = 1.0

    def __init__(self, s: int) -> None:
        if s < 1:
            raise ValueError(f"dimension must be >= 1, got {s}")
        self._s = s
        self._tables: dict[int, list[float]] = {}

    @property
    def s(self) -> int:
        return self._s

    def factor(self, x: float) -> float:
        """Per-coordinate factor 1 + B2(x)."""
        return 1.0 + bernoulli2(x)

    def _factor_table(self, t: int) -> list[float]:
        table = self._tables.get(t)
        if table is None:
            scale = 1.0 / (1 << t)
            table = [1.0 + bernoulli2(i * scale) for i in range(1 << t)]
            self._tables[t] = table
        return table

    def eval(self, point: DyadicPoint) -> float:
        if point.s != self._s:
            raise ValueError(f"dimension mismatch: point has {point.s}, function has {self._s}")
        if point.t <= _TABLE_DEPTH_LIMIT:
            table = self._factor_table(point.t)
            out = 1.0
            for n in point.nums:
                out *= table[n]
            return out
        return self.eval_real(point.as_floats())

    def eval_real(self, xs: Sequence[float]) -> float:
        if len(xs) != self._s:
            raise ValueError(f"dimension mismatch: got {len(xs)}, expected {self._s}")
        out = 1.0
        for x in xs:
            out *= 1.0 + bernoulli2(x)
        return out

    def coefficient_factor(self, h: int) -> float:
        """One-dimensional coefficient g(h)."""
        if h == 0:
            return 1.0
        return 1.0 / (TWO_PI_SQ * h * h)

    def fourier_coeff(self, h: Sequence[int]) -> float:
        if len(h) != self._s:
            raise ValueError(f"dimension mismatch: got {len(h)}, expected {self._s}")
        out = 1.0
        for hi in h:
            if hi != 0:
                out *= 1.0 / (TWO_PI_SQ * hi * hi)
        return out

    def autocorrelation(self, point: DyadicPoint) -> float:
        """Integral of f(x) f({x + point}) dx: prod_i (1 - B4({t_i}) / 6)."""
        if point.s != self._s:
            raise ValueError(f"dimension mismatch: point has {point.s}, function has {self._s}")
        out = 1.0
        for x in point.as_floats():
            out *= 1.0 - bernoulli4(x) / 6.0
        return out

    def coefficient_tail_bound(self, bound: int, power: int) -> float:
        """Crude union bound on coefficient mass outside the box |h_i| <= bound.

        Per coordinate, the tail of g(h)^power is bounded by the integral of
        its envelope; the other s - 1 coordinates contribute their full
        coefficient-power sums (7/6 for power 1, 181/180 for power 2).
        Loose, but monotone in the bound and decaying like bound^(1-2*power).
        """
        if bound < 1:
            raise ValueError(f"bound must be >= 1, got {bound}")
        if power == 1:
            per_coord_tail = 1.0 / (math.pi**2 * bound)
            full_sum = 7.0 / 6.0
        elif power == 2:
            per_coord_tail = 1.0 / (6.0 * math.pi**4 * bound**3)
            full_sum = 181.0 / 180.0
        else:
            raise NotImplementedError(f"no tail bound for coefficient power {power}")
        return self._s * full_sum ** (self._s - 1) * per_coord_tail


def grid_mean_b2(n: int) -> float:
    """Mean of B2 over the grid {0, 1/n, ..., (n-1)/n}; equals 1/(6 n^2)."""
    if n < 1:
        raise ValueError(f"grid size must be >= 1, got {n}")
    scale = 1.0 / n
    return kahan_sum(bernoulli2(j * scale) for j in range(n)) * scale
