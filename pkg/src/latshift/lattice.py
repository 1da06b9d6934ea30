"""Exact rank-1 lattice rules over power-of-two node counts.

Nodes are kept as exact dyadic rationals (integer numerators over a shared
power-of-two denominator) and all node arithmetic is integer arithmetic.
Floating point only enters when an integrand is evaluated, so biases at the
1e-9 scale are not polluted by node rounding.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence


@dataclass(frozen=True)
class DyadicPoint:
    """A point of [0,1)^s with coordinates nums[i] / 2^t.

    Parameters
    ----------
    nums : tuple of int
        Numerators, each in [0, 2^t).  The fractional part has already been
        taken, so adding points reduces numerators mod 2^t.
    t : int
        Fractional bit depth (denominator 2^t).
    """

    nums: tuple[int, ...]
    t: int

    def __post_init__(self) -> None:
        if self.t < 0:
            raise ValueError(f"bit depth must be >= 0, got {self.t}")
        if not self.nums:
            raise ValueError("point needs at least one coordinate")
        top = 1 << self.t
        for n in self.nums:
            if not 0 <= n < top:
                raise ValueError(f"numerator {n} outside [0, 2^{self.t})")

    @property
    def s(self) -> int:
        return len(self.nums)

    def rescaled(self, t: int) -> "DyadicPoint":
        """Re-express the same point over the denominator 2^t (t >= self.t)."""
        if t < self.t:
            raise ValueError(f"cannot lower bit depth {self.t} to {t}")
        shift = t - self.t
        return DyadicPoint(tuple(n << shift for n in self.nums), t)

    def __add__(self, other: "DyadicPoint") -> "DyadicPoint":
        """Coordinate-wise addition mod 1, aligning to the deeper depth."""
        if other.s != self.s:
            raise ValueError(f"dimension mismatch: {self.s} vs {other.s}")
        t = max(self.t, other.t)
        a = self.rescaled(t) if self.t < t else self
        b = other.rescaled(t) if other.t < t else other
        mask = (1 << t) - 1
        return DyadicPoint(tuple((x + y) & mask for x, y in zip(a.nums, b.nums)), t)

    def as_floats(self) -> tuple[float, ...]:
        # exact for t <= 52 fractional bits, correctly rounded beyond; the
        # big-int division path avoids float overflow at extreme depths
        if self.t <= 1023:
            scale = 1.0 / (1 << self.t)
            return tuple(n * scale for n in self.nums)
        den = 1 << self.t
        return tuple(n / den for n in self.nums)


@dataclass(frozen=True)
class GeneratingVector:
    """Integer generating vector with all components odd.

    Components are stored reduced mod 2^t; node coordinates depend on the
    components only through that residue, so the reduction is exact.  Oddness
    is exactly coprimality with every power-of-two node count, which rules
    out the degenerate all-zero vector as well.

    Parameters
    ----------
    components : tuple of int
        Non-negative integers, one per coordinate; each must be odd.
    t : int
        Bit depth the vector is known to: usable with any rule of at most
        2^t points.
    """

    components: tuple[int, ...]
    t: int

    def __post_init__(self) -> None:
        if self.t < 1:
            raise ValueError(f"bit depth must be >= 1, got {self.t}")
        if not self.components:
            raise ValueError("generating vector needs at least one component")
        mod = 1 << self.t
        reduced = []
        for c in self.components:
            if c < 0:
                raise ValueError(f"component {c} is negative")
            if c % 2 == 0:
                raise ValueError(
                    f"component {c} is even; it would share a factor with the node count"
                )
            reduced.append(c % mod)
        object.__setattr__(self, "components", tuple(reduced))

    @property
    def s(self) -> int:
        return len(self.components)

    def to_json(self) -> str:
        return json.dumps({"s": self.s, "t": self.t, "z": list(self.components)})

    @classmethod
    def from_json(cls, text: str) -> "GeneratingVector":
        obj = json.loads(text)
        z = tuple(int(c) for c in obj["z"])
        if len(z) != int(obj["s"]):
            raise ValueError("component count disagrees with dimension field")
        return cls(z, int(obj["t"]))


def korobov_vector(ell: int, s: int, t: int) -> GeneratingVector:
    """Korobov-form generating vector (1, ell, ell^2, ...) reduced mod 2^t.

    Powers are taken by modular exponentiation, so ell^(s-1) never appears
    as an unreduced big integer.

    Parameters
    ----------
    ell : int
        Odd positive base of the geometric progression.
    s : int
        Dimension.
    t : int
        Bit depth of the reduction.
    """
    if ell < 1 or ell % 2 == 0:
        raise ValueError(f"ell must be odd and positive, got {ell}")
    if s < 1:
        raise ValueError(f"dimension must be >= 1, got {s}")
    if t < 1:
        raise ValueError(f"bit depth must be >= 1, got {t}")
    mod = 1 << t
    return GeneratingVector(tuple(pow(ell, i, mod) for i in range(s)), t)


@dataclass(frozen=True)
class Rank1Rule:
    """Rank-1 lattice rule with 2^m nodes {j * z / 2^m}, j = 0..2^m - 1.

    The node map is a group homomorphism from Z_{2^m} into the torus:
    node(j1) + node(j2) = node((j1 + j2) mod 2^m) under dyadic addition.
    """

    m: int
    z: GeneratingVector

    def __post_init__(self) -> None:
        if self.m < 0:
            raise ValueError(f"m must be >= 0, got {self.m}")
        if self.z.t < self.m:
            raise ValueError(
                f"generating vector known mod 2^{self.z.t} cannot drive a 2^{self.m}-point rule"
            )
        mask = (1 << self.m) - 1
        object.__setattr__(self, "_zmod", tuple(c & mask for c in self.z.components))

    @property
    def s(self) -> int:
        return self.z.s

    @property
    def n_points(self) -> int:
        return 1 << self.m

    def node(self, j: int) -> DyadicPoint:
        """The j-th node, coordinates (j * z_i mod 2^m) / 2^m."""
        n = self.n_points
        if not 0 <= j < n:
            raise ValueError(f"node index {j} outside [0, {n})")
        mask = n - 1
        return DyadicPoint(tuple((j * zi) & mask for zi in self._zmod), self.m)


@dataclass(frozen=True)
class EmbeddedPair:
    """A base rule of 2^m nodes embedded in an extension with 2^(m+sr) nodes.

    Both rules share one generating vector; base node j reappears in the
    extension at index j * 2^sr.  The extension splits into 2^sr cosets:
    coset w is the base lattice advanced by the fractional index w / 2^sr.
    """

    m: int
    sr: int
    z: GeneratingVector

    def __post_init__(self) -> None:
        if self.m < 0:
            raise ValueError(f"m must be >= 0, got {self.m}")
        if self.sr < 0:
            raise ValueError(f"sr must be >= 0, got {self.sr}")
        if self.z.t < self.ext:
            raise ValueError(
                f"generating vector known mod 2^{self.z.t} cannot drive a 2^{self.ext}-point extension"
            )
        object.__setattr__(self, "_ext_rule", Rank1Rule(self.ext, self.z))

    @property
    def ext(self) -> int:
        return self.m + self.sr

    @property
    def s(self) -> int:
        return self.z.s

    def base_rule(self) -> Rank1Rule:
        return Rank1Rule(self.m, self.z)

    def extended_rule(self) -> Rank1Rule:
        return self._ext_rule

    def extended_node(self, k: int) -> DyadicPoint:
        """Node k of the 2^(m+sr)-point extension."""
        return self._ext_rule.node(k)

    def coset_node(self, j: int, wnum: int) -> DyadicPoint:
        """Base index j shifted into coset wnum: extension node j * 2^sr + wnum."""
        if not 0 <= j < (1 << self.m):
            raise ValueError(f"base index {j} outside [0, 2^{self.m})")
        if not 0 <= wnum < (1 << self.sr):
            raise ValueError(f"coset index {wnum} outside [0, 2^{self.sr})")
        return self.extended_node((j << self.sr) | wnum)
