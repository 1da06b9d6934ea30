"""Sources of iid random bits.

Randomization consumes bits strictly sequentially from one of three kinds
of source: a seeded deterministic generator (for reproducible experiments),
OS entropy, or a file of externally obtained bits -- the route for true
random bits downloaded from a physical source.

The seeded generator is SplitMix64: a 64-bit Weyl counter passed through a
fixed avalanche finalizer.  It is pinned by constant output vectors in the
test suite so that seeded experiments replay bit-for-bit on any platform.
It is a pseudo-random stand-in for testing; it is NOT a substitute for
physically random bits.
"""

from __future__ import annotations

import os
from pathlib import Path

from .errors import BitsExhaustedError

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """Minimal SplitMix64 word generator (64-bit outputs)."""

    __slots__ = ("_state",)

    _GAMMA = 0x9E3779B97F4A7C15
    _MIX1 = 0xBF58476D1CE4E5B9
    _MIX2 = 0x94D049BB133111EB

    def __init__(self, seed: int) -> None:
        self._state = seed & _MASK64

    def next64(self) -> int:
        self._state = (self._state + self._GAMMA) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * self._MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * self._MIX2) & _MASK64
        return z ^ (z >> 31)


class BitSource:
    """Base class: sequential draws with exact consumption accounting.

    A source is single-consumer; sequential consumption is part of the
    iid-stream contract.  Use distinct sources on distinct threads.
    """

    kind: str

    def __init__(self) -> None:
        self.bits_consumed = 0

    def draw(self, n: int) -> tuple[int, ...]:
        """The next n bits of the stream."""
        if n < 1:
            raise ValueError(f"bit count must be >= 1, got {n}")
        out = self._draw(n)
        self.bits_consumed += n
        return out

    def _draw(self, n: int) -> tuple[int, ...]:
        raise NotImplementedError


class SeededBitSource(BitSource):
    """Reproducible bit stream: SplitMix64 words expanded MSB-first."""

    kind = "seeded"

    def __init__(self, seed: int) -> None:
        super().__init__()
        self.seed = seed
        self._gen = SplitMix64(seed)
        self._word = 0
        self._avail = 0

    def _draw(self, n: int) -> tuple[int, ...]:
        bits = []
        for _ in range(n):
            if self._avail == 0:
                self._word = self._gen.next64()
                self._avail = 64
            self._avail -= 1
            bits.append((self._word >> self._avail) & 1)
        return tuple(bits)


class OsEntropyBitSource(BitSource):
    """Bits from the operating system entropy pool, bytes expanded MSB-first."""

    kind = "os-entropy"

    def __init__(self) -> None:
        super().__init__()
        self._buffer: list[int] = []

    def _draw(self, n: int) -> tuple[int, ...]:
        while len(self._buffer) < n:
            for byte in os.urandom(64):
                self._buffer.extend((byte >> (7 - i)) & 1 for i in range(8))
        out = tuple(self._buffer[:n])
        del self._buffer[:n]
        return out


class FileBitSource(BitSource):
    """A finite, pre-recorded bit stream; errors at exhaustion, never wraps."""

    kind = "file"

    def __init__(self, bits: tuple[int, ...], origin: str = "<memory>") -> None:
        super().__init__()
        if not bits:
            raise ValueError(f"bit file {origin} holds no bits")
        self._bits = bits
        self._pos = 0
        self.origin = origin

    @property
    def bits_remaining(self) -> int:
        return len(self._bits) - self._pos

    def _draw(self, n: int) -> tuple[int, ...]:
        if n > self.bits_remaining:
            raise BitsExhaustedError(
                f"bit file {self.origin} exhausted: {n} requested, {self.bits_remaining} left"
            )
        out = self._bits[self._pos : self._pos + n]
        self._pos += n
        return out


BIT_FILE_FORMATS = ("ascii01", "raw")


def load_bit_file(path: str | Path, format: str = "ascii01") -> FileBitSource:
    """Read a bit file into a FileBitSource.

    ascii01 files hold '0'/'1' characters with whitespace ignored; raw files
    are arbitrary bytes expanded most-significant-bit first.
    """
    p = Path(path)
    if format == "ascii01":
        bits = []
        for ch in p.read_text():
            if ch.isspace():
                continue
            if ch == "0":
                bits.append(0)
            elif ch == "1":
                bits.append(1)
            else:
                raise ValueError(f"invalid character {ch!r} in ascii01 bit file {p}")
        return FileBitSource(tuple(bits), str(p))
    if format == "raw":
        bits = []
        for byte in p.read_bytes():
            bits.extend((byte >> (7 - i)) & 1 for i in range(8))
        return FileBitSource(tuple(bits), str(p))
    raise ValueError(f"unknown bit file format {format!r}; expected one of {BIT_FILE_FORMATS}")


def parse_bit_source(spec: str) -> BitSource:
    """Build a source from its command-line form: seed:N, os, or file:PATH[:FORMAT]."""
    if spec == "os":
        return OsEntropyBitSource()
    if spec.startswith("seed:"):
        try:
            seed = int(spec[len("seed:") :])
        except ValueError:
            raise ValueError(f"bad seed in bit source spec {spec!r}")
        return SeededBitSource(seed)
    if spec.startswith("file:"):
        rest = spec[len("file:") :]
        if not rest:
            raise ValueError(f"missing path in bit source spec {spec!r}")
        path, sep, fmt = rest.rpartition(":")
        if sep and fmt in BIT_FILE_FORMATS:
            return load_bit_file(path, fmt)
        return load_bit_file(rest, "ascii01")
    raise ValueError(f"unknown bit source spec {spec!r}; expected seed:N, os, or file:PATH[:FORMAT]")
