"""Truth tables for Boolean functions of up to six inputs.

A table stores the value of the function for every input minterm packed
into one Python integer. Minterm index = sum(x_j << j) over the inputs j,
so the first input occupies the least significant index bit. All
operations are pure and return new tables.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

MAX_INPUTS = 6


@lru_cache(maxsize=None)
def _half_positions(n: int, var: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Minterm indices of the 2^n space split by the value of `var`.

    Returns (indices with var=0, indices with var=1). Entry j of either
    tuple is the full-space index corresponding to minterm j of the
    contracted (n-1)-input space, which keeps cofactor and expansion
    consistent with each other.
    """
    zeros = []
    ones = []
    for j in range(1 << (n - 1)):
        low = j & ((1 << var) - 1)
        base = low | ((j >> var) << (var + 1))
        zeros.append(base)
        ones.append(base | (1 << var))
    return tuple(zeros), tuple(ones)


@lru_cache(maxsize=None)
def _var_mask(n: int, var: int) -> int:
    """Bit mask over the 2^n minterm space selecting minterms with var=1."""
    m = 0
    for p in _half_positions(n, var)[1]:
        m |= 1 << p
    return m


def full_mask(n: int) -> int:
    return (1 << (1 << n)) - 1


@dataclass(frozen=True)
class TruthTable:
    n: int
    bits: int

    def __post_init__(self) -> None:
        if not 0 <= self.n <= MAX_INPUTS:
            raise ValueError(f"input count {self.n} outside 0..{MAX_INPUTS}")
        if self.bits < 0 or self.bits > full_mask(self.n):
            raise ValueError("table bits do not fit 2^n entries")

    # ---- constructors -------------------------------------------------

    @staticmethod
    def constant(n: int, value: bool) -> "TruthTable":
        return TruthTable(n, full_mask(n) if value else 0)

    @staticmethod
    def variable(n: int, var: int) -> "TruthTable":
        return TruthTable(n, _var_mask(n, var))

    @staticmethod
    def from_function(n: int, fn) -> "TruthTable":
        """Build from a callable taking the tuple of input bits."""
        bits = 0
        for idx in range(1 << n):
            if fn(tuple((idx >> j) & 1 for j in range(n))):
                bits |= 1 << idx
        return TruthTable(n, bits)

    @staticmethod
    def random(n: int, rng) -> "TruthTable":
        return TruthTable(n, rng.getrandbits(1 << n))

    # ---- queries ------------------------------------------------------

    @property
    def size(self) -> int:
        return 1 << self.n

    def evaluate(self, minterm: int) -> int:
        return (self.bits >> minterm) & 1

    def support(self) -> frozenset[int]:
        """Indices of the inputs the function actually depends on."""
        deps = []
        for i in range(self.n):
            m1 = _var_mask(self.n, i)
            shift = 1 << i
            hi = (self.bits & m1) >> shift
            lo = self.bits & (full_mask(self.n) ^ m1)
            if hi != lo:
                deps.append(i)
        return frozenset(deps)

    def is_constant(self) -> bool:
        return self.bits == 0 or self.bits == full_mask(self.n)

    # ---- transforms ---------------------------------------------------

    def cofactor(self, var: int, phase: bool) -> "TruthTable":
        """Contract `var` to the given phase; the result has n-1 inputs."""
        if not 0 <= var < self.n:
            raise IndexError(f"variable {var} out of range for {self.n} inputs")
        pos = _half_positions(self.n, var)[1 if phase else 0]
        out = 0
        bits = self.bits
        for j, p in enumerate(pos):
            out |= ((bits >> p) & 1) << j
        return TruthTable(self.n - 1, out)

    def insert_var(self, var: int) -> "TruthTable":
        """Add an unused input at position `var`; existing inputs shift up."""
        if not 0 <= var <= self.n:
            raise IndexError(f"insert position {var} out of range")
        zeros, ones = _half_positions(self.n + 1, var)
        out = 0
        bits = self.bits
        while bits:
            low = bits & -bits
            j = low.bit_length() - 1
            bits ^= low
            out |= (1 << zeros[j]) | (1 << ones[j])
        return TruthTable(self.n + 1, out)

    def negate_output(self) -> "TruthTable":
        return TruthTable(self.n, self.bits ^ full_mask(self.n))

    def negate_input(self, var: int) -> "TruthTable":
        """Rewrite the table as if input `var` arrives complemented."""
        if not 0 <= var < self.n:
            raise IndexError(f"variable {var} out of range for {self.n} inputs")
        m1 = _var_mask(self.n, var)
        m0 = full_mask(self.n) ^ m1
        shift = 1 << var
        return TruthTable(self.n, ((self.bits & m1) >> shift) | ((self.bits & m0) << shift))

    def project(self, keep: "list[int] | tuple[int, ...]") -> "TruthTable":
        """Drop all inputs not listed in `keep` (they must be outside the
        support); remaining inputs keep their relative order."""
        keep_set = set(keep)
        if any(not 0 <= v < self.n for v in keep_set):
            raise IndexError(f"keep positions out of range for {self.n} inputs")
        t = self
        for var in range(self.n - 1, -1, -1):
            if var not in keep_set:
                t = t.cofactor(var, False)
        return t

    def reexpress(self, new_n: int, placement: "list[int] | tuple[int, ...]") -> "TruthTable":
        """Spread the inputs over a larger variable space.

        placement[j] gives the position of old input j in the new space.
        The new table ignores unmapped positions.
        """
        if len(placement) != self.n:
            raise ValueError("placement must list every existing input")
        out = 0
        for idx in range(1 << new_n):
            old = 0
            for j, p in enumerate(placement):
                old |= ((idx >> p) & 1) << j
            out |= ((self.bits >> old) & 1) << idx
        return TruthTable(new_n, out)


def hamming_distance(a: TruthTable, b: TruthTable) -> int:
    """Number of minterms on which the two functions differ."""
    if a.n != b.n:
        raise ValueError("tables must have the same input count")
    return (a.bits ^ b.bits).bit_count()


def majority3(a: TruthTable, b: TruthTable, c: TruthTable) -> TruthTable:
    """Per-minterm majority vote of three equally sized tables."""
    if not (a.n == b.n == c.n):
        raise ValueError("tables must have the same input count")
    x, y, z = a.bits, b.bits, c.bits
    return TruthTable(a.n, (x & y) | (x & z) | (y & z))
