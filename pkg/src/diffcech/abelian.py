"""Finitely generated abelian groups in invariant-factor normal form."""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import gcd

from .errors import MalformedInputError


def _normalize_torsion(orders) -> tuple[int, ...]:
    """Invariant factors d_1 | d_2 | ... of a direct sum of cyclic groups."""
    vals = [abs(int(o)) for o in orders]
    if any(v == 0 for v in vals):
        raise ValueError("zero order in torsion list; use free_rank")
    vals = [v for v in vals if v > 1]
    # repeatedly replace (a, b) by (gcd, lcm) until the list is a divisibility chain
    changed = True
    while changed:
        changed = False
        vals.sort()
        for i in range(len(vals)):
            for j in range(i + 1, len(vals)):
                a, b = vals[i], vals[j]
                if b % a:
                    g = gcd(a, b)
                    vals[i], vals[j] = g, a // g * b
                    changed = True
        vals = [v for v in vals if v > 1]
    return tuple(sorted(vals))


@dataclass(frozen=True)
class FgAbGroup:
    """ℤ^free_rank ⊕ ℤ/d_1 ⊕ ... ⊕ ℤ/d_t with d_1 | ... | d_t, each d_i >= 2."""

    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        object.__setattr__(self, "torsion", _normalize_torsion(self.torsion))

    # constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "FgAbGroup":
        return cls(0, ())

    @classmethod
    def integers(cls) -> "FgAbGroup":
        return cls(1, ())

    @classmethod
    def cyclic(cls, n: int) -> "FgAbGroup":
        if n == 0:
            return cls(1, ())
        return cls(0, (n,))

    @classmethod
    def from_diagonal(cls, rank: int, divisors) -> "FgAbGroup":
        """Cokernel ℤ^rank / im(diag) for the nonzero elementary divisors."""
        divisors = list(divisors)
        if len(divisors) > rank:
            raise ValueError("more divisors than generators")
        return cls(rank - len(divisors), tuple(d for d in divisors if abs(d) > 1))

    @classmethod
    def parse(cls, text: str) -> "FgAbGroup":
        """Parse strings such as ``Z``, ``Z/2``, ``Z^2 + Z/4``, ``(Z/2)^3``, ``0``."""
        s = text.replace(" ", "").replace("ℤ", "Z").replace("⊕", "+")
        if s in ("", "0"):
            return cls.zero()
        free = 0
        tors: list[int] = []
        for term in s.split("+"):
            m = re.fullmatch(r"(?:\(Z(?:/(\d+))?\)|Z(?:/(\d+))?)(?:\^(\d+))?", term)
            if not m:
                raise MalformedInputError(f"cannot parse abelian group term {term!r} in {text!r}")
            order = m.group(1) or m.group(2)
            power = int(m.group(3)) if m.group(3) else 1
            if order is None:
                free += power
            else:
                n = int(order)
                if n == 0:
                    free += power
                elif n > 1:
                    tors.extend([n] * power)
        return cls(free, tuple(tors))

    # properties --------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def is_free(self) -> bool:
        return not self.torsion

    @property
    def n_generators(self) -> int:
        return self.free_rank + len(self.torsion)

    def orders(self) -> tuple[int, ...]:
        """Order of each generator, 0 meaning infinite."""
        return (0,) * self.free_rank + self.torsion

    def order(self) -> int | None:
        if self.free_rank:
            return None
        out = 1
        for d in self.torsion:
            out *= d
        return out

    # operations --------------------------------------------------------

    def __add__(self, other: "FgAbGroup") -> "FgAbGroup":
        return FgAbGroup(self.free_rank + other.free_rank, self.torsion + other.torsion)

    def power(self, c: int) -> "FgAbGroup":
        if c < 0:
            raise ValueError("negative power")
        return FgAbGroup(self.free_rank * c, self.torsion * c)

    def tensor_cyclic(self, n: int) -> "FgAbGroup":
        """self ⊗ ℤ/n (n = 0 means ℤ)."""
        if n == 0:
            return self
        return FgAbGroup(0, (n,) * self.free_rank + tuple(gcd(d, n) for d in self.torsion))

    def tor_cyclic(self, n: int) -> "FgAbGroup":
        """Tor(self, ℤ/n) (n = 0 gives 0)."""
        if n == 0:
            return FgAbGroup.zero()
        return FgAbGroup(0, tuple(gcd(d, n) for d in self.torsion))

    def tensor(self, other: "FgAbGroup") -> "FgAbGroup":
        out = FgAbGroup.zero()
        for n in other.orders():
            out = out + self.tensor_cyclic(n)
        return out

    def tor(self, other: "FgAbGroup") -> "FgAbGroup":
        out = FgAbGroup.zero()
        for n in other.orders():
            out = out + self.tor_cyclic(n)
        return out

    # formatting --------------------------------------------------------

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        i = 0
        while i < len(self.torsion):
            d = self.torsion[i]
            j = i
            while j < len(self.torsion) and self.torsion[j] == d:
                j += 1
            parts.append(f"Z/{d}" if j - i == 1 else f"(Z/{d})^{j - i}")
            i = j
        return " + ".join(parts)

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}


def functions_group(components: int, A: FgAbGroup) -> FgAbGroup:
    """A^c: the A-valued functions on a set with ``components`` components."""
    if components < 0:
        raise ValueError("negative component count")
    return A.power(components)


Z = FgAbGroup.integers()
