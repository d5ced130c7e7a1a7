"""Chain complexes, integral homology and reduced simplicial homology."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .combinatorics import SimplicialComplex, from_mask, popcount
from .linalg import IntMatrix, invariant_factors, normalize_factors


class InvariantViolation(RuntimeError):
    """An internal structural identity failed (a bug, never bad input)."""


@dataclass
class ChainComplex:
    """Free chain complex ``C_d`` for ``d`` in ``[low, low + len(bases))``.

    ``boundaries[d]`` maps ``C_d`` to ``C_{d-1}`` (rows indexed by the basis
    of ``C_{d-1}``); missing degrees mean the zero map.
    """

    low: int
    bases: list[list] = field(repr=False)
    boundaries: dict[int, IntMatrix] = field(repr=False)

    def __post_init__(self):
        for d, B in self.boundaries.items():
            if B.cols != self.rank(d) or B.rows != self.rank(d - 1):
                raise ValueError(f"boundary in degree {d} has shape {B.rows}x{B.cols}")
        for d in self.boundaries:
            if d - 1 in self.boundaries:
                composite = self.boundaries[d - 1] @ self.boundaries[d]
                if not composite.is_zero:
                    raise InvariantViolation(f"boundary squares to nonzero in degree {d}")

    @property
    def high(self) -> int:
        return self.low + len(self.bases) - 1

    def degrees(self) -> range:
        return range(self.low, self.high + 1)

    def rank(self, d: int) -> int:
        if self.low <= d <= self.high:
            return len(self.bases[d - self.low])
        return 0

    def boundary(self, d: int) -> IntMatrix:
        B = self.boundaries.get(d)
        if B is None:
            return IntMatrix(self.rank(d - 1), self.rank(d))
        return B

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * self.rank(d) for d in self.degrees())


@dataclass
class GradedAbelianGroup:
    """Finitely generated graded abelian group: ``degree -> (rank, torsion)``.

    Torsion is kept as invariant factors; zero degrees are dropped.
    """

    groups: dict[int, tuple[int, tuple[int, ...]]] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for d, (r, tors) in self.groups.items():
            tors = tuple(t for t in normalize_factors(tors) if t > 1)
            if r or tors:
                clean[d] = (r, tors)
        self.groups = dict(sorted(clean.items()))

    @classmethod
    def from_betti(cls, betti: Sequence[int], low: int = 0) -> "GradedAbelianGroup":
        return cls({low + i: (b, ()) for i, b in enumerate(betti)})

    def rank(self, d: int) -> int:
        return self.groups.get(d, (0, ()))[0]

    def torsion(self, d: int) -> tuple[int, ...]:
        return self.groups.get(d, (0, ()))[1]

    @property
    def top_degree(self) -> int:
        return max(self.groups, default=-1)

    def betti(self, length: int | None = None) -> list[int]:
        """Ranks in degrees ``0..top`` (or ``0..length-1``)."""
        if length is None:
            length = self.top_degree + 1
        return [self.rank(d) for d in range(length)]

    def has_torsion(self) -> bool:
        return any(t for _, t in self.groups.values())

    def rational(self) -> "GradedAbelianGroup":
        return GradedAbelianGroup({d: (r, ()) for d, (r, _) in self.groups.items()})

    def shifted(self, k: int) -> "GradedAbelianGroup":
        return GradedAbelianGroup({d + k: g for d, g in self.groups.items()})

    def __add__(self, other: "GradedAbelianGroup") -> "GradedAbelianGroup":
        out: dict[int, tuple[int, tuple[int, ...]]] = dict(self.groups)
        for d, (r, t) in other.groups.items():
            r0, t0 = out.get(d, (0, ()))
            out[d] = (r0 + r, t0 + t)
        return GradedAbelianGroup(out)

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * r for d, (r, _) in self.groups.items())

    def to_json(self) -> list[dict]:
        return [{"degree": d, "rank": r, "torsion": list(t)} for d, (r, t) in self.groups.items()]

    @classmethod
    def from_json(cls, items: list[dict]) -> "GradedAbelianGroup":
        return cls({it["degree"]: (it["rank"], tuple(it["torsion"])) for it in items})

    def lines(self) -> list[str]:
        out = []
        for d, (r, tors) in self.groups.items():
            parts = []
            if r:
                parts.append("Z" if r == 1 else f"Z^{r}")
            parts += [f"Z/{t}" for t in tors]
            out.append(f"H_{d} = " + " + ".join(parts))
        return out

    def __str__(self) -> str:
        return "\n".join(self.lines()) or "0"


def homology(C: ChainComplex) -> GradedAbelianGroup:
    """``H_d = ker d_d / im d_{d+1}``; torsion comes from the invariant
    factors of ``d_{d+1}``, whose image sits in the saturated kernel."""
    factors = {d: invariant_factors(C.boundary(d)) for d in range(C.low, C.high + 2)}
    groups = {}
    for d in C.degrees():
        rk = C.rank(d) - len(factors[d]) - len(factors[d + 1])
        if rk < 0:
            raise InvariantViolation(f"negative homology rank in degree {d}")
        groups[d] = (rk, tuple(f for f in factors[d + 1] if f > 1))
    return GradedAbelianGroup(groups)


def simplicial_chain_complex(K: SimplicialComplex, reduced: bool = True) -> ChainComplex:
    """Simplicial chains with sorted-vertex orientation.

    The reduced complex puts the empty face in degree -1, so the empty
    complex has ``H_{-1} = Z``.
    """
    if K.is_void:
        return ChainComplex(0, [], {})
    by_dim: dict[int, list[int]] = {}
    for f in K.faces:
        by_dim.setdefault(popcount(f) - 1, []).append(f)
    low = -1 if reduced else 0
    top = max(by_dim)
    bases = [[from_mask(f) for f in by_dim.get(d, [])] for d in range(low, top + 1)]
    index = {f: i for d in by_dim for i, f in enumerate(by_dim[d])}
    boundaries = {}
    for d in range(low + 1, top + 1):
        entries = {}
        for c, f in enumerate(by_dim.get(d, [])):
            bits = f
            pos = 0
            while bits:
                low_bit = bits & -bits
                entries[(index[f ^ low_bit], c)] = -1 if pos % 2 else 1
                bits ^= low_bit
                pos += 1
        boundaries[d] = IntMatrix(len(by_dim.get(d - 1, [])), len(by_dim.get(d, [])), entries)
    return ChainComplex(low, bases, boundaries)


def reduced_homology(K: SimplicialComplex) -> GradedAbelianGroup:
    return homology(simplicial_chain_complex(K, reduced=True))


def full_subcomplex(K: SimplicialComplex, J: int) -> SimplicialComplex:
    """Faces of ``K`` contained in ``J``."""
    return K.full_subcomplex(J)


def cone(K: SimplicialComplex) -> SimplicialComplex:
    """Cone over ``K`` with apex ``n + 1``."""
    apex = 1 << K.n
    return SimplicialComplex(K.n + 1, [f | apex for f in K.facets])
