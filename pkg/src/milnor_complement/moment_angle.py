"""Cellular chain complex of the moment-angle complex of ``K``.

Each coordinate carries the cells POINT (dim 0), CIRCLE (dim 1) and
DISK (dim 2) with ``d DISK = CIRCLE``.  A word is a cell of the
moment-angle complex iff its DISK positions form a face of ``K``.  This
complex is an independent referee for the formula-based homology.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .combinatorics import InputError, SimplicialComplex, from_mask, popcount
from .homology import ChainComplex, GradedAbelianGroup, homology
from .linalg import IntMatrix

MAX_CELLS = 5_000_000

POINT, CIRCLE, DISK = "P", "C", "D"


@dataclass(frozen=True, order=True)
class MomentAngleCell:
    disk: int  # bitset of DISK coordinates
    circle: int  # bitset of CIRCLE coordinates
    n: int

    @property
    def dimension(self) -> int:
        return popcount(self.circle) + 2 * popcount(self.disk)

    def word(self) -> str:
        out = []
        for i in range(self.n):
            bit = 1 << i
            out.append(DISK if self.disk & bit else CIRCLE if self.circle & bit else POINT)
        return "".join(out)

    def boundary(self) -> list[tuple[int, "MomentAngleCell"]]:
        """Signed faces: each DISK turns into a CIRCLE, with sign
        ``(-1)^(number of CIRCLEs to its left)``."""
        out = []
        for i in from_mask(self.disk):
            bit = 1 << (i - 1)
            sign = -1 if popcount(self.circle & (bit - 1)) % 2 else 1
            out.append((sign, MomentAngleCell(self.disk ^ bit, self.circle | bit, self.n)))
        return out


def cell_count(K: SimplicialComplex) -> int:
    return sum(1 << (K.n - popcount(s)) for s in K.faces)


def cells(K: SimplicialComplex) -> list[MomentAngleCell]:
    full = (1 << K.n) - 1
    count = cell_count(K)
    if count > MAX_CELLS:
        raise InputError(f"moment-angle complex has {count} cells, above the oracle cap {MAX_CELLS}")
    out = []
    for sigma in K.faces:
        rest = full & ~sigma
        t = rest
        while True:
            out.append(MomentAngleCell(sigma, t, K.n))
            if t == 0:
                break
            t = (t - 1) & rest
    return out


def build_cellular_complex(K: SimplicialComplex, threads: int = 1) -> ChainComplex:
    if K.is_void:
        return ChainComplex(0, [], {})
    by_dim: dict[int, list[MomentAngleCell]] = {}
    for cell in sorted(cells(K), key=lambda c: (c.dimension, c.word())):
        by_dim.setdefault(cell.dimension, []).append(cell)
    top = max(by_dim)
    index = {c: i for group in by_dim.values() for i, c in enumerate(group)}

    def assemble(d: int) -> IntMatrix:
        entries = {}
        for col, cell in enumerate(by_dim.get(d, [])):
            for sign, face in cell.boundary():
                entries[(index[face], col)] = sign
        return IntMatrix(len(by_dim.get(d - 1, [])), len(by_dim.get(d, [])), entries)

    degrees = list(range(1, top + 1))
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        matrices = list(pool.map(assemble, degrees))
    bases = [[c.word() for c in by_dim.get(d, [])] for d in range(top + 1)]
    return ChainComplex(0, bases, dict(zip(degrees, matrices)))


def oracle_homology(K: SimplicialComplex, threads: int = 1) -> GradedAbelianGroup:
    """Integral homology of the moment-angle complex of ``K``."""
    if K.is_void:
        raise InputError("empty complement: the complex has no faces")
    return homology(build_cellular_complex(K, threads))
