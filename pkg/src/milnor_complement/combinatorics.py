"""Monomials, square-free monomial ideals, simplicial complexes and
intersection posets of coordinate subspace arrangements.

Subsets of ``{1..n}`` are encoded as Python ``int`` bitsets: vertex ``i``
is bit ``i - 1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator, Sequence


class InputError(ValueError):
    """Malformed or out-of-contract input."""


# -- bitset helpers ---------------------------------------------------------


def to_mask(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        if i < 1:
            raise InputError(f"variable index must be >= 1, got {i}")
        mask |= 1 << (i - 1)
    return mask


def from_mask(mask: int) -> tuple[int, ...]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def submasks(mask: int) -> Iterator[int]:
    """All submasks of ``mask``, including 0 and ``mask`` itself."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def format_set(mask: int) -> str:
    return "{" + ",".join(map(str, from_mask(mask))) + "}"


def minimal_sets(masks: Iterable[int]) -> list[int]:
    """Inclusion-minimal members of a family of bitsets, sorted."""
    ordered = sorted(set(masks), key=lambda m: (popcount(m), m))
    kept: list[int] = []
    for m in ordered:
        if not any(k & m == k for k in kept):
            kept.append(m)
    return sorted(kept, key=from_mask)


def maximal_sets(masks: Iterable[int]) -> list[int]:
    ordered = sorted(set(masks), key=lambda m: (-popcount(m), m))
    kept: list[int] = []
    for m in ordered:
        if not any(k & m == m for k in kept):
            kept.append(m)
    return sorted(kept, key=from_mask)


def minimal_transversals(family: Iterable[int]) -> list[int]:
    """Inclusion-minimal hitting sets of a family of sets (Berge's algorithm).

    The empty family has the single transversal ``0``; a family containing
    the empty set has none.
    """
    transversals = [0]
    for edge in minimal_sets(family):
        if edge == 0:
            return []
        grown = set()
        for t in transversals:
            if t & edge:
                grown.add(t)
            else:
                e = edge
                while e:
                    low = e & -e
                    grown.add(t | low)
                    e ^= low
        transversals = minimal_sets(grown)
    return transversals


# -- monomials and ideals ---------------------------------------------------


@dataclass(frozen=True)
class Monomial:
    """Monomial ``prod x_i^{e_i}`` in ``n`` variables; zero exponents are absent."""

    exponents: tuple[tuple[int, int], ...]
    n: int

    def __post_init__(self):
        for i, e in self.exponents:
            if not 1 <= i <= self.n:
                raise InputError(f"variable x{i} outside x1..x{self.n}")
            if e < 1:
                raise InputError(f"exponent of x{i} must be >= 1")

    @classmethod
    def from_support(cls, support: Iterable[int], n: int) -> "Monomial":
        return cls(tuple((i, 1) for i in sorted(set(support))), n)

    @classmethod
    def from_mask(cls, mask: int, n: int) -> "Monomial":
        return cls.from_support(from_mask(mask), n)

    @classmethod
    def from_exponents(cls, exps: dict[int, int], n: int) -> "Monomial":
        return cls(tuple(sorted((i, e) for i, e in exps.items() if e)), n)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self.exponents)

    @property
    def mask(self) -> int:
        return to_mask(self.support)

    @property
    def is_square_free(self) -> bool:
        return all(e == 1 for _, e in self.exponents)

    @property
    def degree(self) -> int:
        return sum(e for _, e in self.exponents)

    def weighted_degree(self, weights: Sequence[int]) -> int:
        return sum(weights[i - 1] * e for i, e in self.exponents)

    def divides(self, other: "Monomial") -> bool:
        theirs = dict(other.exponents)
        return all(theirs.get(i, 0) >= e for i, e in self.exponents)

    def __str__(self) -> str:
        if not self.exponents:
            return "1"
        return "*".join(f"x{i}" if e == 1 else f"x{i}^{e}" for i, e in self.exponents)


@dataclass(frozen=True)
class MonomialIdeal:
    """Monomial ideal given by a minimal generating set.

    Generator order is kept as given (it pairs generators with the ``y_i``
    of the Milnor polynomial); equality ignores order.
    """

    n: int
    generators: tuple[Monomial, ...]

    def __eq__(self, other):
        if not isinstance(other, MonomialIdeal):
            return NotImplemented
        return self.n == other.n and set(self.generators) == set(other.generators)

    def __hash__(self):
        return hash((self.n, frozenset(self.generators)))

    @property
    def is_zero(self) -> bool:
        return not self.generators

    @property
    def is_unit(self) -> bool:
        return any(not g.exponents for g in self.generators)

    @property
    def is_square_free(self) -> bool:
        return all(g.is_square_free for g in self.generators)

    @property
    def supports(self) -> list[int]:
        return [g.mask for g in self.generators]

    def require_square_free(self) -> None:
        if not self.is_square_free:
            raise InputError("invariant computation requires square-free ideal")

    def __str__(self) -> str:
        return "(" + ", ".join(map(str, self.generators)) + ")"


def minimal_generators(gens: Iterable[Monomial], n: int | None = None) -> MonomialIdeal:
    """Drop generators divisible by another one; first occurrence order is kept."""
    gens = list(dict.fromkeys(gens))
    if n is None:
        if not gens:
            raise InputError("cannot infer n from an empty generator list")
        n = gens[0].n
    if any(g.n != n for g in gens):
        raise InputError("generators live in different polynomial rings")
    kept = [
        g for g in gens
        if not any(h != g and h.divides(g) for h in gens)
    ]
    return MonomialIdeal(n, tuple(kept))


def ideal_from_supports(supports: Iterable[int], n: int) -> MonomialIdeal:
    return minimal_generators((Monomial.from_mask(m, n) for m in supports), n)


def alexander_dual(ideal: MonomialIdeal) -> MonomialIdeal:
    """Square-free Alexander dual: generated by the minimal transversals of
    the generator supports."""
    ideal.require_square_free()
    return ideal_from_supports(minimal_transversals(ideal.supports), ideal.n)


def _check_subspaces(subspaces: Sequence[Iterable[int]], n: int) -> list[int]:
    masks = []
    for s in subspaces:
        m = to_mask(s)
        if m >> n:
            raise InputError(f"subspace {format_set(m)} not inside x1..x{n}")
        masks.append(m)
    return masks


def union_ideal(subspaces: Sequence[Iterable[int]], n: int) -> MonomialIdeal:
    """Vanishing ideal of a union of coordinate subspaces ``V(x_i : i in S)``.

    It is the intersection of the coordinate primes, minimally generated by
    the square-free monomials of the minimal transversals.  An empty index
    set stands for the whole space, whose ideal is zero; the empty
    arrangement gives the unit ideal.
    """
    masks = _check_subspaces(subspaces, n)
    return ideal_from_supports(minimal_transversals(masks), n)


def arrangement_of(ideal: MonomialIdeal) -> list[int]:
    """Coordinate subspaces (as index bitsets) whose union is ``V(ideal)``."""
    ideal.require_square_free()
    return minimal_transversals(ideal.supports)


# -- simplicial complexes ---------------------------------------------------


@dataclass(frozen=True)
class SimplicialComplex:
    """Finite simplicial complex on ``{1..n}`` stored by its facets.

    ``facets == (0,)`` is the empty complex (only the empty face);
    ``facets == ()`` is the void complex with no faces at all.
    """

    n: int
    facets: tuple[int, ...]

    def __init__(self, n: int, faces: Iterable[int]):
        object.__setattr__(self, "n", n)
        facets = tuple(maximal_sets(faces))
        if any(f >> n for f in facets):
            raise InputError("face outside the vertex set")
        object.__setattr__(self, "facets", facets)

    @classmethod
    def from_facets(cls, n: int, facets: Iterable[Iterable[int]]) -> "SimplicialComplex":
        return cls(n, [to_mask(f) for f in facets])

    @classmethod
    def simplex(cls, n: int) -> "SimplicialComplex":
        return cls(n, [(1 << n) - 1])

    @classmethod
    def empty(cls, n: int) -> "SimplicialComplex":
        return cls(n, [0])

    @property
    def is_void(self) -> bool:
        return not self.facets

    def __contains__(self, face: int) -> bool:
        return any(face & f == face for f in self.facets)

    @cached_property
    def faces(self) -> tuple[int, ...]:
        """All faces, sorted by (size, vertex tuple); includes the empty face."""
        seen: set[int] = set()
        for f in self.facets:
            seen.update(submasks(f))
        return tuple(sorted(seen, key=lambda m: (popcount(m), from_mask(m))))

    @cached_property
    def minimal_nonfaces(self) -> tuple[int, ...]:
        # sigma is a nonface iff its complement hits every facet complement
        full = (1 << self.n) - 1
        return tuple(minimal_transversals(full & ~f for f in self.facets)) if self.facets else (0,)

    @property
    def dimension(self) -> int:
        return max((popcount(f) for f in self.facets), default=0) - 1

    def full_subcomplex(self, J: int) -> "SimplicialComplex":
        if self.is_void:
            return self
        return SimplicialComplex(self.n, [f & J for f in self.facets])

    def f_vector(self) -> list[int]:
        """Face counts by size: entry ``k`` counts faces with ``k`` vertices."""
        counts = [0] * (self.dimension + 2)
        for f in self.faces:
            counts[popcount(f)] += 1
        return counts

    def __repr__(self) -> str:
        return f"SimplicialComplex(n={self.n}, facets=[{', '.join(format_set(f) for f in self.facets)}])"


def stanley_reisner_complex(ideal: MonomialIdeal) -> SimplicialComplex:
    """Complex whose minimal non-faces are the generator supports."""
    ideal.require_square_free()
    full = (1 << ideal.n) - 1
    # maximal faces are complements of minimal transversals of the supports
    return SimplicialComplex(ideal.n, [full & ~t for t in minimal_transversals(ideal.supports)])


def complement_complex(ideal: MonomialIdeal) -> SimplicialComplex:
    """Complex ``K`` whose moment-angle complex is homotopy equivalent to
    ``C^n - V(ideal)``.

    A point lies off ``V(ideal)`` iff its zero set misses some generator
    support, so the facets of ``K`` are the complements of the supports.
    Equivalently ``K`` is the Stanley-Reisner complex of the Alexander dual,
    with minimal non-faces the arrangement subspaces.
    """
    ideal.require_square_free()
    if ideal.is_zero:
        raise InputError("empty complement: the zero ideal vanishes everywhere")
    full = (1 << ideal.n) - 1
    return SimplicialComplex(ideal.n, [full & ~m for m in ideal.supports])


def arrangement_complex(subspaces: Sequence[Iterable[int]], n: int) -> SimplicialComplex:
    """Complex whose minimal non-faces are the given subspace supports."""
    masks = _check_subspaces(subspaces, n)
    if any(m == 0 for m in masks):
        raise InputError("empty complement: the arrangement contains the whole space")
    return stanley_reisner_complex(ideal_from_supports(masks, n))


# -- intersection posets ----------------------------------------------------


@dataclass(frozen=True)
class IntersectionPoset:
    """Intersection lattice of a coordinate arrangement.

    An element is the index set of an intersection of subspaces, i.e. a
    union of subspace supports; ``0`` is the bottom (the ambient space).
    Elements are sorted by (codimension, vertex tuple).
    """

    n: int
    elements: tuple[int, ...]
    covers: dict[int, tuple[int, ...]] = field(compare=False, repr=False)

    def codim(self, x: int) -> int:
        return popcount(x)

    def real_codim(self, x: int) -> int:
        return 2 * popcount(x)

    def __contains__(self, x: int) -> bool:
        return x in self.covers

    def interval(self, lo: int, hi: int) -> list[int]:
        """Elements strictly between ``lo`` and ``hi``."""
        return [e for e in self.elements if e != lo and e != hi and lo & e == lo and e & hi == e]


def intersection_poset(subspaces: Sequence[Iterable[int]], n: int) -> IntersectionPoset:
    masks = set(_check_subspaces(subspaces, n))
    elements = {0}
    frontier = set(masks)
    while frontier:
        elements |= frontier
        frontier = {a | b for a in frontier for b in masks} - elements
    ordered = tuple(sorted(elements, key=lambda m: (popcount(m), from_mask(m))))
    covers: dict[int, tuple[int, ...]] = {}
    for x in ordered:
        above = [y for y in ordered if y != x and y & x == x]
        covers[x] = tuple(
            y for y in above if not any(z != y and z & y == z and z & x == x for z in above)
        )
    return IntersectionPoset(n, ordered, covers)


def order_complex(poset: IntersectionPoset, x: int) -> SimplicialComplex:
    """Order complex of the open interval ``(0, x)``.

    Vertices are the interval elements numbered 1..m in poset order; facets
    are the saturated chains from atoms to coatoms of the interval.
    """
    if x not in poset:
        raise InputError(f"{format_set(x)} is not an element of the poset")
    if x == 0:
        raise InputError("order complex of the bottom element is undefined")
    inner = poset.interval(0, x)
    if not inner:
        return SimplicialComplex.empty(0)
    label = {e: i for i, e in enumerate(inner)}
    inside = set(inner)
    facets: list[int] = []

    def extend(chain_mask: int, top: int) -> None:
        ups = [y for y in poset.covers[top] if y in inside]
        if not ups:
            facets.append(chain_mask)
            return
        for y in ups:
            extend(chain_mask | (1 << label[y]), y)

    for atom in poset.covers[0]:
        if atom in inside:
            extend(1 << label[atom], atom)
    return SimplicialComplex(len(inner), facets)


def exhaustive_faces(K: SimplicialComplex) -> set[int]:
    """Faces by brute force over all subsets; used to validate closure."""
    return {s for s in range(1 << K.n) if s in K}


def powerset_masks(n: int, k: int | None = None) -> Iterator[int]:
    if k is None:
        yield from range(1 << n)
    else:
        for c in combinations(range(1, n + 1), k):
            yield to_mask(c)
