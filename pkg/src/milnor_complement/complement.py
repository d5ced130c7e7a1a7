"""Homology of complements of coordinate subspace arrangements.

Two closed formulas are implemented, plus the cellular oracle from
:mod:`moment_angle`:

* Hochster: ``H_l(M) = sum_J H~_{l-|J|-1}(K_J)`` over all vertex subsets,
  where ``K`` has the arrangement supports as minimal non-faces.  This is
  the torsion-bearing authority.
* Goresky-MacPherson: ``H~^i(M) = sum_{x > 0} H~_{2|x|-2-i}(Delta(0, x))``
  over the intersection poset; used for Betti numbers only.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

from .combinatorics import (
    InputError,
    MonomialIdeal,
    SimplicialComplex,
    arrangement_of,
    complement_complex,
    format_set,
    from_mask,
    intersection_poset,
    order_complex,
    popcount,
    to_mask,
    union_ideal,
)
from .homology import GradedAbelianGroup, InvariantViolation, reduced_homology
from .moment_angle import oracle_homology

FULL_SUM_LIMIT = 20

METHODS = ("hochster", "gm", "oracle")


class Connectivity(str, Enum):
    TRUE = "certified-true"
    FALSE = "certified-false"
    UNKNOWN = "unknown"


class MethodMismatch(InvariantViolation):
    def __init__(self, diff: list[str]):
        super().__init__("methods disagree:\n" + "\n".join(diff))
        self.diff = diff


def _hochster_subsets(K: SimplicialComplex) -> list[int]:
    if K.n <= FULL_SUM_LIMIT:
        return list(range(1 << K.n))
    # K_J is a cone (hence acyclic) over any vertex of J lying in no minimal
    # non-face inside J, so only unions of minimal non-faces contribute.
    unions = {0}
    for m in K.minimal_nonfaces:
        unions |= {u | m for u in unions}
    return sorted(unions)


def hochster_summands(K: SimplicialComplex, threads: int = 1) -> list[tuple[int, GradedAbelianGroup]]:
    """Per-subset contributions ``(J, H~(K_J) shifted by |J|+1)``, sorted by J."""
    if K.is_void:
        raise InputError("empty complement: the complex has no faces")
    subsets = _hochster_subsets(K)

    def summand(J: int) -> tuple[int, GradedAbelianGroup]:
        return J, reduced_homology(K.full_subcomplex(J)).shifted(popcount(J) + 1)

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        return list(pool.map(summand, subsets))


def hochster_homology_of_complex(K: SimplicialComplex, threads: int = 1) -> GradedAbelianGroup:
    total = GradedAbelianGroup()
    for _, group in hochster_summands(K, threads):
        total = total + group
    return total


def hochster_homology(ideal: MonomialIdeal, threads: int = 1) -> GradedAbelianGroup:
    """Integral homology of ``C^n - V(ideal)`` for a square-free monomial ideal."""
    return hochster_homology_of_complex(complement_complex(ideal), threads)


def hochster_euler_characteristic(K: SimplicialComplex) -> int:
    """Euler characteristic counted from the face numbers of every ``K_J``."""
    chi = 0
    for J in _hochster_subsets(K):
        sub = K.full_subcomplex(J)
        reduced_chi = sum((-1) ** (k - 1) * c for k, c in enumerate(sub.f_vector()))
        chi += (-1) ** (popcount(J) + 1) * reduced_chi
    return chi


def _proper_subspaces(subspaces: Iterable[Iterable[int]], n: int) -> list[int]:
    masks = [to_mask(s) for s in subspaces]
    for m in masks:
        if m == 0:
            raise InputError("the whole space is not a proper subspace")
        if m >> n:
            raise InputError(f"subspace {format_set(m)} not inside C^{n}")
    return masks


def goresky_macpherson_betti(subspaces: Sequence[Iterable[int]], n: int) -> list[int]:
    """Betti numbers of the complement from the intersection poset."""
    masks = _proper_subspaces(subspaces, n)
    poset = intersection_poset([from_mask(m) for m in masks], n)
    reduced: dict[int, int] = {}
    for x in poset.elements:
        if x == 0:
            continue
        for k, (r, _) in reduced_homology(order_complex(poset, x)).groups.items():
            i = poset.real_codim(x) - 2 - k
            reduced[i] = reduced.get(i, 0) + r
    betti = [0] * (max(reduced, default=0) + 1)
    for i, r in reduced.items():
        betti[i] += r
    betti[0] += 1
    return betti


def simply_connected_codim_check(subspaces: Iterable[Iterable[int]]) -> Connectivity:
    """Codimension >= 2 everywhere certifies simple connectivity; a
    coordinate hyperplane certifies a nontrivial loop (the coordinate map to
    ``C*`` is onto on fundamental groups)."""
    sizes = [len(set(s)) for s in subspaces]
    if any(s == 0 for s in sizes):
        return Connectivity.UNKNOWN
    if any(s == 1 for s in sizes):
        return Connectivity.FALSE
    return Connectivity.TRUE


def circle_factor_test(betti: Sequence[int]) -> list[int] | None:
    """Solve ``b_k = c_k + c_{k-1}`` for a non-negative ``c``.

    This is the Betti-number shadow of a product with a circle; ``None``
    means no such factorization exists.
    """
    if not betti or betti[0] < 1:
        raise InputError("Betti vector must start with b_0 >= 1")
    c = []
    prev = 0
    for b in betti[:-1]:
        prev = b - prev
        if prev < 0:
            return None
        c.append(prev)
    if betti[-1] != prev:
        return None
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return c


def trim(betti: Sequence[int]) -> list[int]:
    out = list(betti)
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


@dataclass
class ComplementReport:
    ideal: MonomialIdeal
    arrangement: list[int]
    homology: GradedAbelianGroup
    methods: dict[str, GradedAbelianGroup]
    simply_connected: Connectivity
    circle_factor: list[int] | None
    coefficients: str = "integers"
    notes: list[str] = field(default_factory=list)

    @property
    def n(self) -> int:
        return self.ideal.n

    @property
    def betti(self) -> list[int]:
        return trim(self.homology.betti())

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "ideal": [str(g) for g in self.ideal.generators],
            "n": self.n,
            "arrangement": [list(from_mask(m)) for m in self.arrangement],
            "homology": self.homology.to_json(),
            "betti": self.betti,
            "coefficients": self.coefficients,
            "methods": {
                name: {"betti": trim(g.betti()), "homology": g.to_json(), "ranks_only": name == "gm"}
                for name, g in self.methods.items()
            },
            "simply_connected": self.simply_connected.value,
            "circle_factor": self.circle_factor,
        }

    def text(self) -> str:
        lines = [f"ideal: {self.ideal}", f"n: {self.n}"]
        lines.append("arrangement: " + " ".join(format_set(m) for m in self.arrangement))
        lines.append("methods: " + ", ".join(self.methods))
        lines.append(f"homology ({self.coefficients}):")
        lines += ["  " + line for line in self.homology.lines()]
        lines.append("betti: " + " ".join(map(str, self.betti)))
        lines.append(f"simply connected: {self.simply_connected.value}")
        cf = "none" if self.circle_factor is None else " ".join(map(str, self.circle_factor))
        lines.append(f"circle factor: {cf}")
        lines += self.notes
        return "\n".join(lines)


def _compare(results: dict[str, GradedAbelianGroup]) -> list[str]:
    diff = []
    names = list(results)
    for a in names:
        for b in names:
            if a >= b:
                continue
            ga, gb = results[a], results[b]
            if "gm" in (a, b):
                if trim(ga.betti()) != trim(gb.betti()):
                    diff.append(f"{a} betti {trim(ga.betti())} != {b} betti {trim(gb.betti())}")
            elif ga != gb:
                diff.append(f"{a}: {ga.to_json()}\n{b}: {gb.to_json()}")
    return diff


def complement_report(
    ideal: MonomialIdeal,
    methods: Sequence[str] = METHODS,
    threads: int = 1,
    coefficients: str = "integers",
) -> ComplementReport:
    """Homology of ``C^n - V(ideal)`` by the selected methods, cross-checked.

    Disagreement between methods raises :class:`MethodMismatch`.
    """
    unknown = set(methods) - set(METHODS)
    if unknown or not methods:
        raise InputError(f"unknown method(s): {sorted(unknown)}")
    K = complement_complex(ideal)
    arrangement = arrangement_of(ideal)
    results: dict[str, GradedAbelianGroup] = {}
    for name in METHODS:
        if name not in methods:
            continue
        if name == "hochster":
            results[name] = hochster_homology_of_complex(K, threads)
        elif name == "oracle":
            results[name] = oracle_homology(K, threads)
        else:
            betti = goresky_macpherson_betti([from_mask(m) for m in arrangement], ideal.n) if arrangement else [1]
            results[name] = GradedAbelianGroup.from_betti(betti)
    diff = _compare(results)
    if diff:
        raise MethodMismatch(diff)
    authority = next(name for name in ("hochster", "oracle", "gm") if name in results)
    group = results[authority]
    if coefficients == "rationals":
        group = group.rational()
    elif coefficients != "integers":
        raise InputError(f"unknown coefficient mode {coefficients!r}")

    if group.rank(0) != 1:
        raise InvariantViolation(f"complement has H_0 of rank {group.rank(0)}")
    sc = simply_connected_codim_check([from_mask(m) for m in arrangement])
    if sc is Connectivity.TRUE and group.rank(1):
        raise InvariantViolation("codimension criterion certifies simple connectivity but b_1 > 0")
    if sc is Connectivity.FALSE and not group.rank(1):
        raise InvariantViolation("a hyperplane is present but b_1 = 0")
    if "hochster" in results and results["hochster"].euler_characteristic() != hochster_euler_characteristic(K):
        raise InvariantViolation("Euler characteristic double count failed")

    betti = trim(group.betti())
    return ComplementReport(
        ideal=ideal,
        arrangement=arrangement,
        homology=group,
        methods=results,
        simply_connected=sc,
        circle_factor=circle_factor_test(betti),
        coefficients=coefficients,
    )


def arrangement_report(subspaces: Sequence[Iterable[int]], n: int, **kwargs) -> ComplementReport:
    return complement_report(union_ideal(subspaces, n), **kwargs)
