"""Rational cochain model of a coordinate arrangement complement and
triple Massey products.

The model has basis ``u_J v_s`` for disjoint ``J, s`` with ``s`` a face of
``K``, in degree ``|J| + 2|s|``.  The ``u_j`` anticommute (degree 1), the
``v_j`` are even (degree 2), ``d u_j = v_j``, and a product vanishes as
soon as two of the four index sets meet or the union of the ``v``-sets
leaves ``K``.  Its cohomology is that of the moment-angle complex.

Everything is multigraded by ``W = J | s``: ``d`` preserves ``W`` and
products add disjoint ``W``.  Linear algebra is done block by block.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable

import numpy as np
import scipy.sparse as sp

from .combinatorics import InputError, SimplicialComplex, from_mask, popcount
from .homology import InvariantViolation
from .linalg import clear_denominators, in_subspace, kernel_basis, rational_quotient_basis, solve

MAX_BASIS = 5000

Cochain = dict  # basis index -> Fraction (or int)


class MasseyUndefined(ValueError):
    """The triple product is not defined: ``ab`` or ``bc`` is not a coboundary."""


def _clean(x: dict) -> Cochain:
    return {k: v for k, v in sorted(x.items()) if v}


@dataclass
class KoszulModel:
    K: SimplicialComplex
    basis: list[tuple[int, int]]  # (J, sigma) bitsets
    degrees: np.ndarray
    d_targets: np.ndarray  # (N+1, n): index of each term of d(e_i); N marks "no term"
    d_signs: np.ndarray
    prod_index: np.ndarray  # (N+1, N+1); N is the zero element
    prod_sign: np.ndarray
    _classes: dict[int, list[Cochain]] = field(default_factory=dict, repr=False)

    @property
    def size(self) -> int:
        return len(self.basis)

    @property
    def n(self) -> int:
        return self.K.n

    def degree(self, i: int) -> int:
        return int(self.degrees[i])

    def block(self, i: int) -> int:
        J, s = self.basis[i]
        return J | s

    def name(self, i: int) -> str:
        J, s = self.basis[i]
        out = "".join(f"u{j}" for j in from_mask(J)) + "".join(f"v{j}" for j in from_mask(s))
        return out or "1"

    @cached_property
    def blocks(self) -> dict[tuple[int, int], list[int]]:
        """``(W, degree) -> basis indices`` in basis order."""
        out: dict[tuple[int, int], list[int]] = {}
        for i in range(self.size):
            out.setdefault((self.block(i), self.degree(i)), []).append(i)
        return out

    @property
    def top_degree(self) -> int:
        return int(self.degrees.max()) if self.size else 0

    # -- cochain arithmetic -------------------------------------------------

    def differential(self, x: Cochain) -> Cochain:
        out: dict[int, Fraction] = {}
        N = self.size
        for i, a in x.items():
            for t, s in zip(self.d_targets[i], self.d_signs[i]):
                if t != N:
                    out[int(t)] = out.get(int(t), 0) + int(s) * a
        return _clean(out)

    def multiply(self, x: Cochain, y: Cochain) -> Cochain:
        out: dict[int, Fraction] = {}
        for i, a in x.items():
            row_i, row_s = self.prod_index[i], self.prod_sign[i]
            for j, b in y.items():
                s = row_s[j]
                if s:
                    k = int(row_i[j])
                    out[k] = out.get(k, 0) + int(s) * a * b
        return _clean(out)

    def cochain_degree(self, x: Cochain) -> int:
        degs = {self.degree(i) for i in x}
        if len(degs) > 1:
            raise InputError("cochain is not homogeneous")
        return degs.pop() if degs else 0

    def _block_columns(self, W: int, deg: int) -> tuple[list[list[int]], list[int], list[int]]:
        """Matrix of ``d`` from block ``(W, deg)`` into ``(W, deg + 1)``."""
        src = self.blocks.get((W, deg), [])
        dst = self.blocks.get((W, deg + 1), [])
        pos = {j: r for r, j in enumerate(dst)}
        cols = []
        for i in src:
            col = [0] * len(dst)
            for t, s in zip(self.d_targets[i], self.d_signs[i]):
                if t != self.size:
                    col[pos[int(t)]] += int(s)
            cols.append(col)
        return cols, src, dst

    def coboundary_preimage(self, x: Cochain, reverse: bool = False) -> Cochain | None:
        """Some ``y`` with ``dy = x`` (free variables zero), or ``None``."""
        by_block: dict[tuple[int, int], dict[int, Fraction]] = {}
        for i, a in x.items():
            by_block.setdefault((self.block(i), self.degree(i)), {})[i] = a
        out: dict[int, Fraction] = {}
        for (W, deg), part in sorted(by_block.items()):
            cols, src, dst = self._block_columns(W, deg - 1)
            target = [part.get(j, 0) for j in dst]
            sol = solve(cols, target, len(dst), reverse=reverse) if cols else None
            if sol is None:
                return None
            out.update({i: v for i, v in zip(src, sol) if v})
        return _clean(out)

    def is_coboundary(self, x: Cochain) -> bool:
        return not x or self.coboundary_preimage(x) is not None

    # -- cohomology ---------------------------------------------------------

    def cohomology_classes(self, degree: int) -> list[Cochain]:
        """Integral cocycle representatives of a basis of ``H^degree``,
        block by block in increasing ``W``."""
        if degree in self._classes:
            return self._classes[degree]
        classes = []
        for W in sorted({W for (W, deg) in self.blocks if deg == degree}):
            cols, src, dst = self._block_columns(W, degree)
            cycles = kernel_basis(cols, len(dst)) if dst else [
                [Fraction(int(i == j)) for j in range(len(src))] for i in range(len(src))
            ]
            if not cycles:
                continue
            incoming, _, _ = self._block_columns(W, degree - 1)
            quotient = rational_quotient_basis(cycles, incoming)
            for vec in quotient.vectors:
                ints = clear_denominators(vec)
                classes.append({i: v for i, v in zip(src, ints) if v})
        self._classes[degree] = classes
        return classes

    def betti(self) -> list[int]:
        return [len(self.cohomology_classes(k)) for k in range(self.top_degree + 1)]

    def coboundary_columns(self, degree: int, blocks: Iterable[int]) -> list[Cochain]:
        out = []
        for W in sorted(set(blocks)):
            for i in self.blocks.get((W, degree - 1), []):
                dx = self.differential({i: 1})
                if dx:
                    out.append(dx)
        return out

    def format_cochain(self, x: Cochain) -> str:
        if not x:
            return "0"
        parts = []
        for i, a in sorted(x.items()):
            a = Fraction(a)
            coeff = "" if a == 1 else "-" if a == -1 else f"{a}*"
            parts.append(f"{coeff}{self.name(i)}")
        return " + ".join(parts).replace("+ -", "- ")


def _face_table(K: SimplicialComplex) -> np.ndarray:
    table = np.zeros(1 << K.n, dtype=bool)
    table[list(K.faces)] = True
    return table


def build_model(K: SimplicialComplex, verify: bool = True) -> KoszulModel:
    if K.is_void:
        raise InputError("empty complement: the complex has no faces")
    n = K.n
    full = (1 << n) - 1
    basis = []
    for s in K.faces:
        rest = full & ~s
        J = rest
        while True:
            basis.append((J, s))
            if J == 0:
                break
            J = (J - 1) & rest
    if len(basis) > MAX_BASIS:
        raise InputError(f"model has {len(basis)} basis elements, above the cap {MAX_BASIS}")
    basis.sort(key=lambda p: (popcount(p[0]) + 2 * popcount(p[1]), from_mask(p[0]), from_mask(p[1])))
    N = len(basis)
    index = {p: i for i, p in enumerate(basis)}
    degrees = np.array([popcount(J) + 2 * popcount(s) for J, s in basis], dtype=np.int64)
    faces = _face_table(K)

    width = max(n, 1)
    d_targets = np.full((N + 1, width), N, dtype=np.int64)
    d_signs = np.zeros((N + 1, width), dtype=np.int64)
    for i, (J, s) in enumerate(basis):
        for pos, j in enumerate(from_mask(J)):
            bit = 1 << (j - 1)
            if faces[s | bit]:
                d_targets[i, pos] = index[(J ^ bit, s | bit)]
                d_signs[i, pos] = -1 if pos % 2 else 1

    Jm = np.array([J for J, _ in basis], dtype=np.int64)
    Sm = np.array([s for _, s in basis], dtype=np.int64)
    Wm = Jm | Sm
    ok = (Wm[:, None] & Wm[None, :]) == 0
    S_union = Sm[:, None] | Sm[None, :]
    ok &= faces[S_union]
    J_union = Jm[:, None] | Jm[None, :]
    lookup = np.full(1 << (2 * n), N, dtype=np.int64)
    lookup[(Jm << n) | Sm] = np.arange(N)
    target = np.where(ok, lookup[(J_union << n) | S_union], N)
    # sign of the shuffle putting J_a then J_b into increasing order
    inversions = np.zeros((N, N), dtype=np.int64)
    for k in range(n):
        inversions += ((Jm[None, :] >> k) & 1) * np.bitwise_count(Jm[:, None] >> (k + 1)).astype(np.int64)
    sign = np.where(ok, 1 - 2 * (inversions % 2), 0)

    prod_index = np.full((N + 1, N + 1), N, dtype=np.int64)
    prod_sign = np.zeros((N + 1, N + 1), dtype=np.int64)
    prod_index[:N, :N] = target
    prod_sign[:N, :N] = sign
    model = KoszulModel(K, basis, degrees, d_targets, d_signs, prod_index, prod_sign)
    if verify:
        verify_model(model)
    return model


# -- structural checks --------------------------------------------------------


def differential_matrix(model: KoszulModel) -> sp.csr_matrix:
    N = model.size
    rows, cols, vals = [], [], []
    for i in range(N):
        for t, s in zip(model.d_targets[i], model.d_signs[i]):
            if t != N:
                rows.append(int(t))
                cols.append(i)
                vals.append(int(s))
    return sp.csr_matrix((vals, (rows, cols)), shape=(N, N), dtype=np.int64)


def check_square_zero(model: KoszulModel) -> bool:
    D = differential_matrix(model)
    return (D @ D).count_nonzero() == 0


def check_leibniz(model: KoszulModel) -> bool:
    """``d(ab) = (da)b + (-1)^|a| a(db)`` for every pair of basis elements."""
    N = model.size
    P, S = model.prod_index, model.prod_sign
    Dt, Ds = model.d_targets, model.d_signs
    width = Dt.shape[1]
    bs = np.arange(N)
    for a in range(N):
        ab, s_ab = P[a, :N], S[a, :N]
        # d(ab)
        idx1 = Dt[ab]
        val1 = Ds[ab] * s_ab[:, None]
        # (da) b
        da_t, da_s = Dt[a], Ds[a]
        idx2 = P[da_t[None, :], bs[:, None]]
        val2 = -(da_s[None, :] * S[da_t[None, :], bs[:, None]])
        # (-1)^|a| a (db)
        db_t = Dt[:N]
        idx3 = P[a, db_t]
        val3 = -((-1) ** int(model.degrees[a])) * Ds[:N] * S[a, db_t]
        idx = np.concatenate([idx1, idx2, idx3], axis=1)
        val = np.concatenate([val1, val2, val3], axis=1)
        keys = (bs[:, None] * (N + 1) + idx).ravel()
        vals = val.ravel()
        live = vals != 0
        uniq, inv = np.unique(keys[live], return_inverse=True)
        totals = np.bincount(inv, weights=vals[live], minlength=len(uniq))
        if np.any(totals != 0):
            return False
    return True


def check_associativity(model: KoszulModel) -> bool:
    """``(ab)c = a(bc)`` for every triple of basis elements."""
    N = model.size
    P, S = model.prod_index, model.prod_sign
    for a in range(N + 1):
        ab, s_ab = P[a], S[a]
        left_idx = P[ab]
        left_sign = s_ab[:, None] * S[ab]
        right_idx = P[a][P]
        right_sign = S * S[a][P]
        nonzero = (left_sign != 0) | (right_sign != 0)
        if np.any(left_sign != right_sign) or np.any((left_idx != right_idx) & nonzero):
            return False
    return True


def verify_model(model: KoszulModel) -> None:
    if not check_square_zero(model):
        raise InvariantViolation("model differential does not square to zero")
    if not check_leibniz(model):
        raise InvariantViolation("model violates the graded Leibniz rule")
    if not check_associativity(model):
        raise InvariantViolation("model product is not associative")


# -- Massey products ------------------------------------------------------------


@dataclass
class MasseyResult:
    a: Cochain
    b: Cochain
    c: Cochain
    degrees: tuple[int, int, int]
    x: Cochain  # dx = -ab
    y: Cochain  # dy = -bc
    representative: Cochain
    indeterminacy: list[Cochain]
    verdict: str

    @property
    def degree(self) -> int:
        p, q, r = self.degrees
        return p + q + r - 1

    @property
    def nontrivial(self) -> bool:
        return self.verdict == "nontrivial"

    @property
    def indeterminacy_dimension(self) -> int:
        return len(self.indeterminacy)

    def to_json(self, model: KoszulModel) -> dict:
        def enc(x: Cochain) -> list[list]:
            return [[model.name(i), str(Fraction(v))] for i, v in sorted(x.items())]

        return {
            "classes": [enc(self.a), enc(self.b), enc(self.c)],
            "degrees": list(self.degrees),
            "degree": self.degree,
            "representative": enc(self.representative),
            "indeterminacy_dimension": self.indeterminacy_dimension,
            "verdict": self.verdict,
        }

    def text(self, model: KoszulModel) -> str:
        return "\n".join([
            f"a (deg {self.degrees[0]}) = {model.format_cochain(self.a)}",
            f"b (deg {self.degrees[1]}) = {model.format_cochain(self.b)}",
            f"c (deg {self.degrees[2]}) = {model.format_cochain(self.c)}",
            f"<a,b,c> in degree {self.degree}: {model.format_cochain(self.representative)}",
            f"indeterminacy dimension: {self.indeterminacy_dimension}",
            f"verdict: {self.verdict}",
        ])


def _scale(x: Cochain, k) -> Cochain:
    return _clean({i: k * v for i, v in x.items()})


def _add(x: Cochain, y: Cochain) -> Cochain:
    out = dict(x)
    for i, v in y.items():
        out[i] = out.get(i, 0) + v
    return _clean(out)


def _homogeneous_block(model: KoszulModel, x: Cochain) -> int | None:
    blocks = {model.block(i) for i in x}
    return blocks.pop() if len(blocks) == 1 else None


def massey_triple(model: KoszulModel, a: Cochain, b: Cochain, c: Cochain, reverse: bool = False) -> MasseyResult:
    """Triple Massey product ``<a, b, c>`` of cocycles.

    With ``dx = -ab`` and ``dy = -bc`` the representative is
    ``a y + (-1)^(|a|+1) x c``; it is trivial iff it lies in
    ``a H + H c`` plus coboundaries.
    """
    for name, z in (("a", a), ("b", b), ("c", c)):
        if not z:
            raise InputError(f"class {name} is zero")
        if model.differential(z):
            raise InputError(f"class {name} is not a cocycle")
    p, q, r = (model.cochain_degree(z) for z in (a, b, c))
    x = model.coboundary_preimage(_scale(model.multiply(a, b), -1), reverse)
    y = model.coboundary_preimage(_scale(model.multiply(b, c), -1), reverse)
    if x is None or y is None:
        raise MasseyUndefined("product obstruction nonzero")
    sign = -1 if p % 2 == 0 else 1
    rep = _add(model.multiply(a, y), _scale(model.multiply(x, c), sign))
    if model.differential(rep):
        raise InvariantViolation("Massey representative is not a cocycle")

    m = p + q + r - 1
    gens = [model.multiply(a, z) for z in model.cohomology_classes(q + r - 1)]
    gens += [model.multiply(z, c) for z in model.cohomology_classes(p + q - 1)]
    gens = [g for g in gens if g]
    rep_blocks = {model.block(i) for i in rep}
    relevant = [g for g in gens if _homogeneous_block(model, g) in rep_blocks or _homogeneous_block(model, g) is None]
    touched = rep_blocks | {model.block(i) for g in gens for i in g}
    coboundaries = model.coboundary_columns(m, touched)

    rows = sorted({i for z in coboundaries + gens + [rep] for i in z})
    pos = {i: k for k, i in enumerate(rows)}

    def dense(z: Cochain) -> list[Fraction]:
        v = [Fraction(0)] * len(rows)
        for i, val in z.items():
            v[pos[i]] = Fraction(val)
        return v

    B = [dense(z) for z in coboundaries]
    quotient = rational_quotient_basis(B + [dense(g) for g in gens], B) if rows else None
    indeterminacy = [gens[i - len(B)] for i in quotient.indices] if quotient else []
    if not rep:
        verdict = "trivial"
    else:
        span = B + [dense(g) for g in relevant]
        verdict = "trivial" if in_subspace(dense(rep), span) else "nontrivial"
    return MasseyResult(a, b, c, (p, q, r), x, y, rep, indeterminacy, verdict)


@dataclass
class FormalityReport:
    certified: bool
    witness: MasseyResult | None
    triples_checked: int
    degree_cap: int

    @property
    def message(self) -> str:
        if self.certified:
            return "non-formality certified"
        return "no obstruction found at triple level"


def _class_list(model: KoszulModel) -> list[tuple[int, Cochain]]:
    out = []
    for k in range(1, model.top_degree + 1):
        out += [(k, z) for z in model.cohomology_classes(k)]
    return out


def formality_probe(model: KoszulModel, degree_cap: int | None = None, threads: int = 1) -> FormalityReport:
    """Search basis-class triples for a nontrivial Massey product.

    Triples are visited by total degree, then lexicographically by class
    index; the first nontrivial one is the witness.  A negative answer is
    not a proof of formality.
    """
    classes = _class_list(model)
    betti = model.betti()
    if degree_cap is None:
        degree_cap = max((k for k, b in enumerate(betti) if b), default=0)

    candidates = []
    for ia, (p, _) in enumerate(classes):
        for ib, (q, _) in enumerate(classes):
            for ic, (r, _) in enumerate(classes):
                m = p + q + r - 1
                if m <= degree_cap and m < len(betti) and betti[m]:
                    candidates.append((p + q + r, ia, ib, ic))
    candidates.sort()

    product_cache: dict[tuple[int, int], bool] = {}

    def vanishes(i: int, j: int) -> bool:
        if (i, j) not in product_cache:
            product_cache[(i, j)] = model.is_coboundary(model.multiply(classes[i][1], classes[j][1]))
        return product_cache[(i, j)]

    def examine(triple) -> MasseyResult | None:
        _, ia, ib, ic = triple
        if not (vanishes(ia, ib) and vanishes(ib, ic)):
            return None
        res = massey_triple(model, classes[ia][1], classes[ib][1], classes[ic][1])
        return res if res.nontrivial else None

    if threads <= 1:
        for count, triple in enumerate(candidates, 1):
            res = examine(triple)
            if res is not None:
                return FormalityReport(True, res, count, degree_cap)
        return FormalityReport(False, None, len(candidates), degree_cap)

    # parallel over the first class; the earliest witness in enumeration order wins
    firsts = sorted({t[1] for t in candidates})

    def scan(ia: int):
        for triple in candidates:
            if triple[1] == ia:
                res = examine(triple)
                if res is not None:
                    return triple, res
        return None

    with ThreadPoolExecutor(max_workers=threads) as pool:
        found = [f for f in pool.map(scan, firsts) if f is not None]
    if not found:
        return FormalityReport(False, None, len(candidates), degree_cap)
    triple, res = min(found, key=lambda f: f[0])
    return FormalityReport(True, res, candidates.index(triple) + 1, degree_cap)
