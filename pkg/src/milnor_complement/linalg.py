"""Exact integer and rational linear algebra.

Two Smith normal form paths share one pivot rule (minimal absolute value,
ties broken by (row, col)):

* :func:`smith_normal_form` works densely and can return unimodular
  transforms ``U, V`` with ``U A V = D``;
* :func:`invariant_factors` eliminates on sparse rows and only returns the
  factors.  Homology uses this one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence


@dataclass
class IntMatrix:
    """Sparse integer matrix; only nonzero entries are stored."""

    rows: int
    cols: int
    entries: dict[tuple[int, int], int] = field(default_factory=dict)

    def __post_init__(self):
        for (r, c), v in list(self.entries.items()):
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise IndexError(f"entry ({r}, {c}) outside {self.rows}x{self.cols}")
            if v == 0:
                del self.entries[(r, c)]

    @classmethod
    def from_dense(cls, data: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        rows = len(data)
        if cols is None:
            cols = len(data[0]) if rows else 0
        return cls(rows, cols, {(r, c): int(v) for r, row in enumerate(data) for c, v in enumerate(row) if v})

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> "IntMatrix":
        return cls(rows, len(columns), {(r, c): int(v) for c, col in enumerate(columns) for r, v in enumerate(col) if v})

    @classmethod
    def identity(cls, size: int) -> "IntMatrix":
        return cls(size, size, {(i, i): 1 for i in range(size)})

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def columns(self) -> list[list[int]]:
        out = [[0] * self.rows for _ in range(self.cols)]
        for (r, c), v in self.entries.items():
            out[c][r] = v
        return out

    def row_dicts(self) -> dict[int, dict[int, int]]:
        out: dict[int, dict[int, int]] = {}
        for (r, c), v in self.entries.items():
            out.setdefault(r, {})[c] = v
        return out

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows, {(c, r): v for (r, c), v in self.entries.items()})

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        right = other.row_dicts()
        acc: dict[tuple[int, int], int] = {}
        for (r, k), v in self.entries.items():
            for c, w in right.get(k, {}).items():
                acc[(r, c)] = acc.get((r, c), 0) + v * w
        return IntMatrix(self.rows, other.cols, acc)

    def __eq__(self, other):
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return (self.rows, self.cols, self.entries) == (other.rows, other.cols, other.entries)

    @property
    def is_zero(self) -> bool:
        return not self.entries

    def permuted(self, row_perm: Sequence[int], col_perm: Sequence[int]) -> "IntMatrix":
        """Matrix whose entry ``(row_perm[r], col_perm[c])`` is ``self[r, c]``."""
        return IntMatrix(self.rows, self.cols, {(row_perm[r], col_perm[c]): v for (r, c), v in self.entries.items()})

    def dump(self, path) -> None:
        """Write ``rows cols`` then one ``row col value`` line per entry."""
        with open(path, "w") as fh:
            fh.write(f"{self.rows} {self.cols}\n")
            for (r, c), v in sorted(self.entries.items()):
                fh.write(f"{r} {c} {v}\n")


def determinant(A: Sequence[Sequence[int]]) -> int:
    """Bareiss fraction-free determinant."""
    M = [list(row) for row in A]
    n = len(M)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k]), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


# -- Smith normal form ------------------------------------------------------


@dataclass
class SmithForm:
    factors: list[int]
    shape: tuple[int, int]
    U: IntMatrix | None = None
    V: IntMatrix | None = None

    @property
    def rank(self) -> int:
        return len(self.factors)

    @property
    def torsion(self) -> list[int]:
        return [d for d in self.factors if d > 1]

    def diagonal(self) -> IntMatrix:
        return IntMatrix(*self.shape, {(i, i): d for i, d in enumerate(self.factors)})

    def verify(self, A: IntMatrix) -> bool:
        if self.U is None or self.V is None:
            raise ValueError("transforms were not requested")
        return self.U @ A @ self.V == self.diagonal()


def _dense_pivot(M: list[list[int]], t: int) -> tuple[int, int] | None:
    best = None
    for r in range(t, len(M)):
        row = M[r]
        for c in range(t, len(row)):
            v = row[c]
            if v and (best is None or abs(v) < best[0]):
                best = (abs(v), r, c)
                if best[0] == 1:
                    return r, c
    return None if best is None else (best[1], best[2])


def smith_normal_form(A: IntMatrix, want_transforms: bool = False) -> SmithForm:
    """Smith normal form by dense unimodular elimination."""
    if not want_transforms:
        return SmithForm(invariant_factors(A), (A.rows, A.cols))
    m, n = A.rows, A.cols
    M = A.to_dense()
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    # V is kept transposed so column operations become row operations
    Vt = [[int(i == j) for j in range(n)] for i in range(n)]

    def row_add(X, dst, src, q):
        if q:
            X[dst] = [a + q * b for a, b in zip(X[dst], X[src])]

    def col_add(dst, src, q):
        if q:
            for row in M:
                row[dst] += q * row[src]
            row_add(Vt, dst, src, q)

    def col_swap(a, b):
        for row in M:
            row[a], row[b] = row[b], row[a]
        Vt[a], Vt[b] = Vt[b], Vt[a]

    t = 0
    while t < min(m, n):
        pivot = _dense_pivot(M, t)
        if pivot is None:
            break
        r, c = pivot
        M[t], M[r] = M[r], M[t]
        U[t], U[r] = U[r], U[t]
        col_swap(t, c)
        while True:
            p = M[t][t]
            dirty = False
            for i in range(t + 1, m):
                q = M[i][t] // p
                row_add(M, i, t, -q)
                row_add(U, i, t, -q)
                dirty |= M[i][t] != 0
            for j in range(t + 1, n):
                q = M[t][j] // p
                col_add(j, t, -q)
                dirty |= M[t][j] != 0
            if dirty:
                # a remainder smaller than p survived; it becomes the pivot
                r, c = _dense_pivot(M, t)
                M[t], M[r] = M[r], M[t]
                U[t], U[r] = U[r], U[t]
                col_swap(t, c)
                continue
            bad = next(
                (i for i in range(t + 1, m) if any(M[i][j] % p for j in range(t + 1, n))),
                None,
            )
            if bad is None:
                break
            row_add(M, t, bad, 1)
            row_add(U, t, bad, 1)
        if M[t][t] < 0:
            M[t] = [-v for v in M[t]]
            U[t] = [-v for v in U[t]]
        t += 1
    factors = [M[i][i] for i in range(t)]
    V = [list(col) for col in zip(*Vt)] if n else []
    return SmithForm(factors, (m, n), IntMatrix.from_dense(U, m), IntMatrix.from_dense(V, n))


def normalize_factors(diagonal: Iterable[int]) -> list[int]:
    """Invariant factors (a divisibility chain) of a diagonal matrix."""
    values = [abs(d) for d in diagonal if d]
    ones = sum(1 for d in values if d == 1)
    rest = sorted(d for d in values if d != 1)
    changed = True
    while changed:
        changed = False
        for i in range(len(rest)):
            for j in range(i + 1, len(rest)):
                a, b = rest[i], rest[j]
                if b % a:
                    g = gcd(a, b)
                    rest[i], rest[j] = g, a // g * b
                    changed = True
        rest.sort()
    ones += sum(1 for d in rest if d == 1)
    return [1] * ones + [d for d in rest if d != 1]


def _sparse_pivot(rows: dict[int, dict[int, int]]) -> tuple[int, int]:
    best = None
    for r in sorted(rows):
        row = rows[r]
        for c in sorted(row):
            a = abs(row[c])
            if best is None or a < best[0]:
                best = (a, r, c)
                if a == 1:
                    return r, c
    return best[1], best[2]


def invariant_factors(A: IntMatrix) -> list[int]:
    """Invariant factors of ``A`` via sparse elimination (no transforms)."""
    rows = A.row_dicts()
    cols: dict[int, set[int]] = {}
    for (r, c) in A.entries:
        cols.setdefault(c, set()).add(r)

    def add_row(dst: int, src: int, q: int) -> None:
        target = rows[dst]
        for c, v in rows[src].items():
            w = target.get(c, 0) - q * v
            if w:
                if c not in target:
                    cols[c].add(dst)
                target[c] = w
            elif c in target:
                del target[c]
                cols[c].discard(dst)
        if not target:
            del rows[dst]

    diagonal = []
    while rows:
        r, c = _sparse_pivot(rows)
        while True:
            p = rows[r][c]
            for other in sorted(cols[c] - {r}):
                add_row(other, r, rows[other][c] // p)
            if len(cols[c]) > 1:
                break  # remainder in column c; re-pivot globally
            # column c now holds only the pivot, so column operations only touch row r
            row = rows[r]
            remainder = False
            for c2 in sorted(row):
                if c2 == c:
                    continue
                w = row[c2] % p
                if w:
                    row[c2] = w
                    remainder = True
                else:
                    del row[c2]
                    cols[c2].discard(r)
            if remainder:
                break
            diagonal.append(p)
            del rows[r]
            cols[c].discard(r)
            break
    return normalize_factors(diagonal)


def rank(A: IntMatrix) -> int:
    return len(invariant_factors(A))


def rank_mod_p(A: IntMatrix, p: int) -> int:
    """Rank over GF(p); a cross-check only, never the primary path."""
    rows = {r: {c: v % p for c, v in row.items() if v % p} for r, row in A.row_dicts().items()}
    rows = {r: row for r, row in rows.items() if row}
    rk = 0
    while rows:
        r = min(rows)
        row = rows.pop(r)
        c = min(row)
        inv = pow(row[c], -1, p)
        for other in list(rows):
            o = rows[other]
            if c in o:
                f = o[c] * inv % p
                for k, v in row.items():
                    w = (o.get(k, 0) - f * v) % p
                    if w:
                        o[k] = w
                    else:
                        o.pop(k, None)
                if not o:
                    del rows[other]
        rk += 1
    return rk


def bareiss_rank(A: Sequence[Sequence[int]]) -> int:
    """Rank over the rationals by fraction-free elimination."""
    M = [list(row) for row in A]
    if not M:
        return 0
    m, n = len(M), len(M[0])
    rk, prev = 0, 1
    for c in range(n):
        piv = next((i for i in range(rk, m) if M[i][c]), None)
        if piv is None:
            continue
        M[rk], M[piv] = M[piv], M[rk]
        for i in range(rk + 1, m):
            for j in range(c + 1, n):
                M[i][j] = (M[i][j] * M[rk][c] - M[i][c] * M[rk][j]) // prev
            M[i][c] = 0
        prev = M[rk][c]
        rk += 1
        if rk == m:
            break
    return rk


# -- rational linear algebra ------------------------------------------------

Vector = list  # list of Fraction or int


def rref(columns: Sequence[Sequence], size: int) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form of the matrix with the given columns.

    Returns the nonzero rows and the pivot column indices.
    """
    M = [[Fraction(col[r]) for col in columns] for r in range(size)]
    pivots: list[int] = []
    rk = 0
    for c in range(len(columns)):
        piv = next((i for i in range(rk, size) if M[i][c]), None)
        if piv is None:
            continue
        M[rk], M[piv] = M[piv], M[rk]
        lead = M[rk][c]
        M[rk] = [v / lead for v in M[rk]]
        for i in range(size):
            if i != rk and M[i][c]:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[rk])]
        pivots.append(c)
        rk += 1
        if rk == size:
            break
    return M[:rk], pivots


def kernel_basis(columns: Sequence[Sequence], size: int) -> list[list[Fraction]]:
    """Basis of ``{x : sum x_j col_j = 0}``, one vector per free column."""
    R, pivots = rref(columns, size)
    ncols = len(columns)
    basis = []
    pivot_set = set(pivots)
    for free in range(ncols):
        if free in pivot_set:
            continue
        x = [Fraction(0)] * ncols
        x[free] = Fraction(1)
        for row, pc in zip(R, pivots):
            x[pc] = -row[free]
        basis.append(x)
    return basis


def solve(columns: Sequence[Sequence], target: Sequence, size: int, reverse: bool = False) -> list[Fraction] | None:
    """A solution ``x`` of ``sum x_j col_j = target`` or ``None``.

    Free variables are set to zero; ``reverse`` eliminates the columns in
    reverse order, which selects a different particular solution.
    """
    order = list(range(len(columns)))
    if reverse:
        order.reverse()
    aug = [columns[j] for j in order] + [target]
    R, pivots = rref(aug, size)
    if pivots and pivots[-1] == len(order):
        return None
    x = [Fraction(0)] * len(columns)
    for row, pc in zip(R, pivots):
        x[order[pc]] = row[-1]
    return x


def _as_columns(S) -> tuple[list[list], int]:
    if isinstance(S, IntMatrix):
        return S.columns(), S.rows
    cols = [list(c) for c in S]
    return cols, len(cols[0]) if cols else 0


def in_subspace(v: Sequence, S) -> bool:
    """Whether ``v`` is a rational combination of the columns of ``S``."""
    cols, size = _as_columns(S)
    if not cols:
        return all(x == 0 for x in v)
    if size != len(v):
        raise ValueError(f"vector of length {len(v)} against columns of length {size}")
    if all(x == 0 for x in v):
        return True
    return solve(cols, v, size) is not None


def clear_denominators(v: Sequence[Fraction]) -> list[int]:
    """Primitive integer vector proportional to ``v``."""
    den = 1
    for x in v:
        den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
    ints = [int(Fraction(x) * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return [x // g for x in ints] if g > 1 else ints


@dataclass
class QuotientBasis:
    vectors: list[list[Fraction]]
    indices: list[int]  # which columns of A were chosen

    @property
    def dimension(self) -> int:
        return len(self.vectors)


def rational_quotient_basis(span_A, span_B) -> QuotientBasis:
    """Basis of ``col(A) / col(B)`` over the rationals, chosen greedily among
    the columns of ``A`` in order."""
    colsA, size = _as_columns(span_A)
    colsB, sizeB = _as_columns(span_B)
    if colsA and colsB and size != sizeB:
        raise ValueError("A and B live in different ambient spaces")
    size = size or sizeB
    for b in colsB:
        if not in_subspace(b, colsA):
            raise ValueError("B not contained in A")
    _, base_pivots = rref(colsB, size)
    span = [colsB[i] for i in base_pivots]
    chosen, indices = [], []
    for i, a in enumerate(colsA):
        if not in_subspace(a, span):
            span = span + [a]
            chosen.append([Fraction(x) for x in a])
            indices.append(i)
    return QuotientBasis(chosen, indices)
