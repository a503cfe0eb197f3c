"""Integer matrices: fraction-free determinant and Smith normal form."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


@dataclass(frozen=True)
class IntMatrix:
    """Dense integer matrix stored row-major."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative dimension")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> IntMatrix:
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), ncols, tuple(int(x) for r in rows for x in r))

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(ij)
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def tolist(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> IntMatrix:
        return IntMatrix.from_rows(
            [[self[i, j] for i in range(self.rows)] for j in range(self.cols)]
        ) if self.rows and self.cols else IntMatrix(self.cols, self.rows, ())

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        out = []
        for i in range(self.rows):
            r = self.row(i)
            for j in range(other.cols):
                out.append(sum(r[k] * other.entries[k * other.cols + j] for k in range(self.cols)))
        return IntMatrix(self.rows, other.cols, tuple(out))

    def apply(self, vec: Sequence) -> list:
        """Matrix-vector product; works for any exact number type in ``vec``."""
        if len(vec) != self.cols:
            raise ValueError("dimension mismatch")
        return [sum(a * x for a, x in zip(self.row(i), vec)) for i in range(self.rows)]

    def is_diagonal(self) -> bool:
        return all(
            self.entries[i * self.cols + j] == 0
            for i in range(self.rows)
            for j in range(self.cols)
            if i != j
        )

    def diagonal(self) -> tuple[int, ...]:
        return tuple(self[i, i] for i in range(min(self.rows, self.cols)))

    def __str__(self) -> str:
        return "\n".join(" ".join(f"{x:>4}" for x in self.row(i)) for i in range(self.rows))


def _as_rows(m: IntMatrix | Iterable[Iterable[int]]) -> IntMatrix:
    return m if isinstance(m, IntMatrix) else IntMatrix.from_rows(m)


def det(m: IntMatrix | Sequence[Sequence[int]]) -> int:
    """Exact determinant by Bareiss fraction-free elimination."""
    m = _as_rows(m)
    if not m.is_square:
        raise ValueError(f"determinant of non-square {m.rows}x{m.cols} matrix")
    n = m.rows
    if n == 0:
        return 1
    a = m.tolist()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        pivot = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                # exact by Sylvester's identity
                row_i[j] = (row_i[j] * pivot - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * a[n - 1][n - 1]


@dataclass(frozen=True)
class SNFDecomposition:
    """``U @ S @ V == input`` with ``U``, ``V`` unimodular.

    ``U_inv`` and ``V_inv`` are carried along because solving congruences
    needs them and they come for free from the elimination.
    """

    U: IntMatrix
    S: IntMatrix
    V: IntMatrix
    U_inv: IntMatrix
    V_inv: IntMatrix

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        return self.S.diagonal()


def smith_normal_form(m: IntMatrix | Sequence[Sequence[int]]) -> SNFDecomposition:
    """Smith normal form with unimodular transforms.

    Pivot choice: smallest absolute value among the remaining nonzero
    entries. Works for rectangular input.
    """
    m = _as_rows(m)
    r, c = m.rows, m.cols
    a = m.tolist()
    # S = P A Q;  U = P^-1, V = Q^-1
    P = IntMatrix.identity(r).tolist()
    Pinv = IntMatrix.identity(r).tolist()
    Q = IntMatrix.identity(c).tolist()
    Qinv = IntMatrix.identity(c).tolist()

    def row_addmul(dst: int, src: int, k: int) -> None:
        # row_dst += k * row_src
        for M in (a, P):
            M[dst] = [x + k * y for x, y in zip(M[dst], M[src])]
        for row in Pinv:
            row[src] -= k * row[dst]

    def row_swap(i: int, j: int) -> None:
        a[i], a[j] = a[j], a[i]
        P[i], P[j] = P[j], P[i]
        for row in Pinv:
            row[i], row[j] = row[j], row[i]

    def row_negate(i: int) -> None:
        a[i] = [-x for x in a[i]]
        P[i] = [-x for x in P[i]]
        for row in Pinv:
            row[i] = -row[i]

    def col_addmul(dst: int, src: int, k: int) -> None:
        # col_dst += k * col_src
        for M in (a, Q):
            for row in M:
                row[dst] += k * row[src]
        Qinv[src] = [x - k * y for x, y in zip(Qinv[src], Qinv[dst])]

    def col_swap(i: int, j: int) -> None:
        for M in (a, Q):
            for row in M:
                row[i], row[j] = row[j], row[i]
        Qinv[i], Qinv[j] = Qinv[j], Qinv[i]

    for t in range(min(r, c)):
        while True:
            best = None
            for i in range(t, r):
                for j in range(t, c):
                    v = a[i][j]
                    if v and (best is None or abs(v) < abs(a[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            if best[0] != t:
                row_swap(t, best[0])
            if best[1] != t:
                col_swap(t, best[1])
            p = a[t][t]
            clean = True
            for i in range(t + 1, r):
                if a[i][t]:
                    row_addmul(i, t, -(a[i][t] // p))
                    clean = clean and a[i][t] == 0
            for j in range(t + 1, c):
                if a[t][j]:
                    col_addmul(j, t, -(a[t][j] // p))
                    clean = clean and a[t][j] == 0
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, r) for j in range(t + 1, c) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            row_addmul(t, bad, 1)
        if a[t][t] < 0:
            row_negate(t)

    def freeze(rows: list[list[int]], nr: int, nc: int) -> IntMatrix:
        return IntMatrix(nr, nc, tuple(x for row in rows for x in row))

    return SNFDecomposition(
        U=freeze(Pinv, r, r),
        S=freeze(a, r, c),
        V=freeze(Qinv, c, c),
        U_inv=freeze(P, r, r),
        V_inv=freeze(Q, c, c),
    )
