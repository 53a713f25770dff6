"""Exact GF(2) linear algebra on bit-packed matrices.

A row is a Python int used as a bitset: bit j of the row is the entry
in column j.  Machine words inside the int give word-packed XOR row
operations for free; a 4369-column elimination stays in the low
seconds.  Subspaces are kept in reduced row-echelon form so that two
spans are equal iff their basis matrices are equal.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np


class BitMatrix:
    """Dense bit matrix with int-bitset rows."""

    __slots__ = ("rows", "n_cols")

    def __init__(self, rows: list[int], n_cols: int):
        self.rows = rows
        self.n_cols = n_cols

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @classmethod
    def zeros(cls, n_rows: int, n_cols: int) -> "BitMatrix":
        return cls([0] * n_rows, n_cols)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls([1 << i for i in range(n)], n)

    @classmethod
    def from_dense(cls, dense: Iterable[Iterable[int]], n_cols: int | None = None) -> "BitMatrix":
        rows = []
        width = n_cols
        for dr in dense:
            r = 0
            cells = list(dr)
            for j, v in enumerate(cells):
                if v & 1:
                    r |= 1 << j
            if width is None:
                width = len(cells)
            rows.append(r)
        return cls(rows, width or 0)

    def get(self, i: int, j: int) -> int:
        return (self.rows[i] >> j) & 1

    def set(self, i: int, j: int) -> None:
        self.rows[i] |= 1 << j

    def copy(self) -> "BitMatrix":
        return BitMatrix(list(self.rows), self.n_cols)

    def row_weights(self) -> list[int]:
        return [r.bit_count() for r in self.rows]

    def col_weights(self) -> list[int]:
        out = [0] * self.n_cols
        for r in self.rows:
            while r:
                low = r & -r
                out[low.bit_length() - 1] += 1
                r ^= low
        return out

    def transpose(self) -> "BitMatrix":
        cols = [0] * self.n_cols
        for i, r in enumerate(self.rows):
            bit = 1 << i
            while r:
                low = r & -r
                cols[low.bit_length() - 1] |= bit
                r ^= low
        return BitMatrix(cols, self.n_rows)

    def mul_vec(self, v: int) -> int:
        """Matrix-vector product over GF(2); v and result are bitsets."""
        out = 0
        for i, r in enumerate(self.rows):
            if (r & v).bit_count() & 1:
                out |= 1 << i
        return out

    def to_numpy(self) -> np.ndarray:
        arr = np.zeros((self.n_rows, self.n_cols), dtype=np.uint8)
        for i, r in enumerate(self.rows):
            while r:
                low = r & -r
                arr[i, low.bit_length() - 1] = 1
                r ^= low
        return arr

    def to_dense(self) -> list[list[int]]:
        return [[(r >> j) & 1 for j in range(self.n_cols)] for r in self.rows]

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, BitMatrix)
            and self.n_cols == other.n_cols
            and self.rows == other.rows
        )

    def __repr__(self) -> str:
        return f"BitMatrix({self.n_rows}x{self.n_cols})"


def _echelon(rows: Iterable[int]) -> dict[int, int]:
    """Echelon basis as {pivot column: row}, pivot = lowest set bit."""
    pivots: dict[int, int] = {}
    for r in rows:
        cur = r
        while cur:
            c = (cur & -cur).bit_length() - 1
            p = pivots.get(c)
            if p is None:
                pivots[c] = cur
                break
            cur ^= p
    return pivots


def rank2(m: BitMatrix | Sequence[int]) -> int:
    """GF(2) rank; the input is not modified."""
    rows = m.rows if isinstance(m, BitMatrix) else m
    return len(_echelon(rows))


def rref(m: BitMatrix | Sequence[int]) -> tuple[list[int], list[int]]:
    """Reduced row-echelon form: (rows sorted by pivot, pivot columns)."""
    rows = m.rows if isinstance(m, BitMatrix) else m
    pivots = _echelon(rows)
    cols = sorted(pivots)
    reduced: dict[int, int] = {}
    for c in reversed(cols):
        row = pivots[c]
        rest = row & ~((1 << (c + 1)) - 1)  # bits above the pivot
        while rest:
            low = rest & -rest
            c2 = low.bit_length() - 1
            if c2 in reduced:
                row ^= reduced[c2]
            rest &= rest - 1
            rest &= row  # drop bits already cleared
        reduced[c] = row
    return [reduced[c] for c in cols], cols


class Subspace:
    """A subspace of GF(2)^n stored as an RREF basis."""

    __slots__ = ("basis", "pivot_cols", "n_cols")

    def __init__(self, basis: list[int], pivot_cols: list[int], n_cols: int):
        self.basis = basis
        self.pivot_cols = pivot_cols
        self.n_cols = n_cols

    @classmethod
    def span(cls, rows: Iterable[int], n_cols: int) -> "Subspace":
        basis, cols = rref(list(rows))
        return cls(basis, cols, n_cols)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def reduce(self, v: int) -> int:
        for c, row in zip(self.pivot_cols, self.basis):
            if (v >> c) & 1:
                v ^= row
        return v

    def contains(self, v: int) -> bool:
        return self.reduce(v) == 0

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Subspace)
            and self.n_cols == other.n_cols
            and self.basis == other.basis
        )

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.n_cols})"


def in_span(v: int, space: Subspace) -> bool:
    return space.contains(v)


def nullspace(m: BitMatrix) -> Subspace:
    """Basis of {v : M v = 0}; dimension is n_cols - rank2(M)."""
    basis_rows, pivot_cols = rref(m)
    pivot_set = set(pivot_cols)
    free_cols = [c for c in range(m.n_cols) if c not in pivot_set]
    vectors = []
    for f in free_cols:
        v = 1 << f
        for p, row in zip(pivot_cols, basis_rows):
            if (row >> f) & 1:
                v |= 1 << p
        vectors.append(v)
    return Subspace.span(vectors, m.n_cols)


def restrict_vector(v: int, cols: Sequence[int]) -> int:
    """Project a bit vector onto the listed coordinates, in their order."""
    out = 0
    for k, c in enumerate(cols):
        if (v >> c) & 1:
            out |= 1 << k
    return out


def restrict_rows(rows: Iterable[int], cols: Sequence[int]) -> list[int]:
    return [restrict_vector(r, cols) for r in rows]


def kernel_intersection_dim(space: Subspace, kept_cols: Sequence[int]) -> int:
    """dim {c in space : c restricted to kept_cols is zero}."""
    return space.dim - rank2(restrict_rows(space.basis, kept_cols))


def kernel_intersection_basis(space: Subspace, kept_cols: Sequence[int]) -> list[int]:
    """Basis of {c in space : c restricted to kept_cols is zero}.

    Coefficient vectors come from the nullspace of the restricted basis
    viewed column-wise, then get recombined into ambient vectors.
    """
    restricted = restrict_rows(space.basis, kept_cols)
    coeffs = nullspace(BitMatrix(restricted, len(kept_cols)).transpose())
    out = []
    for alpha in coeffs.basis:
        v = 0
        a = alpha
        while a:
            low = a & -a
            v ^= space.basis[low.bit_length() - 1]
            a ^= low
        out.append(v)
    return out


def vec_from_bits(bits: Iterable[int]) -> int:
    v = 0
    for j, b in enumerate(bits):
        if b & 1:
            v |= 1 << j
    return v


def vec_to_bits(v: int, n: int) -> np.ndarray:
    out = np.zeros(n, dtype=np.uint8)
    while v:
        low = v & -v
        out[low.bit_length() - 1] = 1
        v ^= low
    return out


def ones_vector(n: int) -> int:
    return (1 << n) - 1
