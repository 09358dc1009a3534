"""Dense matrices and canonical subspaces over GF(q).

Vectors are row vectors: tuples of element codes.  A subspace is stored by
its reduced row echelon basis, so two subspaces are equal exactly when their
bases are equal entrywise.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .gf import FieldSpec

Vector = tuple[int, ...]


class DimensionError(ValueError):
    pass


@dataclass(frozen=True)
class Matrix:
    spec: FieldSpec
    rows: tuple[Vector, ...]
    ncols: int

    def __post_init__(self):
        q = self.spec.q
        for r in self.rows:
            if len(r) != self.ncols:
                raise DimensionError(f"row of length {len(r)} in a {self.ncols}-column matrix")
            for x in r:
                if not 0 <= x < q:
                    raise ValueError(f"entry {x} out of range for {self.spec}")

    @classmethod
    def of(cls, spec: FieldSpec, rows, ncols: int | None = None) -> "Matrix":
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        if ncols is None:
            if not rows:
                raise DimensionError("cannot infer width of an empty matrix")
            ncols = len(rows[0])
        return cls(spec, rows, ncols)

    @classmethod
    def identity(cls, spec: FieldSpec, n: int) -> "Matrix":
        return cls(spec, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), n)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), self.ncols)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        return Matrix(self.spec, matmul_rows(self.spec, self.rows, other.rows, other.ncols), other.ncols)

    def transpose(self) -> "Matrix":
        if not self.rows:
            return Matrix(self.spec, tuple(() for _ in range(self.ncols)), 0)
        return Matrix(self.spec, tuple(zip(*self.rows)), len(self.rows))

    @property
    def T(self) -> "Matrix":
        return self.transpose()

    def scale(self, c: int) -> "Matrix":
        return Matrix(self.spec, tuple(scale_vec(self.spec, c, r) for r in self.rows), self.ncols)

    def map_entries(self, fn) -> "Matrix":
        return Matrix(self.spec, tuple(tuple(fn(x) for x in r) for r in self.rows), self.ncols)

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.rows for x in r)


# --- row-level kernels ------------------------------------------------------

def scale_vec(spec: FieldSpec, c: int, v) -> Vector:
    mul = spec.mul
    return tuple(mul(c, x) for x in v)


def axpy(spec: FieldSpec, c: int, x, y) -> Vector:
    """y + c*x"""
    add, mul = spec.add, spec.mul
    return tuple(add(b, mul(c, a)) for a, b in zip(x, y))


def add_vec(spec: FieldSpec, x, y) -> Vector:
    add = spec.add
    return tuple(add(a, b) for a, b in zip(x, y))


def dot(spec: FieldSpec, x, y) -> int:
    add, mul = spec.add, spec.mul
    acc = 0
    for a, b in zip(x, y):
        if a and b:
            acc = add(acc, mul(a, b))
    return acc


def vec_mat(spec: FieldSpec, v, rows, ncols: int) -> Vector:
    """Row vector times matrix."""
    add, mul = spec.add, spec.mul
    out = [0] * ncols
    for a, r in zip(v, rows):
        if a:
            for j, b in enumerate(r):
                if b:
                    out[j] = add(out[j], mul(a, b))
    return tuple(out)


def matmul_rows(spec: FieldSpec, a_rows, b_rows, ncols: int) -> tuple[Vector, ...]:
    return tuple(vec_mat(spec, r, b_rows, ncols) for r in a_rows)


def rref_rows(spec: FieldSpec, rows, ncols: int) -> tuple[list[list[int]], list[int]]:
    """Gauss-Jordan elimination; returns (nonzero RREF rows, pivot columns)."""
    add, mul, inv, neg = spec.add, spec.mul, spec.inv, spec.neg
    work = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == len(work):
            break
        piv = next((i for i in range(r, len(work)) if work[i][c]), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        row = work[r]
        if row[c] != 1:
            s = inv(row[c])
            row = [mul(s, x) for x in row]
            work[r] = row
        for i in range(len(work)):
            if i != r and work[i][c]:
                f = neg(work[i][c])
                wi = work[i]
                work[i] = [add(x, mul(f, y)) if y else x for x, y in zip(wi, row)]
        pivots.append(c)
        r += 1
    return work[:r], pivots


def rank_rows(spec: FieldSpec, rows, ncols: int) -> int:
    return len(rref_rows(spec, rows, ncols)[1])


# --- public matrix operations ----------------------------------------------

def rref(M: Matrix) -> tuple[Matrix, int, list[int]]:
    rows, pivots = rref_rows(M.spec, M.rows, M.ncols)
    return Matrix(M.spec, tuple(tuple(r) for r in rows), M.ncols), len(pivots), pivots


def rank(M: Matrix) -> int:
    return rank_rows(M.spec, M.rows, M.ncols)


def inverse_matrix(M: Matrix) -> Matrix:
    n = M.nrows
    if n != M.ncols:
        raise DimensionError("only square matrices are invertible")
    aug = [tuple(r) + tuple(int(i == j) for j in range(n)) for i, r in enumerate(M.rows)]
    rows, pivots = rref_rows(M.spec, aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(rows) < n:
        raise ValueError("matrix is singular")
    return Matrix(M.spec, tuple(tuple(r[n:]) for r in rows[:n]), n)


# --- subspaces --------------------------------------------------------------

@dataclass(frozen=True)
class Subspace:
    """Row space of ``basis``, which is always in RREF."""

    spec: FieldSpec
    basis: tuple[Vector, ...]
    ambient_dim: int

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(i for i, x in enumerate(r) if x) for r in self.basis)

    def matrix(self) -> Matrix:
        return Matrix(self.spec, self.basis, self.ambient_dim)

    def vectors(self):
        """All q**dim vectors of the subspace."""
        return span_vectors(self.spec, self.basis, self.ambient_dim)

    def __str__(self) -> str:
        return format_rows(self.basis) if self.basis else "0"


def canonicalize(M, ambient_dim: int | None = None) -> Subspace:
    """Canonical subspace spanned by the rows of ``M``."""
    if ambient_dim is None:
        ambient_dim = M.ncols
    if M.ncols != ambient_dim:
        raise DimensionError(f"matrix has {M.ncols} columns, ambient dimension is {ambient_dim}")
    return span(M.spec, M.rows, ambient_dim)


def span(spec: FieldSpec, rows, ambient_dim: int) -> Subspace:
    basis, _ = rref_rows(spec, rows, ambient_dim)
    return Subspace(spec, tuple(tuple(r) for r in basis), ambient_dim)


def kernel(M: Matrix) -> Subspace:
    """{v : M tv = 0} as a subspace of the column space dimension."""
    spec, n = M.spec, M.ncols
    rows, pivots = rref_rows(spec, M.rows, n)
    free = [c for c in range(n) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [0] * n
        v[f] = 1
        for r, pc in zip(rows, pivots):
            v[pc] = spec.neg(r[f])
        basis.append(v)
    return span(spec, basis, n)


def _check_pair(A: Subspace, B: Subspace) -> None:
    if A.ambient_dim != B.ambient_dim or A.spec != B.spec:
        raise DimensionError("subspaces live in different ambient spaces")


def subspace_sum(A: Subspace, B: Subspace) -> Subspace:
    _check_pair(A, B)
    return span(A.spec, A.basis + B.basis, A.ambient_dim)


def intersect(A: Subspace, B: Subspace) -> Subspace:
    """Zassenhaus: eliminate [A|A] over [B|0]; rows of the form [0|w] span A∩B."""
    _check_pair(A, B)
    n = A.ambient_dim
    zero = (0,) * n
    block = [a + a for a in A.basis] + [b + zero for b in B.basis]
    rows, pivots = rref_rows(A.spec, block, 2 * n)
    inter = [r[n:] for r, pc in zip(rows, pivots) if pc >= n]
    return span(A.spec, inter, n)


def contains(A: Subspace, v) -> bool:
    if len(v) != A.ambient_dim:
        raise DimensionError("vector length does not match ambient dimension")
    spec = A.spec
    w = list(v)
    for r in A.basis:
        pc = next(i for i, x in enumerate(r) if x)
        if w[pc]:
            w = list(axpy(spec, spec.neg(w[pc]), r, w))
    return not any(w)


def is_subspace_of(A: Subspace, B: Subspace) -> bool:
    return all(contains(B, v) for v in A.basis)


def span_vectors(spec: FieldSpec, basis, n: int):
    zero = (0,) * n
    for coeffs in itertools.product(range(spec.q), repeat=len(basis)):
        v = zero
        for c, r in zip(coeffs, basis):
            if c:
                v = axpy(spec, c, r, v)
        yield v


def normalize(spec: FieldSpec, v) -> Vector:
    """Scale a nonzero vector so its first nonzero coordinate is 1."""
    lead = next(x for x in v if x)
    return tuple(v) if lead == 1 else scale_vec(spec, spec.inv(lead), v)


def projective_points(spec: FieldSpec, n: int) -> list[Vector]:
    """Normalized representatives of the 1-dim subspaces of GF(q)^n, in code order."""
    return [v for v in itertools.product(range(spec.q), repeat=n)
            if any(v) and v[next(i for i, x in enumerate(v) if x)] == 1]


# --- text format ------------------------------------------------------------

def format_rows(rows) -> str:
    return ";".join(",".join(str(x) for x in r) for r in rows)


def parse_rows(text: str) -> list[list[int]]:
    text = text.strip()
    if not text:
        return []
    try:
        rows = [[int(x) for x in part.split(",")] for part in text.split(";")]
    except ValueError:
        raise ValueError(f"cannot parse matrix text {text!r}") from None
    if len({len(r) for r in rows}) != 1:
        raise ValueError(f"ragged matrix text {text!r}")
    return rows


def parse_subspace(spec: FieldSpec, text: str, ambient_dim: int) -> Subspace:
    rows = parse_rows(text)
    if rows and len(rows[0]) != ambient_dim:
        raise DimensionError(f"{text!r} does not have {ambient_dim} coordinates")
    return canonicalize(Matrix.of(spec, rows, ambient_dim), ambient_dim)


def parse_matrix(spec: FieldSpec, text: str) -> Matrix:
    return Matrix.of(spec, parse_rows(text))
