"""The standard alternating form on GF(q)^(2nu), subspace types, and the
symplectic group together with the semilinear maps built from it.

K = [[0, I], [-I, 0]]; e_i is the i-th unit vector and f_i = e_{nu+i}.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .gf import FieldAut, FieldSpec, apply_aut, compose_auts, list_auts
from .linalg import (
    DimensionError,
    Matrix,
    Subspace,
    inverse_matrix,
    kernel,
    matmul_rows,
    projective_points,
    rank_rows,
    scale_vec,
    span,
)


class InvariantViolation(AssertionError):
    """An identity that holds for every alternating form failed."""


class TypeMismatch(ValueError):
    pass


@dataclass(frozen=True)
class SympType:
    m: int
    s: int

    def __iter__(self):
        return iter((self.m, self.s))

    def __str__(self) -> str:
        return f"({self.m},{self.s})"


@dataclass(frozen=True)
class SympSpace:
    nu: int
    spec: FieldSpec

    def __post_init__(self):
        if self.nu < 1:
            raise ValueError("nu must be at least 1")

    @property
    def dim(self) -> int:
        return 2 * self.nu

    @property
    def q(self) -> int:
        return self.spec.q

    @property
    def K(self) -> Matrix:
        n, nu, minus = self.dim, self.nu, self.spec.neg(1)
        rows = []
        for i in range(n):
            r = [0] * n
            if i < nu:
                r[i + nu] = 1
            else:
                r[i - nu] = minus
            rows.append(tuple(r))
        return Matrix(self.spec, tuple(rows), n)

    def e(self, i: int) -> tuple[int, ...]:
        """1-based unit vector e_i, 1 <= i <= 2nu."""
        return tuple(int(j == i - 1) for j in range(self.dim))

    def f(self, i: int) -> tuple[int, ...]:
        return self.e(self.nu + i)

    def subspace(self, *vectors) -> Subspace:
        return span(self.spec, vectors, self.dim)

    def frame_points(self) -> list[Subspace]:
        """[e_1], ..., [e_nu], [f_1], ..., [f_nu]."""
        return [self.subspace(self.e(i)) for i in range(1, self.dim + 1)]


def inner(sp: SympSpace, a, b) -> int:
    """a K tb = sum_i a_i b_{nu+i} - a_{nu+i} b_i."""
    n = sp.dim
    if len(a) != n or len(b) != n:
        raise DimensionError(f"vectors must have length {n}")
    spec, nu = sp.spec, sp.nu
    add, mul = spec.add, spec.mul
    acc = 0
    for i in range(nu):
        x = mul(a[i], b[nu + i])
        y = mul(a[nu + i], b[i])
        if x != y:
            acc = add(acc, spec.sub(x, y))
    return acc


def gram(sp: SympSpace, rows_a, rows_b=None) -> list[list[int]]:
    rows_b = rows_a if rows_b is None else rows_b
    return [[inner(sp, a, b) for b in rows_b] for a in rows_a]


def type_of(sp: SympSpace, P: Subspace) -> SympType:
    if P.ambient_dim != sp.dim:
        raise DimensionError("subspace is not in this symplectic space")
    g = gram(sp, P.basis)
    r = rank_rows(sp.spec, g, P.dim) if P.dim else 0
    if r % 2:
        raise InvariantViolation(f"odd Gram rank {r} for {P}")
    return SympType(P.dim, r // 2)


def dual(sp: SympSpace, P: Subspace) -> Subspace:
    """All vectors orthogonal to P: the kernel of P K."""
    if P.ambient_dim != sp.dim:
        raise DimensionError("subspace is not in this symplectic space")
    if P.dim == 0:
        return span(sp.spec, [sp.e(i) for i in range(1, sp.dim + 1)], sp.dim)
    PK = matmul_rows(sp.spec, P.basis, sp.K.rows, sp.dim)
    return kernel(Matrix(sp.spec, PK, sp.dim))


def orthogonal(sp: SympSpace, A: Subspace, B: Subspace) -> bool:
    """A K tB == 0, evaluated as the full product."""
    return all(inner(sp, a, b) == 0 for a in A.basis for b in B.basis)


# --- symplectic matrices ----------------------------------------------------

def is_symplectic(sp: SympSpace, T: Matrix) -> bool:
    return multiplier(sp, T) == 1


def multiplier(sp: SympSpace, T: Matrix) -> int | None:
    """lam if T K tT == lam K for a nonzero lam, else None."""
    if T.shape != (sp.dim, sp.dim):
        raise DimensionError(f"expected a {sp.dim}x{sp.dim} matrix, got {T.shape}")
    g = gram(sp, T.rows)
    lam = g[0][sp.nu]
    if lam == 0:
        return None
    K = sp.K.rows
    mul = sp.spec.mul
    for i in range(sp.dim):
        for j in range(sp.dim):
            if g[i][j] != mul(lam, K[i][j]):
                return None
    return lam


@dataclass(frozen=True)
class SympMatrix:
    T: Matrix
    certified: bool = field(default=False)

    @property
    def rows(self):
        return self.T.rows


def certify(sp: SympSpace, T: Matrix) -> SympMatrix:
    if not is_symplectic(sp, T):
        raise ValueError("matrix does not satisfy T K tT = K")
    return SympMatrix(T, True)


def _require_certified(T) -> SympMatrix:
    if not isinstance(T, SympMatrix) or not T.certified:
        raise ValueError("an uncertified matrix cannot act as a symplectic map")
    return T


def diag_matrix(sp: SympSpace, k) -> Matrix:
    """diag(k_1..k_nu, k_1^-1..k_nu^-1)."""
    spec = sp.spec
    entries = list(k) + [spec.inv(x) for x in k]
    return Matrix(spec, tuple(tuple(entries[i] if i == j else 0 for j in range(sp.dim))
                              for i in range(sp.dim)), sp.dim)


def similitude_matrix(sp: SympSpace, lam: int) -> Matrix:
    """diag(1..1, lam..lam), which scales the form by lam."""
    entries = [1] * sp.nu + [lam] * sp.nu
    return Matrix(sp.spec, tuple(tuple(entries[i] if i == j else 0 for j in range(sp.dim))
                                 for i in range(sp.dim)), sp.dim)


def transvection(sp: SympSpace, v, lam: int) -> Matrix:
    """Matrix of x -> x + lam (x K tv) v acting on row vectors."""
    rows = []
    for i in range(1, sp.dim + 1):
        ei = sp.e(i)
        c = sp.spec.mul(lam, inner(sp, ei, v))
        rows.append(tuple(sp.spec.add(a, sp.spec.mul(c, b)) for a, b in zip(ei, v)))
    return Matrix(sp.spec, tuple(rows), sp.dim)


def transvections(sp: SympSpace) -> list[SympMatrix]:
    """One transvection per (projective point, nonzero scalar)."""
    out = []
    for v in projective_points(sp.spec, sp.dim):
        for lam in range(1, sp.q):
            out.append(certify(sp, transvection(sp, v, lam)))
    return out


# --- constructive transitivity ----------------------------------------------

def _perp_basis(sp: SympSpace, vecs) -> list[tuple[int, ...]]:
    return list(dual(sp, span(sp.spec, vecs, sp.dim)).basis)


def _deflate(sp: SympSpace, x, u, w):
    """Project x onto the complement of the hyperbolic pair (u, w), inner(u, w) = 1."""
    spec = sp.spec
    a = inner(sp, x, w)
    b = inner(sp, x, u)
    out = list(x)
    if a:
        out = [spec.sub(xi, spec.mul(a, ui)) for xi, ui in zip(out, u)]
    if b:
        out = [spec.add(xi, spec.mul(b, wi)) for xi, wi in zip(out, w)]
    return tuple(out)


def extend_symplectic_basis(sp: SympSpace, P: Subspace) -> SympMatrix:
    """A symplectic frame u_1..u_nu, w_1..w_nu (the rows of the result) such
    that u_1..u_s, w_1..w_s, u_{s+1}..u_{m-s} is a basis of P."""
    spec = sp.spec
    if P.dim == 0 or P.dim >= sp.dim:
        raise ValueError("a nontrivial subspace is required")
    t = type_of(sp, P)

    pairs: list[tuple[tuple, tuple]] = []
    rest = list(P.basis)
    while True:
        hit = None
        for i, x in enumerate(rest):
            for j, y in enumerate(rest):
                if inner(sp, x, y):
                    hit = (i, j)
                    break
            if hit:
                break
        if hit is None:
            break
        i, j = hit
        u = rest[i]
        w = scale_vec(spec, spec.inv(inner(sp, u, rest[j])), rest[j])
        pairs.append((u, w))
        rest = [_deflate(sp, x, u, w) for k, x in enumerate(rest) if k not in (i, j)]
    if len(pairs) != t.s or len(rest) != t.m - 2 * t.s:
        raise InvariantViolation(f"deflation of {P} found {len(pairs)} pairs for type {t}")

    radical = rest
    for idx, r in enumerate(radical):
        constraints = [v for pr in pairs for v in pr] + [x for k, x in enumerate(radical) if k > idx]
        candidates = _perp_basis(sp, constraints)
        c = next(c for c in candidates if inner(sp, r, c))
        pairs.append((r, scale_vec(spec, spec.inv(inner(sp, r, c)), c)))

    while len(pairs) < sp.nu:
        W = _perp_basis(sp, [v for pr in pairs for v in pr])
        x = W[0]
        y = next(y for y in W if inner(sp, x, y))
        pairs.append((x, scale_vec(spec, spec.inv(inner(sp, x, y)), y)))

    rows = tuple(u for u, _ in pairs) + tuple(w for _, w in pairs)
    M = Matrix(spec, rows, sp.dim)
    if not is_symplectic(sp, M):
        raise InvariantViolation(f"frame built for {P} is not symplectic")
    return SympMatrix(M, True)


def adapted_rows(sp: SympSpace, frame: SympMatrix, t: SympType):
    nu = sp.nu
    rows = frame.rows
    return rows[:t.s] + rows[nu:nu + t.s] + rows[t.s:t.m - t.s]


def transitivity_witness(sp: SympSpace, A: Subspace, B: Subspace) -> SympMatrix:
    """A symplectic T with A T = B, for subspaces of equal type."""
    ta, tb = type_of(sp, A), type_of(sp, B)
    if ta != tb:
        raise TypeMismatch(f"types differ: {ta} vs {tb}")
    MA = extend_symplectic_basis(sp, A)
    MB = extend_symplectic_basis(sp, B)
    return certify(sp, inverse_matrix(MA.T) @ MB.T)


# --- actions on subspaces ---------------------------------------------------

def act_linear(sp: SympSpace, T: Matrix, P: Subspace) -> Subspace:
    return span(sp.spec, matmul_rows(sp.spec, P.basis, T.rows, sp.dim), sp.dim)


def act_matrix(sp: SympSpace, T: SympMatrix, P: Subspace) -> Subspace:
    return act_linear(sp, _require_certified(T).T, P)


def act_field_aut(sp: SympSpace, pi: FieldAut, P: Subspace) -> Subspace:
    if pi.is_identity:
        return P
    spec = sp.spec
    return span(spec, [tuple(apply_aut(spec, pi, x) for x in r) for r in P.basis], sp.dim)


@dataclass(frozen=True)
class AutDescriptor:
    k: tuple[int, ...]
    pi: FieldAut = FieldAut(0)
    T: SympMatrix | None = None

    def to_json(self) -> dict:
        from .linalg import format_rows
        return {"k": list(self.k), "pi": self.pi.j,
                "T": format_rows(self.T.rows) if self.T is not None else None}


def _check_descriptor(sp: SympSpace, d: AutDescriptor) -> None:
    if len(d.k) != sp.nu:
        raise ValueError(f"descriptor needs {sp.nu} scalars, got {len(d.k)}")
    if any(x == 0 for x in d.k):
        raise ValueError("descriptor scalars must be nonzero")
    if not 0 <= d.pi.j < sp.spec.e:
        raise ValueError(f"no field automorphism with exponent {d.pi.j}")


def act_descriptor(sp: SympSpace, d: AutDescriptor, P: Subspace) -> Subspace:
    """sigma_pi, then diag(k, k^-1), then T if present."""
    _check_descriptor(sp, d)
    X = act_field_aut(sp, d.pi, P)
    if any(x != 1 for x in d.k):
        X = act_linear(sp, diag_matrix(sp, d.k), X)
    if d.T is not None:
        X = act_matrix(sp, d.T, X)
    return X


def compose_descriptors(sp: SympSpace, d1: AutDescriptor, d2: AutDescriptor) -> AutDescriptor:
    """The descriptor acting as d1 after d2 (both without T):
    (k, pi)(k', pi') = (k pi(k'), pi pi')."""
    if d1.T is not None or d2.T is not None:
        raise ValueError("composition is defined for descriptors without a matrix part")
    spec = sp.spec
    k = tuple(spec.mul(a, apply_aut(spec, d1.pi, b)) for a, b in zip(d1.k, d2.k))
    return AutDescriptor(k, compose_auts(spec, d1.pi, d2.pi))


def all_descriptors(sp: SympSpace) -> list[AutDescriptor]:
    units = range(1, sp.q)
    return [AutDescriptor(tuple(k), pi)
            for pi in list_auts(sp.spec)
            for k in itertools.product(units, repeat=sp.nu)]
