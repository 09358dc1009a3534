import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import all_subspaces, brute_type, orth_complement
from spi.gf import FieldAut, make_field
from spi.linalg import Matrix, span, subspace_sum
from spi.symplectic import (
    AutDescriptor,
    SympSpace,
    SympType,
    TypeMismatch,
    act_descriptor,
    act_field_aut,
    act_linear,
    act_matrix,
    adapted_rows,
    all_descriptors,
    certify,
    compose_descriptors,
    diag_matrix,
    dual,
    extend_symplectic_basis,
    inner,
    is_symplectic,
    multiplier,
    orthogonal,
    similitude_matrix,
    transitivity_witness,
    transvections,
    type_of,
    SympMatrix,
)

S42 = SympSpace(2, make_field(2))
S43 = SympSpace(2, make_field(3))
S44 = SympSpace(2, make_field(2, 2))
S62 = SympSpace(3, make_field(2))


def rand_vec(rng, sp):
    return tuple(rng.randrange(sp.q) for _ in range(sp.dim))


def test_K_layout():
    K = S43.K.rows
    assert K == ((0, 0, 1, 0), (0, 0, 0, 1), (2, 0, 0, 0), (0, 2, 0, 0))


def test_inner_frame_relations():
    for sp in (S42, S43, S62):
        nu = sp.nu
        for i in range(1, nu + 1):
            for j in range(1, nu + 1):
                assert inner(sp, sp.e(i), sp.e(j)) == 0
                assert inner(sp, sp.f(i), sp.f(j)) == 0
                assert inner(sp, sp.e(i), sp.f(j)) == int(i == j)
    assert inner(S42, S42.e(1), S42.f(1)) == 1
    assert inner(S42, S42.e(1), S42.e(2)) == 0


@pytest.mark.parametrize("sp", [S42, S43, S44, S62])
def test_form_is_alternating(sp):
    rng = random.Random(7)
    neg = sp.spec.neg
    for _ in range(50):
        a, b = rand_vec(rng, sp), rand_vec(rng, sp)
        assert inner(sp, a, a) == 0
        assert inner(sp, a, b) == neg(inner(sp, b, a))
    with pytest.raises(ValueError):
        inner(sp, (1, 0), (0, 1))


def test_type_examples():
    sp = S42
    assert type_of(sp, sp.subspace(sp.e(1))) == SympType(1, 0)
    assert type_of(sp, sp.subspace(sp.e(1), sp.f(1))) == SympType(2, 1)
    assert type_of(sp, sp.subspace(sp.e(1), sp.e(2), sp.f(1))) == SympType(3, 1)


def test_dual_examples():
    S2 = SympSpace(1, make_field(3))
    assert dual(S2, S2.subspace(S2.e(1))) == S2.subspace(S2.e(1))
    sp = S42
    A = sp.subspace(sp.e(1), sp.e(2), sp.e(3))
    assert dual(sp, A) == sp.subspace(sp.e(2))
    assert dual(sp, sp.subspace(sp.e(1))) == sp.subspace(sp.e(1), sp.e(2), sp.f(2))


@pytest.mark.parametrize("sp", [S42, S43])
def test_type_and_dual_against_vector_sets(sp):
    for S in all_subspaces(sp.spec, sp.dim):
        P = span(sp.spec, [v for v in sorted(S) if any(v)], sp.dim)
        t = type_of(sp, P)
        assert (t.m, t.s) == brute_type(sp, S)
        D = dual(sp, P)
        assert frozenset(D.vectors()) == orth_complement(sp, S)
        assert D.dim == sp.dim - P.dim
        assert dual(sp, D) == P


def test_is_symplectic_examples():
    assert is_symplectic(S43, Matrix.identity(S43.spec, 4))
    for sp in (S43, S44):
        for k in [(1, 2), (2, 2), (2, 1)] if sp.q == 3 else [(2, 3), (3, 3)]:
            assert is_symplectic(sp, diag_matrix(sp, k))
    D = Matrix.of(S43.spec, [[2, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    assert not is_symplectic(S43, D)
    with pytest.raises(ValueError):
        is_symplectic(S43, Matrix.identity(S43.spec, 3))


def test_similitude_scales_form():
    T = similitude_matrix(S43, 2)
    assert not is_symplectic(S43, T)
    assert multiplier(S43, T) == 2


def test_transvection_counts_and_certification():
    assert len(transvections(S42)) == 15
    ts = transvections(S43)
    assert len(ts) == 80
    assert all(t.certified and is_symplectic(S43, t.T) for t in ts)


def test_transvections_fix_their_direction():
    from spi.linalg import projective_points, vec_mat
    for sp in (S42, S43):
        pts = projective_points(sp.spec, sp.dim)
        ts = transvections(sp)
        lams = sp.q - 1
        for i, v in enumerate(pts):
            for T in ts[i * lams:(i + 1) * lams]:
                assert vec_mat(sp.spec, v, T.rows, sp.dim) == v


def test_transvections_transitive_on_nonzero_vectors():
    from spi.linalg import vec_mat
    for sp in (S42, S43):
        ts = transvections(sp)
        start = sp.e(1)
        seen, queue = {start}, [start]
        for x in queue:
            for T in ts:
                y = vec_mat(sp.spec, x, T.rows, sp.dim)
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        assert len(seen) == sp.q ** sp.dim - 1


def _check_frame(sp, P):
    M = extend_symplectic_basis(sp, P)
    assert M.certified and is_symplectic(sp, M.T)
    t = type_of(sp, P)
    assert span(sp.spec, adapted_rows(sp, M, t), sp.dim) == P
    return M


def test_extend_symplectic_basis_examples():
    sp = S42
    M = _check_frame(sp, sp.subspace(sp.e(1)))
    assert M.rows[0] == sp.e(1)
    M = _check_frame(sp, sp.subspace(sp.e(1), sp.f(1)))
    assert M.rows[0] == sp.e(1) and M.rows[2] == sp.f(1)
    with pytest.raises(ValueError):
        extend_symplectic_basis(sp, span(sp.spec, [], 4))


@pytest.mark.parametrize("sp", [S43, S44, S62])
def test_extend_symplectic_basis_random(sp):
    rng = random.Random(11)
    seen_types = set()
    for _ in range(60):
        k = rng.randrange(1, sp.dim)
        P = span(sp.spec, [rand_vec(rng, sp) for _ in range(k)], sp.dim)
        if P.dim in (0, sp.dim):
            continue
        _check_frame(sp, P)
        seen_types.add(type_of(sp, P))
    assert len(seen_types) >= 3


def test_transitivity_witness_examples():
    sp = S42
    A = sp.subspace(sp.e(1))
    T = transitivity_witness(sp, A, A)
    assert act_matrix(sp, T, A) == A
    B = sp.subspace(sp.f(2))
    T = transitivity_witness(sp, A, B)
    assert T.certified and act_matrix(sp, T, A) == B
    with pytest.raises(TypeMismatch):
        transitivity_witness(sp, A, sp.subspace(sp.e(1), sp.e(2)))


def test_act_matrix_examples():
    sp = S43
    P = sp.subspace(sp.e(1), sp.f(2))
    I = certify(sp, Matrix.identity(sp.spec, 4))
    minus = certify(sp, Matrix.identity(sp.spec, 4).scale(2))
    assert act_matrix(sp, I, P) == P
    assert act_matrix(sp, minus, P) == P
    with pytest.raises(ValueError):
        act_matrix(sp, SympMatrix(Matrix.identity(sp.spec, 4)), P)
    T = transvections(S42)[5]
    Q = S42.subspace(S42.e(1), S42.e(2))
    assert type_of(S42, act_matrix(S42, T, Q)) == SympType(2, 0)


@settings(max_examples=60, deadline=None)
@given(st.data(), st.sampled_from([S42, S43, S44]))
def test_symplectic_action_preserves_type_and_orthogonality(data, sp):
    ts = transvections(sp)
    word = data.draw(st.lists(st.integers(0, len(ts) - 1), min_size=1, max_size=6))
    T = Matrix.identity(sp.spec, sp.dim)
    for i in word:
        T = T @ ts[i].T
    T = certify(sp, T)

    def draw_sub():
        k = data.draw(st.integers(1, sp.dim - 1))
        rows = [tuple(data.draw(st.integers(0, sp.q - 1)) for _ in range(sp.dim)) for _ in range(k)]
        return span(sp.spec, rows, sp.dim)

    A, B = draw_sub(), draw_sub()
    assert type_of(sp, act_matrix(sp, T, A)) == type_of(sp, A)
    assert orthogonal(sp, A, B) == orthogonal(sp, act_matrix(sp, T, A), act_matrix(sp, T, B))


def test_act_field_aut_examples():
    sp = S44
    P = sp.subspace((1, 2, 0, 0))
    assert act_field_aut(sp, FieldAut(0), P) == P
    assert act_field_aut(sp, FieldAut(1), P) == sp.subspace((1, 3, 0, 0))
    Q = S43.subspace((1, 2, 0, 1))
    assert act_field_aut(S43, FieldAut(0), Q) == Q


def test_act_descriptor_examples():
    sp = S43
    P = sp.subspace(sp.e(1), (0, 1, 2, 1))
    assert act_descriptor(sp, AutDescriptor((1, 1)), P) == P
    k = (2, 1)
    assert act_descriptor(sp, AutDescriptor(k), P) == act_linear(sp, diag_matrix(sp, k), P)
    assert act_descriptor(sp, AutDescriptor(k), sp.subspace(sp.e(1))) == sp.subspace(sp.e(1))
    with pytest.raises(ValueError):
        act_descriptor(sp, AutDescriptor((0, 1)), P)
    with pytest.raises(ValueError):
        act_descriptor(sp, AutDescriptor((1,)), P)


def test_descriptor_with_matrix_part():
    sp = S43
    T = transvections(sp)[3]
    d = AutDescriptor((2, 1), FieldAut(0), T)
    P = sp.subspace(sp.e(2), sp.f(1))
    assert act_descriptor(sp, d, P) == act_matrix(sp, T, act_linear(sp, diag_matrix(sp, (2, 1)), P))


def test_descriptor_composition_law_exhaustive():
    from oracles import all_subspaces
    for nu in (1, 2):
        sp = SympSpace(nu, make_field(2, 2))
        subs = [span(sp.spec, [v for v in sorted(S) if any(v)], sp.dim)
                for S in all_subspaces(sp.spec, sp.dim)] if nu == 1 else None
        if subs is None:
            rng = random.Random(3)
            subs = [span(sp.spec, [rand_vec(rng, sp) for _ in range(rng.randrange(1, 4))], sp.dim)
                    for _ in range(25)]
        ds = all_descriptors(sp)
        for d1 in ds:
            for d2 in ds:
                d12 = compose_descriptors(sp, d1, d2)
                for P in subs:
                    assert act_descriptor(sp, d12, P) == act_descriptor(sp, d1, act_descriptor(sp, d2, P))


def test_edge_sum_type_relation():
    """For orthogonal X1, X2: t(X1+X2) has s = s1 + s2 and m = m1 + m2 - dim(X1 ∩ X2)."""
    from spi.linalg import intersect
    rng = random.Random(5)
    sp = S43
    checked = 0
    while checked < 200:
        X1 = span(sp.spec, [rand_vec(rng, sp) for _ in range(rng.randrange(1, 3))], sp.dim)
        if X1.dim in (0, 4):
            continue
        D = dual(sp, X1)
        X2 = span(sp.spec, [tuple(sum(c * x for c, x in zip(cs, col)) % 3 for col in zip(*D.basis))
                            for cs in [[rng.randrange(3) for _ in D.basis] for _ in range(2)]], sp.dim)
        if X2.dim == 0:
            continue
        t1, t2 = type_of(sp, X1), type_of(sp, X2)
        ts = type_of(sp, subspace_sum(X1, X2))
        assert ts.s == t1.s + t2.s
        assert ts.m == t1.m + t2.m - intersect(X1, X2).dim
        checked += 1
