import random
from fractions import Fraction

import pytest

from locco import (AugmentedColumnSpec, AugmentedRowSpec, CechComplexSpec,
                   Integers, LocalComplexSpec, PrimeField, Rationals,
                   SimplicialComplexSpec, TotalComplexSpec, assemble_matrix,
                   bareiss_determinant, check_smith_certificate,
                   cohomology_profile, field_cohomology, integer_cohomology,
                   kernel_basis, matrix_rank, rank_in_quotient,
                   smith_normal_form)
from locco.homology import BoundaryMatrix, rank_int, rank_mod_p
from locco.cli import load_bundled_model

Q = Rationals()
Z5 = PrimeField(5)


def oracle_rank_fraction(dense):
    """Independent dense Gaussian elimination over the rationals."""
    rows = [[Fraction(x) for x in row] for row in dense if any(row)]
    rank = 0
    col = 0
    ncols = len(rows[0]) if rows else 0
    while rank < len(rows) and col < ncols:
        piv = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        lead = rows[rank][col]
        rows[rank] = [x / lead for x in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[rank])]
        rank += 1
        col += 1
    return rank


def oracle_rank_mod_p(dense, p):
    rows = [[x % p for x in row] for row in dense]
    rows = [row for row in rows if any(row)]
    rank = 0
    col = 0
    ncols = len(rows[0]) if rows else 0
    while rank < len(rows) and col < ncols:
        piv = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], p - 2, p)
        rows[rank] = [(x * inv) % p for x in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col]:
                f = rows[r][col]
                rows[r] = [(x - f * y) % p for x, y in zip(rows[r], rows[rank])]
        rank += 1
        col += 1
    return rank


def random_int_matrix(rng, nrows, ncols, density=0.5, spread=4):
    return [[rng.randrange(-spread, spread + 1) if rng.random() < density else 0
             for _ in range(ncols)] for _ in range(nrows)]


def to_sparse(dense):
    return [{c: v for c, v in enumerate(row) if v} for row in dense]


def test_rank_int_against_fraction_oracle():
    rng = random.Random(1)
    for _ in range(30):
        dense = random_int_matrix(rng, rng.randrange(1, 8), rng.randrange(1, 8))
        assert rank_int(to_sparse(dense)) == oracle_rank_fraction(dense)


def test_rank_mod_p_against_oracle():
    rng = random.Random(2)
    for p in (2, 3, 5):
        for _ in range(20):
            dense = random_int_matrix(rng, rng.randrange(1, 7), rng.randrange(1, 7))
            assert rank_mod_p(to_sparse(dense), p) == oracle_rank_mod_p(dense, p)


def test_matrix_rank_dispatch():
    dense = [[2, 0], [0, 5]]
    mat = BoundaryMatrix(row_labels=("a", "b"), col_labels=("x", "y"),
                         rows=tuple(to_sparse(dense)))
    assert matrix_rank(mat, Q) == 2
    assert matrix_rank(mat, Integers()) == 2
    assert matrix_rank(mat, Z5) == 1


def test_bareiss_determinant():
    assert bareiss_determinant([[1, 2], [3, 4]]) == -2
    assert bareiss_determinant([[2, 0, 1], [1, 1, 0], [0, 3, 1]]) == 5
    assert bareiss_determinant([[1, 1], [1, 1]]) == 0
    assert bareiss_determinant([]) == 1


def test_smith_normal_form_known_case():
    dec = smith_normal_form([[2, 4], [6, 8]])
    assert dec.invariants == (2, 4)
    assert check_smith_certificate([[2, 4], [6, 8]], dec)


def test_smith_normal_form_random_certified():
    rng = random.Random(3)
    for _ in range(25):
        dense = random_int_matrix(rng, rng.randrange(1, 6), rng.randrange(1, 6),
                                  density=0.7)
        dec = smith_normal_form(dense)
        assert check_smith_certificate(dense, dec)
        assert dec.rank == oracle_rank_fraction(dense)
        for a, b in zip(dec.invariants, dec.invariants[1:]):
            assert b % a == 0


def test_smith_rejects_nonintegers():
    with pytest.raises(Exception):
        smith_normal_form([[Fraction(1, 2)]])


def test_kernel_basis_annihilates():
    rng = random.Random(4)
    m = load_bundled_model("hexagon")
    spec = LocalComplexSpec(m)
    mat = assemble_matrix(spec, 1)
    basis = kernel_basis(mat, Q)
    assert len(basis) == len(mat.col_labels) - matrix_rank(mat, Q)
    for vec in basis:
        for row in mat.rows:
            assert sum(Fraction(c) * vec[j] for j, c in row.items()) == 0


def test_rank_in_quotient():
    one = [Fraction(1), Fraction(0)]
    two = [Fraction(0), Fraction(1)]
    assert rank_in_quotient([one, two], [one], Q) == 1
    assert rank_in_quotient([one], [one], Q) == 0
    assert rank_in_quotient([two], [], Q) == 1


def test_frozen_profiles():
    interval = load_bundled_model("interval")
    assert field_cohomology(LocalComplexSpec(interval), Q, 1) == [1, 0]
    hexagon = load_bundled_model("hexagon")
    assert field_cohomology(CechComplexSpec(hexagon), Q, 1) == [1, 1]
    assert field_cohomology(TotalComplexSpec(hexagon), Z5, 1) == [1, 1]
    triangle = load_bundled_model("triangle")
    assert field_cohomology(LocalComplexSpec(triangle), Q, 2) == [1, 0, 0]


def test_projective_plane_torsion():
    rp2 = load_bundled_model("projective_plane")
    spec = SimplicialComplexSpec(rp2.complex, rp2.point_key)
    assert integer_cohomology(spec, 2) == [(1, ()), (0, ()), (0, (2,))]
    assert field_cohomology(spec, Q, 2) == [1, 0, 0]
    assert field_cohomology(spec, Z5, 2) == [1, 0, 0]


def test_field_and_integer_ranks_agree_when_torsion_free():
    m = load_bundled_model("z6_arcs")
    spec = SimplicialComplexSpec(m.complex, m.point_key)
    over_q = field_cohomology(spec, Q, 1)
    over_z = integer_cohomology(spec, 1)
    assert [free for free, _ in over_z] == over_q
    assert all(torsion == () for _, torsion in over_z)


def test_augmented_rows_and_columns_are_exact():
    m = load_bundled_model("hexagon")
    for q in (0, 1):
        assert cohomology_profile(AugmentedRowSpec(m, q), Q, 2) == [0, 0, 0]
    for indices in [(0,), (0, 1)]:
        assert cohomology_profile(AugmentedColumnSpec(m, indices), Q, 2) == [0, 0, 0]


def test_integer_profile_dispatch():
    m = load_bundled_model("interval")
    prof = cohomology_profile(LocalComplexSpec(m), Integers(), 1)
    assert prof == [(1, ()), (0, ())]
