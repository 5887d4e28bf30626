import json

from fractions import Fraction

import pytest

from hbv.fields import QQ, GF
from hbv.groups import preset
from hbv.algebra import (
    AlgebraError,
    FDAlgebra,
    ModelError,
    PreconditionError,
    algebra_from_json,
    algebra_to_json,
    dual_left_integrals,
    exterior_algebra,
    find_integrals,
    frobenius_from_integral,
    group_algebra,
    group_frobenius,
    lambda_L,
    lie_pairing,
    load_algebra,
    matrix_algebra,
    s_square_conjugator,
    sweedler_algebra,
    trace_pairing,
    verify_frobenius,
)
from hbv.linalg import Matrix, rank


# -- group algebras -------------------------------------------------------------

def test_z2_f2_antipode_identity():
    a = group_algebra(preset("Z2"), GF(2))
    assert a.dim == 2
    assert a.hopf.antipode == Matrix.identity(GF(2), 2)


def test_s3_center_dimension():
    a = group_algebra(preset("S3"), QQ)
    assert a.dim == 6
    assert a.center_dim() == 3


def test_z3_f3_local():
    f = GF(3)
    a = group_algebra(preset("Z3"), f)
    g_minus_1 = [f.sub(x, y) for x, y in zip(a.basis_vector(1), a.basis_vector(0))]
    cube = a.mul_vec(a.mul_vec(g_minus_1, g_minus_1), g_minus_1)
    assert all(f.is_zero(c) for c in cube)


def test_group_algebra_hopf_axioms_all_presets():
    for name in ("Z2", "Z3", "Z4", "Z6", "S3", "D4", "Q8"):
        for field in (QQ, GF(2), GF(3)):
            a = group_algebra(preset(name), field)
            assert a.hopf is not None  # axioms asserted at construction


# -- exterior algebras ------------------------------------------------------------

def test_exterior_x3_dims():
    a = exterior_algebra([3], QQ)
    assert a.graded_dims() == {0: 1, 3: 1}
    assert a.top_degree() == 3


def test_exterior_x3x5_dims():
    a = exterior_algebra([3, 5], QQ)
    dims = [a.graded_dims().get(d, 0) for d in range(9)]
    assert dims == [1, 0, 0, 1, 0, 1, 0, 0, 1]
    assert a.top_degree() == 8


def test_exterior_square_zero():
    a = exterior_algebra([1], QQ)
    i = a.names.index("x1")
    assert a.mul_basis(i, i) == {}


def test_exterior_anticommutes():
    a = exterior_algebra([3, 5], QQ)
    i3, i5 = a.names.index("x3"), a.names.index("x5")
    top = a.names.index("x3x5")
    assert a.mul_basis(i3, i5) == {top: Fraction(1)}
    assert a.mul_basis(i5, i3) == {top: Fraction(-1)}


def test_exterior_rejections():
    with pytest.raises(ModelError):
        exterior_algebra([2], QQ)
    with pytest.raises(ModelError):
        exterior_algebra([3], GF(2))
    with pytest.raises(ModelError):
        exterior_algebra([], QQ)


# -- integrals ---------------------------------------------------------------------

def test_group_algebra_integrals_are_full_sum():
    for name in ("Z2", "Z3", "Z4", "Z6", "S3", "D4", "Q8"):
        for field in (QQ, GF(2), GF(3)):
            a = group_algebra(preset(name), field)
            left, right, unimodular = find_integrals(a)
            assert unimodular
            assert len(left) == 1 and len(right) == 1
            ones = [field.one] * a.dim
            lm = a.left_mult_matrix(left[0])
            # the integral is a scalar multiple of the sum of all elements
            nz = [c for c in left[0] if not field.is_zero(c)]
            assert len(nz) == a.dim and len(set(map(str, nz))) == 1
            del lm, ones


def test_exterior_integral_is_top_class():
    a = exterior_algebra([3], QQ)
    left, right, unimodular = find_integrals(a)
    assert unimodular and len(left) == 1
    top = a.names.index("x3")
    assert [i for i, c in enumerate(left[0]) if c] == [top]


def test_sweedler_not_unimodular():
    a = sweedler_algebra()
    left, right, unimodular = find_integrals(a)
    assert not unimodular
    assert len(left) == 1 and len(right) == 1
    span = {tuple(map(str, left[0])), tuple(map(str, right[0]))}
    assert len(span) == 2


# -- Frobenius forms -----------------------------------------------------------------

def test_group_frobenius_flags():
    a = group_algebra(preset("S3"), QQ)
    fs = group_frobenius(a)
    assert fs.report.nondegenerate
    assert fs.report.frobenius_identity
    assert fs.report.symmetric
    assert fs.degree == 0


def test_frobenius_from_integral_group_case():
    # lam = delta_1, u = 1: beta(g, h) = [gh = 1]
    a = group_algebra(preset("Z3"), QQ)
    lam = [QQ.one if i == a.group.identity else QQ.zero for i in range(a.dim)]
    fs = frobenius_from_integral(a, lam, list(a.unit))
    assert fs.pairing == group_frobenius(a).pairing
    assert fs.report.symmetric and fs.report.nondegenerate


def test_frobenius_from_integral_precondition():
    a = group_algebra(preset("Z3"), QQ)
    bad = [QQ.one] * a.dim  # not a left integral of the dual
    with pytest.raises(PreconditionError):
        frobenius_from_integral(a, bad, list(a.unit))


def test_sweedler_frobenius_not_symmetric():
    a = sweedler_algebra()
    lam = dual_left_integrals(a)[0]
    u = s_square_conjugator(a)
    assert u is not None
    fs = frobenius_from_integral(a, lam, u)
    assert fs.report.nondegenerate
    assert fs.report.frobenius_identity
    assert not fs.report.symmetric


def test_frobenius_from_integral_exterior_example():
    # lam = dual of the top generator, u = 1: the degree pairing
    a = exterior_algebra([3], QQ)
    one, x3 = a.names.index("1"), a.names.index("x3")
    lam = [QQ.zero] * a.dim
    lam[x3] = QQ.one
    fs = frobenius_from_integral(a, lam, list(a.unit))
    assert fs.pairing.data[one][x3] == 1
    assert fs.pairing.data[x3][one] == 1
    assert fs.pairing.data[one][one] == 0
    assert fs.pairing.data[x3][x3] == 0


def test_unimodular_with_conjugator_gives_symmetric_form():
    # executable direction of the symmetric-iff-unimodular theorem
    cases = [group_algebra(preset(n), f)
             for n in ("Z2", "Z3", "Z4", "Z6", "S3", "D4", "Q8")
             for f in (QQ, GF(3))]
    cases += [exterior_algebra([3], QQ), exterior_algebra([3, 5], QQ)]
    for alg in cases:
        _, _, unimodular = find_integrals(alg)
        u = s_square_conjugator(alg)
        if not (unimodular and u is not None):
            continue
        lam = dual_left_integrals(alg)[0]
        fs = frobenius_from_integral(alg, lam, u)
        assert fs.report.symmetric and fs.report.nondegenerate, alg


def test_zero_pairing_degenerate():
    a = group_algebra(preset("Z2"), QQ)
    rep = verify_frobenius(a, Matrix(QQ, 2, 2))
    assert not rep.nondegenerate


def test_matrix_algebra_trace_pairing():
    a = matrix_algebra(2, QQ)
    rep = verify_frobenius(a, trace_pairing(a, 2))
    assert rep.nondegenerate and rep.frobenius_identity and rep.symmetric


def test_exterior_lie_pairing():
    a = exterior_algebra([3], QQ)
    fs = lie_pairing(a)
    assert fs.degree == -3
    one, x3 = a.names.index("1"), a.names.index("x3")
    assert fs.pairing.data[one][x3] == 1
    assert fs.pairing.data[x3][one] == 1
    assert fs.pairing.data[one][one] == 0
    assert fs.pairing.data[x3][x3] == 0


def test_exterior_lie_pairing_koszul():
    a = exterior_algebra([3, 5], QQ)
    fs = lie_pairing(a)
    assert fs.degree == -8
    i3, i5 = a.names.index("x3"), a.names.index("x5")
    assert fs.pairing.data[i3][i5] == 1
    assert fs.pairing.data[i5][i3] == -1  # graded symmetry: odd.odd
    assert fs.report.symmetric and fs.report.nondegenerate


def test_lie_pairing_multiplication_injective():
    # a -> a . eta is injective: the pairing matrix has full rank
    a = exterior_algebra([3, 5], QQ)
    fs = lie_pairing(a)
    assert rank(fs.pairing) == 4


def test_lie_pairing_needs_one_dimensional_top():
    a = group_algebra(preset("Z2"), QQ)  # ungraded: top degree 0 is 2-dim
    with pytest.raises(ModelError):
        lie_pairing(a)


# -- lambda_L ---------------------------------------------------------------------

def test_lambda_L_z2_identity():
    a = group_algebra(preset("Z2"), QQ)
    assert lambda_L(a) == Matrix.identity(QQ, 2)


def test_lambda_L_z3_swaps():
    a = group_algebra(preset("Z3"), QQ)
    lam = lambda_L(a)
    g = a.group
    for j in range(3):
        col = lam.col(j)
        assert [i for i, c in enumerate(col) if c] == [g.inv[j]]


def test_lambda_L_s3_bimodule():
    # construction verifies the bimodule identity on all 6^3 triples
    lam = lambda_L(group_algebra(preset("S3"), QQ))
    assert rank(lam) == 6


# -- serialization -------------------------------------------------------------------

def test_algebra_json_roundtrip(tmp_path):
    a = group_algebra(preset("S3"), GF(3))
    obj = algebra_to_json(a)
    b = algebra_from_json(json.loads(json.dumps(obj)))
    assert b.names == a.names and b.mult == a.mult
    assert b.hopf is not None
    path = tmp_path / "alg.json"
    path.write_text(json.dumps(obj))
    c = load_algebra(path)
    assert c.dim == 6


def test_structure_constant_validation():
    f = QQ
    with pytest.raises(AlgebraError):
        # non-associative: e*e = e, e*x = x, x*e = x, x*x = e ... with a 3rd
        FDAlgebra(
            f, ["e", "x", "y"], [0, 0, 0],
            {
                (0, 0): {0: f.one}, (0, 1): {1: f.one}, (0, 2): {2: f.one},
                (1, 0): {1: f.one}, (2, 0): {2: f.one},
                (1, 1): {2: f.one}, (1, 2): {0: f.one},
                (2, 1): {1: f.one}, (2, 2): {1: f.one},
            },
            [f.one, f.zero, f.zero],
        )
