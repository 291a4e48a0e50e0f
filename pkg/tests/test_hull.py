import random
from fractions import Fraction as F

import pytest

from infrasolv.actions import (AffineElement, GammaActionData,
                               right_translation_map)
from infrasolv.hull import (CosetExtension, FittingResult, InductionError,
                            SplitHullData, alpha_T, conjugacy_transport,
                            finite_order_bound, fitting_radical_check,
                            hol_from_ambient, hull_axiom_check, induce_extension,
                            matrix_order, strong_radical_check)
from infrasolv.lie import UnipotentGroupData, lie_closure, nilp_exp
from infrasolv.linalg import RationalMatrix


def _elem(i, j, n):
    rows = [[0] * n for _ in range(n)]
    rows[i][j] = 1
    return RationalMatrix(rows)


def heisenberg():
    x = RationalMatrix([[1, 1, 0], [0, 1, 0], [0, 0, 1]])
    y = RationalMatrix([[1, 0, 0], [0, 1, 1], [0, 0, 1]])
    alg = lie_closure(UnipotentGroupData(generators=(x, y), dim_ambient=3))
    return alg, x, y


def abelian2():
    g1, g2 = nilp_exp(_elem(0, 2, 3)), nilp_exp(_elem(1, 2, 3))
    alg = lie_closure(UnipotentGroupData(generators=(g1, g2), dim_ambient=3))
    return alg, g1, g2


def exp_coords(alg, *coords):
    return nilp_exp(alg.matrix_from_coords(tuple(F(c) for c in coords)))


def klein_hull():
    alg, g1, g2 = abelian2()
    t = RationalMatrix([[1, 0, 0], [0, -1, 0], [0, 0, 1]])
    return SplitHullData(alg, UnipotentGroupData(generators=(g1, g2),
                                                 dim_ambient=3),
                         t_generators=(t,))


def klein_gamma(alg):
    glide = AffineElement(alg, exp_coords(alg, F(1, 2), 0),
                          RationalMatrix([[1, 0], [0, -1]]))
    b = AffineElement(alg, exp_coords(alg, 0, 1), RationalMatrix.identity(2))
    return GammaActionData(alg, {"b": b, "g": glide},
                           relators=("g b g^-1 b",), hirsch_rank=2,
                           fitting_labels=("b",))


# ------------------------------------------------------------------
# split data and holonomy extraction

def test_hol_from_ambient_oracle():
    alg, _, _ = abelian2()
    t = RationalMatrix([[1, 0, 0], [0, -1, 0], [0, 0, 1]])
    assert hol_from_ambient(alg, t) == RationalMatrix([[1, 0], [0, -1]])
    with pytest.raises(ValueError):
        hol_from_ambient(alg, RationalMatrix([[1, 0, 0], [0, 1, 0], [1, 0, 1]]))


def test_split_hull_validation():
    alg, g1, g2 = abelian2()
    u = UnipotentGroupData(generators=(g1, g2), dim_ambient=3)
    with pytest.raises(ValueError):  # not semisimple
        SplitHullData(alg, u, t_generators=(RationalMatrix(
            [[1, 0, 1], [0, 1, 0], [0, 0, 1]]),))
    with pytest.raises(ValueError):  # wrong hol matrix
        SplitHullData(alg, u,
                      t_generators=(RationalMatrix([[1, 0, 0], [0, -1, 0],
                                                    [0, 0, 1]]),),
                      hol_matrices=(RationalMatrix.identity(2),))
    hull = klein_hull()
    assert hull.hol_matrices[0] == RationalMatrix([[1, 0], [0, -1]])
    assert hull.closure_spans_algebra()
    partial = SplitHullData(alg, UnipotentGroupData(generators=(g1,),
                                                    dim_ambient=3))
    assert not partial.closure_spans_algebra()


def test_split_hull_json_round_trip():
    hull = klein_hull()
    back = SplitHullData.from_json(hull.to_json())
    assert back.algebra.dim == 2
    assert back.t_generators == hull.t_generators
    assert back.hol_matrices == hull.hol_matrices
    assert back.u_data.generators == hull.u_data.generators


def test_alpha_t_heisenberg():
    alg, x, y = heisenberg()
    t = RationalMatrix([[1, 0, 0], [0, -1, 0], [0, 0, -1]])
    hull = SplitHullData(alg, UnipotentGroupData(generators=(x, y),
                                                 dim_ambient=3),
                         t_generators=(t,))
    act = alpha_T(hull, x, t_word=((0, 1),))
    assert act.hol == RationalMatrix([[-1, 0, 0], [0, 1, 0], [0, 0, -1]])
    assert act.translation == x
    plain = alpha_T(hull, y)
    assert plain.hol == RationalMatrix.identity(3)
    squared = alpha_T(hull, x, t_word=((0, 2),))
    assert squared.hol == RationalMatrix.identity(3)


# ------------------------------------------------------------------
# conjugacy transport

def test_conjugacy_transport_intertwines():
    alg, x, y = heisenberg()
    phi = RationalMatrix([[1, 0, 0], [0, -1, 0], [0, 0, -1]])
    action = AffineElement(alg, exp_coords(alg, F(1, 2), 0, 0), phi)
    rng = random.Random(5)
    for _ in range(20):
        coords = [F(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(3)]
        v = exp_coords(alg, *coords)
        moved = conjugacy_transport(v, action)
        lhs = action.as_polynomial_map().after(right_translation_map(alg, v))
        rhs = right_translation_map(alg, v).after(moved.as_polynomial_map())
        assert lhs == rhs


def test_conjugacy_transport_identity_v():
    alg, x, _ = heisenberg()
    phi = RationalMatrix([[1, 0, 0], [0, -1, 0], [0, 0, -1]])
    action = AffineElement(alg, x, phi)
    moved = conjugacy_transport(RationalMatrix.identity(3), action)
    assert moved == action


# ------------------------------------------------------------------
# strong unipotent radical

def test_finite_order_bound_small():
    assert finite_order_bound(1) == 2
    assert finite_order_bound(2) == 12


def test_matrix_order():
    rot = RationalMatrix([[0, -1], [1, 0]])
    assert matrix_order(rot, finite_order_bound(2)) == 4
    shear = RationalMatrix([[1, 1], [0, 1]])
    assert matrix_order(shear, finite_order_bound(2)) is None
    hyper = RationalMatrix([[2, 1], [1, 1]])
    assert matrix_order(hyper, finite_order_bound(2)) is None
    assert matrix_order(RationalMatrix.identity(3), finite_order_bound(3)) == 1


def test_strong_radical_passes_for_klein():
    res = strong_radical_check(klein_hull())
    assert res.ok and res.exact


def test_strong_radical_catches_scalar_torus():
    alg, g1, g2 = abelian2()
    res = strong_radical_check(SplitHullData(
        alg, UnipotentGroupData(generators=(g1, g2), dim_ambient=3),
        t_generators=(2 * RationalMatrix.identity(3),)))
    assert not res.ok and res.exact
    assert res.witness == 2 * RationalMatrix.identity(3)


def test_strong_radical_catches_joint_collision():
    # two reflections with identical holonomy but different ambient parts
    alg, g1, g2 = abelian2()
    t1 = RationalMatrix([[-1, 0, 0], [0, 1, 0], [0, 0, 1]])
    t2 = RationalMatrix([[1, 0, 0], [0, -1, 0], [0, 0, -1]])
    hull = SplitHullData(alg, UnipotentGroupData(generators=(g1, g2),
                                                 dim_ambient=3),
                         t_generators=(t1, t2))
    assert hull.hol_matrices[0] == hull.hol_matrices[1]
    res = strong_radical_check(hull)
    assert not res.ok and res.exact
    assert res.witness is not None
    # the witness really does act trivially without being trivial
    assert hol_from_ambient(alg, res.witness) == RationalMatrix.identity(2)
    assert res.witness != RationalMatrix.identity(3)


def test_strong_radical_single_infinite_generator_is_exact():
    alg, g1, g2 = abelian2()
    t = RationalMatrix([[2, 1, 0], [1, 1, 0], [0, 0, 1]])
    hull = SplitHullData(alg, UnipotentGroupData(generators=(g1, g2),
                                                 dim_ambient=3),
                         t_generators=(t,))
    res = strong_radical_check(hull)
    assert res.ok and res.exact


def test_strong_radical_two_infinite_generators_is_bounded():
    alg, g1, g2 = abelian2()
    t = RationalMatrix([[2, 1, 0], [1, 1, 0], [0, 0, 1]])
    hull = SplitHullData(alg, UnipotentGroupData(generators=(g1, g2),
                                                 dim_ambient=3),
                         t_generators=(t, t * t))
    res = strong_radical_check(hull)
    assert res.ok and not res.exact
    assert any("word radius" in d for d in res.diagnostics)


# ------------------------------------------------------------------
# hull axioms and fitting labels

def test_hull_axioms_pass_for_klein():
    hull = klein_hull()
    cert = hull_axiom_check(hull, klein_gamma(hull.algebra))
    assert cert.passed
    assert cert.density_label == "surrogate"
    obj = cert.to_json()
    assert obj["passed"] and obj["strong_radical_exact"]


def test_hull_axioms_fail_on_wrong_rank():
    hull = klein_hull()
    gamma = klein_gamma(hull.algebra)
    wrong = GammaActionData(hull.algebra, dict(gamma.generators),
                            relators=gamma.relators, hirsch_rank=3,
                            fitting_labels=gamma.fitting_labels)
    cert = hull_axiom_check(hull, wrong)
    assert not cert.passed and not cert.dim_rank_ok
    assert "dim_rank" in cert.diagnostics


def test_hull_axioms_fail_on_sparse_translations():
    hull = klein_hull()
    alg = hull.algebra
    b = AffineElement(alg, exp_coords(alg, 0, 1), RationalMatrix.identity(2))
    sparse = GammaActionData(alg, {"b": b}, hirsch_rank=2)
    cert = hull_axiom_check(hull, sparse)
    assert not cert.passed and not cert.density_surrogate_ok
    assert "density_translations" in cert.diagnostics


def test_hull_axioms_fail_on_scalar_torus():
    alg, g1, g2 = abelian2()
    hull = SplitHullData(alg, UnipotentGroupData(generators=(g1, g2),
                                                 dim_ambient=3),
                         t_generators=(2 * RationalMatrix.identity(3),))
    x = AffineElement(alg, g1, RationalMatrix.identity(2))
    y = AffineElement(alg, g2, RationalMatrix.identity(2))
    gamma = GammaActionData(alg, {"x": x, "y": y}, hirsch_rank=2)
    cert = hull_axiom_check(hull, gamma)
    assert not cert.passed and not cert.strong_radical_ok
    assert cert.to_json()["strong_radical_witness"] is not None


def test_fitting_radical_check():
    hull = klein_hull()
    gamma = klein_gamma(hull.algebra)
    assert fitting_radical_check(gamma, hull) == FittingResult(ok=True)
    bad = GammaActionData(hull.algebra, dict(gamma.generators),
                          relators=gamma.relators, hirsch_rank=2,
                          fitting_labels=("b", "g"))
    res = fitting_radical_check(bad, hull)
    assert not res.ok and res.offender == "g"


# ------------------------------------------------------------------
# induced embeddings

def I(n):
    return RationalMatrix.identity(n)


def test_induce_infinite_dihedral():
    a = RationalMatrix([[1, 1], [0, 1]])
    c = RationalMatrix([[1, 0], [0, -1]])
    ext = CosetExtension(conjugators=(I(2), c), table=((0, 1), (1, 0)),
                         cocycles=((I(2), I(2)), (I(2), I(2))))
    emb = induce_extension((a,), ext)
    assert emb.gamma_images[0] == RationalMatrix(
        [[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, -1], [0, 0, 0, 1]])
    assert emb.coset_images[1] == RationalMatrix(
        [[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]])
    assert emb.check_word_ball(3) == 39


def test_induce_klein_from_z2():
    x = RationalMatrix([[1, 0, 1], [0, 1, 0], [0, 0, 1]])
    y = RationalMatrix([[1, 0, 0], [0, 1, 1], [0, 0, 1]])
    g = RationalMatrix([[1, 0, F(1, 2)], [0, -1, 0], [0, 0, 1]])
    ext = CosetExtension(conjugators=(I(3), g), table=((0, 1), (1, 0)),
                         cocycles=((I(3), I(3)), (I(3), x)))
    emb = induce_extension((x, y), ext)
    assert emb.check_word_ball(3) == 155
    # psi(r)^2 = psi(x): the glide squares to the translation
    r = emb.coset_images[1]
    assert r * r == emb.gamma_images[0]
    # y conjugated across the glide inverts
    assert r * emb.gamma_images[1] * r.inverse() == emb.gamma_images[1].inverse()


def test_coset_extension_rejects_bad_tables():
    c = RationalMatrix([[1, 0], [0, -1]])
    with pytest.raises(InductionError):  # conjugator 0 not identity
        CosetExtension(conjugators=(c, c), table=((0, 1), (1, 0)),
                       cocycles=((I(2), I(2)), (I(2), I(2))))
    with pytest.raises(InductionError):  # row not a permutation
        CosetExtension(conjugators=(I(2), c), table=((0, 1), (1, 1)),
                       cocycles=((I(2), I(2)), (I(2), I(2))))
    with pytest.raises(InductionError):  # trivial row 0 violated
        CosetExtension(conjugators=(I(2), c), table=((1, 0), (0, 1)),
                       cocycles=((I(2), I(2)), (I(2), I(2))))


def test_coset_extension_rejects_bad_cocycle():
    x = RationalMatrix([[1, 0, 1], [0, 1, 0], [0, 0, 1]])
    y = RationalMatrix([[1, 0, 0], [0, 1, 1], [0, 0, 1]])
    g = RationalMatrix([[1, 0, F(1, 2)], [0, -1, 0], [0, 0, 1]])
    with pytest.raises(InductionError, match="associativity"):
        CosetExtension(conjugators=(I(3), g), table=((0, 1), (1, 0)),
                       cocycles=((I(3), I(3)), (I(3), y)))


def test_induction_rejects_incompatible_conjugators():
    # Heisenberg lattice; the cocycle says the representative squares to the
    # central z, but the conjugator squares to y, and those act differently
    x = RationalMatrix([[1, 1, 0], [0, 1, 0], [0, 0, 1]])
    y = RationalMatrix([[1, 0, 0], [0, 1, 1], [0, 0, 1]])
    z = RationalMatrix([[1, 0, 1], [0, 1, 0], [0, 0, 1]])
    half_y = RationalMatrix([[1, 0, 0], [0, 1, F(1, 2)], [0, 0, 1]])
    ext = CosetExtension(conjugators=(I(3), half_y), table=((0, 1), (1, 0)),
                         cocycles=((I(3), I(3)), (I(3), z)))
    with pytest.raises(InductionError, match="identity \\(1\\)"):
        induce_extension((x, y), ext)


def test_word_ball_detects_sabotaged_image():
    a = RationalMatrix([[1, 1], [0, 1]])
    c = RationalMatrix([[1, 0], [0, -1]])
    ext = CosetExtension(conjugators=(I(2), c), table=((0, 1), (1, 0)),
                         cocycles=((I(2), I(2)), (I(2), I(2))))
    emb = induce_extension((a,), ext)
    emb.gamma_images = (emb.embed_gamma(a * a),)
    with pytest.raises(InductionError):
        emb.check_word_ball(2)
