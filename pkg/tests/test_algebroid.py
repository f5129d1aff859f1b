import random

import pytest

from pncalc import cartan, poisson_nijenhuis as pn
from pncalc.algebroid import (
    AlgebroidData,
    AlgebroidSection,
    algebroid_differential,
    algebroid_pencil,
    algebroid_sum,
    algebroid_validate,
    bialgebroid_check,
    build_dual_chart,
    compat_check,
    cotangent_algebroid,
    dual_linear_poisson,
    gerstenhaber_bracket,
    linear_poisson_to_algebroid,
    pn_bialgebroid_check,
    rho_function,
    section_bracket,
    section_wedge,
    tangent_algebroid,
    tangent_deformed_algebroid,
    unit_section,
)
from pncalc.cartan import Chart, MultiVector
from pncalc.corpus import R2, R3, random_multivector, so3_bivector
from pncalc.errors import InputError, PreconditionError

POINT = Chart(())


def so3_point_algebroid():
    # [e1,e2]=e3, [e2,e3]=e1, [e3,e1]=e2 over a zero-dimensional base
    return AlgebroidData(
        POINT,
        3,
        ("e1", "e2", "e3"),
        ((), (), ()),
        {(0, 1): (0, 0, 1), (1, 2): (1, 0, 0), (0, 2): (0, -1, 0)},
    )


def solvable_rank2():
    return AlgebroidData(POINT, 2, ("e1", "e2"), ((), ()), {(0, 1): (0, 1)})


def test_construction_guards():
    with pytest.raises(InputError):
        AlgebroidData(POINT, 2, ("e1",), ((), ()), {})
    with pytest.raises(InputError):
        AlgebroidData(POINT, 2, ("e1", "e2"), ((), ()), {(1, 0): (0, 1)})
    with pytest.raises(InputError):
        AlgebroidData(POINT, 2, ("e1", "e2"), ((), ()), {(0, 1): (1,)})
    with pytest.raises(InputError):
        AlgebroidData(R2, 2, ("e1", "e2"), ((1,), (0,)), {})


def test_structure_accessor_antisymmetry():
    alg = so3_point_algebroid()
    assert [str(p) for p in alg.c(0, 1)] == ["0", "0", "1"]
    assert [str(p) for p in alg.c(1, 0)] == ["0", "0", "-1"]
    assert all(p.is_zero() for p in alg.c(2, 2))


def test_section_normalization():
    alg = so3_point_algebroid()
    s = AlgebroidSection(alg, 2, {(1, 0): 1})
    assert s.component((0, 1)).constant_value() == -1
    assert AlgebroidSection(alg, 2, {(1, 1): 5}).is_zero()
    w = section_wedge(unit_section(alg, 0), unit_section(alg, 1))
    assert w.component((1, 0)).constant_value() == -1
    other = solvable_rank2()
    with pytest.raises(InputError):
        unit_section(alg, 0) + unit_section(other, 0)


def test_validate_examples():
    assert algebroid_validate(so3_point_algebroid()).ok
    assert algebroid_validate(solvable_rank2()).ok
    assert algebroid_validate(tangent_algebroid(R3)).ok
    # rank 2 over a line with an anchored first section
    anchored = AlgebroidData(
        Chart(("x1",)), 2, ("e1", "e2"), (("1",), ("0",)), {(0, 1): (0, 1)}
    )
    assert algebroid_validate(anchored).ok


def test_validate_rejects_corrupted_table():
    # adding e1 to [e1,e2] breaks Jacobi in the rotation algebra
    broken = AlgebroidData(
        POINT,
        3,
        ("e1", "e2", "e3"),
        ((), (), ()),
        {(0, 1): (1, 0, 1), (1, 2): (1, 0, 0), (0, 2): (0, -1, 0)},
    )
    verdict = algebroid_validate(broken)
    assert not verdict.ok
    assert any(key.startswith("jacobi") for key in verdict.residuals())


def test_validate_rejects_bad_anchor():
    # anchor is not a morphism: rho(e1)=d/dx, rho(e2)=x d/dx, abelian table
    line = Chart(("x1",))
    broken = AlgebroidData(line, 2, ("e1", "e2"), (("1",), ("x1",)), {})
    verdict = algebroid_validate(broken)
    assert not verdict.ok
    assert any(key.startswith("anchor") for key in verdict.residuals())


def test_section_bracket_leibniz():
    alg = cotangent_algebroid(so3_bivector())
    f = R3.parse("x1*x2")
    x, y = unit_section(alg, 0), unit_section(alg, 1)
    lhs = section_bracket(alg, x, f * y)
    rhs = f * section_bracket(alg, x, y) + rho_function(alg, x, f) * y
    assert lhs == rhs


def test_differential_point_example():
    alg = solvable_rank2()
    eps2 = AlgebroidSection(alg, 1, {(1,): 1})
    d = algebroid_differential(alg, eps2)
    assert d.component((0, 1)).constant_value() == -1
    eps1 = AlgebroidSection(alg, 1, {(0,): 1})
    assert algebroid_differential(alg, eps1).is_zero()


def test_differential_squares_to_zero():
    for alg in (so3_point_algebroid(), solvable_rank2(), cotangent_algebroid(so3_bivector())):
        for i in range(alg.rank):
            s = unit_section(alg, i)
            dd = algebroid_differential(alg, algebroid_differential(alg, s))
            assert dd.is_zero()
        if alg.base.dim:
            f = AlgebroidSection(
                alg, 0, {(): alg.base.parse("%s^2" % alg.base.coords[0])}
            )
            dd = algebroid_differential(alg, algebroid_differential(alg, f))
            assert dd.is_zero()


def test_tangent_differential_is_de_rham():
    alg = tangent_algebroid(R2)
    f = R2.parse("x1^2*x2")
    omega = AlgebroidSection(alg, 1, {(0,): f})
    d = algebroid_differential(alg, omega)
    reference = cartan.exterior_d(cartan.one_form(R2, [f, 0]))
    assert d.components == reference.components


def _section_from_multivector(alg, mv):
    return AlgebroidSection(alg, mv.degree, dict(mv.components))


def test_gerstenhaber_matches_multivector_bracket():
    rng = random.Random(71)
    matched = 0
    for _ in range(60):
        chart = rng.choice((R2, R3))
        alg = tangent_algebroid(chart)
        p = rng.randint(0, min(3, chart.dim))
        q = rng.randint(0, min(3, chart.dim))
        a = random_multivector(rng, chart, p)
        b = random_multivector(rng, chart, q)
        ours = gerstenhaber_bracket(
            alg, _section_from_multivector(alg, a), _section_from_multivector(alg, b)
        )
        reference = cartan.schouten(a, b)
        assert ours.components == reference.components
        matched += 1
    assert matched == 60


def test_gerstenhaber_point_algebra():
    alg = so3_point_algebroid()
    e1, e2, e3 = (unit_section(alg, i) for i in range(3))
    assert gerstenhaber_bracket(alg, e1, e2) == e3
    wedge12 = section_wedge(e1, e2)
    bracket = gerstenhaber_bracket(alg, wedge12, e3)
    # [e1^e2, e3] = e1^[e2,e3] + [e1,e3]^e2 = e1^e1 - e2^e2 = 0
    assert bracket.is_zero()
    # graded antisymmetry on a (2,2) pair: [P,Q] = -(-1)^{(p-1)(q-1)}[Q,P]
    wedge23 = section_wedge(e2, e3)
    lhs = gerstenhaber_bracket(alg, wedge12, wedge23)
    rhs = gerstenhaber_bracket(alg, wedge23, wedge12)
    assert (lhs + rhs).is_zero()


def test_cotangent_algebroid_structure():
    alg = cotangent_algebroid(so3_bivector())
    assert alg.basis == ("dx1", "dx2", "dx3")
    assert str(alg.anchor[0][1]) == "x3"
    row = alg.c(0, 1)
    assert [str(p) for p in row] == ["0", "0", "1"]
    # anchor columns are the sharp images of the coordinate differentials
    sharp = pn.sharp(so3_bivector(), cartan.coordinate_form(R3, 0))
    assert tuple(sharp.component((a,)) for a in range(3)) == alg.anchor[0]


def test_cotangent_refuses_non_poisson():
    not_poisson = MultiVector(R3, 2, {(0, 1): "x1", (1, 2): 1, (0, 2): "x2"})
    assert not pn.is_poisson(not_poisson).ok
    with pytest.raises(PreconditionError):
        cotangent_algebroid(not_poisson)


def test_cotangent_differential_is_sharp_on_functions():
    pi = so3_bivector()
    alg = cotangent_algebroid(pi)
    f = R3.parse("x1*x3 + x2^2")
    section = AlgebroidSection(alg, 0, {(): f})
    d = algebroid_differential(alg, section)
    df = cartan.one_form(R3, [f.partial("x1"), f.partial("x2"), f.partial("x3")])
    # (d f)(dx^i) = rho(dx^i)(f) = pi(dx^i, df) = -sharp(df)^i
    image = -pn.sharp(pi, df)
    assert d.components == image.components


def test_deformed_tangent_algebroid():
    conformal = pn.TensorOneOne(R2, [["1 + x1", 0], [0, "1 + x1"]])
    alg = tangent_deformed_algebroid(conformal)
    assert algebroid_validate(alg).ok
    row = alg.c(0, 1)
    assert [str(p) for p in row] == ["0", "1"]
    assert str(alg.anchor[0][0]) == "x1 + 1"


def test_deformed_tangent_differential_matches_d_n():
    tensor = pn.TensorOneOne(R2, [["1 + x1*x2", 0], [0, "1 + x1*x2"]])
    assert all(v.is_zero() for v in pn.nijenhuis_torsion(tensor).values())
    alg = tangent_deformed_algebroid(tensor)
    f = R2.parse("x1^2 + x2")
    section = AlgebroidSection(alg, 0, {(): f})
    ours = algebroid_differential(alg, section)
    reference = pn.d_n(tensor, cartan.DiffForm(R2, 0, {(): f}))
    assert ours.components == reference.components
    one_form = AlgebroidSection(alg, 1, {(0,): "x2"})
    ours = algebroid_differential(alg, one_form)
    reference = pn.d_n(tensor, cartan.DiffForm(R2, 1, {(0,): "x2"}))
    assert ours.components == reference.components


def test_deformed_tangent_refuses_torsion():
    shear = pn.TensorOneOne(R2, [["x2", 0], [0, 0]])
    with pytest.raises(PreconditionError):
        tangent_deformed_algebroid(shear)


def test_dual_linear_poisson_point_examples():
    alg = solvable_rank2()
    dual = dual_linear_poisson(alg)
    assert dual.chart.coords == ("xi_e1", "xi_e2")
    assert str(dual.component((0, 1))) == "xi_e2"
    rot = dual_linear_poisson(so3_point_algebroid())
    expected = so3_bivector()
    renamed = {
        key: poly.substitute(R3.coords, {"xi_e1": cartan.Polynomial.variable(R3.coords, "x1"),
                                         "xi_e2": cartan.Polynomial.variable(R3.coords, "x2"),
                                         "xi_e3": cartan.Polynomial.variable(R3.coords, "x3")})
        for key, poly in rot.components.items()
    }
    assert renamed == expected.components
    assert pn.is_poisson(rot).ok


def test_dual_linear_poisson_anchor_block():
    line = Chart(("x1",))
    alg = AlgebroidData(line, 2, ("e1", "e2"), (("1",), ("0",)), {(0, 1): (0, 1)})
    dual = dual_linear_poisson(alg)
    # {xi_1, x} = 1 means stored component (x, xi_1) = -1
    assert dual.component((0, 1)).constant_value() == -1
    assert dual.component((0, 2)).is_zero()
    assert str(dual.component((1, 2))) == "xi_e2"


def test_dual_linear_poisson_additivity():
    tensor = pn.TensorOneOne(R2, [["1 + x1", 0], [0, "1 + x1"]])
    first = tangent_algebroid(R2)
    second = tangent_deformed_algebroid(tensor)
    total = dual_linear_poisson(algebroid_sum(first, second))
    split = dual_linear_poisson(first) + dual_linear_poisson(second)
    assert total == split


def test_linear_poisson_round_trip():
    alg = cotangent_algebroid(so3_bivector())
    dual = dual_linear_poisson(alg)
    back = linear_poisson_to_algebroid(dual, R3, alg.basis)
    assert back == alg


def test_linear_poisson_rejects_nonlinear():
    chart = Chart(("x1", "xi_1"))
    quadratic = MultiVector(chart, 2, {(0, 1): "xi_1^2"})
    with pytest.raises(PreconditionError):
        linear_poisson_to_algebroid(quadratic, Chart(("x1",)), ("e1",))


def test_compat_tangent_vs_deformed():
    tensor = pn.TensorOneOne(R2, [["1 + x1", 0], [0, "1 + x1"]])
    first = tangent_algebroid(R2)
    second = tangent_deformed_algebroid(tensor)
    verdict = compat_check(first, second)
    assert verdict.ok
    assert verdict.certificate_b and verdict.certificate_c
    assert verdict.residuals() == {}
    assert algebroid_validate(algebroid_sum(first, second)).ok
    for lam in (-1, 2, 5):
        assert algebroid_validate(algebroid_pencil(first, second, lam)).ok


def test_compat_with_zero_structure():
    zero = AlgebroidData(R3, 3, ("d_x1", "d_x2", "d_x3"), (("0", "0", "0"),) * 3, {})
    assert compat_check(tangent_algebroid(R3), zero).ok
    zero_dual_frame = AlgebroidData(R3, 3, ("dx1", "dx2", "dx3"), (("0", "0", "0"),) * 3, {})
    assert compat_check(zero_dual_frame, cotangent_algebroid(so3_bivector())).ok


def test_compat_hierarchy_cotangent_structures():
    pi = MultiVector(R2, 2, {(0, 1): 1})
    tensor = pn.TensorOneOne(R2, [["1 + x1", 0], [0, "1 + x1"]])
    ladder = pn.hierarchy(pi, tensor, 2)
    algs = [cotangent_algebroid(b) for b in ladder.bivectors]
    for i in range(len(algs)):
        for j in range(i + 1, len(algs)):
            assert compat_check(algs[i], algs[j]).ok


def test_compat_detects_incompatible_pair():
    heis = AlgebroidData(POINT, 3, ("e1", "e2", "e3"), ((), (), ()), {(0, 1): (0, 0, 1)})
    solv = AlgebroidData(POINT, 3, ("e1", "e2", "e3"), ((), (), ()), {(1, 2): (0, 1, 0)})
    assert algebroid_validate(heis).ok and algebroid_validate(solv).ok
    verdict = compat_check(heis, solv)
    assert not verdict.ok
    assert not verdict.certificate_b and not verdict.certificate_c
    assert "mixed_jacobi(1,2,3)" in verdict.residuals()


def test_compat_requires_shared_frame():
    with pytest.raises(InputError):
        compat_check(tangent_algebroid(R2), tangent_algebroid(R3))


def test_bialgebroid_tangent_cotangent():
    pi = so3_bivector()
    verdict = bialgebroid_check(tangent_algebroid(R3), cotangent_algebroid(pi))
    assert verdict.ok
    swapped = bialgebroid_check(cotangent_algebroid(pi), tangent_algebroid(R3))
    assert swapped.ok


def test_bialgebroid_detects_failure():
    line = Chart(("x1",))
    primary = tangent_algebroid(line)
    skew = AlgebroidData(line, 1, ("s1",), (("x1",),), {})
    verdict = bialgebroid_check(primary, skew)
    assert not verdict.ok
    assert any(label.startswith("derivation") for label in verdict.residuals())


def test_pn_bialgebroid_rotation_pair():
    verdict = pn_bialgebroid_check(so3_bivector(), pn.TensorOneOne.identity(R3))
    assert verdict.bialgebroid.ok
    assert verdict.lift_pair.ok
    assert verdict.recovery_residuals == {}
    assert all(v.ok for v in verdict.hierarchy_compat.values())
    assert verdict.ok


def test_pn_bialgebroid_conformal_pair():
    pi = MultiVector(R2, 2, {(0, 1): 1})
    tensor = pn.TensorOneOne(R2, [["1 + x1", 0], [0, "1 + x1"]])
    verdict = pn_bialgebroid_check(pi, tensor)
    assert verdict.ok
    assert len(verdict.hierarchy_compat) == 3


def test_pn_bialgebroid_level_zero_recovers_cotangent():
    pi = so3_bivector()
    dual = cotangent_algebroid(pi)
    lift = dual_linear_poisson(dual, tuple("v_" + c for c in R3.coords))
    back = linear_poisson_to_algebroid(lift, R3, dual.basis)
    assert back == dual


def test_pn_bialgebroid_refuses_incompatible():
    pi = MultiVector(R2, 2, {(0, 1): 1})
    stretch = pn.TensorOneOne(R2, [[2, 0], [0, 3]])
    with pytest.raises(PreconditionError):
        pn_bialgebroid_check(pi, stretch)


def test_dual_chart_name_collision():
    line = Chart(("xi_e1",))
    alg = AlgebroidData(line, 1, ("e1",), (("0",),), {})
    with pytest.raises(InputError):
        build_dual_chart(alg)
    assert build_dual_chart(alg, ("p1",)).coords == ("xi_e1", "p1")
