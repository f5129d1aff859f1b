import random

import pytest

from pncalc.cartan import (
    Chart,
    DiffForm,
    MultiVector,
    coordinate_form,
    coordinate_vector,
    exterior_d,
    interior,
    lie_derivative,
    pairing,
    schouten,
    schouten_direct,
    vector_field,
    vf_bracket,
    wedge,
)
from pncalc.corpus import (
    R2,
    R3,
    random_form,
    random_multivector,
    random_polynomial,
    schouten_sample,
    so3_bivector,
)
from pncalc.errors import InputError


def test_wedge_examples():
    d1, d2 = coordinate_vector(R2, 0), coordinate_vector(R2, 1)
    unit = wedge(d1, d2)
    assert unit == MultiVector(R2, 2, {(0, 1): 1})
    dx1 = coordinate_form(R2, 0)
    assert wedge(dx1, dx1).is_zero()
    x1, x2 = R2.var("x1"), R2.var("x2")
    assert wedge(x1 * d1, x2 * d2) == MultiVector(R2, 2, {(0, 1): x1 * x2})


def test_wedge_graded_commutativity():
    rng = random.Random(7)
    for _ in range(20):
        p = rng.randint(0, 3)
        q = rng.randint(0, 3 - p) if p < 3 else 0
        A = random_multivector(rng, R3, p)
        B = random_multivector(rng, R3, q)
        flip = wedge(B, A)
        if (p * q) % 2:
            flip = -flip
        assert wedge(A, B) == flip


def test_wedge_kind_and_chart_guards():
    with pytest.raises(InputError):
        wedge(coordinate_vector(R2, 0), coordinate_form(R2, 0))
    with pytest.raises(InputError):
        wedge(coordinate_vector(R2, 0), coordinate_vector(R3, 0))


def test_exterior_d_examples():
    x1 = R2.var("x1")
    dx2 = coordinate_form(R2, 1)
    assert exterior_d(x1 * dx2) == DiffForm(R2, 2, {(0, 1): 1})
    assert exterior_d(coordinate_form(R2, 0)).is_zero()
    f = R2.var("x1") * R2.var("x2")
    df = exterior_d(DiffForm.from_function(R2, f))
    assert df == DiffForm(R2, 1, {(0,): R2.var("x2"), (1,): R2.var("x1")})


def test_d_squared_zero_on_random_forms():
    rng = random.Random(11)
    for degree in range(R3.dim + 1):
        for _ in range(8):
            omega = random_form(rng, R3, degree)
            assert exterior_d(exterior_d(omega)).is_zero()


def test_d_leibniz():
    rng = random.Random(13)
    for _ in range(12):
        p = rng.randint(0, 2)
        q = rng.randint(0, 2)
        a = random_form(rng, R3, p)
        b = random_form(rng, R3, q)
        lhs = exterior_d(wedge(a, b))
        rhs = wedge(exterior_d(a), b) + (
            wedge(a, exterior_d(b)) if p % 2 == 0 else -wedge(a, exterior_d(b))
        )
        assert lhs == rhs


def test_interior_examples():
    d1, d3 = coordinate_vector(R3, 0), coordinate_vector(R3, 2)
    dx12 = DiffForm(R3, 2, {(0, 1): 1})
    assert interior(d1, dx12) == coordinate_form(R3, 1)
    assert interior(d3, dx12).is_zero()
    x2 = R2.var("x2")
    got = interior(x2 * coordinate_vector(R2, 0), coordinate_form(R2, 0))
    assert got == DiffForm.from_function(R2, x2)
    with pytest.raises(InputError):
        interior(d1, DiffForm.from_function(R3, R3.var("x1")))


def test_interior_is_an_antiderivation():
    rng = random.Random(17)
    for _ in range(12):
        X = random_multivector(rng, R3, 1)
        p = rng.randint(1, 2)
        a = random_form(rng, R3, p)
        b = random_form(rng, R3, rng.randint(1, 2))
        lhs = interior(X, wedge(a, b))
        rhs = wedge(interior(X, a), b) + (
            wedge(a, interior(X, b)) if p % 2 == 0 else -wedge(a, interior(X, b))
        )
        assert lhs == rhs


def test_lie_derivative_examples():
    d1 = coordinate_vector(R2, 0)
    x1 = R2.var("x1")
    dx1, dx2 = coordinate_form(R2, 0), coordinate_form(R2, 1)
    assert lie_derivative(d1, x1 * dx2) == dx2
    assert lie_derivative(d1, dx1).is_zero()
    # hand-expanded through the homotopy identity:
    # i_{x1 d_1} d(dx1) + d(i_{x1 d_1} dx1) = 0 + d(x1) = dx1
    assert lie_derivative(x1 * d1, dx1) == dx1


def test_cartan_magic_formula():
    rng = random.Random(19)
    for _ in range(15):
        X = random_multivector(rng, R3, 1)
        k = rng.randint(1, 3)
        omega = random_form(rng, R3, k)
        lhs = lie_derivative(X, omega)
        rhs = interior(X, exterior_d(omega)) + exterior_d(interior(X, omega))
        assert lhs == rhs


def test_lie_derivative_commutes_with_d():
    rng = random.Random(23)
    for _ in range(12):
        X = random_multivector(rng, R3, 1)
        omega = random_form(rng, R3, rng.randint(0, 2))
        assert lie_derivative(X, exterior_d(omega)) == exterior_d(
            lie_derivative(X, omega)
        )


def test_schouten_examples():
    d1 = coordinate_vector(R2, 0)
    x1 = R2.var("x1")
    assert schouten(d1, x1 * d1) == d1
    P = MultiVector(R2, 2, {(0, 1): 3})
    Q = MultiVector(R2, 1, {(0,): 2, (1,): 5})
    assert schouten(P, Q).is_zero()
    pi = so3_bivector()
    assert schouten(pi, pi).is_zero()
    assert schouten_direct(pi, pi).is_zero()


def test_schouten_vector_cases():
    rng = random.Random(29)
    for _ in range(10):
        X = random_multivector(rng, R3, 1)
        Y = random_multivector(rng, R3, 1)
        f = MultiVector.from_function(R3, random_polynomial(rng, R3))
        assert schouten(X, Y) == vf_bracket(X, Y)
        # [X, f] = X(f)
        got = schouten(X, f)
        want = sum(
            (
                xc * f.components.get((), R3.zero()).partial(R3.coords[a])
                for (a,), xc in X.components.items()
            ),
            R3.zero(),
        )
        assert got == MultiVector.from_function(R3, want)


def test_schouten_graded_antisymmetry():
    rng = random.Random(31)
    for _ in range(15):
        p = rng.randint(0, 3)
        q = rng.randint(0, 3)
        P = random_multivector(rng, R3, p)
        Q = random_multivector(rng, R3, q)
        lhs = schouten(P, Q)
        rhs = schouten(Q, P)
        if ((p - 1) * (q - 1)) % 2 == 0:
            rhs = -rhs
        assert lhs == rhs


def test_schouten_leibniz():
    rng = random.Random(37)
    for _ in range(10):
        p = rng.randint(0, 2)
        q = rng.randint(0, 2)
        r = rng.randint(0, 2)
        if p == 0:
            # [f,g] lands in degree -1, represented only as the degree-0
            # zero, which breaks the degree bookkeeping of this identity
            q, r = max(q, 1), max(r, 1)
        P = random_multivector(rng, R3, p)
        Q = random_multivector(rng, R3, q)
        R = random_multivector(rng, R3, r)
        lhs = schouten(P, wedge(Q, R))
        rhs = wedge(schouten(P, Q), R)
        cross = wedge(Q, schouten(P, R))
        rhs = rhs + (cross if ((p - 1) * q) % 2 == 0 else -cross)
        assert lhs == rhs


def test_schouten_graded_jacobi():
    rng = random.Random(41)
    for _ in range(8):
        degs = [rng.randint(0, 3) for _ in range(3)]
        P, Q, R = (random_multivector(rng, R3, d, max_degree=2) for d in degs)
        p, q, r = degs

        def sgn(a, b):
            return 1 if ((a - 1) * (b - 1)) % 2 == 0 else -1

        total = (
            sgn(p, r) * schouten(P, schouten(Q, R))
            + sgn(q, p) * schouten(Q, schouten(R, P))
            + sgn(r, q) * schouten(R, schouten(P, Q))
        )
        assert total.is_zero()


def test_schouten_two_implementations_agree():
    count = 0
    for P, Q in schouten_sample(seed=2024, count=110):
        assert schouten(P, Q) == schouten_direct(P, Q)
        count += 1
    assert count >= 100


def test_pairing_and_component_lookup():
    dx12 = DiffForm(R3, 2, {(0, 1): R3.var("x3")})
    b = MultiVector(R3, 2, {(0, 1): 2})
    assert pairing(dx12, b) == 2 * R3.var("x3")
    assert b.component((1, 0)) == -2
    assert b.component((0, 0)).is_zero()
    assert b.component((0, 2)).is_zero()


def test_vector_field_helper_roundtrip():
    X = vector_field(R2, [R2.var("x2"), R2.constant(1)])
    assert X.components == {(0,): R2.var("x2"), (1,): R2.constant(1)}
    with pytest.raises(InputError):
        vector_field(R2, [R2.zero()])
