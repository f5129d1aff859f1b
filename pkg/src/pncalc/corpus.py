"""Shared example structures and seeded random generators.

The developer tests and the ``pncalc suite`` command import the same
fixtures from here, so the acceptance evidence exercises exactly the data
the tests were written against. Generators take an explicit
``random.Random`` so every caller controls its seed.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

from .cartan import Chart, DiffForm, MultiVector
from .polyalg import Polynomial

R1 = Chart(("x1",))
R2 = Chart(("x1", "x2"))
R3 = Chart(("x1", "x2", "x3"))
R4 = Chart(("x1", "x2", "x3", "x4"))


def random_polynomial(rng, chart, max_degree=3, terms=3, coeff_bound=4):
    n = chart.dim
    out = chart.zero()
    for _ in range(rng.randint(1, terms)):
        exps = [0] * n
        for _ in range(rng.randint(0, max_degree)):
            exps[rng.randrange(n)] += 1
        num = rng.randint(-coeff_bound, coeff_bound)
        den = rng.choice((1, 1, 2, 3))
        out = out + Polynomial(chart.coords, {tuple(exps): Fraction(num, den)})
    return out


def _random_graded(cls, rng, chart, degree, max_degree, coeff_bound):
    keys = list(combinations(range(chart.dim), degree))
    entries = []
    for key in keys:
        if rng.random() < 0.6:
            entries.append(
                (key, random_polynomial(rng, chart, max_degree, 2, coeff_bound))
            )
    if not entries and keys:
        key = rng.choice(keys)
        entries.append((key, random_polynomial(rng, chart, max_degree, 2, coeff_bound)))
    return cls.from_terms(chart, degree, entries)


def random_multivector(rng, chart, degree, max_degree=3, coeff_bound=4):
    return _random_graded(MultiVector, rng, chart, degree, max_degree, coeff_bound)


def random_form(rng, chart, degree, max_degree=3, coeff_bound=4):
    return _random_graded(DiffForm, rng, chart, degree, max_degree, coeff_bound)


def schouten_sample(seed, count):
    """Pairs (P, Q) with deg P + deg Q <= 5, coefficient degree <= 3."""
    rng = random.Random(seed)
    charts = (R2, R3, R4)
    pairs = []
    while len(pairs) < count:
        chart = rng.choice(charts)
        p = rng.randint(0, min(3, chart.dim))
        q = rng.randint(0, min(5 - p, chart.dim))
        P = random_multivector(rng, chart, p, max_degree=3, coeff_bound=3)
        Q = random_multivector(rng, chart, q, max_degree=3, coeff_bound=3)
        pairs.append((P, Q))
    return pairs


def so3_bivector():
    """Linear bivector on R^3 whose coefficients are the so(3) structure map."""
    return MultiVector.from_terms(
        R3,
        2,
        [
            ((0, 1), R3.var("x3")),
            ((1, 2), R3.var("x1")),
            ((2, 0), R3.var("x2")),
        ],
    )


def unit_bivector_r2():
    """The constant bivector d1 ^ d2 on the plane."""
    return MultiVector(R2, 2, {(0, 1): 1})


def conformal_pair():
    """Plane pair (d1 ^ d2, (1 + x1) Id), compatible by direct expansion."""
    from .poisson_nijenhuis import TensorOneOne

    return unit_bivector_r2(), TensorOneOne.scalar(R2, R2.parse("1 + x1"))


def complementary_two_form():
    """Two-form on the plane whose induced tensor pairs with d1 ^ d2."""
    return DiffForm(R2, 2, {(0, 1): "-(1 + x1 + x2^2)"})


def pn_pairs():
    """Labelled compatible pairs shared by tests and the acceptance suite.

    The second entry is built from a closed two-form through the
    complementary construction, so that code path is exercised every time
    the fixtures load.
    """
    from .poisson_nijenhuis import TensorOneOne, complementary_build

    pi2 = unit_bivector_r2()
    comp = complementary_build(pi2, complementary_two_form())
    return (
        ("conformal", *conformal_pair()),
        ("complementary", pi2, comp.tensor),
        ("so3-identity", so3_bivector(), TensorOneOne.identity(R3)),
    )


def constant_diagonal_counterexample():
    """(d1 ^ d2, diag(2, 3)): distinct constant eigenvalues break sharp compatibility."""
    from .poisson_nijenhuis import TensorOneOne

    return unit_bivector_r2(), TensorOneOne.diagonal(R2, [2, 3])


def nijenhuis_tensors():
    """Labelled torsion-free tensors for the deformed-differential checks."""
    from .poisson_nijenhuis import TensorOneOne

    return (
        ("identity", TensorOneOne.identity(R2)),
        ("conformal", TensorOneOne.scalar(R2, R2.parse("1 + x1"))),
        ("conformal-product", TensorOneOne.scalar(R2, R2.parse("1 + x1*x2"))),
        ("eigencoordinate", TensorOneOne.diagonal(R2, [R2.var("x1"), R2.var("x2")])),
        ("nilpotent", TensorOneOne(R2, [[0, 1], [0, 0]])),
    )


def jacobi_pairs():
    """Labelled pairs satisfying both closedness identities."""
    from .jacobi import JacobiPair

    return (
        ("zero", JacobiPair(MultiVector(R2, 2, {}), MultiVector(R2, 1, {}))),
        ("so3-poisson", JacobiPair(so3_bivector(), MultiVector(R3, 1, {}))),
        ("plane-poisson", JacobiPair(unit_bivector_r2(), MultiVector(R2, 1, {}))),
        ("pure-field", JacobiPair(MultiVector(R3, 2, {}), MultiVector(R3, 1, {(2,): 1}))),
        (
            "contact",
            JacobiPair(
                MultiVector(R3, 2, {(0, 1): -1, (1, 2): "x2"}),
                MultiVector(R3, 1, {(2,): 1}),
            ),
        ),
        (
            "shear",
            JacobiPair(
                MultiVector(R2, 2, {(0, 1): "x2"}), MultiVector(R2, 1, {(0,): 1})
            ),
        ),
    )


def point_lie_algebra(table):
    """Rank-3 algebroid over a point with the given structure table."""
    from .algebroid import AlgebroidData

    return AlgebroidData(Chart(()), 3, ("f1", "f2", "f3"), [(), (), ()], table)


def point_lie_algebras():
    """Named rank-3 Lie algebras used by the compatibility fixtures."""
    return {
        "so3": point_lie_algebra(
            {(0, 1): (0, 0, 1), (1, 2): (1, 0, 0), (0, 2): (0, -1, 0)}
        ),
        "abelian": point_lie_algebra({}),
        "heisenberg": point_lie_algebra({(0, 1): (0, 0, 1)}),
        "affine": point_lie_algebra({(0, 1): (1, 0, 0)}),
    }
