"""Exact polynomial charts, differential forms, and the Schouten bracket.

Run with: python3 demos/01_polynomials_and_forms.py
"""

from fractions import Fraction

from pncalc import cartan
from pncalc.cartan import Chart, DiffForm, MultiVector
from pncalc.polyalg import Polynomial

chart = Chart(("x1", "x2", "x3"))

print("== exact polynomial arithmetic ==")
p = chart.parse("x1^2 - 1/3*x2*x3 + 2")
q = chart.parse("x1 + x2")
print(f"p       = {p}")
print(f"q       = {q}")
print(f"p*q     = {p * q}")
print(f"dp/dx2  = {p.partial('x2')}")
at_point = p.substitute((), {"x1": 1, "x2": 3, "x3": 6})
print(f"p(1,3,6)= {at_point}")
assert at_point.constant_value() == Fraction(-3)

print()
print("== exterior calculus ==")
# omega = x3 dx1^dx2, a 2-form with polynomial coefficient
omega = DiffForm(chart, 2, {(0, 1): "x3"})
print(f"omega    = {omega}")
print(f"d(omega) = {cartan.exterior_d(omega)}")
ddo = cartan.exterior_d(cartan.exterior_d(omega))
print(f"dd(omega) is zero: {ddo.is_zero()}")

X = cartan.vector_field(chart, ["x2", "-x1", "0"])
print(f"X        = {X}")
print(f"i_X omega       = {cartan.interior(X, omega)}")
print(f"L_X omega       = {cartan.lie_derivative(X, omega)}")

print()
print("== Schouten bracket ==")
# the rotational bivector on the x1-x2 plane against a linear field
P = MultiVector(chart, 2, {(0, 1): "x3"})
Q = cartan.vector_field(chart, ["0", "0", "x3"])
bracket = cartan.schouten(P, Q)
print(f"P        = {P}")
print(f"Q        = {Q}")
print(f"[P, Q]   = {bracket}")

# graded antisymmetry: [P,Q] = -(-1)^((p-1)(q-1)) [Q,P]
flipped = cartan.schouten(Q, P)
sign = (-1) ** ((P.degree - 1) * (Q.degree - 1))
assert (bracket + flipped * sign).is_zero()
print("graded antisymmetry holds")
