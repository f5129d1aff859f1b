"""Jacobi pairs: checks, homogenization, and the first jet algebroid.

Run with: python3 demos/04_jacobi.py
"""

from pncalc import algebroid as ab, corpus, jacobi as jc, poisson_nijenhuis as pn
from pncalc.cartan import Chart, MultiVector
from pncalc.jacobi import JacobiPair

print("== a contact-type Jacobi pair ==")
pairs = dict(corpus.jacobi_pairs())
contact = pairs["contact"]
print(f"pi = {contact.pi}")
print(f"e  = {contact.e}")
verdict = jc.is_jacobi(contact)
print(f"pair is Jacobi: {verdict.ok}")
print(f"direct and twisted certificates agree: {verdict.direct_ok is verdict.twisted_ok}")

print()
print("== a pair that is not Jacobi ==")
chart = Chart(("x1", "x2", "x3"))
broken = JacobiPair(
    MultiVector(chart, 2, {(0, 1): "-1", (1, 2): "x2"}),
    MultiVector(chart, 1, {}),
)
verdict = jc.is_jacobi(broken)
print(f"same bivector with the field dropped: {verdict.ok}")
for key, value in verdict.residuals().items():
    print(f"  {key} = {value}")

print()
print("== homogenization ==")
# a Jacobi pair on n coordinates becomes a Poisson bivector on n+1,
# weighting by an extra variable t
homog = jc.homogenized_bivector(contact)
print(f"chart: {homog.chart.coords}")
print(f"pi_t = {homog}")
print(f"homogenized bivector is Poisson: {pn.is_poisson(homog).ok}")

print()
print("== compatibility of two Jacobi pairs ==")
shear = pairs["shear"]
verdict = jc.jacobi_compat(pairs["plane-poisson"], pairs["zero"])
print(f"plane-poisson + zero compatible: {verdict.ok}")
verdict = jc.jacobi_compat(shear, shear)
print(f"shear with itself compatible:    {verdict.ok}")

print()
print("== first jet algebroid ==")
jet = jc.first_jet_algebroid(contact)
print(f"basis: {', '.join(jet.basis)}")
print(f"valid algebroid: {ab.algebroid_validate(jet).ok}")
for (i, j), row in sorted(jet.structure.items()):
    terms = [f"({e})*{name}" for e, name in zip(row, jet.basis) if not e.is_zero()]
    print(f"[{jet.basis[i]}, {jet.basis[j]}] = " + (" + ".join(terms) if terms else "0"))
