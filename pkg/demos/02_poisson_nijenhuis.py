"""Poisson bivectors, Nijenhuis tensors, and their compatibility.

Run with: python3 demos/02_poisson_nijenhuis.py
"""

from pncalc import corpus, poisson_nijenhuis as pn
from pncalc.cartan import Chart, DiffForm, MultiVector
from pncalc.poisson_nijenhuis import TensorOneOne

print("== Poisson check ==")
so3 = corpus.so3_bivector()
print(f"pi (rotational, linear) = {so3}")
print(f"[pi, pi] = 0: {pn.is_poisson(so3).ok}")

bad = MultiVector(Chart(("x1", "x2", "x3")), 2, {(0, 1): "x1", (0, 2): "-1", (1, 2): "1"})
verdict = pn.is_poisson(bad)
print(f"broken bivector passes: {verdict.ok}")
print(f"  residual: {verdict.residuals()}")

print()
print("== Nijenhuis torsion ==")
chart2 = Chart(("x1", "x2"))
diag = TensorOneOne(chart2, [["x1", "0"], ["0", "x2"]])
flat = all(v.is_zero() for v in pn.nijenhuis_torsion(diag).values())
print(f"N = diag(x1, x2) has vanishing torsion: {flat}")
swap = TensorOneOne(chart2, [["0", "x1"], ["x2", "0"]])
for (i, j), value in sorted(pn.nijenhuis_torsion(swap).items()):
    if not value.is_zero():
        print(f"T_swap({i + 1},{j + 1}) = {value}")

print()
print("== compatible pair and its hierarchy ==")
pi, tensor = corpus.conformal_pair()
print(f"pi = {pi}")
print(f"N  = conformal rescaling by 1 + x1")
verdict = pn.is_pn_pair(pi, tensor)
print(f"pair is compatible: {verdict.ok}")

chain = pn.hierarchy(pi, tensor, 3)
for k, bivector in enumerate(chain.bivectors):
    print(f"pi_{k} = {bivector}")
print(f"all pairwise brackets vanish: {chain.ok}")

print()
print("== an incompatible pair ==")
pi, diag = corpus.constant_diagonal_counterexample()
verdict = pn.is_pn_pair(pi, diag)
print(f"pi = {pi}, N = diag(2, 3)")
print(f"compatible: {verdict.ok}")
for key, value in verdict.residuals().items():
    print(f"  {key} = {value}")

print()
print("== building N from a complementary 2-form ==")
pi = corpus.unit_bivector_r2()
omega = corpus.complementary_two_form()
built = pn.complementary_build(pi, omega)
print(f"omega = {omega}")
print(f"N = sharp(pi) o flat(omega):")
for row in built.tensor.entries:
    print("  [" + ", ".join(str(e) for e in row) + "]")
print(f"resulting pair is compatible: {built.ok}")
