"""Pair groupoid desk checks: lifts, multiplicativity, base recovery.

Run with: python3 demos/05_groupoids.py
"""

from pncalc import corpus, groupoid_desk as gd
from pncalc.cartan import MultiVector
from pncalc.groupoid_desk import PairGroupoid

pi, tensor = corpus.conformal_pair()
G = PairGroupoid(pi.chart)

print("== the pair groupoid over the plane ==")
print(f"base coordinates:  {G.base.coords}")
print(f"total coordinates: {G.total.coords}")

print()
print("== lifting base structures ==")
# source block keeps pi, target block carries -pi; N goes in block-diagonally
piG = gd.pair_bivector(G, pi)
NG = gd.pair_tensor(G, tensor)
print(f"lifted bivector: {piG}")
print(f"lifted tensor rows:")
for row in NG.entries:
    print("  [" + ", ".join(str(e) for e in row) + "]")

print()
print("== groupoid-level checks ==")
print(f"lifted bivector is a Poisson groupoid structure: "
      f"{gd.poisson_groupoid_check(G, piG).ok}")
print(f"lifted tensor is multiplicative: "
      f"{gd.multiplicativity_check_tensor(G, NG).ok}")
verdict = gd.pn_groupoid_check(G, piG, NG)
print(f"together they form a compatible groupoid pair: {verdict.ok}")

print()
print("== recovering the base structure ==")
base = gd.base_structure(G, piG, NG)
print(f"projected bivector: {base.pi}")
print(f"matches the original: {base.pi == pi and base.tensor.entries == tensor.entries}")

print()
print("== the unit diagonal ==")
diagonal = G.unit_diagonal()
for row, rhs in zip(diagonal.rows, diagonal.rhs):
    terms = [
        (f"{name}" if c == 1 else f"- {name}" if c == -1 else f"{c}*{name}")
        for c, name in zip(row, G.total.coords)
        if c != 0
    ]
    print(f"constraint: {' '.join(terms)} = {rhs}")
inv = gd.coisotropic_invariant_check(piG, NG, diagonal)
print(f"diagonal is coisotropic and tensor-invariant: {inv.ok}")

print()
print("== a wrong-sign lift fails ==")
# promote pi to the total chart WITHOUT flipping the target block
components = {}
for (i, j), poly in piG.components.items():
    components[(i, j)] = poly if max(i, j) < G.base.dim else -poly
wrong = MultiVector(G.total, 2, components)
verdict = gd.poisson_groupoid_check(G, wrong)
print(f"same-sign lift passes: {verdict.ok}")
for key, value in list(verdict.residuals().items())[:2]:
    print(f"  {key} = {value}")
