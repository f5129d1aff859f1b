"""Driving the command line from Python: documents, reports, exit codes.

Run with: python3 demos/06_cli_documents.py
"""

import os

from pncalc import cli, document

HERE = os.path.dirname(os.path.abspath(__file__))
DOCS = os.path.join(HERE, "documents")


def doc(name):
    return os.path.join(DOCS, name)


print("== a passing check (exit 0) ==")
code = cli.main(["check-poisson", "--input", doc("so3.json")])
print(f"exit code: {code}")

print()
print("== a failing check reports residuals (exit 1) ==")
code = cli.main(["check-pn", "--input", doc("diagonal_fail.json")])
print(f"exit code: {code}")

print()
print("== machine-readable output ==")
cli.main(["check-pn", "--input", doc("conformal_pn.json"), "--json"])

print()
print("== the other structure families ==")
for argv in (
    ["hierarchy", "--max-order", "2", "--input", doc("conformal_pn.json")],
    ["holomorphic", "--input", doc("holomorphic_r4.json")],
    ["jacobi", "check", "--input", doc("contact_jacobi.json")],
    ["algebroid", "dual-poisson", "--input", doc("so3_lie_algebra.json")],
    ["groupoid", "pn", "--input", doc("pair_groupoid.json")],
):
    print(f"$ pncalc {' '.join(argv)}")
    cli.main(argv)
    print()

print("== documents round trip ==")
loaded = document.load_document(doc("pair_groupoid.json"))
text = document.render_document(loaded)
print(text)
assert document.loads_document(text) == loaded
print("parse(render(doc)) == doc")
