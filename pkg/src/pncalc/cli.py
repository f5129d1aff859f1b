"""Command line front end.

Every command reads one JSON document (see :mod:`pncalc.document`),
runs one check or construction, and prints one report. Exit codes match
the report verdict: 0 when the check passes, 1 when the mathematics
fails (including violated preconditions), 2 when the input cannot be
parsed. ``--json`` switches the report to a byte-stable JSON rendering.

Checks report residuals; constructions (torsion, koszul, algebroid
diff, dual-poisson, jet-algebroid, base projection) reuse the residual
map to carry the computed components, and pass whenever the inputs met
the hypotheses.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import algebroid as ab
from . import document
from . import groupoid_desk as gd
from . import jacobi as jc
from . import poisson_nijenhuis as pn
from . import report as report_mod
from . import suite as suite_mod
from .cartan import coordinate_form as cartan_form
from .errors import InputError, PreconditionError
from .report import Report


def _key_of(idx):
    return ",".join(str(i + 1) for i in idx)


def _nonzero_components(graded, prefix):
    return {
        f"{prefix}({_key_of(idx)})": str(poly)
        for idx, poly in sorted(graded.components.items())
    }


def _first_bivector(doc, command):
    return doc.require("bivectors", command)[0]


# -- handlers -------------------------------------------------------------------


def _check_poisson(doc, args, command):
    return report_mod.from_verdict(command, pn.is_poisson(_first_bivector(doc, command)))


def _check_nijenhuis(doc, args, command):
    tensor = doc.require("tensor11", command)
    torsion = pn.nijenhuis_torsion(tensor)
    residuals = {
        f"torsion({i + 1},{j + 1})": str(value)
        for (i, j), value in sorted(torsion.items())
        if not value.is_zero()
    }
    if residuals:
        return Report(command, "fail", residuals)
    return Report(command, "pass", {})


def _check_pn(doc, args, command):
    pi = _first_bivector(doc, command)
    tensor = doc.require("tensor11", command)
    return report_mod.from_verdict(command, pn.is_pn_pair(pi, tensor))


def _torsion(doc, args, command):
    tensor = doc.require("tensor11", command)
    torsion = pn.nijenhuis_torsion(tensor)
    values = {
        f"torsion({i + 1},{j + 1})": str(value)
        for (i, j), value in sorted(torsion.items())
        if not value.is_zero()
    }
    return report_mod.from_values(command, values)


def _koszul(doc, args, command):
    pi = _first_bivector(doc, command)
    forms = doc.require("forms", command)
    if len(forms) < 2:
        raise InputError(f"{command} needs a form block listing two one-forms")
    alpha, beta = forms[0], forms[1]
    for which, form in (("first", alpha), ("second", beta)):
        if form.degree != 1:
            raise InputError(f"{command}: the {which} form must have degree 1")
    bracket = pn.koszul_bracket(pi, alpha, beta)
    return report_mod.from_values(command, _nonzero_components(bracket, "bracket"))


def _concomitant(doc, args, command):
    pi = _first_bivector(doc, command)
    tensor = doc.require("tensor11", command)
    chart = pi.chart
    residuals = {}
    for i in range(chart.dim):
        for j in range(i + 1, chart.dim):
            value = pn.magri_morosi(
                pi, tensor, cartan_form(chart, i), cartan_form(chart, j)
            )
            if not value.is_zero():
                residuals[f"concomitant({i + 1},{j + 1})"] = str(value)
    if residuals:
        return Report(command, "fail", residuals)
    return Report(command, "pass", {})


def _hierarchy(doc, args, command):
    pi = _first_bivector(doc, command)
    tensor = doc.require("tensor11", command)
    result = pn.hierarchy(pi, tensor, args.max_order)
    if result.ok:
        values = {f"pi_{k}": str(b) for k, b in enumerate(result.bivectors)}
        return report_mod.from_values(command, values)
    return Report(command, "fail", result.residuals())


def _complementary(doc, args, command):
    pi = _first_bivector(doc, command)
    forms = doc.require("forms", command)
    result = pn.complementary_build(pi, forms[0])
    if result.ok:
        return Report(command, "pass", {"tensor": str(result.tensor)})
    return Report(command, "fail", result.residuals())


def _holomorphic(doc, args, command):
    bivectors = doc.require("bivectors", command)
    if len(bivectors) < 2:
        raise InputError(
            f"{command} needs a bivector block listing [real, imaginary] parts"
        )
    tensor = doc.require("tensor11", command)
    verdict = pn.holomorphic_check(bivectors[0], bivectors[1], tensor)
    return report_mod.from_verdict(command, verdict)


def _algebroid_validate(doc, args, command):
    alg = doc.require("algebroid", command)
    return report_mod.from_verdict(command, ab.algebroid_validate(alg))


def _algebroid_diff(doc, args, command):
    alg = doc.require("algebroid", command)
    section = doc.algebroid_section
    if section is None:
        raise InputError(f"{command} needs a section block inside the algebroid block")
    image = ab.algebroid_differential(alg, section)
    return report_mod.from_values(command, _nonzero_components(image, "d"))


def _algebroid_dual_poisson(doc, args, command):
    alg = doc.require("algebroid", command)
    dual = ab.dual_linear_poisson(alg)
    values = {"chart": ", ".join(dual.chart.coords)}
    values.update(_nonzero_components(dual, "pi"))
    return report_mod.from_values(command, values)


def _algebroid_compat(doc, args, command):
    first, second = doc.require("algebroid_pair", command)
    return report_mod.from_verdict(command, ab.compat_check(first, second))


def _algebroid_bialgebroid(doc, args, command):
    first, second = doc.require("algebroid_pair", command)
    return report_mod.from_verdict(command, ab.bialgebroid_check(first, second))


def _algebroid_pn_bialgebroid(doc, args, command):
    pi = _first_bivector(doc, command)
    tensor = doc.require("tensor11", command)
    return report_mod.from_verdict(command, ab.pn_bialgebroid_check(pi, tensor))


def _jacobi_check(doc, args, command):
    pair = doc.require("jacobi", command)[0]
    return report_mod.from_verdict(command, jc.is_jacobi(pair))


def _jacobi_compat(doc, args, command):
    pairs = doc.require("jacobi", command)
    if len(pairs) < 2:
        raise InputError(f"{command} needs a jacobi block listing two pairs")
    return report_mod.from_verdict(command, jc.jacobi_compat(pairs[0], pairs[1]))


def _jacobi_jet(doc, args, command):
    pair = doc.require("jacobi", command)[0]
    jet = jc.first_jet_algebroid(pair)
    values = {"basis": ", ".join(jet.basis)}
    for k, name in enumerate(jet.basis):
        values[f"anchor({name})"] = "(" + ", ".join(str(e) for e in jet.anchor[k]) + ")"
    for (i, j), row in sorted(jet.structure.items()):
        terms = [
            f"({e})*{name}" for e, name in zip(row, jet.basis) if not e.is_zero()
        ]
        values[f"[{jet.basis[i]},{jet.basis[j]}]"] = " + ".join(terms) if terms else "0"
    return report_mod.from_values(command, values)


def _require_groupoid(doc, command, bivector=False, tensor=False):
    groupoid = doc.require("groupoid", command)
    pi = doc.groupoid_bivector
    n_tensor = doc.groupoid_tensor
    if bivector and pi is None:
        raise InputError(f"{command} needs a bivector inside the pair_groupoid block")
    if tensor and n_tensor is None:
        raise InputError(f"{command} needs a tensor11 inside the pair_groupoid block")
    return groupoid, pi, n_tensor


def _groupoid_multiplicative(doc, args, command):
    groupoid, _, tensor = _require_groupoid(doc, command, tensor=True)
    return report_mod.from_verdict(
        command, gd.multiplicativity_check_tensor(groupoid, tensor)
    )


def _groupoid_poisson(doc, args, command):
    groupoid, pi, _ = _require_groupoid(doc, command, bivector=True)
    return report_mod.from_verdict(command, gd.poisson_groupoid_check(groupoid, pi))


def _groupoid_pn(doc, args, command):
    groupoid, pi, tensor = _require_groupoid(doc, command, bivector=True, tensor=True)
    return report_mod.from_verdict(command, gd.pn_groupoid_check(groupoid, pi, tensor))


def _groupoid_base(doc, args, command):
    groupoid, pi, tensor = _require_groupoid(doc, command, bivector=True, tensor=True)
    result = gd.base_structure(groupoid, pi, tensor)
    if result.ok:
        values = {"bivector": str(result.pi), "tensor": str(result.tensor)}
        return report_mod.from_values(command, values)
    return Report(command, "fail", result.residuals())


def _groupoid_coisotropic_invariant(doc, args, command):
    groupoid, pi, tensor = _require_groupoid(doc, command, bivector=True, tensor=True)
    sub = doc.submanifold if doc.submanifold is not None else groupoid.unit_diagonal()
    return report_mod.from_verdict(
        command, gd.coisotropic_invariant_check(pi, tensor, sub)
    )


HANDLERS = {
    "check-poisson": _check_poisson,
    "check-nijenhuis": _check_nijenhuis,
    "check-pn": _check_pn,
    "torsion": _torsion,
    "koszul": _koszul,
    "concomitant": _concomitant,
    "hierarchy": _hierarchy,
    "complementary": _complementary,
    "holomorphic": _holomorphic,
    "algebroid validate": _algebroid_validate,
    "algebroid diff": _algebroid_diff,
    "algebroid dual-poisson": _algebroid_dual_poisson,
    "algebroid compat": _algebroid_compat,
    "algebroid bialgebroid": _algebroid_bialgebroid,
    "algebroid pn-bialgebroid": _algebroid_pn_bialgebroid,
    "jacobi check": _jacobi_check,
    "jacobi compat": _jacobi_compat,
    "jacobi jet-algebroid": _jacobi_jet,
    "groupoid multiplicative": _groupoid_multiplicative,
    "groupoid poisson": _groupoid_poisson,
    "groupoid pn": _groupoid_pn,
    "groupoid base": _groupoid_base,
    "groupoid coisotropic-invariant": _groupoid_coisotropic_invariant,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="pncalc",
        description="Exact desk checks for bivectors, tensors, algebroids, and groupoids.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print a byte-stable JSON report")
    needs_input = argparse.ArgumentParser(add_help=False)
    needs_input.add_argument("--input", required=True, metavar="FILE", help="JSON document")

    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def leaf(name, help_text, extra=None, parent=sub):
        p = parent.add_parser(name, parents=[common, needs_input], help=help_text)
        if extra:
            extra(p)
        return p

    leaf("check-poisson", "does the bracket of the bivector with itself vanish")
    leaf("check-nijenhuis", "does the torsion of the (1,1)-tensor vanish")
    leaf("check-pn", "are the bivector and tensor a compatible pair")
    leaf("torsion", "print the nonzero torsion components of the tensor")
    leaf("koszul", "bracket of two one-forms induced by the bivector")
    leaf("concomitant", "mixed-pair residuals of the bivector and tensor")
    leaf(
        "hierarchy",
        "powers of the tensor applied to the bivector, pairwise brackets",
        extra=lambda p: p.add_argument(
            "--max-order", type=int, default=3, metavar="K", help="highest power (default 3)"
        ),
    )
    leaf("complementary", "build the tensor induced by a closed two-form")
    leaf("holomorphic", "real/imaginary pair test against an almost complex tensor")

    alg = sub.add_parser("algebroid", help="anchored bracket structures")
    alg_sub = alg.add_subparsers(dest="subcommand", required=True, metavar="SUBCOMMAND")
    leaf("validate", "check the algebroid axioms", parent=alg_sub)
    leaf("diff", "apply the differential to the section block", parent=alg_sub)
    leaf("dual-poisson", "fiberwise-linear bivector on the dual chart", parent=alg_sub)
    leaf("compat", "three compatibility certificates for two structures", parent=alg_sub)
    leaf("bialgebroid", "is the dual differential a bracket derivation", parent=alg_sub)
    leaf("pn-bialgebroid", "full staged check for a compatible pair", parent=alg_sub)

    jac = sub.add_parser("jacobi", help="bivector and field pairs")
    jac_sub = jac.add_subparsers(dest="subcommand", required=True, metavar="SUBCOMMAND")
    leaf("check", "do both closedness identities hold", parent=jac_sub)
    leaf("compat", "mixed twisted bracket of two pairs", parent=jac_sub)
    leaf("jet-algebroid", "print the extended-frame algebroid of a pair", parent=jac_sub)

    grp = sub.add_parser("groupoid", help="pair-groupoid desk checks")
    grp_sub = grp.add_subparsers(dest="subcommand", required=True, metavar="SUBCOMMAND")
    leaf("multiplicative", "is the tensor invariant on the multiplication graph", parent=grp_sub)
    leaf("poisson", "is the multiplication graph coisotropic", parent=grp_sub)
    leaf("pn", "all four groupoid certificates", parent=grp_sub)
    leaf("base", "project the groupoid pair back to the base", parent=grp_sub)
    leaf(
        "coisotropic-invariant",
        "joint check on a submanifold (default: the unit diagonal)",
        parent=grp_sub,
    )

    suite_p = sub.add_parser("suite", parents=[common], help="run the acceptance battery")
    del suite_p
    return parser


def _emit_suite(reports, as_json):
    if as_json:
        data = [r.to_data(stable=True) for r in reports]
        print(json.dumps(data, sort_keys=True, indent=2))
    else:
        for r in reports:
            detail = r.residuals.get("checked")
            if detail is None and r.residuals:
                key = next(iter(r.residuals))
                detail = f"{key} = {r.residuals[key]}"
            line = f"{r.command}: {r.verdict}"
            if r.elapsed is not None:
                line += f" ({r.elapsed:.2f} s)"
            if detail:
                line += f" -- {detail}"
            print(line)
    return 0 if all(r.ok for r in reports) else 1


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    command = args.command
    if getattr(args, "subcommand", None):
        command = f"{command} {args.subcommand}"

    if command == "suite":
        return _emit_suite(suite_mod.run_all(), args.json)

    handler = HANDLERS[command]
    started = time.perf_counter()
    try:
        doc = document.load_document(args.input)
        rep = handler(doc, args, command)
    except (PreconditionError, InputError) as exc:
        rep = report_mod.from_exception(command, exc)
    elapsed = time.perf_counter() - started
    rep = Report(rep.command, rep.verdict, rep.residuals, elapsed)
    print(rep.render_json() if args.json else rep.render_text())
    return rep.exit_code


if __name__ == "__main__":
    sys.exit(main())
