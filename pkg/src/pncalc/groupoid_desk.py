"""Pair groupoids, affine submanifolds, and multiplicativity desk checks.

The only groupoids modeled are pair groupoids M x M over a chart: source
s(x,y) = x, target t(x,y) = y, multiplication m((x,y),(y,z)) = (x,z).
Every multiplicativity statement then reduces to exact linear algebra over
the rationals plus polynomial identities: the graph of m is an affine
subspace of the triple product, a tensor is multiplicative when the graph
is invariant under the threefold block sum, and a bivector makes the
groupoid Poisson when the graph is coisotropic for pi (+) pi (+) (-pi).

Submanifolds are restricted to affine coordinate constraints with rational
coefficients, so tangent and conormal bases are exact kernels and row
spaces, and restriction to the submanifold is substitution along a
rational parametrization.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from . import poisson_nijenhuis as pn
from .cartan import Chart, DiffForm, MultiVector
from .errors import InputError, InternalError, PreconditionError
from .linalg import nullspace, rref
from .polyalg import Polynomial


def _coerce(chart, value):
    if isinstance(value, Polynomial):
        if value.variables != chart.coords:
            raise InputError("polynomial lives on a different ring")
        return value
    if isinstance(value, str):
        return chart.parse(value)
    return Polynomial.constant(chart.coords, value)


def _promote(poly, chart, renames=None):
    images = {}
    if renames:
        images = {
            old: Polynomial.variable(chart.coords, new)
            for old, new in renames.items()
        }
    return poly.substitute(chart.coords, images)


class AffineSubmanifold:
    """Solution set of independent affine constraints sum r_i x^i = r_0.

    Constraints are given as affine-linear polynomials (or strings) that
    vanish on the submanifold; the constant term supplies r_0.
    """

    __slots__ = ("chart", "rows", "rhs")

    def __init__(self, chart, constraints):
        if not isinstance(chart, Chart):
            raise InputError(f"expected a Chart, got {chart!r}")
        n = chart.dim
        rows = []
        rhs = []
        for raw in constraints:
            poly = _coerce(chart, raw)
            row = [Fraction(0)] * n
            constant = Fraction(0)
            for exps, coeff in poly.terms.items():
                total = sum(exps)
                if total == 0:
                    constant = coeff
                elif total == 1:
                    row[exps.index(1)] = coeff
                else:
                    raise InputError(f"constraint {poly} is not affine-linear")
            rows.append(tuple(row))
            rhs.append(-constant)
        if rows:
            reduced, pivots = rref(rows)
            if len(pivots) < len(rows):
                aug = [list(r) + [b] for r, b in zip(rows, rhs)]
                _, aug_pivots = rref(aug)
                if n in aug_pivots:
                    raise InputError("inconsistent constraints")
                raise InputError("dependent constraints")
        object.__setattr__(self, "chart", chart)
        object.__setattr__(self, "rows", tuple(rows))
        object.__setattr__(self, "rhs", tuple(rhs))

    def __setattr__(self, name, value):
        raise AttributeError("AffineSubmanifold is immutable")

    @property
    def codim(self):
        return len(self.rows)

    @property
    def dim(self):
        return self.chart.dim - len(self.rows)

    def tangent_basis(self):
        """Rational basis of the tangent space (kernel of the rows)."""
        return nullspace(list(self.rows), self.chart.dim)

    def conormal_basis(self):
        """The constraint rows themselves: a basis of the conormal space."""
        return list(self.rows)

    def _parametrization(self):
        n = self.chart.dim
        if not self.rows:
            x0 = [Fraction(0)] * n
        else:
            aug = [list(r) + [b] for r, b in zip(self.rows, self.rhs)]
            reduced, pivots = rref(aug)
            if n in pivots:
                raise InputError("inconsistent constraints")
            x0 = [Fraction(0)] * n
            for row, p in zip(reduced, pivots):
                x0[p] = row[-1]
        basis = self.tangent_basis()
        params = Chart(tuple("s%d" % (j + 1) for j in range(len(basis))))
        images = {}
        for i, name in enumerate(self.chart.coords):
            acc = Polynomial.constant(params.coords, x0[i])
            for j, vec in enumerate(basis):
                if vec[i]:
                    acc = acc + Polynomial.variable(params.coords, params.coords[j]) * vec[i]
            images[name] = acc
        return params, images

    def restrict(self, poly):
        """Substitute a rational parametrization: the polynomial on S."""
        poly = _coerce(self.chart, poly)
        params, images = self._parametrization()
        return poly.substitute(params.coords, images)

    def __repr__(self):
        eqs = []
        for row, b in zip(self.rows, self.rhs):
            lhs = " + ".join(
                f"{c}*{name}" for c, name in zip(row, self.chart.coords) if c
            )
            eqs.append(f"{lhs or 0} = {b}")
        return f"AffineSubmanifold({'; '.join(eqs)})"


class PairGroupoid:
    """The pair groupoid over a base chart.

    Total chart stacks a source block (the base coordinates) and a target
    block (the base coordinates prefixed y_).
    """

    __slots__ = ("base", "total")

    def __init__(self, base):
        if not isinstance(base, Chart):
            raise InputError(f"expected a Chart, got {base!r}")
        if base.dim == 0:
            raise InputError("pair groupoid needs a positive-dimensional base")
        target = tuple("y_" + c for c in base.coords)
        coords = base.coords + target
        if len(set(coords)) != 2 * base.dim:
            raise InputError("base coordinate names collide with the y_ block")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "total", Chart(coords))

    def __setattr__(self, name, value):
        raise AttributeError("PairGroupoid is immutable")

    def unit_diagonal(self):
        """The unit space {x = y} as an affine submanifold of the total chart."""
        n = self.base.dim
        rows = []
        for a in range(n):
            x = Polynomial.variable(self.total.coords, self.total.coords[a])
            y = Polynomial.variable(self.total.coords, self.total.coords[n + a])
            rows.append(x - y)
        return AffineSubmanifold(self.total, rows)

    def triple_chart(self):
        coords = tuple(
            c + "_%d" % k for k in (1, 2, 3) for c in self.total.coords
        )
        if len(set(coords)) != 6 * self.base.dim:
            raise InputError("coordinate names collide across the triple product")
        return Chart(coords)

    def copy_renames(self, k):
        """Renaming of total-chart coordinates into copy k of the triple."""
        return {c: c + "_%d" % k for c in self.total.coords}

    def multiplication_graph(self):
        """Gr(m) = {((x,y),(y,z),(x,z))} inside the triple product."""
        triple = self.triple_chart()
        n = self.base.dim

        def var(copy, idx):
            name = self.total.coords[idx] + "_%d" % copy
            return Polynomial.variable(triple.coords, name)

        rows = []
        for a in range(n):
            rows.append(var(1, n + a) - var(2, a))      # y_1 = x_2
            rows.append(var(1, a) - var(3, a))          # x_1 = x_3
            rows.append(var(2, n + a) - var(3, n + a))  # y_2 = y_3
        return AffineSubmanifold(triple, rows)


def pair_bivector(groupoid, pi):
    """pi (-) pi: the source block carries pi, the target block -pi."""
    if not isinstance(pi, MultiVector) or pi.degree != 2:
        raise InputError("expected a degree-2 multivector on the base")
    if pi.chart != groupoid.base:
        raise InputError("bivector lives on a different chart")
    n = groupoid.base.dim
    total = groupoid.total
    renames = {c: "y_" + c for c in groupoid.base.coords}
    comps = {}
    for (a, b), poly in pi.components.items():
        comps[(a, b)] = _promote(poly, total)
        comps[(n + a, n + b)] = -_promote(poly, total, renames)
    return MultiVector(total, 2, comps)


def pair_tensor(groupoid, tensor):
    """N (+) N: the same tensor on the source and target blocks."""
    if not isinstance(tensor, pn.TensorOneOne):
        raise InputError("expected a (1,1)-tensor on the base")
    if tensor.chart != groupoid.base:
        raise InputError("tensor lives on a different chart")
    n = groupoid.base.dim
    total = groupoid.total
    renames = {c: "y_" + c for c in groupoid.base.coords}
    zero = Polynomial.zero(total.coords)
    entries = [[zero] * (2 * n) for _ in range(2 * n)]
    for a in range(n):
        for b in range(n):
            entries[a][b] = _promote(tensor.entries[a][b], total)
            entries[n + a][n + b] = _promote(tensor.entries[a][b], total, renames)
    return pn.TensorOneOne(total, entries)


@dataclass(frozen=True)
class InvariantVerdict:
    entries: tuple  # (tangent index, conormal index, restricted polynomial)

    @property
    def ok(self):
        return all(poly.is_zero() for _, _, poly in self.entries)

    def residuals(self):
        out = {}
        for i, j, poly in self.entries:
            if not poly.is_zero():
                out["conormal(%d).N.tangent(%d)" % (j + 1, i + 1)] = str(poly)
        return out


def invariant_check(tensor, sub):
    """Does the tensor map the tangent space of S into itself on S?"""
    if not isinstance(tensor, pn.TensorOneOne):
        raise InputError("expected a (1,1)-tensor")
    if not isinstance(sub, AffineSubmanifold) or sub.chart != tensor.chart:
        raise InputError("submanifold lives on a different chart")
    n = sub.chart.dim
    entries = []
    for i, v in enumerate(sub.tangent_basis()):
        image = []
        for a in range(n):
            acc = Polynomial.zero(sub.chart.coords)
            for b in range(n):
                if v[b]:
                    acc = acc + tensor.entries[a][b] * v[b]
            image.append(acc)
        for j, eta in enumerate(sub.conormal_basis()):
            pairing = Polynomial.zero(sub.chart.coords)
            for a in range(n):
                if eta[a]:
                    pairing = pairing + image[a] * eta[a]
            entries.append((i, j, sub.restrict(pairing)))
    return InvariantVerdict(entries=tuple(entries))


@dataclass(frozen=True)
class CoisotropicVerdict:
    entries: tuple  # (conormal index, conormal index, restricted polynomial)

    @property
    def ok(self):
        return all(poly.is_zero() for _, _, poly in self.entries)

    def residuals(self):
        out = {}
        for i, j, poly in self.entries:
            if not poly.is_zero():
                out["conormal(%d).sharp.conormal(%d)" % (j + 1, i + 1)] = str(poly)
        return out


def coisotropic_check(pi, sub):
    """Does sharp(pi) map the conormal space of S into its tangent space?"""
    if not isinstance(pi, MultiVector) or pi.degree != 2:
        raise InputError("expected a degree-2 multivector")
    if not isinstance(sub, AffineSubmanifold) or sub.chart != pi.chart:
        raise InputError("submanifold lives on a different chart")
    n = sub.chart.dim
    conormals = sub.conormal_basis()
    entries = []
    for i, eta in enumerate(conormals):
        form = DiffForm(sub.chart, 1, {(a,): eta[a] for a in range(n) if eta[a]})
        image = pn.sharp(pi, form)
        for j, etap in enumerate(conormals):
            pairing = Polynomial.zero(sub.chart.coords)
            for a in range(n):
                if etap[a]:
                    pairing = pairing + image.component((a,)) * etap[a]
            entries.append((i, j, sub.restrict(pairing)))
    return CoisotropicVerdict(entries=tuple(entries))


@dataclass(frozen=True)
class CoisoInvariantVerdict:
    invariant: InvariantVerdict
    coisotropic: CoisotropicVerdict
    higher: tuple  # (order k, CoisotropicVerdict for N^k pi)

    @property
    def ok(self):
        return (
            self.invariant.ok
            and self.coisotropic.ok
            and all(v.ok for _, v in self.higher)
        )

    def residuals(self):
        out = {}
        for label, val in self.invariant.residuals().items():
            out["invariant " + label] = val
        for label, val in self.coisotropic.residuals().items():
            out["coisotropic " + label] = val
        for k, verdict in self.higher:
            for label, val in verdict.residuals().items():
                out["order-%d %s" % (k, label)] = val
        return out


def coisotropic_invariant_check(pi, tensor, sub):
    """Conjunction of tensor invariance and coisotropy of S.

    When both pass and the deformed bivectors exist, S is additionally
    certified coisotropic for N^k pi, k <= 2.
    """
    inv = invariant_check(tensor, sub)
    coiso = coisotropic_check(pi, sub)
    higher = []
    if inv.ok and coiso.ok:
        for k in (1, 2):
            try:
                pik = pn.n_bivector(pi, tensor.power(k))
            except PreconditionError:
                break
            higher.append((k, coisotropic_check(pik, sub)))
    return CoisoInvariantVerdict(
        invariant=inv, coisotropic=coiso, higher=tuple(higher)
    )


def _triple_tensor(groupoid, tensor):
    triple = groupoid.triple_chart()
    m = 2 * groupoid.base.dim
    zero = Polynomial.zero(triple.coords)
    entries = [[zero] * (3 * m) for _ in range(3 * m)]
    for k in (1, 2, 3):
        renames = groupoid.copy_renames(k)
        off = (k - 1) * m
        for a in range(m):
            for b in range(m):
                entries[off + a][off + b] = _promote(
                    tensor.entries[a][b], triple, renames
                )
    return pn.TensorOneOne(triple, entries)


def _triple_bivector(groupoid, pi):
    triple = groupoid.triple_chart()
    m = 2 * groupoid.base.dim
    comps = {}
    for k, sign in ((1, 1), (2, 1), (3, -1)):
        renames = groupoid.copy_renames(k)
        off = (k - 1) * m
        for (a, b), poly in pi.components.items():
            comps[(off + a, off + b)] = _promote(poly, triple, renames) * sign
    return MultiVector(triple, 2, comps)


def multiplicativity_check_tensor(groupoid, tensor):
    """Is the multiplication graph invariant under N (+) N (+) N?"""
    if not isinstance(groupoid, PairGroupoid):
        raise InputError("expected a PairGroupoid")
    if not isinstance(tensor, pn.TensorOneOne) or tensor.chart != groupoid.total:
        raise InputError("expected a (1,1)-tensor on the total chart")
    return invariant_check(_triple_tensor(groupoid, tensor), groupoid.multiplication_graph())


def poisson_groupoid_check(groupoid, pi):
    """Is the multiplication graph coisotropic for pi (+) pi (+) (-pi)?"""
    if not isinstance(groupoid, PairGroupoid):
        raise InputError("expected a PairGroupoid")
    if not isinstance(pi, MultiVector) or pi.chart != groupoid.total or pi.degree != 2:
        raise InputError("expected a degree-2 multivector on the total chart")
    verdict = pn.is_poisson(pi)
    if not verdict.ok:
        raise PreconditionError(
            "bivector is not Poisson", {"schouten": str(verdict.residual)}
        )
    return coisotropic_check(_triple_bivector(groupoid, pi), groupoid.multiplication_graph())


@dataclass(frozen=True)
class PNGroupoidVerdict:
    pair_verdict: object  # pn.PNVerdict on the total chart
    graph_coisotropy: CoisotropicVerdict
    tensor_graph: InvariantVerdict
    unit_space: CoisoInvariantVerdict

    @property
    def ok(self):
        return (
            self.pair_verdict.ok
            and self.graph_coisotropy.ok
            and self.tensor_graph.ok
            and self.unit_space.ok
        )

    def residuals(self):
        out = {}
        for label, val in self.pair_verdict.residuals().items():
            out["pair " + label] = val
        for label, val in self.graph_coisotropy.residuals().items():
            out["graph " + label] = val
        for label, val in self.tensor_graph.residuals().items():
            out["tensor " + label] = val
        for label, val in self.unit_space.residuals().items():
            out["unit " + label] = val
        return out


def pn_groupoid_check(groupoid, pi, tensor):
    """Full desk check: PN pair, Poisson graph, multiplicative N, unit space."""
    if not isinstance(groupoid, PairGroupoid):
        raise InputError("expected a PairGroupoid")
    if not isinstance(pi, MultiVector) or pi.chart != groupoid.total or pi.degree != 2:
        raise InputError("expected a degree-2 multivector on the total chart")
    if not isinstance(tensor, pn.TensorOneOne) or tensor.chart != groupoid.total:
        raise InputError("expected a (1,1)-tensor on the total chart")
    graph = groupoid.multiplication_graph()
    return PNGroupoidVerdict(
        pair_verdict=pn.is_pn_pair(pi, tensor),
        graph_coisotropy=coisotropic_check(_triple_bivector(groupoid, pi), graph),
        tensor_graph=invariant_check(_triple_tensor(groupoid, tensor), graph),
        unit_space=coisotropic_invariant_check(pi, tensor, groupoid.unit_diagonal()),
    )


@dataclass(frozen=True)
class BaseStructure:
    pi: MultiVector
    tensor: object  # pn.TensorOneOne on the base chart
    pair_verdict: object  # pn.PNVerdict for the recovered pair
    related_residuals: tuple
    pushforward_residuals: tuple

    @property
    def ok(self):
        return (
            self.pair_verdict.ok
            and all(p.is_zero() for _, p in self.related_residuals)
            and all(p.is_zero() for _, p in self.pushforward_residuals)
        )

    def residuals(self):
        out = {}
        for label, val in self.pair_verdict.residuals().items():
            out["base pair " + label] = val
        for label, poly in self.related_residuals:
            if not poly.is_zero():
                out[label] = str(poly)
        for label, poly in self.pushforward_residuals:
            if not poly.is_zero():
                out[label] = str(poly)
        return out


def _uses_only(poly, allowed):
    for exps, _ in poly.terms.items():
        for name, e in zip(poly.variables, exps):
            if e and name not in allowed:
                return False
    return True


def base_structure(groupoid, pi, tensor):
    """Recover the base pair: project pi along the source, restrict N to units.

    The source pushforward of a pair-groupoid block bivector is coordinate
    projection; it is well defined only when the source block does not
    depend on the target coordinates, and that is checked rather than
    assumed.  The verdict certifies the recovered pair and the relatedness
    identities s_* N = N_M s_* and s_*(N pi) = N_M pi_M.
    """
    composite = pn_groupoid_check(groupoid, pi, tensor)
    if not composite.ok:
        raise PreconditionError(
            "base recovery needs a Poisson-Nijenhuis groupoid",
            composite.residuals(),
        )
    base = groupoid.base
    n = base.dim
    allowed = set(base.coords)
    comps = {}
    for (a, b), poly in pi.components.items():
        if a < n and b < n:
            if not _uses_only(poly, allowed):
                raise PreconditionError(
                    "pushforward along the source is ill-defined",
                    {"component (%d,%d)" % (a + 1, b + 1): str(poly)},
                )
            comps[(a, b)] = poly.substitute(base.coords, {})
    base_pi = MultiVector(base, 2, comps)

    diag = {
        "y_" + c: Polynomial.variable(groupoid.total.coords, c)
        for c in base.coords
    }
    entries = []
    for a in range(n):
        row = []
        for b in range(n):
            on_diag = tensor.entries[a][b].substitute(groupoid.total.coords, diag)
            if not _uses_only(on_diag, allowed):
                raise InternalError("diagonal restriction left a target coordinate")
            row.append(on_diag.substitute(base.coords, {}))
        entries.append(row)
    base_tensor = pn.TensorOneOne(base, entries)

    related = []
    for a in range(n):
        for i in range(n):
            diff = tensor.entries[a][i] - _promote(
                base_tensor.entries[a][i], groupoid.total
            )
            related.append(("s-related x-block (%d,%d)" % (a + 1, i + 1), diff))
        for i in range(n, 2 * n):
            related.append(
                ("s-related cross-block (%d,%d)" % (a + 1, i + 1), tensor.entries[a][i])
            )

    pushforward = []
    deformed_total = pn.n_bivector(pi, tensor)
    deformed_base = pn.n_bivector(base_pi, base_tensor)
    for a, b in combinations(range(n), 2):
        diff = deformed_total.component((a, b)) - _promote(
            deformed_base.component((a, b)), groupoid.total
        )
        pushforward.append(("pushforward N.pi (%d,%d)" % (a + 1, b + 1), diff))

    return BaseStructure(
        pi=base_pi,
        tensor=base_tensor,
        pair_verdict=pn.is_pn_pair(base_pi, base_tensor),
        related_residuals=tuple(related),
        pushforward_residuals=tuple(pushforward),
    )
