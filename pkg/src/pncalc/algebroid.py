"""Lie algebroids with polynomial coefficient data.

An algebroid here is a trivialized bundle over a chart: a finite basis of
sections e_1..e_r, an anchor given column by column as vector fields on the
base, and a structure table c^k_{ij} storing the brackets of basis sections.
Everything downstream (differential, Gerstenhaber bracket, dual linear
Poisson structure, bialgebroid checks) is computed from that table exactly.

Index conventions, fixed throughout:

* basis indices are 0-based internally; printed labels are 1-based;
* the structure table is stored only for i < j, with c(j, i) = -c(i, j);
* the anchor is stored as columns: anchor[i][a] is the a-th base component
  of rho(e_i);
* on the dual chart (base coords first, then fiber coords) the linear
  Poisson structure stores component (a, n+i) = -anchor[i][a], so that
  {xi_i, x^a} = anchor[i][a], and component (n+i, n+j) = sum_k c^k_{ij} xi_k.
"""

from dataclasses import dataclass
from itertools import combinations

from .errors import InputError, InternalError, PreconditionError
from .polyalg import Polynomial, Rational
from . import cartan
from .cartan import Chart, MultiVector
from . import poisson_nijenhuis as pn


def _coerce_base_poly(chart, value):
    if isinstance(value, Polynomial):
        if value.variables == chart.coords:
            return value
        if value.is_constant():
            return Polynomial.constant(chart.coords, value.constant_value())
        raise InputError(
            "polynomial over %r does not live on the base chart %r"
            % (value.variables, chart.coords)
        )
    if isinstance(value, str):
        return chart.parse(value)
    if isinstance(value, (int, Rational)):
        return Polynomial.constant(chart.coords, value)
    raise InputError("cannot interpret %r as a base polynomial" % (value,))


class AlgebroidData:
    """Base chart, rank, basis names, anchor columns, structure table."""

    __slots__ = ("base", "rank", "basis", "anchor", "structure")

    def __init__(self, base, rank, basis, anchor, structure):
        if not isinstance(base, Chart):
            raise InputError("base must be a Chart")
        rank = int(rank)
        if rank < 1:
            raise InputError("rank must be at least 1")
        basis = tuple(basis)
        if len(basis) != rank:
            raise InputError("expected %d basis names, got %d" % (rank, len(basis)))
        if len(set(basis)) != rank:
            raise InputError("basis names must be distinct")
        cols = []
        anchor = tuple(anchor)
        if len(anchor) != rank:
            raise InputError("anchor needs one column per basis section")
        for col in anchor:
            col = tuple(_coerce_base_poly(base, entry) for entry in col)
            if len(col) != base.dim:
                raise InputError(
                    "anchor column needs %d components, got %d" % (base.dim, len(col))
                )
            cols.append(col)
        table = {}
        for key, value in dict(structure).items():
            i, j = key
            if not (0 <= i < j < rank):
                raise InputError(
                    "structure keys must be 0-based pairs (i, j) with i < j; got %r"
                    % (key,)
                )
            row = tuple(_coerce_base_poly(base, entry) for entry in value)
            if len(row) != rank:
                raise InputError(
                    "structure entry %r needs %d components" % (key, rank)
                )
            if any(not p.is_zero() for p in row):
                table[(i, j)] = row
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "anchor", tuple(cols))
        object.__setattr__(self, "structure", table)

    def __setattr__(self, name, value):
        raise AttributeError("AlgebroidData is immutable")

    def c(self, i, j):
        """Structure constants of [e_i, e_j] as a tuple of base polynomials."""
        zero = Polynomial.zero(self.base.coords)
        if i == j:
            return tuple(zero for _ in range(self.rank))
        if i < j:
            return self.structure.get((i, j), tuple(zero for _ in range(self.rank)))
        row = self.structure.get((j, i))
        if row is None:
            return tuple(zero for _ in range(self.rank))
        return tuple(-p for p in row)

    def anchor_field(self, i):
        """rho(e_i) as a vector field on the base chart."""
        return cartan.vector_field(self.base, list(self.anchor[i]))

    def __eq__(self, other):
        if not isinstance(other, AlgebroidData):
            return NotImplemented
        return (
            self.base == other.base
            and self.rank == other.rank
            and self.basis == other.basis
            and self.anchor == other.anchor
            and self.structure == other.structure
        )

    __hash__ = None

    def __repr__(self):
        return "AlgebroidData(rank %d over %r)" % (self.rank, self.base.coords)


class AlgebroidSection:
    """Exterior power of sections, components over increasing index tuples.

    The same container serves both the bundle and its dual: the differential
    reads its argument as a dual-side form, the Gerstenhaber bracket as a
    primal multisection.  Components are polynomials on the base chart.
    """

    __slots__ = ("algebroid", "degree", "components")

    def __init__(self, algebroid, degree, components):
        if not isinstance(algebroid, AlgebroidData):
            raise InputError("first argument must be an AlgebroidData")
        degree = int(degree)
        if degree < 0:
            raise InputError("degree must be nonnegative")
        clean = {}
        for key, value in dict(components).items():
            key = tuple(key)
            if len(key) != degree:
                raise InputError(
                    "component key %r has length %d, expected %d"
                    % (key, len(key), degree)
                )
            if any(not (0 <= a < algebroid.rank) for a in key):
                raise InputError("component key %r out of range" % (key,))
            if len(set(key)) != len(key):
                continue
            sorted_key, sign = cartan._sort_sign(key)
            poly = _coerce_base_poly(algebroid.base, value)
            if sign < 0:
                poly = -poly
            if sorted_key in clean:
                poly = clean[sorted_key] + poly
            if poly.is_zero():
                clean.pop(sorted_key, None)
            else:
                clean[sorted_key] = poly
        object.__setattr__(self, "algebroid", algebroid)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "components", clean)

    def __setattr__(self, name, value):
        raise AttributeError("AlgebroidSection is immutable")

    @classmethod
    def zero(cls, algebroid, degree):
        return cls(algebroid, degree, {})

    @classmethod
    def from_terms(cls, algebroid, degree, terms):
        acc = {}
        for key, value in terms:
            key = tuple(key)
            if len(set(key)) != len(key):
                continue
            sorted_key, sign = cartan._sort_sign(key)
            poly = _coerce_base_poly(algebroid.base, value)
            if sign < 0:
                poly = -poly
            acc[sorted_key] = acc.get(sorted_key, Polynomial.zero(algebroid.base.coords)) + poly
        return cls(algebroid, degree, acc)

    def is_zero(self):
        return not self.components

    def component(self, key):
        key = tuple(key)
        if len(set(key)) != len(key):
            return Polynomial.zero(self.algebroid.base.coords)
        sorted_key, sign = cartan._sort_sign(key)
        poly = self.components.get(sorted_key)
        if poly is None:
            return Polynomial.zero(self.algebroid.base.coords)
        return poly if sign > 0 else -poly

    def _check_peer(self, other):
        if not isinstance(other, AlgebroidSection):
            raise InputError("expected an AlgebroidSection")
        if other.algebroid != self.algebroid:
            raise InputError("sections live on different algebroids")

    def __add__(self, other):
        self._check_peer(other)
        if other.degree != self.degree:
            raise InputError(
                "cannot add sections of degree %d and %d" % (self.degree, other.degree)
            )
        acc = dict(self.components)
        for key, poly in other.components.items():
            total = acc.get(key, Polynomial.zero(self.algebroid.base.coords)) + poly
            if total.is_zero():
                acc.pop(key, None)
            else:
                acc[key] = total
        return AlgebroidSection(self.algebroid, self.degree, acc)

    def __neg__(self):
        return AlgebroidSection(
            self.algebroid,
            self.degree,
            {key: -poly for key, poly in self.components.items()},
        )

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        poly = _coerce_base_poly(self.algebroid.base, scalar)
        return AlgebroidSection(
            self.algebroid,
            self.degree,
            {key: coeff * poly for key, coeff in self.components.items()},
        )

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, AlgebroidSection):
            return NotImplemented
        return (
            self.algebroid == other.algebroid
            and self.degree == other.degree
            and self.components == other.components
        )

    __hash__ = None

    def __str__(self):
        if not self.components:
            return "0"
        names = self.algebroid.basis
        pieces = []
        for key in sorted(self.components):
            coeff = self.components[key]
            label = "^".join(names[a] for a in key) if key else "1"
            text = str(coeff)
            if "+" in text or text.count("-") > (1 if text.startswith("-") else 0):
                text = "(%s)" % text
            pieces.append("%s * %s" % (text, label) if key else text)
        return " + ".join(pieces)

    def __repr__(self):
        return "AlgebroidSection(degree %d: %s)" % (self.degree, self)


def unit_section(algebroid, index):
    """The basis section e_index (0-based) as a degree-1 section."""
    if not (0 <= index < algebroid.rank):
        raise InputError("basis index %d out of range" % index)
    return AlgebroidSection(algebroid, 1, {(index,): 1})


def section_wedge(left, right):
    left._check_peer(right)
    out = {}
    base = left.algebroid.base
    for lkey, lpoly in left.components.items():
        for rkey, rpoly in right.components.items():
            key = lkey + rkey
            if len(set(key)) != len(key):
                continue
            sorted_key, sign = cartan._sort_sign(key)
            poly = lpoly * rpoly
            if sign < 0:
                poly = -poly
            total = out.get(sorted_key, Polynomial.zero(base.coords)) + poly
            if total.is_zero():
                out.pop(sorted_key, None)
            else:
                out[sorted_key] = total
    return AlgebroidSection(left.algebroid, left.degree + right.degree, out)


def rho_function(algebroid, section, func):
    """Apply the anchored vector field of a degree-1 section to a function."""
    if section.degree != 1:
        raise InputError("anchor application needs a degree-1 section")
    func = _coerce_base_poly(algebroid.base, func)
    out = Polynomial.zero(algebroid.base.coords)
    for (i,), coeff in section.components.items():
        for a, name in enumerate(algebroid.base.coords):
            out = out + coeff * algebroid.anchor[i][a] * func.partial(name)
    return out


def anchor_field_of(algebroid, section):
    """rho applied to a degree-1 section, as a vector field on the base."""
    if section.degree != 1:
        raise InputError("anchor application needs a degree-1 section")
    comps = [Polynomial.zero(algebroid.base.coords) for _ in range(algebroid.base.dim)]
    for (i,), coeff in section.components.items():
        for a in range(algebroid.base.dim):
            comps[a] = comps[a] + coeff * algebroid.anchor[i][a]
    return cartan.vector_field(algebroid.base, comps)


def section_bracket(algebroid, left, right):
    """Bracket of two degree-1 sections, extended by Leibniz from the table."""
    left._check_peer(right)
    if left.degree != 1 or right.degree != 1:
        raise InputError("section_bracket needs degree-1 sections")
    rank = algebroid.rank
    zero = Polynomial.zero(algebroid.base.coords)
    comps = [zero for _ in range(rank)]
    for (i,), xc in left.components.items():
        for (j,), yc in right.components.items():
            row = algebroid.c(i, j)
            prod = xc * yc
            for k in range(rank):
                if not row[k].is_zero():
                    comps[k] = comps[k] + prod * row[k]
    for k in range(rank):
        comps[k] = comps[k] + rho_function(algebroid, left, right.component((k,)))
        comps[k] = comps[k] - rho_function(algebroid, right, left.component((k,)))
    return AlgebroidSection(
        algebroid, 1, {(k,): comps[k] for k in range(rank) if not comps[k].is_zero()}
    )


@dataclass
class AlgebroidVerdict:
    """Jacobi residuals per basis triple, anchor residuals per basis pair."""

    jacobi_residuals: dict
    anchor_residuals: dict

    @property
    def jacobi_ok(self):
        return all(r.is_zero() for r in self.jacobi_residuals.values())

    @property
    def anchor_ok(self):
        return all(r.is_zero() for r in self.anchor_residuals.values())

    @property
    def ok(self):
        return self.jacobi_ok and self.anchor_ok

    def residuals(self):
        out = {}
        for (i, j, k), res in self.jacobi_residuals.items():
            if not res.is_zero():
                out["jacobi(%d,%d,%d)" % (i + 1, j + 1, k + 1)] = str(res)
        for (i, j), res in self.anchor_residuals.items():
            if not res.is_zero():
                out["anchor(%d,%d)" % (i + 1, j + 1)] = str(res)
        return out


def algebroid_validate(algebroid):
    """Check the Jacobi identity and the anchor morphism property.

    Both residual families are tensorial once the Leibniz rule is built into
    the bracket, so checking them on basis sections settles them everywhere.
    """
    rank = algebroid.rank
    jac = {}
    for i, j, k in combinations(range(rank), 3):
        total = AlgebroidSection.zero(algebroid, 1)
        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
            inner = section_bracket(algebroid, unit_section(algebroid, a), unit_section(algebroid, b))
            total = total + section_bracket(algebroid, inner, unit_section(algebroid, c))
        jac[(i, j, k)] = total
    anch = {}
    for i, j in combinations(range(rank), 2):
        bracket = section_bracket(algebroid, unit_section(algebroid, i), unit_section(algebroid, j))
        lhs = anchor_field_of(algebroid, bracket)
        rhs = cartan.vf_bracket(algebroid.anchor_field(i), algebroid.anchor_field(j))
        anch[(i, j)] = lhs - rhs
    return AlgebroidVerdict(jac, anch)


def algebroid_differential(algebroid, omega):
    """Differential on dual-side sections, via the structure table and anchor.

    (d omega)(e_{i_0}, .., e_{i_k}) =
        sum_m (-1)^m rho(e_{i_m}) omega(.. hat m ..)
      + sum_{m<l} (-1)^{m+l} omega([e_{i_m}, e_{i_l}], .. hat m, hat l ..)
    """
    if omega.algebroid != algebroid:
        raise InputError("section does not belong to this algebroid")
    k = omega.degree
    rank = algebroid.rank
    out = {}
    for key in combinations(range(rank), k + 1):
        val = Polynomial.zero(algebroid.base.coords)
        for m in range(k + 1):
            rest = key[:m] + key[m + 1:]
            term = rho_function(algebroid, unit_section(algebroid, key[m]), omega.component(rest))
            val = val + term if m % 2 == 0 else val - term
        for m in range(k + 1):
            for l in range(m + 1, k + 1):
                rest = tuple(key[t] for t in range(k + 1) if t != m and t != l)
                row = algebroid.c(key[m], key[l])
                inner = Polynomial.zero(algebroid.base.coords)
                for t in range(rank):
                    if not row[t].is_zero():
                        inner = inner + row[t] * omega.component((t,) + rest)
                val = val - inner if (m + l) % 2 == 1 else val + inner
        if not val.is_zero():
            out[key] = val
    return AlgebroidSection(algebroid, k + 1, out)


def _section_lie(algebroid, vector, other):
    """[X, Q] for a degree-1 X: derivation in coefficients and in each slot."""
    terms = []
    for key, poly in other.components.items():
        terms.append((key, rho_function(algebroid, vector, poly)))
        for pos in range(len(key)):
            repl = section_bracket(algebroid, vector, unit_section(algebroid, key[pos]))
            for (a,), coeff in repl.components.items():
                terms.append((key[:pos] + (a,) + key[pos + 1:], poly * coeff))
    return AlgebroidSection.from_terms(algebroid, other.degree, terms)


def gerstenhaber_bracket(algebroid, left, right):
    """Graded bracket on multisections extending the section bracket.

    Same normalization as the multivector bracket: degree-1 against degree-0
    is anchor application, two degree-1 sections give the section bracket,
    higher degrees peel off leading factors by the graded Leibniz rule.
    """
    left._check_peer(right)
    if left.algebroid != algebroid:
        raise InputError("sections do not belong to this algebroid")
    p, q = left.degree, right.degree
    if p == 0 and q == 0:
        return AlgebroidSection.zero(algebroid, 0)
    if p == 0:
        flipped = gerstenhaber_bracket(algebroid, right, left)
        return flipped if q % 2 == 0 else -flipped
    if p == 1:
        return _section_lie(algebroid, left, right)
    out = AlgebroidSection.zero(algebroid, p + q - 1)
    sign = cartan._leibniz_sign(p, q)
    for key, poly in left.components.items():
        head = AlgebroidSection(algebroid, 1, {(key[0],): poly})
        tail = AlgebroidSection(algebroid, p - 1, {key[1:]: 1})
        out = out + section_wedge(head, gerstenhaber_bracket(algebroid, tail, right))
        cross = section_wedge(gerstenhaber_bracket(algebroid, head, right), tail)
        out = out + cross if sign > 0 else out - cross
    return out


def tangent_algebroid(chart):
    """The tangent bundle: identity anchor, vanishing structure table."""
    if chart.dim < 1:
        raise InputError("tangent algebroid needs at least one coordinate")
    cols = []
    for i in range(chart.dim):
        cols.append(tuple(1 if a == i else 0 for a in range(chart.dim)))
    return AlgebroidData(
        chart,
        chart.dim,
        tuple("d_" + c for c in chart.coords),
        cols,
        {},
    )


def tangent_deformed_algebroid(tensor):
    """Tangent bundle with anchor N and the deformed bracket of N.

    Requires vanishing torsion; the deformed bracket then satisfies Jacobi
    and the anchor morphism property, which is re-validated as a guard.
    """
    chart = tensor.chart
    torsion = pn.nijenhuis_torsion(tensor)
    bad = {key: str(val) for key, val in torsion.items() if not val.is_zero()}
    if bad:
        raise PreconditionError("the deforming tensor has nonzero torsion", bad)
    n = chart.dim
    cols = [tuple(tensor.entries[a][i] for a in range(n)) for i in range(n)]
    table = {}
    for i, j in combinations(range(n), 2):
        bracket = pn.deformed_bracket(
            tensor,
            cartan.coordinate_vector(chart, i),
            cartan.coordinate_vector(chart, j),
        )
        table[(i, j)] = tuple(bracket.component((k,)) for k in range(n))
    out = AlgebroidData(chart, n, tuple("d_" + c for c in chart.coords), cols, table)
    verdict = algebroid_validate(out)
    if not verdict.ok:
        raise InternalError(
            "torsion-free deformation produced an invalid algebroid: %r"
            % verdict.residuals()
        )
    return out


def cotangent_algebroid(pi):
    """Cotangent algebroid of a Poisson bivector.

    Basis sections are the coordinate differentials, the anchor is the sharp
    map column by column, and the structure table is the bracket on one-forms
    evaluated on pairs of coordinate differentials.
    """
    chart = pi.chart
    verdict = pn.is_poisson(pi)
    if not verdict.ok:
        raise PreconditionError("bivector is not Poisson", verdict.residuals())
    n = chart.dim
    sharp = pn.sharp_matrix(pi)
    cols = [tuple(sharp[a][i] for a in range(n)) for i in range(n)]
    table = {}
    for i, j in combinations(range(n), 2):
        form = pn.koszul_bracket(
            pi,
            cartan.coordinate_form(chart, i),
            cartan.coordinate_form(chart, j),
        )
        table[(i, j)] = tuple(form.component((k,)) for k in range(n))
    out = AlgebroidData(chart, n, tuple("d" + c for c in chart.coords), cols, table)
    verdict = algebroid_validate(out)
    if not verdict.ok:
        raise InternalError(
            "Poisson bivector produced an invalid cotangent algebroid: %r"
            % verdict.residuals()
        )
    return out


def algebroid_sum(first, second):
    """Pointwise sum of anchors and structure tables on a common frame."""
    return algebroid_pencil(first, second, 1)


def algebroid_pencil(first, second, weight):
    """first + weight * second on a common base chart and frame."""
    if first.base != second.base or first.rank != second.rank:
        raise InputError("algebroids must share base chart and rank")
    if first.basis != second.basis:
        raise InputError("algebroids must share basis names")
    lam = weight if isinstance(weight, Rational) else Rational(weight)
    cols = []
    for i in range(first.rank):
        cols.append(
            tuple(
                first.anchor[i][a] + second.anchor[i][a] * lam
                for a in range(first.base.dim)
            )
        )
    table = {}
    for key in set(first.structure) | set(second.structure):
        i, j = key
        row1 = first.c(i, j)
        row2 = second.c(i, j)
        table[key] = tuple(row1[k] + row2[k] * lam for k in range(first.rank))
    return AlgebroidData(first.base, first.rank, first.basis, cols, table)


def build_dual_chart(algebroid, fiber_names=None):
    """Chart for the dual bundle: base coordinates, then one fiber per section."""
    if fiber_names is None:
        fiber_names = tuple("xi_" + b for b in algebroid.basis)
    fiber_names = tuple(fiber_names)
    if len(fiber_names) != algebroid.rank:
        raise InputError("need one fiber name per basis section")
    clash = set(fiber_names) & set(algebroid.base.coords)
    if clash:
        raise InputError("fiber names collide with base coordinates: %r" % sorted(clash))
    return Chart(algebroid.base.coords + fiber_names)


def dual_linear_poisson(algebroid, fiber_names=None):
    """Fiber-linear Poisson bivector on the dual bundle chart.

    {xi_i, xi_j} = sum_k c^k_{ij} xi_k   and   {xi_i, x^a} = anchor[i][a];
    Jacobi for this bivector is equivalent to the algebroid axioms, and the
    result is re-checked as a guard.
    """
    verdict = algebroid_validate(algebroid)
    if not verdict.ok:
        raise PreconditionError("algebroid axioms fail", verdict.residuals())
    dual = build_dual_chart(algebroid, fiber_names)
    n = algebroid.base.dim
    rank = algebroid.rank

    def promote(poly):
        return poly.substitute(dual.coords, {})

    comps = {}
    for i in range(rank):
        for a in range(n):
            entry = algebroid.anchor[i][a]
            if not entry.is_zero():
                comps[(a, n + i)] = -promote(entry)
    for (i, j), row in algebroid.structure.items():
        val = Polynomial.zero(dual.coords)
        for k in range(rank):
            if not row[k].is_zero():
                val = val + promote(row[k]) * Polynomial.variable(dual.coords, dual.coords[n + k])
        if not val.is_zero():
            comps[(n + i, n + j)] = val
    out = MultiVector(dual, 2, comps)
    check = pn.is_poisson(out)
    if not check.ok:
        raise InternalError(
            "valid algebroid produced a non-Poisson dual structure: %r"
            % check.residuals()
        )
    return out


def linear_poisson_to_algebroid(pi, base, basis):
    """Recover the algebroid from a fiber-linear Poisson structure.

    The chart of pi must extend the base chart by one fiber coordinate per
    basis name.  Components are classified by block: base-base must vanish,
    base-fiber must be fiber-free, fiber-fiber must be homogeneous of fiber
    degree exactly one.
    """
    if not isinstance(base, Chart):
        raise InputError("base must be a Chart")
    basis = tuple(basis)
    n = base.dim
    rank = len(basis)
    chart = pi.chart
    if chart.coords[:n] != base.coords or chart.dim != n + rank:
        raise InputError("bivector chart does not extend the base chart by the fibers")
    fibers = chart.coords[n:]
    bad = {}
    anchor_cols = [[Polynomial.zero(base.coords) for _ in range(n)] for _ in range(rank)]
    table = {}
    for (a, b), poly in pi.components.items():
        if b < n:
            bad["(%d,%d)" % (a + 1, b + 1)] = "base-base block must vanish: " + str(poly)
        elif a < n:
            if poly.degree_in(fibers) > 0:
                bad["(%d,%d)" % (a + 1, b + 1)] = "base-fiber block must be fiber-free: " + str(poly)
            else:
                anchor_cols[b - n][a] = -poly.substitute(base.coords, {})
        else:
            per_k = [dict() for _ in range(rank)]
            bad_term = False
            for exps, coeff in poly.terms.items():
                fiber_part = exps[n:]
                if sum(fiber_part) != 1:
                    bad_term = True
                    break
                k = fiber_part.index(1)
                per_k[k][exps[:n]] = coeff
            if bad_term:
                bad["(%d,%d)" % (a + 1, b + 1)] = (
                    "fiber-fiber block must be fiber-linear: " + str(poly)
                )
            else:
                row = []
                for k in range(rank):
                    terms = {
                        exps: coeff
                        for exps, coeff in per_k[k].items()
                        if coeff
                    }
                    row.append(Polynomial(base.coords, terms))
                table[(a - n, b - n)] = tuple(row)
    if bad:
        raise PreconditionError("bivector is not fiber-linear", bad)
    return AlgebroidData(base, rank, basis, [tuple(col) for col in anchor_cols], table)


@dataclass
class CompatVerdict:
    """Three certificates for compatibility of two algebroid structures.

    mixed_jacobi and mixed_anchor come from expanding the axioms of the sum,
    differential_residuals from the anticommutator of the two differentials,
    dual_bracket from the multivector bracket of the two dual structures.
    All three must agree; disagreement is an internal error raised upstream.
    """

    mixed_jacobi: dict
    mixed_anchor: dict
    differential_residuals: dict
    dual_bracket: object

    @property
    def certificate_a(self):
        return all(r.is_zero() for r in self.mixed_jacobi.values()) and all(
            r.is_zero() for r in self.mixed_anchor.values()
        )

    @property
    def certificate_b(self):
        return all(r.is_zero() for r in self.differential_residuals.values())

    @property
    def certificate_c(self):
        return self.dual_bracket.is_zero()

    @property
    def ok(self):
        return self.certificate_a

    def residuals(self):
        out = {}
        for (i, j, k), res in self.mixed_jacobi.items():
            if not res.is_zero():
                out["mixed_jacobi(%d,%d,%d)" % (i + 1, j + 1, k + 1)] = str(res)
        for (i, j), res in self.mixed_anchor.items():
            if not res.is_zero():
                out["mixed_anchor(%d,%d)" % (i + 1, j + 1)] = str(res)
        for label, res in self.differential_residuals.items():
            if not res.is_zero():
                out["anticommutator(%s)" % label] = str(res)
        if not self.dual_bracket.is_zero():
            out["dual_bracket"] = str(self.dual_bracket)
        return out


def compat_check(first, second):
    """Decide compatibility of two algebroid structures on one frame.

    Three independent certificates are computed and must agree:

    a. mixed Jacobi and mixed anchor residuals of the pair,
    b. the anticommutator d1 d2 + d2 d1 on coordinate functions and on the
       dual frame sections,
    c. the multivector bracket of the two dual linear Poisson structures.
    """
    if first.base != second.base or first.rank != second.rank:
        raise InputError("algebroids must share base chart and rank")
    if first.basis != second.basis:
        raise InputError("algebroids must share basis names")
    for which, alg in (("first", first), ("second", second)):
        verdict = algebroid_validate(alg)
        if not verdict.ok:
            raise PreconditionError(
                "%s algebroid fails its own axioms" % which, verdict.residuals()
            )
    rank = first.rank
    mixed_jac = {}
    for i, j, k in combinations(range(rank), 3):
        total = AlgebroidSection.zero(first, 1)
        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
            ea, eb = unit_section(first, a), unit_section(first, b)
            ec1, ec2 = unit_section(first, c), unit_section(second, c)
            inner1 = section_bracket(first, ea, eb)
            inner2 = section_bracket(second, unit_section(second, a), unit_section(second, b))
            outer = section_bracket(second, AlgebroidSection(second, 1, inner1.components), ec2)
            total = total + AlgebroidSection(first, 1, outer.components)
            outer = section_bracket(first, AlgebroidSection(first, 1, inner2.components), ec1)
            total = total + outer
        mixed_jac[(i, j, k)] = total
    mixed_anchor = {}
    for i, j in combinations(range(rank), 2):
        b1 = section_bracket(first, unit_section(first, i), unit_section(first, j))
        b2 = section_bracket(second, unit_section(second, i), unit_section(second, j))
        lhs = anchor_field_of(second, AlgebroidSection(second, 1, b1.components))
        lhs = lhs + anchor_field_of(first, AlgebroidSection(first, 1, b2.components))
        rhs = cartan.vf_bracket(first.anchor_field(i), second.anchor_field(j))
        rhs = rhs + cartan.vf_bracket(second.anchor_field(i), first.anchor_field(j))
        mixed_anchor[(i, j)] = lhs - rhs
    diff_res = {}
    for a, name in enumerate(first.base.coords):
        f1 = AlgebroidSection(first, 0, {(): Polynomial.variable(first.base.coords, name)})
        f2 = AlgebroidSection(second, 0, {(): Polynomial.variable(first.base.coords, name)})
        d1f = algebroid_differential(first, f1)
        d2f = algebroid_differential(second, f2)
        term = algebroid_differential(second, AlgebroidSection(second, 1, d1f.components))
        term = AlgebroidSection(first, 2, term.components) + algebroid_differential(
            first, AlgebroidSection(first, 1, d2f.components)
        )
        diff_res[name] = term
    for i in range(rank):
        e1 = AlgebroidSection(first, 1, {(i,): 1})
        e2 = AlgebroidSection(second, 1, {(i,): 1})
        d1e = algebroid_differential(first, e1)
        d2e = algebroid_differential(second, e2)
        term = algebroid_differential(second, AlgebroidSection(second, 2, d1e.components))
        term = AlgebroidSection(first, 3, term.components) + algebroid_differential(
            first, AlgebroidSection(first, 2, d2e.components)
        )
        diff_res["eps_%d" % (i + 1)] = term
    pi1 = dual_linear_poisson(first)
    pi2 = dual_linear_poisson(second)
    dual_bracket = cartan.schouten(pi1, pi2)
    verdict = CompatVerdict(mixed_jac, mixed_anchor, diff_res, dual_bracket)
    votes = (verdict.certificate_a, verdict.certificate_b, verdict.certificate_c)
    if len(set(votes)) != 1:
        raise InternalError(
            "compatibility certificates disagree: axioms=%r differentials=%r dual=%r"
            % votes
        )
    return verdict


@dataclass
class BialgebroidVerdict:
    """Derivation residuals of the dual differential against the bracket."""

    pair_residuals: dict
    scaled_residuals: dict
    function_residuals: dict

    @property
    def ok(self):
        return (
            all(r.is_zero() for r in self.pair_residuals.values())
            and all(r.is_zero() for r in self.scaled_residuals.values())
            and all(r.is_zero() for r in self.function_residuals.values())
        )

    def residuals(self):
        out = {}
        for (i, j), res in self.pair_residuals.items():
            if not res.is_zero():
                out["derivation(%d,%d)" % (i + 1, j + 1)] = str(res)
        for (i, a, j), res in self.scaled_residuals.items():
            if not res.is_zero():
                out["derivation(%d, %s*%d)" % (i + 1, a, j + 1)] = str(res)
        for (i, a), res in self.function_residuals.items():
            if not res.is_zero():
                out["derivation(%d, %s)" % (i + 1, a)] = str(res)
        return out


def _dual_differential(primary, dual, section):
    """Differential of the dual structure acting on primary-side sections."""
    view = AlgebroidSection(dual, section.degree, section.components)
    image = algebroid_differential(dual, view)
    return AlgebroidSection(primary, image.degree, image.components)


def bialgebroid_check(primary, dual):
    """Check that the dual differential is a derivation of the bracket.

    Residuals of d_*[X, Y] - [d_* X, Y] - [X, d_* Y] over the frame, over
    coordinate-scaled frame sections, and in the degree-(1,0) form
    d_*(rho(X) f) - [d_* X, f] - [X, d_* f].
    """
    if primary.base != dual.base or primary.rank != dual.rank:
        raise InputError("bialgebroid halves must share base chart and rank")
    for which, alg in (("primary", primary), ("dual", dual)):
        verdict = algebroid_validate(alg)
        if not verdict.ok:
            raise PreconditionError(
                "%s algebroid fails its own axioms" % which, verdict.residuals()
            )
    rank = primary.rank
    coords = primary.base.coords

    def d_star(section):
        return _dual_differential(primary, dual, section)

    def derivation_residual(left, right):
        bracket = gerstenhaber_bracket(primary, left, right)
        out = d_star(bracket) if bracket.degree <= 1 else None
        if out is None:
            raise InternalError("unexpected bracket degree in bialgebroid check")
        out = out - gerstenhaber_bracket(primary, d_star(left), right)
        out = out - gerstenhaber_bracket(primary, left, d_star(right))
        return out

    pair_res = {}
    for i, j in combinations(range(rank), 2):
        pair_res[(i, j)] = derivation_residual(
            unit_section(primary, i), unit_section(primary, j)
        )
    scaled_res = {}
    for i in range(rank):
        for a, name in enumerate(coords):
            for j in range(rank):
                if i == j:
                    continue
                scaled = AlgebroidSection(
                    primary, 1, {(j,): Polynomial.variable(coords, name)}
                )
                scaled_res[(i, name, j)] = derivation_residual(
                    unit_section(primary, i), scaled
                )
    func_res = {}
    for i in range(rank):
        for name in coords:
            f = AlgebroidSection(
                primary, 0, {(): Polynomial.variable(coords, name)}
            )
            func_res[(i, name)] = derivation_residual(unit_section(primary, i), f)
    return BialgebroidVerdict(pair_res, scaled_res, func_res)


@dataclass
class PNBialgebroidVerdict:
    """Staged verdict for the tangent/cotangent bialgebroid of a compatible pair."""

    bialgebroid: BialgebroidVerdict
    lift_pair: object
    recovery_residuals: dict
    hierarchy_compat: dict

    @property
    def ok(self):
        return (
            self.bialgebroid.ok
            and self.lift_pair.ok
            and not self.recovery_residuals
            and all(v.ok for v in self.hierarchy_compat.values())
        )

    def residuals(self):
        out = {}
        for label, res in self.bialgebroid.residuals().items():
            out["bialgebroid " + label] = res
        for label, res in self.lift_pair.residuals().items():
            out["lift " + label] = res
        for label, res in self.recovery_residuals.items():
            out["recovery " + label] = res
        for (k, l), verdict in self.hierarchy_compat.items():
            for label, res in verdict.residuals().items():
                out["compat[%d,%d] %s" % (k, l, label)] = res
        return out


def pn_bialgebroid_check(pi, tensor, hierarchy_orders=2):
    """Desk check of the bialgebroid attached to a compatible pair.

    Stages: the tangent / cotangent pair forms a bialgebroid; the lifted
    structure on the dual bundle chart together with the lifted tensor is
    again a compatible pair; restricting the lift to zero fiber values
    recovers the input pair; the tensor powers of the lift up to the given
    order produce pairwise compatible algebroid structures on the frame of
    coordinate differentials.
    """
    base_pair = pn.is_pn_pair(pi, tensor)
    if not base_pair.ok:
        raise PreconditionError(
            "bivector and tensor are not a compatible pair", base_pair.residuals()
        )
    chart = pi.chart
    n = chart.dim
    primary = tangent_algebroid(chart)
    dual = cotangent_algebroid(pi)
    bial = bialgebroid_check(primary, dual)

    fiber_names = tuple("v_" + c for c in chart.coords)
    lift = dual_linear_poisson(dual, fiber_names)
    big = lift.chart

    def promote(poly):
        return poly.substitute(big.coords, {})

    zero_big = Polynomial.zero(big.coords)
    entries = [[zero_big for _ in range(2 * n)] for _ in range(2 * n)]
    for a in range(n):
        for b in range(n):
            entries[a][b] = promote(tensor.entries[a][b])
            entries[n + a][n + b] = promote(tensor.entries[a][b])
            ramp = Polynomial.zero(big.coords)
            for k, name in enumerate(chart.coords):
                ramp = ramp + Polynomial.variable(big.coords, fiber_names[k]) * promote(
                    tensor.entries[a][b].partial(name)
                )
            entries[n + a][b] = ramp
    lifted_tensor = pn.TensorOneOne(big, entries)
    lift_pair = pn.is_pn_pair(lift, lifted_tensor)

    at_zero_fiber = {name: 0 for name in fiber_names}

    def demote(poly):
        return poly.substitute(chart.coords, at_zero_fiber)

    recovery = {}
    rec_components = {}
    for a in range(n):
        for b in range(a + 1, n):
            rec_components[(a, b)] = demote(lift.component((a, n + b)))
    rec_pi = MultiVector(chart, 2, rec_components)
    if rec_pi != pi:
        recovery["bivector"] = str(rec_pi - pi)
    for a in range(n):
        for b in range(a + 1, n):
            fiber_block = demote(lift.component((n + a, n + b)))
            if not fiber_block.is_zero():
                recovery["fiber_block(%d,%d)" % (a + 1, b + 1)] = str(fiber_block)
    for a in range(n):
        for b in range(n):
            top = demote(lifted_tensor.entries[a][b]) - tensor.entries[a][b]
            if not top.is_zero():
                recovery["tensor[%d][%d]" % (a + 1, b + 1)] = str(top)
            off = lifted_tensor.entries[a][n + b]
            if not off.is_zero():
                recovery["tensor_mixed[%d][%d]" % (a + 1, b + 1)] = str(off)
            low = demote(lifted_tensor.entries[n + a][b])
            if not low.is_zero():
                recovery["tensor_ramp[%d][%d]" % (a + 1, b + 1)] = str(low)

    hierarchy = {}
    if lift_pair.ok:
        levels = []
        for k in range(hierarchy_orders + 1):
            biv = pn.n_bivector(lift, lifted_tensor.power(k))
            levels.append(linear_poisson_to_algebroid(biv, chart, dual.basis))
        for k in range(len(levels)):
            for l in range(k + 1, len(levels)):
                hierarchy[(k, l)] = compat_check(levels[k], levels[l])
    return PNBialgebroidVerdict(bial, lift_pair, recovery, hierarchy)
