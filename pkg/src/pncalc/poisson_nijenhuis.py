"""Poisson bivectors, (1,1)-tensors, and their compatibility calculus.

Everything reduces to four residual computations: the Schouten square
[pi,pi], the Nijenhuis torsion of N, the sharp-compatibility matrix
N.pisharp - pisharp.N*, and the Magri-Morosi concomitant C(pi,N) on basis
form pairs. A pair is Poisson-Nijenhuis exactly when all four vanish
identically, and every verdict object carries the offending residuals so a
failure is a checkable witness rather than a bare boolean.

Sign conventions, fixed once and reused by every downstream module:
pisharp(alpha) = pi(alpha, .), normalized so pi = d_1^d_2 sends dx1 to +d_2;
(N* alpha)_j = sum_i alpha_i N^i_j.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import cartan
from .cartan import (
    Chart,
    DiffForm,
    MultiVector,
    coordinate_form,
    exterior_d,
    interior,
    lie_derivative,
    one_form,
    schouten,
    vector_field,
)
from .errors import InputError, InternalError, PreconditionError
from .linalg import (
    mat_identity,
    mat_is_zero,
    mat_mul,
    mat_sub,
    mat_transpose,
    mat_zero,
)
from .polyalg import Polynomial


class TensorOneOne:
    """A (1,1)-tensor as a square polynomial matrix.

    entries[i][j] = N^i_j, so column j lists the components of N(d_j).
    """

    __slots__ = ("chart", "entries")

    def __init__(self, chart, entries):
        if not isinstance(chart, Chart):
            raise InputError(f"expected a Chart, got {chart!r}")
        n = chart.dim
        rows = tuple(tuple(r) for r in entries)
        if len(rows) != n or any(len(r) != n for r in rows):
            raise InputError(f"expected a {n}x{n} matrix")
        rows = tuple(
            tuple(cartan._Graded._coerce_poly(chart, e) for e in r) for r in rows
        )
        object.__setattr__(self, "chart", chart)
        object.__setattr__(self, "entries", rows)

    def __setattr__(self, name, value):
        raise AttributeError("TensorOneOne is immutable")

    @classmethod
    def identity(cls, chart):
        return cls(chart, mat_identity(chart, chart.dim))

    @classmethod
    def zero(cls, chart):
        return cls(chart, mat_zero(chart, chart.dim, chart.dim))

    @classmethod
    def diagonal(cls, chart, diag):
        diag = list(diag)
        if len(diag) != chart.dim:
            raise InputError("diagonal length must match chart dimension")
        z = chart.zero()
        return cls(
            chart,
            [
                [diag[i] if i == j else z for j in range(chart.dim)]
                for i in range(chart.dim)
            ],
        )

    @classmethod
    def scalar(cls, chart, poly):
        return cls.diagonal(chart, [poly] * chart.dim)

    def apply(self, X):
        """N(X) for a degree-1 multivector X."""
        if not (isinstance(X, MultiVector) and X.degree == 1):
            raise InputError("TensorOneOne.apply needs a degree-1 multivector")
        if X.chart != self.chart:
            raise InputError("chart mismatch")
        comps = [X.component((j,)) for j in range(self.chart.dim)]
        return vector_field(
            self.chart,
            [
                sum((self.entries[i][j] * comps[j] for j in range(self.chart.dim)),
                    self.chart.zero())
                for i in range(self.chart.dim)
            ],
        )

    def dual_apply(self, alpha):
        """N* on a 1-form: (N*alpha)_j = sum_i alpha_i N^i_j."""
        if not (isinstance(alpha, DiffForm) and alpha.degree == 1):
            raise InputError("TensorOneOne.dual_apply needs a 1-form")
        if alpha.chart != self.chart:
            raise InputError("chart mismatch")
        comps = [alpha.component((i,)) for i in range(self.chart.dim)]
        return one_form(
            self.chart,
            [
                sum((comps[i] * self.entries[i][j] for i in range(self.chart.dim)),
                    self.chart.zero())
                for j in range(self.chart.dim)
            ],
        )

    def compose(self, other):
        """Matrix product, self after other."""
        if not isinstance(other, TensorOneOne) or other.chart != self.chart:
            raise InputError("can only compose tensors on the same chart")
        return TensorOneOne(self.chart, mat_mul(self.entries, other.entries))

    def power(self, k):
        if not isinstance(k, int) or k < 0:
            raise InputError("tensor power must be a nonnegative int")
        out = TensorOneOne.identity(self.chart)
        for _ in range(k):
            out = out.compose(self)
        return out

    def __add__(self, other):
        if not isinstance(other, TensorOneOne) or other.chart != self.chart:
            raise InputError("can only add tensors on the same chart")
        return TensorOneOne(
            self.chart,
            [
                [a + b for a, b in zip(ra, rb)]
                for ra, rb in zip(self.entries, other.entries)
            ],
        )

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return TensorOneOne(
            self.chart, [[-a for a in row] for row in self.entries]
        )

    def __mul__(self, scalar):
        poly = cartan._Graded._coerce_poly(self.chart, scalar)
        return TensorOneOne(
            self.chart, [[poly * a for a in row] for row in self.entries]
        )

    __rmul__ = __mul__

    def is_zero(self):
        return mat_is_zero(self.entries)

    def __eq__(self, other):
        if not isinstance(other, TensorOneOne):
            return NotImplemented
        return self.chart == other.chart and self.entries == other.entries

    __hash__ = None

    def __str__(self):
        rows = ["[" + ", ".join(str(e) for e in row) + "]" for row in self.entries]
        return "[" + "; ".join(rows) + "]"

    def __repr__(self):
        return f"TensorOneOne({self})"


# -- sharp machinery ---------------------------------------------------------


def _check_bivector(pi):
    if not (isinstance(pi, MultiVector) and pi.degree == 2):
        raise InputError("expected a degree-2 multivector")


def sharp_matrix(pi):
    """Matrix S with column j = components of pisharp(dx^j); S[i][j] = pihat^{ji}."""
    _check_bivector(pi)
    n = pi.chart.dim
    return tuple(
        tuple(pi.component((j, i)) for j in range(n)) for i in range(n)
    )


def sharp(pi, alpha):
    """pisharp(alpha) = pi(alpha, .) as a vector field."""
    _check_bivector(pi)
    if not (isinstance(alpha, DiffForm) and alpha.degree == 1):
        raise InputError("sharp needs a 1-form")
    if alpha.chart != pi.chart:
        raise InputError("chart mismatch")
    n = pi.chart.dim
    comps = [alpha.component((a,)) for a in range(n)]
    out = []
    for b in range(n):
        acc = pi.chart.zero()
        for a in range(n):
            acc = acc + comps[a] * pi.component((a, b))
        out.append(acc)
    return vector_field(pi.chart, out)


def bivector_from_sharp(chart, S):
    """Rebuild the bivector whose sharp matrix is S; S must be antisymmetric."""
    n = chart.dim
    bad = {}
    for i in range(n):
        for j in range(i, n):
            total = S[i][j] + S[j][i]
            if not total.is_zero():
                bad[f"S[{i+1}][{j+1}] + S[{j+1}][{i+1}]"] = str(total)
    if bad:
        raise InputError(f"sharp matrix is not antisymmetric: {bad}")
    entries = []
    for a in range(n):
        for b in range(a + 1, n):
            entries.append(((a, b), S[b][a]))
    return MultiVector.from_terms(chart, 2, entries)


def bivector_eval(pi, alpha, beta):
    """pi(alpha, beta) as a polynomial."""
    _check_bivector(pi)
    n = pi.chart.dim
    a_comp = [alpha.component((i,)) for i in range(n)]
    b_comp = [beta.component((i,)) for i in range(n)]
    out = pi.chart.zero()
    for (i, j), poly in pi.components.items():
        out = out + poly * (a_comp[i] * b_comp[j] - a_comp[j] * b_comp[i])
    return out


# -- verdict containers ------------------------------------------------------


def _residual_map(pairs):
    return {k: str(v) for k, v in pairs if not v.is_zero()}


@dataclass(frozen=True)
class PoissonVerdict:
    residual: MultiVector

    @property
    def ok(self):
        return self.residual.is_zero()

    def residuals(self):
        return {} if self.ok else {"[pi,pi]": str(self.residual)}


@dataclass(frozen=True)
class PNVerdict:
    poisson_residual: MultiVector
    torsion_residual: dict
    sharp_residual: tuple
    concomitant_residual: dict

    @property
    def poisson_ok(self):
        return self.poisson_residual.is_zero()

    @property
    def torsion_ok(self):
        return all(v.is_zero() for v in self.torsion_residual.values())

    @property
    def sharp_ok(self):
        return mat_is_zero(self.sharp_residual)

    @property
    def concomitant_ok(self):
        if self.concomitant_residual is None:
            return False
        return all(v.is_zero() for v in self.concomitant_residual.values())

    @property
    def ok(self):
        return (
            self.poisson_ok
            and self.torsion_ok
            and self.sharp_ok
            and self.concomitant_ok
        )

    def residuals(self):
        out = {}
        if not self.poisson_ok:
            out["[pi,pi]"] = str(self.poisson_residual)
        for (i, j), v in sorted(self.torsion_residual.items()):
            if not v.is_zero():
                out[f"torsion({i+1},{j+1})"] = str(v)
        for i, row in enumerate(self.sharp_residual):
            for j, e in enumerate(row):
                if not e.is_zero():
                    out[f"sharp_compat[{i+1}][{j+1}]"] = str(e)
        if self.concomitant_residual is None:
            out["concomitant"] = "skipped: sharp compatibility failed"
        else:
            for (i, j), v in sorted(self.concomitant_residual.items()):
                if not v.is_zero():
                    out[f"concomitant({i+1},{j+1})"] = str(v)
        return out


# -- core operations ---------------------------------------------------------


def is_poisson(pi):
    """Schouten square test: pass iff [pi,pi] vanishes identically."""
    _check_bivector(pi)
    return PoissonVerdict(schouten(pi, pi))


def koszul_bracket(pi, alpha, beta):
    """Bracket of 1-forms induced by a bivector:

    [alpha, beta]_pi = L_{pisharp(alpha)} beta - L_{pisharp(beta)} alpha
                       - d(pi(alpha, beta))
    """
    _check_bivector(pi)
    return (
        lie_derivative(sharp(pi, alpha), beta)
        - lie_derivative(sharp(pi, beta), alpha)
        - exterior_d(DiffForm.from_function(pi.chart, bivector_eval(pi, alpha, beta)))
    )


def torsion_apply(N, X, Y):
    """tau_N(X,Y) = [NX,NY] - N([NX,Y] + [X,NY] - N[X,Y])."""
    NX, NY = N.apply(X), N.apply(Y)
    defect = (
        cartan.vf_bracket(NX, Y)
        + cartan.vf_bracket(X, NY)
        - N.apply(cartan.vf_bracket(X, Y))
    )
    return cartan.vf_bracket(NX, NY) - N.apply(defect)


def nijenhuis_torsion(N):
    """Torsion on all coordinate pairs: {(i,j): tau_N(d_i, d_j)} for i<j."""
    chart = N.chart
    out = {}
    for i in range(chart.dim):
        for j in range(i + 1, chart.dim):
            out[(i, j)] = torsion_apply(
                N, cartan.coordinate_vector(chart, i), cartan.coordinate_vector(chart, j)
            )
    return out


def deformed_bracket(N, X, Y):
    """[X,Y]_N = [NX,Y] + [X,NY] - N[X,Y]."""
    return (
        cartan.vf_bracket(N.apply(X), Y)
        + cartan.vf_bracket(X, N.apply(Y))
        - N.apply(cartan.vf_bracket(X, Y))
    )


def i_n(N, omega):
    """Degree-zero derivation inserting N into one slot at a time."""
    if not isinstance(omega, DiffForm):
        raise InputError("i_n acts on differential forms")
    if omega.chart != N.chart:
        raise InputError("chart mismatch")
    chart = omega.chart
    entries = []
    for key, poly in omega.components.items():
        for pos in range(len(key)):
            # replace slot pos by N applied there: (N* dx^{key[pos]})_j = N^{key[pos]}_j
            for j in range(chart.dim):
                coeff = N.entries[key[pos]][j]
                if coeff.is_zero():
                    continue
                entries.append((key[:pos] + (j,) + key[pos + 1 :], poly * coeff))
    return DiffForm.from_terms(chart, omega.degree, entries)


def d_n(N, omega):
    """Deformed differential d_N = i_N d - d i_N."""
    return i_n(N, exterior_d(omega)) - exterior_d(i_n(N, omega))


def sharp_compat_residual(pi, N):
    """Matrix of N.pisharp - pisharp.N* (zero iff N pi is again a bivector)."""
    S = sharp_matrix(pi)
    return mat_sub(mat_mul(N.entries, S), mat_mul(S, mat_transpose(N.entries)))


def n_bivector(pi, N):
    """The deformed bivector N pi, defined when sharp compatibility holds."""
    res = sharp_compat_residual(pi, N)
    if not mat_is_zero(res):
        raise PreconditionError(
            "N.pisharp != pisharp.N*, so N pi is not a bivector",
            residuals={"sharp_compat": [[str(e) for e in row] for row in res]},
        )
    return bivector_from_sharp(pi.chart, mat_mul(N.entries, sharp_matrix(pi)))


def magri_morosi(pi, N, alpha, beta):
    """Concomitant C(pi,N)(alpha,beta) =
    [alpha,beta]_{Npi} - ([N*alpha,beta]_pi + [alpha,N*beta]_pi - N*[alpha,beta]_pi).
    """
    npi = n_bivector(pi, N)
    return koszul_bracket(npi, alpha, beta) - (
        koszul_bracket(pi, N.dual_apply(alpha), beta)
        + koszul_bracket(pi, alpha, N.dual_apply(beta))
        - N.dual_apply(koszul_bracket(pi, alpha, beta))
    )


def is_pn_pair(pi, N):
    """Full Poisson-Nijenhuis verdict with all four residual families."""
    _check_bivector(pi)
    if not isinstance(N, TensorOneOne) or N.chart != pi.chart:
        raise InputError("expected a (1,1)-tensor on the bivector's chart")
    chart = pi.chart
    sharp_res = sharp_compat_residual(pi, N)
    concomitant = None
    if mat_is_zero(sharp_res):
        concomitant = {}
        for i in range(chart.dim):
            for j in range(i + 1, chart.dim):
                concomitant[(i, j)] = magri_morosi(
                    pi, N, coordinate_form(chart, i), coordinate_form(chart, j)
                )
    return PNVerdict(
        poisson_residual=schouten(pi, pi),
        torsion_residual=nijenhuis_torsion(N),
        sharp_residual=sharp_res,
        concomitant_residual=concomitant,
    )


@dataclass(frozen=True)
class HierarchyResult:
    bivectors: tuple
    bracket_residuals: dict

    @property
    def ok(self):
        return all(v.is_zero() for v in self.bracket_residuals.values())

    def residuals(self):
        return {
            f"[pi_{k},pi_{l}]": str(v)
            for (k, l), v in sorted(self.bracket_residuals.items())
            if not v.is_zero()
        }


def hierarchy(pi, N, kmax):
    """Bivectors pi_k = N^k pi for k <= kmax plus all pairwise Schouten residuals.

    Refuses unless (pi, N) is a Poisson-Nijenhuis pair; the deformed sharp
    matrices N^k.pisharp are re-checked for antisymmetry, which the PN
    hypothesis guarantees.
    """
    if not isinstance(kmax, int) or kmax < 1:
        raise InputError("kmax must be a positive integer")
    verdict = is_pn_pair(pi, N)
    if not verdict.ok:
        raise PreconditionError(
            "hierarchy needs a Poisson-Nijenhuis pair", residuals=verdict.residuals()
        )
    S = sharp_matrix(pi)
    bivectors = []
    for k in range(kmax + 1):
        Sk = mat_mul(N.power(k).entries, S)
        try:
            bivectors.append(bivector_from_sharp(pi.chart, Sk))
        except InputError as exc:
            raise InternalError(
                f"N^{k}.pisharp lost antisymmetry for a PN pair: {exc}"
            ) from exc
    residuals = {}
    for k in range(kmax + 1):
        for l in range(k, kmax + 1):
            residuals[(k, l)] = schouten(bivectors[k], bivectors[l])
    return HierarchyResult(tuple(bivectors), residuals)


@dataclass(frozen=True)
class ComplementaryResult:
    tensor: TensorOneOne
    verdict: PNVerdict

    @property
    def ok(self):
        return self.verdict.ok

    def residuals(self):
        return self.verdict.residuals()


def complementary_build(pi, omega):
    """Build N^i_j = sum_k pihat^{ik} omegahat_{kj} from a two-form.

    Preconditions: pi Poisson, [omega,omega]_pi = 0 (Gerstenhaber bracket of
    the cotangent algebroid of pi), and i_{pisharp(dx^i)} d(omega) = 0 for
    every coordinate. Under these the built pair is Poisson-Nijenhuis; the
    returned verdict re-verifies that in full.
    """
    _check_bivector(pi)
    if not (isinstance(omega, DiffForm) and omega.degree == 2):
        raise InputError("expected a degree-2 form")
    if omega.chart != pi.chart:
        raise InputError("chart mismatch")
    chart = pi.chart
    pv = is_poisson(pi)
    if not pv.ok:
        raise PreconditionError("pi is not Poisson", residuals=pv.residuals())
    from . import algebroid  # deferred: algebroid imports this module

    ctg = algebroid.cotangent_algebroid(pi)
    w = algebroid.AlgebroidSection(ctg, 2, dict(omega.components))
    gres = algebroid.gerstenhaber_bracket(ctg, w, w)
    if not gres.is_zero():
        raise PreconditionError(
            "[omega,omega]_pi != 0",
            residuals={"[omega,omega]_pi": str(gres)},
        )
    domega = exterior_d(omega)
    for i in range(chart.dim):
        contraction = interior(sharp(pi, coordinate_form(chart, i)), domega)
        if not contraction.is_zero():
            raise PreconditionError(
                "i_{pisharp dx^i} d(omega) != 0",
                residuals={f"contraction dx{i+1}": str(contraction)},
            )
    n = chart.dim
    entries = [
        [
            sum(
                (pi.component((i, k)) * omega.component((k, j)) for k in range(n)),
                chart.zero(),
            )
            for j in range(n)
        ]
        for i in range(n)
    ]
    N = TensorOneOne(chart, entries)
    return ComplementaryResult(N, is_pn_pair(pi, N))


@dataclass(frozen=True)
class HolomorphicVerdict:
    pn: PNVerdict
    relation_residual: tuple

    @property
    def relation_ok(self):
        return mat_is_zero(self.relation_residual)

    @property
    def ok(self):
        return self.pn.ok and self.relation_ok

    def residuals(self):
        out = dict(self.pn.residuals())
        for i, row in enumerate(self.relation_residual):
            for j, e in enumerate(row):
                if not e.is_zero():
                    out[f"relation[{i+1}][{j+1}]"] = str(e)
        return out


def holomorphic_check(pi_r, pi_i, J):
    """Real/imaginary pair test: (pi_i, J) must be PN and pi_r sharp = J.pi_i sharp.

    Refuses unless J is an almost complex structure, J.J = -Id.
    """
    for p in (pi_r, pi_i):
        _check_bivector(p)
    if not isinstance(J, TensorOneOne) or J.chart != pi_r.chart:
        raise InputError("expected a (1,1)-tensor on the bivectors' chart")
    if pi_r.chart != pi_i.chart:
        raise InputError("chart mismatch")
    chart = pi_r.chart
    jj = J.compose(J) + TensorOneOne.identity(chart)
    if not jj.is_zero():
        raise PreconditionError(
            "J.J != -Id",
            residuals={"J.J + Id": [[str(e) for e in row] for row in jj.entries]},
        )
    relation = mat_sub(
        sharp_matrix(pi_r), mat_mul(J.entries, sharp_matrix(pi_i))
    )
    return HolomorphicVerdict(is_pn_pair(pi_i, J), relation)
