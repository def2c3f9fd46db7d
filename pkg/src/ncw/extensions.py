"""Extended symmetry algebras of an NCB structure and the Bargmann algebra.

Stabilizing more of the NCB data enlarges the symmetry objects by gauge
parameters:

* stabilizing (gamma, theta, U) pins the boost 1-form to h([U, X]) and
  leaves a free scalar: pairs (X, f) with the semidirect bracket
  ([X, X'], X(f') - X'(f));
* stabilizing V as well forces gamma(df) = [V, X]; the solution splits as
  f = xi + f_X with f_X normalized to vanish on the spatial origin, leaving
  a time-function parameter xi and the bracket

      ([X, X'], X(xi' + f_X') - X'(xi + f_X) - f_[X,X'])

  a non-central extension: time translations act on non-constant xi;
* stabilizing the potential too leaves only a constant xi, and the
  extension becomes central; on the flat structure it is the Bargmann
  algebra, whose cocycle pairs boosts with space translations and is not a
  coboundary.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .linalg import (
    RationalMatrix,
    inconsistency_certificate,
    solve_inhomogeneous,
    sparse_solve,
)
from .poly import Poly, grlex_monomials, time_part
from .solver import (
    NotInFlavorError,
    SymmetryBasis,
    classify,
    structure_constants,
)
from .structures import NCBStructure
from .tensors import (
    TensorField,
    directional,
    gradient,
    one_form,
    vector,
    vector_bracket,
)


class ExtensionError(ValueError):
    """An extension computation left its target space; message says where."""


@dataclass(frozen=True)
class ExtendedElement:
    """A symmetry field with its gauge parameter.

    For the metric-pair stabilizer the parameter is a free scalar function;
    for the observer stabilizer it is a function of time only; for the full
    stabilizer it is a constant.
    """

    x: TensorField
    f: Poly

    def __post_init__(self):
        if (self.x.p, self.x.q) != (1, 0):
            raise ValueError("extended element needs a vector field")
        if self.x.dimension != self.f.dimension:
            raise ValueError("field and parameter dimensions disagree")


def boost_for_coriolis(x: TensorField, s: NCBStructure) -> TensorField:
    """The unique boost 1-form (modulo theta) fixing U: psi = h([U, X])."""
    _require_coriolis(x, s)
    dim = s.base.dimension
    bracket = vector_bracket(s.u, x)
    comps = []
    for a in range(dim):
        acc = Poly.zero(dim)
        for k in range(dim):
            acc = acc + s.transverse.comp(a, k) * bracket.comp(k)
        comps.append(acc)
    return one_form(dim, comps)


def _require_coriolis(x: TensorField, s: NCBStructure) -> None:
    flags = classify(x, s.induced_nc())
    if not flags.is_coriolis:
        raise NotInFlavorError("field does not preserve the metric pair")


def _require_milne(x: TensorField, s: NCBStructure) -> None:
    flags = classify(x, s.induced_nc())
    if not flags.is_milne:
        raise NotInFlavorError("field does not preserve the raised symbols")


def _require_galilei(x: TensorField, s: NCBStructure) -> None:
    flags = classify(x, s.induced_nc())
    if not flags.is_galilei:
        raise NotInFlavorError("field does not preserve the connection")


def extended_cor_bracket(
    e1: ExtendedElement, e2: ExtendedElement, s: NCBStructure
) -> ExtendedElement:
    """Semidirect bracket ([X, X'], X(f') - X'(f)) on metric-pair
    stabilizer pairs."""
    _require_coriolis(e1.x, s)
    _require_coriolis(e2.x, s)
    return ExtendedElement(
        vector_bracket(e1.x, e2.x),
        directional(e1.x, e2.f) - directional(e2.x, e1.f),
    )


# ----------------------------------------------------------------------
# observer stabilizer

def milne_f_split(
    x: TensorField, s: NCBStructure, max_degree: int | None = None
) -> tuple[Poly, bool]:
    """Solve gamma(df) = [V, X] for polynomial f and normalize by stripping
    the time-only part, so f_X(t, 0) = 0.

    Returns (f_X, True) on success; (0, False) when the system is
    inconsistent over the polynomial ansatz, which signals that X does not
    extend to the observer stabilizer.
    """
    _require_milne(x, s)
    g = s.base
    dim = g.dimension
    rhs_vec = vector_bracket(s.v, x)
    rhs_degree = max((rhs_vec.comp(a).total_degree() for a in range(dim)), default=-1)
    gamma_degree = max(
        (c.total_degree() for c in g.gamma.components if not c.is_zero), default=0
    )
    degree = (
        max_degree
        if max_degree is not None
        else max(rhs_degree, 0) + gamma_degree + 2
    )
    monos = grlex_monomials(dim, degree)
    col_of = {m: i for i, m in enumerate(monos)}

    rows: dict[tuple[int, tuple[int, ...]], dict[int, Fraction]] = {}
    targets: dict[tuple[int, tuple[int, ...]], Fraction] = {}
    for a in range(dim):
        for k in range(dim):
            gam = g.gamma.comp(a, k)
            if gam.is_zero:
                continue
            for m in monos:
                if m[k] == 0:
                    continue
                dm = list(m)
                dm[k] -= 1
                for ge, gc in gam.terms.items():
                    combined = tuple(p + q for p, q in zip(ge, dm))
                    row = rows.setdefault((a, combined), {})
                    coeff = gc * m[k]
                    acc = row.get(col_of[m], Fraction(0)) + coeff
                    if acc:
                        row[col_of[m]] = acc
                    else:
                        row.pop(col_of[m], None)
        for e, c in rhs_vec.comp(a).terms.items():
            targets[(a, e)] = targets.get((a, e), Fraction(0)) + c

    keys = sorted(set(rows) | set(targets))
    system_rows = [rows.get(k, {}) for k in keys]
    system_rhs = [targets.get(k, Fraction(0)) for k in keys]
    solution = sparse_solve(system_rows, system_rhs, len(monos))
    if solution is None:
        return Poly.zero(dim), False
    particular, _ = solution
    f = Poly(dim, {m: particular[col_of[m]] for m in monos})
    f_x = f - time_part(f)
    # the time-only strip leaves gamma(df) unchanged; re-verify exactly
    check = vector(
        dim,
        [
            sum(
                (g.gamma.comp(a, k) * f_x.partial(k) for k in range(dim)),
                Poly.zero(dim),
            )
            for a in range(dim)
        ],
    )
    if not (check - rhs_vec).is_zero:
        raise ExtensionError("observer-stabilizer solve failed verification")
    return f_x, True


def extended_mil_bracket(
    e1: ExtendedElement, e2: ExtendedElement, s: NCBStructure
) -> ExtendedElement:
    """Bracket on observer-stabilizer pairs (X, xi), xi a function of time.

    The parameter part X(xi' + f_X') - X'(xi + f_X) - f_[X,X'] lands back in
    the time functions; a residue with spatial dependence raises."""
    for e in (e1, e2):
        _require_milne(e.x, s)
        if not e.f.depends_only_on([0]):
            raise ExtensionError("observer-stabilizer parameter must depend on time only")
    f1, ok1 = milne_f_split(e1.x, s)
    f2, ok2 = milne_f_split(e2.x, s)
    if not (ok1 and ok2):
        raise ExtensionError("element does not lie in the observer stabilizer")
    xb = vector_bracket(e1.x, e2.x)
    fb, okb = milne_f_split(xb, s)
    if not okb:
        raise ExtensionError("bracket left the observer stabilizer")
    out = (
        directional(e1.x, e2.f + f2)
        - directional(e2.x, e1.f + f1)
        - fb
    )
    if not out.depends_only_on([0]):
        raise ExtensionError("bracket parameter left the time functions")
    return ExtendedElement(xb, out)


def noncentrality_check(
    s: NCBStructure, degree: int
) -> tuple[bool, tuple[int, Poly] | None]:
    """Whether the observer-stabilizer extension acts nontrivially on its
    time-function ideal.

    Scans brackets of solved milne basis elements against pure parameters
    t^k; returns the first witness (basis index, parameter output)."""
    from .solver import solve_symmetries

    basis = solve_symmetries(s.induced_nc(), "milne", degree)
    dim = s.base.dimension
    zero_x = TensorField.zero(dim, 1, 0)
    for k in range(1, max(degree, 1) + 1):
        xi = Poly.monomial(dim, (k,) + (0,) * (dim - 1))
        for i, x in enumerate(basis.fields):
            out = extended_mil_bracket(
                ExtendedElement(x, Poly.zero(dim)),
                ExtendedElement(zero_x, xi),
                s,
            )
            if not out.f.is_zero:
                return True, (i, out.f)
    return False, None


# ----------------------------------------------------------------------
# full stabilizer

def galilei_f_solve(
    x: TensorField, s: NCBStructure
) -> tuple[Poly, bool]:
    """Integrate  df = (-X(phi) + h(L_X V, V)) theta - h(L_X V)  exactly.

    Returns (f, True) with the primitive vanishing at the origin, or
    (0, False) when the right side is not closed (X does not extend)."""
    _require_galilei(x, s)
    g = s.base
    dim = g.dimension
    lv = vector_bracket(x, s.v)
    lowered = []
    for a in range(dim):
        acc = Poly.zero(dim)
        for k in range(dim):
            acc = acc + s.transverse.comp(a, k) * lv.comp(k)
        lowered.append(acc)
    scalar = -directional(x, s.phi)
    for k in range(dim):
        scalar = scalar + lowered[k] * s.v.comp(k)
    alpha = [scalar * g.theta.comp(a) - lowered[a] for a in range(dim)]
    for a in range(dim):
        for b in range(a + 1, dim):
            if alpha[b].partial(a) != alpha[a].partial(b):
                return Poly.zero(dim), False
    f = _radial_primitive(alpha, dim)
    if [gradient(f).comp(a) for a in range(dim)] != alpha:
        raise ExtensionError("primitive failed verification")
    return f, True


def _radial_primitive(alpha: Sequence[Poly], dim: int) -> Poly:
    """Primitive of a closed polynomial 1-form, zero at the origin."""
    terms: dict[tuple[int, ...], Fraction] = {}
    for a in range(dim):
        for exps, coeff in alpha[a].terms.items():
            bumped = list(exps)
            bumped[a] += 1
            key = tuple(bumped)
            add = coeff / (sum(exps) + 1)
            acc = terms.get(key, Fraction(0)) + add
            if acc:
                terms[key] = acc
            else:
                terms.pop(key, None)
    return Poly(dim, terms)


def extended_gal_bracket(
    e1: ExtendedElement, e2: ExtendedElement, s: NCBStructure
) -> ExtendedElement:
    """Bracket on full-stabilizer pairs (X, xi) with constant xi; the
    parameter output is again constant (central extension)."""
    dim = s.base.dimension
    for e in (e1, e2):
        _require_galilei(e.x, s)
        if not e.f.depends_only_on([]):
            raise ExtensionError("full-stabilizer parameter must be constant")
    f1, ok1 = galilei_f_solve(e1.x, s)
    f2, ok2 = galilei_f_solve(e2.x, s)
    if not (ok1 and ok2):
        raise ExtensionError("element does not lie in the full stabilizer")
    xb = vector_bracket(e1.x, e2.x)
    fb, okb = galilei_f_solve(xb, s)
    if not okb:
        raise ExtensionError("bracket left the full stabilizer")
    out = directional(e1.x, e2.f + f2) - directional(e2.x, e1.f + f1) - fb
    if not out.depends_only_on([]):
        raise ExtensionError("central parameter output is not constant")
    return ExtendedElement(xb, out)


def gal_extension_cocycle(basis: SymmetryBasis, s: NCBStructure) -> list[list[Fraction]]:
    """The central 2-cocycle induced on a solved full-symmetry basis:
    c_ij is the constant parameter output of the bracket of (X_i, 0) and
    (X_j, 0)."""
    dim = s.base.dimension
    zero = Poly.zero(dim)
    k = len(basis.fields)
    out = [[Fraction(0)] * k for _ in range(k)]
    wrapped = [ExtendedElement(f, zero) for f in basis.fields]
    for i in range(k):
        for j in range(i + 1, k):
            val = extended_gal_bracket(wrapped[i], wrapped[j], s).f
            const = val.coefficient((0,) * dim)
            out[i][j] = const
            out[j][i] = -const
    return out


# ----------------------------------------------------------------------
# cocycle analysis

@dataclass(frozen=True)
class TrivialityResult:
    trivial: bool
    witness: tuple[Fraction, ...] | None  # linear functional on the basis
    certificate: tuple[Fraction, ...] | None  # inconsistent row combination
    pairs: tuple[tuple[int, int], ...]


class CocycleError(ValueError):
    pass


def cocycle_triviality(
    basis: SymmetryBasis, cocycle: Sequence[Sequence[object]]
) -> TrivialityResult:
    """Decide whether an antisymmetric 2-cocycle on the solved basis is a
    coboundary: c(X_i, X_j) = lambda([X_i, X_j]) for some linear functional.

    Checks antisymmetry and the cocycle identity first (raises
    CocycleError); returns either the coboundary witness lambda or an exact
    inconsistency certificate over the listed index pairs."""
    k = len(basis.fields)
    c = [[Fraction(v) for v in row] for row in cocycle]
    if len(c) != k or any(len(row) != k for row in c):
        raise CocycleError("cocycle matrix size does not match the basis")
    for i in range(k):
        for j in range(k):
            if c[i][j] != -c[j][i]:
                raise CocycleError("cocycle is not antisymmetric")
    constants, closed = structure_constants(basis)
    if not closed:
        raise CocycleError("basis does not close; cocycle identity undefined")
    for i in range(k):
        for j in range(k):
            for l in range(k):
                total = Fraction(0)
                for m in range(k):
                    total += constants[i][j][m] * c[m][l]
                    total += constants[j][l][m] * c[m][i]
                    total += constants[l][i][m] * c[m][j]
                if total != 0:
                    raise CocycleError("cocycle identity violated")

    pairs = [(i, j) for i in range(k) for j in range(i + 1, k)]
    matrix = RationalMatrix.from_rows(
        [[constants[i][j][m] for m in range(k)] for (i, j) in pairs]
        or [[Fraction(0)] * k]
    )
    rhs = [c[i][j] for (i, j) in pairs] or [Fraction(0)]
    solution = solve_inhomogeneous(matrix, rhs)
    if solution is not None:
        return TrivialityResult(True, solution[0], None, tuple(pairs))
    certificate = inconsistency_certificate(matrix, rhs)
    return TrivialityResult(False, None, certificate, tuple(pairs))


def coboundary_from_functional(
    basis: SymmetryBasis, functional: Sequence[object]
) -> list[list[Fraction]]:
    """The coboundary (d lambda)(X_i, X_j) = lambda([X_i, X_j]); handy for
    building known-trivial cocycles."""
    constants, closed = structure_constants(basis)
    if not closed:
        raise CocycleError("basis does not close")
    lam = [Fraction(v) for v in functional]
    k = len(basis.fields)
    return [
        [
            sum((constants[i][j][m] * lam[m] for m in range(k)), Fraction(0))
            for j in range(k)
        ]
        for i in range(k)
    ]


# ----------------------------------------------------------------------
# parameter presentations

@dataclass(frozen=True)
class BargmannElement:
    """Flat-structure full-stabilizer element by parameters: rotation block,
    boost and translation vectors, time translation, central charge."""

    omega: tuple[tuple[Fraction, ...], ...]
    beta: tuple[Fraction, ...]
    sigma: tuple[Fraction, ...]
    tau: Fraction
    xi: Fraction

    def __post_init__(self):
        n = len(self.beta)
        if len(self.omega) != n or any(len(r) != n for r in self.omega):
            raise ValueError("rotation block size mismatch")
        if len(self.sigma) != n:
            raise ValueError("translation vector size mismatch")
        for a in range(n):
            for b in range(n):
                if self.omega[a][b] != -self.omega[b][a]:
                    raise ValueError("rotation block must be antisymmetric")

    @property
    def n(self) -> int:
        return len(self.beta)

    @classmethod
    def make(cls, n, omega=None, beta=None, sigma=None, tau=0, xi=0) -> "BargmannElement":
        om = [[Fraction(0)] * n for _ in range(n)]
        if omega:
            for (a, b), v in omega.items():
                om[a - 1][b - 1] = Fraction(v)
                om[b - 1][a - 1] = -Fraction(v)
        be = [Fraction(0)] * n
        if beta:
            for a, v in beta.items():
                be[a - 1] = Fraction(v)
        si = [Fraction(0)] * n
        if sigma:
            for a, v in sigma.items():
                si[a - 1] = Fraction(v)
        return cls(
            tuple(tuple(r) for r in om),
            tuple(be),
            tuple(si),
            Fraction(tau),
            Fraction(xi),
        )

    def to_field(self) -> TensorField:
        dim = self.n + 1
        t = Poly.variable(dim, 0)
        comps = [Poly.const(dim, self.tau)]
        for a in range(1, dim):
            acc = Poly.const(dim, self.sigma[a - 1]) + self.beta[a - 1] * t
            for b in range(1, dim):
                acc = acc + self.omega[a - 1][b - 1] * Poly.variable(dim, b)
            comps.append(acc)
        return vector(dim, comps)


def bargmann_bracket(b1: BargmannElement, b2: BargmannElement) -> BargmannElement:
    """Centrally extended bracket on flat-structure parameters:

        omega'' = omega' omega - omega omega'
        beta''  = omega' beta - omega beta'
        sigma'' = omega' sigma - omega sigma' + beta' tau - beta tau'
        tau''   = 0
        xi''    = sigma . beta' - sigma' . beta
    """
    if b1.n != b2.n:
        raise ValueError("dimension mismatch")
    n = b1.n

    def matmul(m1, m2):
        return tuple(
            tuple(
                sum((m1[a][k] * m2[k][b] for k in range(n)), Fraction(0))
                for b in range(n)
            )
            for a in range(n)
        )

    def matvec(m, v):
        return tuple(
            sum((m[a][k] * v[k] for k in range(n)), Fraction(0)) for a in range(n)
        )

    m1, m2 = b1.omega, b2.omega
    p21 = matmul(m2, m1)
    p12 = matmul(m1, m2)
    omega = tuple(
        tuple(p21[a][b] - p12[a][b] for b in range(n)) for a in range(n)
    )
    beta = tuple(
        matvec(m2, b1.beta)[a] - matvec(m1, b2.beta)[a] for a in range(n)
    )
    sigma = tuple(
        matvec(m2, b1.sigma)[a]
        - matvec(m1, b2.sigma)[a]
        + b2.beta[a] * b1.tau
        - b1.beta[a] * b2.tau
        for a in range(n)
    )
    xi = sum(
        (b1.sigma[a] * b2.beta[a] - b2.sigma[a] * b1.beta[a] for a in range(n)),
        Fraction(0),
    )
    return BargmannElement(omega, beta, sigma, Fraction(0), xi)


@dataclass(frozen=True)
class MilneStandardElement:
    """Standard-case observer-stabilizer element: constant rotation block,
    time-dependent translation, time translation, time-function parameter."""

    omega: tuple[tuple[Fraction, ...], ...]
    rho: tuple[Poly, ...]  # functions of time only
    tau: Fraction
    xi: Poly  # function of time only

    def __post_init__(self):
        n = len(self.rho)
        if len(self.omega) != n or any(len(r) != n for r in self.omega):
            raise ValueError("rotation block size mismatch")
        for a in range(n):
            for b in range(n):
                if self.omega[a][b] != -self.omega[b][a]:
                    raise ValueError("rotation block must be antisymmetric")
        for r in self.rho:
            if not r.depends_only_on([0]):
                raise ValueError("translation part must depend on time only")
        if not self.xi.depends_only_on([0]):
            raise ValueError("parameter must depend on time only")

    @property
    def n(self) -> int:
        return len(self.rho)

    def to_field(self) -> TensorField:
        dim = self.n + 1
        comps = [Poly.const(dim, self.tau)]
        for a in range(1, dim):
            acc = self.rho[a - 1]
            for b in range(1, dim):
                acc = acc + self.omega[a - 1][b - 1] * Poly.variable(dim, b)
            comps.append(acc)
        return vector(dim, comps)

    def to_extended(self) -> ExtendedElement:
        return ExtendedElement(self.to_field(), self.xi)


def milne_standard_from_field(e: ExtendedElement) -> MilneStandardElement:
    """Exact refit of an extended element to the standard-case template."""
    from .solver import fit_time_template

    fit = fit_time_template(e.x)
    if fit is None:
        raise ExtensionError("field does not match the standard-case template")
    n = fit.n
    omega = [[Fraction(0)] * n for _ in range(n)]
    dim = n + 1
    zero = (0,) * dim
    for (a, b), w in fit.omega.items():
        if not w.depends_only_on([]):
            raise ExtensionError("rotation part is not constant")
        omega[a - 1][b - 1] = w.coefficient(zero)
        omega[b - 1][a - 1] = -w.coefficient(zero)
    return MilneStandardElement(
        tuple(tuple(r) for r in omega), fit.rho, fit.tau, e.f
    )
