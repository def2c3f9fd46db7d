"""Galilei, Newton-Cartan, and Newton-Cartan-Bargmann structures.

A Galilei structure is a degenerate "metric" pair: a symmetric contravariant
tensor gamma of spatial rank n whose kernel is spanned by the closed clock
1-form theta.  A Newton-Cartan structure adds a torsion-free connection that
parallelizes both and whose curvature satisfies the Newtonian symmetry.  An
NCB structure presents the same data through a unit field U and a gauge
1-form A, equivalently through an observer V and a scalar potential.

Sign conventions resolved here once and used consistently everywhere:

* the force 2-form is F_ab = d_a A_b - d_b A_a (the exterior derivative of
  A with the 1/2-weighted antisymmetrization convention);
* the standard presets use the gauge pair U = d/dt, A = -phi.theta, which
  reproduces G_00^A = d_A phi through the geodesic-plus-force assembly;
* the observer dictionary is V = U - gamma(A), phi = gamma(A,A)/2 - A(U),
  and its inverse is A = -Ugamma(V) + (Ugamma(V,V)/2 - phi).theta.  The
  theta-coefficient sign in the inverse is forced by round-tripping with
  the forward dictionary; see the round-trip tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .linalg import RationalMatrix, sparse_solve
from .poly import Poly, grlex_monomials
from .tensors import (
    Connection,
    TensorField,
    apply_metric,
    check_newtonian,
    covariant_derivative,
    curvature,
    directional,
    gradient,
    one_form,
    pairing,
    vector,
)


class StructureError(ValueError):
    """A structure invariant failed; the message names the condition."""


# ----------------------------------------------------------------------
# Galilei structures

@dataclass(frozen=True)
class GalileiStructure:
    """Spacetime dimension n+1 with degenerate metric pair (gamma, theta)."""

    n: int
    gamma: TensorField  # (2,0)
    theta: TensorField  # (0,1)

    @property
    def dimension(self) -> int:
        return self.n + 1

    def validate(self, sample_points: Sequence[Sequence[object]] | None = None) -> None:
        dim = self.dimension
        if (self.gamma.p, self.gamma.q) != (2, 0) or self.gamma.dimension != dim:
            raise StructureError("gamma must be a (2,0) tensor of matching dimension")
        if (self.theta.p, self.theta.q) != (0, 1) or self.theta.dimension != dim:
            raise StructureError("theta must be a 1-form of matching dimension")
        for a in range(dim):
            for b in range(a + 1, dim):
                if self.gamma.comp(a, b) != self.gamma.comp(b, a):
                    raise StructureError(f"gamma not symmetric at ({a},{b})")
        for a in range(dim):
            kernel_comp = Poly.zero(dim)
            for k in range(dim):
                kernel_comp = kernel_comp + self.gamma.comp(a, k) * self.theta.comp(k)
            if not kernel_comp.is_zero:
                raise StructureError(
                    f"theta is not in the kernel of gamma (component {a})"
                )
        for a in range(dim):
            for b in range(dim):
                closed = self.theta.comp(b).partial(a) - self.theta.comp(a).partial(b)
                if not closed.is_zero:
                    raise StructureError("theta must be closed")
        points = [[Fraction(0)] * dim]
        if sample_points:
            points += [[Fraction(v) for v in pt] for pt in sample_points]
        for pt in points:
            self._check_point(pt)

    def _check_point(self, point: Sequence[Fraction]) -> None:
        dim = self.dimension
        g = RationalMatrix(
            dim,
            dim,
            [
                [self.gamma.comp(a, b).evaluate(point) for b in range(dim)]
                for a in range(dim)
            ],
        )
        theta_val = [self.theta.comp(a).evaluate(point) for a in range(dim)]
        if all(v == 0 for v in theta_val):
            raise StructureError(f"theta vanishes at sample point {point}")
        if g.rank() != self.n:
            raise StructureError(
                f"gamma has rank {g.rank()} (expected {self.n}) at {point}"
            )
        # restrict to a coordinate complement of theta and check positive
        # definiteness by Sylvester's criterion
        basis = _complement_covectors(theta_val)
        restricted = [
            [
                sum(
                    u[a] * g.entries[a][b] * v[b]
                    for a in range(dim)
                    for b in range(dim)
                )
                for v in basis
            ]
            for u in basis
        ]
        for k in range(1, self.n + 1):
            minor = RationalMatrix(k, k, [row[:k] for row in restricted[:k]])
            if minor.det() <= 0:
                raise StructureError(
                    f"gamma restricted transverse to theta is not positive "
                    f"definite at {point} (leading minor {k})"
                )


def _complement_covectors(theta_val: Sequence[Fraction]) -> list[list[Fraction]]:
    """n coordinate covectors spanning a complement of theta, greedily."""
    dim = len(theta_val)
    chosen: list[list[Fraction]] = []
    rows = [list(theta_val)]
    for j in range(dim):
        cand = [Fraction(1) if i == j else Fraction(0) for i in range(dim)]
        trial = RationalMatrix.from_rows(rows + [cand])
        if trial.rank() == len(rows) + 1:
            chosen.append(cand)
            rows.append(cand)
        if len(chosen) == dim - 1:
            break
    return chosen


def flat_galilei(n: int) -> GalileiStructure:
    dim = n + 1

    def entry(idx):
        a, b = idx
        if a == b and a >= 1:
            return Poly.const(dim, 1)
        return Poly.zero(dim)

    gamma = TensorField.build(dim, 2, 0, entry)
    theta = one_form(dim, [Poly.const(dim, 1)] + [Poly.zero(dim)] * n)
    return GalileiStructure(n, gamma, theta)


# ----------------------------------------------------------------------
# transverse metric

def transverse_metric(
    g: GalileiStructure, u: TensorField, max_degree: int | None = None
) -> TensorField:
    """The symmetric (0,2) tensor determined by the two contractions
    h_ak gamma^{kb} = delta_a^b - U^b theta_a  and  h_ak U^k = 0.

    Found by an exact linear solve over polynomial coefficients; a direct
    formula handles the flat pair.  Raises StructureError when the system
    is inconsistent (gamma rank deficiency beyond the theta kernel) or not
    uniquely solvable.
    """
    dim = g.dimension
    if pairing(g.theta, u) != Poly.const(dim, 1):
        raise StructureError("transverse metric needs theta(U) = 1")
    if _is_flat_pair(g):
        return _flat_transverse(g, u)
    return _solve_transverse(g, u, max_degree)


def _is_flat_pair(g: GalileiStructure) -> bool:
    dim = g.dimension
    for a in range(dim):
        expected_theta = Poly.const(dim, 1) if a == 0 else Poly.zero(dim)
        if g.theta.comp(a) != expected_theta:
            return False
        for b in range(dim):
            expected = (
                Poly.const(dim, 1) if (a == b and a >= 1) else Poly.zero(dim)
            )
            if g.gamma.comp(a, b) != expected:
                return False
    return True


def _flat_transverse(g: GalileiStructure, u: TensorField) -> TensorField:
    # h_AB = delta_AB, h_0B = -U^B, h_00 = sum_B (U^B)^2
    dim = g.dimension

    def entry(idx):
        a, b = idx
        if a >= 1 and b >= 1:
            return Poly.const(dim, 1) if a == b else Poly.zero(dim)
        if a == 0 and b >= 1:
            return -u.comp(b)
        if b == 0 and a >= 1:
            return -u.comp(a)
        total = Poly.zero(dim)
        for k in range(1, dim):
            total = total + u.comp(k) * u.comp(k)
        return total

    return TensorField.build(dim, 0, 2, entry)


def _solve_transverse(
    g: GalileiStructure, u: TensorField, max_degree: int | None
) -> TensorField:
    dim = g.dimension

    def degree(t: TensorField) -> int:
        return max((c.total_degree() for c in t.components), default=-1)

    base = max(
        0,
        degree(g.gamma),
        degree(g.theta) + degree(u),
        2 * max(0, degree(u)),
    )
    cap = max_degree if max_degree is not None else 2 * base + 4
    attempt = base
    while True:
        result = _try_transverse(g, u, attempt)
        if result is not None:
            return result
        if attempt >= cap:
            raise StructureError(
                "transverse metric system is inconsistent up to degree "
                f"{cap}; gamma is rank deficient beyond the theta kernel"
            )
        attempt = min(cap, attempt + 2)


def _try_transverse(
    g: GalileiStructure, u: TensorField, degree: int
) -> TensorField | None:
    dim = g.dimension
    monos = grlex_monomials(dim, degree)
    pairs = [(a, b) for a in range(dim) for b in range(a, dim)]
    col_of = {
        (pair, m): i * len(monos) + j
        for i, pair in enumerate(pairs)
        for j, m in enumerate(monos)
    }
    ncols = len(pairs) * len(monos)

    rows: list[dict[int, Fraction]] = []
    rhs: list[Fraction] = []
    row_index: dict[tuple, int] = {}

    def row_for(key: tuple) -> int:
        if key not in row_index:
            row_index[key] = len(rows)
            rows.append({})
            rhs.append(Fraction(0))
        return row_index[key]

    def add_lhs(key: tuple, col: int, coeff: Fraction) -> None:
        r = rows[row_for(key)]
        acc = r.get(col, Fraction(0)) + coeff
        if acc:
            r[col] = acc
        else:
            r.pop(col, None)

    # first identity: h_ak gamma^{kb} = delta - U theta, componentwise
    for a in range(dim):
        for b in range(dim):
            target = -u.comp(b) * g.theta.comp(a)
            if a == b:
                target = target + 1
            for k in range(dim):
                pair = (min(a, k), max(a, k))
                for m, c0 in g.gamma.comp(k, b).terms.items():
                    for mm in monos:
                        combined = tuple(x + y for x, y in zip(m, mm))
                        add_lhs(("g1", a, b, combined), col_of[(pair, mm)], c0)
            for m, c0 in target.terms.items():
                rhs[row_for(("g1", a, b, m))] += c0
    # second identity: h_ak U^k = 0
    for a in range(dim):
        for k in range(dim):
            pair = (min(a, k), max(a, k))
            for m, c0 in u.comp(k).terms.items():
                for mm in monos:
                    combined = tuple(x + y for x, y in zip(m, mm))
                    add_lhs(("g2", a, combined), col_of[(pair, mm)], c0)

    solution = sparse_solve(rows, rhs, ncols)
    if solution is None:
        return None
    particular, kernel = solution
    if kernel:
        raise StructureError(
            "transverse metric is not unique; gamma violates the rank condition"
        )

    def entry(idx):
        a, b = idx
        pair = (min(a, b), max(a, b))
        terms = {}
        for j, m in enumerate(monos):
            coeff = particular[col_of[(pair, m)]]
            if coeff:
                terms[m] = coeff
        return Poly(dim, terms)

    return TensorField.build(dim, 0, 2, entry)


# ----------------------------------------------------------------------
# connection construction

def geodesic_connection(g: GalileiStructure, u: TensorField) -> Connection:
    """The unique compatible connection making the unit field U geodesic and
    curl-free:

      UG_ab^c = gamma^{ck}( d_(a h_b)k - d_k h_ab / 2 ) + d_(a theta_b) U^c

    with h the transverse metric of U and round-bracket symmetrization
    carrying the 1/2 weight.
    """
    dim = g.dimension
    if pairing(g.theta, u) != Poly.const(dim, 1):
        raise StructureError("geodesic connection needs theta(U) = 1")
    for a in range(dim):
        for b in range(dim):
            if not (g.theta.comp(b).partial(a) - g.theta.comp(a).partial(b)).is_zero:
                raise StructureError("geodesic connection needs theta closed")
    h = transverse_metric(g, u)
    half = Fraction(1, 2)

    def fn(a, b, c):
        total = Poly.zero(dim)
        for k in range(dim):
            sym = (h.comp(b, k).partial(a) + h.comp(a, k).partial(b)) * half
            total = total + g.gamma.comp(c, k) * (sym - h.comp(a, b).partial(k) * half)
        dtheta_sym = (g.theta.comp(b).partial(a) + g.theta.comp(a).partial(b)) * half
        return total + dtheta_sym * u.comp(c)

    return Connection.build(dim, fn)


def field_strength(a_form: TensorField) -> TensorField:
    """F_ab = d_a A_b - d_b A_a; closed by construction."""
    if (a_form.p, a_form.q) != (0, 1):
        raise ValueError("field_strength needs a 1-form")
    dim = a_form.dimension

    def entry(idx):
        a, b = idx
        return a_form.comp(b).partial(a) - a_form.comp(a).partial(b)

    return TensorField.build(dim, 0, 2, entry)


def assemble_connection(
    ug: Connection, theta: TensorField, force: TensorField, gamma: TensorField
) -> Connection:
    """G_ab^c = UG_ab^c + theta_(a F_b)k gamma^{kc} with the 1/2 weight."""
    dim = ug.dimension
    for a in range(dim):
        for b in range(dim):
            if force.comp(a, b) != -force.comp(b, a):
                raise StructureError("force form must be antisymmetric")
    half = Fraction(1, 2)

    def fn(a, b, c):
        total = ug.symbol(a, b, c)
        for k in range(dim):
            mixed = (
                theta.comp(a) * force.comp(b, k) + theta.comp(b) * force.comp(a, k)
            ) * half
            total = total + mixed * gamma.comp(k, c)
        return total

    return Connection.build(dim, fn)


def closedness_defect(form: TensorField) -> Poly:
    """Sum of |d form| components as a single witness polynomial; zero iff closed."""
    dim = form.dimension
    total = Poly.zero(dim)
    for a in range(dim):
        for b in range(dim):
            for c in range(dim):
                d = (
                    form.comp(b, c).partial(a)
                    - form.comp(a, c).partial(b)
                    + form.comp(a, b).partial(c)
                )
                total = total + d * d
    return total


# ----------------------------------------------------------------------
# NC and NCB structures

@dataclass(frozen=True)
class NCStructure:
    base: GalileiStructure
    connection: Connection

    def validate(self) -> None:
        self.base.validate()
        if not covariant_derivative(self.connection, self.base.gamma).is_zero:
            raise StructureError("connection does not parallelize gamma")
        if not covariant_derivative(self.connection, self.base.theta).is_zero:
            raise StructureError("connection does not parallelize theta")
        ok, witness = check_newtonian(curvature(self.connection), self.base.gamma)
        if not ok:
            raise StructureError(
                f"curvature violates the Newtonian symmetry at indices {witness}"
            )


@dataclass(frozen=True)
class NCBStructure:
    """Gauge presentation (gamma, theta, U, A) with the derived observer
    dictionary cached: V, phi, the force form F, and the transverse metric."""

    base: GalileiStructure
    u: TensorField
    a_form: TensorField
    v: TensorField
    phi: Poly
    force: TensorField
    transverse: TensorField

    def validate(self) -> None:
        self.base.validate()
        dim = self.base.dimension
        if pairing(self.base.theta, self.u) != Poly.const(dim, 1):
            raise StructureError("U must satisfy theta(U) = 1")
        h = self.transverse
        for a in range(dim):
            total = Poly.zero(dim)
            for k in range(dim):
                total = total + h.comp(a, k) * self.u.comp(k)
            if not total.is_zero:
                raise StructureError("transverse metric does not annihilate U")
            for b in range(dim):
                lhs = Poly.zero(dim)
                for k in range(dim):
                    lhs = lhs + h.comp(a, k) * self.base.gamma.comp(k, b)
                rhs = -self.u.comp(b) * self.base.theta.comp(a)
                if a == b:
                    rhs = rhs + 1
                if lhs != rhs:
                    raise StructureError("transverse metric contraction failed")
        if not closedness_defect(self.force).is_zero:
            raise StructureError("force form is not closed")
        v_expect, phi_expect = observer_and_potential(self.base, self.u, self.a_form)
        if not (self.v - v_expect).is_zero or self.phi != phi_expect:
            raise StructureError("observer dictionary out of sync")

    @cached_property
    def _induced(self) -> NCStructure:
        ug = geodesic_connection(self.base, self.u)
        conn = assemble_connection(ug, self.base.theta, self.force, self.base.gamma)
        return NCStructure(self.base, conn)

    def induced_connection(self) -> Connection:
        return self._induced.connection

    def induced_nc(self) -> NCStructure:
        return self._induced


def observer_and_potential(
    g: GalileiStructure, u: TensorField, a_form: TensorField
) -> tuple[TensorField, Poly]:
    """V = U - gamma(A);  phi = gamma(A,A)/2 - A(U)."""
    dim = g.dimension
    raised = apply_metric(g.gamma, a_form)
    v = u - raised
    phi = pairing(a_form, raised) * Fraction(1, 2) - pairing(a_form, u)
    return v, phi


def potential_to_gauge(
    g: GalileiStructure, u: TensorField, v: TensorField, phi: Poly
) -> TensorField:
    """A = -h(V) + (h(V,V)/2 - phi) theta with h the transverse metric of U.

    Round-trips with observer_and_potential; the standard gauge V = U gives
    A = -phi.theta.
    """
    dim = g.dimension
    if pairing(g.theta, v) != Poly.const(dim, 1):
        raise StructureError("potential_to_gauge needs theta(V) = 1")
    h = transverse_metric(g, u)
    lowered = [Poly.zero(dim)] * dim
    vv = Poly.zero(dim)
    for a in range(dim):
        acc = Poly.zero(dim)
        for k in range(dim):
            acc = acc + h.comp(a, k) * v.comp(k)
        lowered[a] = acc
        vv = vv + acc * v.comp(a)
    scalar = vv * Fraction(1, 2) - phi
    comps = [scalar * g.theta.comp(a) - lowered[a] for a in range(dim)]
    return one_form(dim, comps)


def ncb_structure(
    g: GalileiStructure, u: TensorField, a_form: TensorField
) -> NCBStructure:
    v, phi = observer_and_potential(g, u, a_form)
    return NCBStructure(
        base=g,
        u=u,
        a_form=a_form,
        v=v,
        phi=phi,
        force=field_strength(a_form),
        transverse=transverse_metric(g, u),
    )


def standard_structure(n: int, phi: Poly) -> NCBStructure:
    """The flat pair with U = d/dt and gauge form A = -phi.theta."""
    g = flat_galilei(n)
    dim = g.dimension
    if phi.dimension != dim:
        raise ValueError("potential dimension must be n+1")
    u = vector(dim, [Poly.const(dim, 1)] + [Poly.zero(dim)] * n)
    a_form = one_form(
        dim, [-phi * g.theta.comp(k) for k in range(dim)]
    )
    return ncb_structure(g, u, a_form)


def flat_structure(n: int) -> NCBStructure:
    return standard_structure(n, Poly.zero(n + 1))


def metric_gradient(g: GalileiStructure, f: Poly) -> TensorField:
    """gamma(df) as a vector field."""
    return apply_metric(g.gamma, gradient(f))


def geodesic_defect(conn: Connection, u: TensorField) -> TensorField:
    """U^a (d_a U^c + G_ab^c U^b) as a vector field; zero iff U is geodesic."""
    dim = conn.dimension
    comps = []
    for c in range(dim):
        total = directional(u, u.comp(c))
        for a in range(dim):
            for b in range(dim):
                total = total + u.comp(a) * conn.symbol(a, b, c) * u.comp(b)
        comps.append(total)
    return vector(dim, comps)


def curl_defect(
    conn: Connection, u: TensorField, h: TensorField
) -> TensorField:
    """Antisymmetric part of the h-lowered covariant derivative of U."""
    dim = conn.dimension
    du = covariant_derivative(conn, u)  # comp(c, a): index order upper, deriv

    def entry(idx):
        a, b = idx
        total = Poly.zero(dim)
        for k in range(dim):
            total = total + h.comp(b, k) * du.comp(k, a) - h.comp(a, k) * du.comp(k, b)
        return total

    return TensorField.build(dim, 0, 2, entry)
