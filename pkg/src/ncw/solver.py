"""Symmetry algebras of a Newton-Cartan structure over polynomial ansaetze.

Three nested flavors of infinitesimal symmetry:

* coriolis  - fields preserving the degenerate metric pair (gamma, theta);
* milne     - coriolis fields that also preserve the once-raised symbols
              gamma^{bk} G_ak^c (the contraction is taken after transporting
              the symbols, the only reading that makes the non-tensorial
              connection transportable; valid on the L_X gamma = 0 kernel);
* galilei   - coriolis fields preserving the full connection.

The infinite-dimensional algebras are explored through an exhaustive degree
filtration: for bound d the component ansatz spans the monomials t^j x^alpha
with j <= d and j + |alpha| <= d + 1, i.e. time-coefficient functions of
degree up to d in the spatially-affine solution templates are all reachable
at bound d.  Assembly is one joint sparse linear system per flavor; kernels
come out in canonical reduced echelon form, so bases are reproducible
regardless of evaluation order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Sequence

from .linalg import SparseEliminator, sparse_solve
from .poly import Exponent, Poly, grlex_monomials
from .structures import NCStructure
from .tensors import (
    TensorField,
    lie_derivative,
    lie_derivative_connection,
    raise_connection_transport,
    vector,
    vector_bracket,
)

Flavor = Literal["coriolis", "milne", "galilei"]

FLAVORS: tuple[Flavor, ...] = ("coriolis", "milne", "galilei")

_ALIASES = {
    "cor": "coriolis",
    "coriolis": "coriolis",
    "mil": "milne",
    "milne": "milne",
    "gal": "galilei",
    "galilei": "galilei",
}


def canonical_flavor(name: str) -> Flavor:
    try:
        return _ALIASES[name.lower()]  # type: ignore[return-value]
    except KeyError:
        raise ValueError(f"unknown symmetry flavor {name!r}") from None


class NotInFlavorError(ValueError):
    """A field handed to a flavor-specific operation fails its defining
    equations; the message names the first violated condition."""


@dataclass(frozen=True)
class DegreeBound:
    """Maximum time-degree of the coefficient functions in the ansatz."""

    d: int

    def __post_init__(self):
        if self.d < 0:
            raise ValueError("degree bound must be non-negative")


def ansatz_monomials(dimension: int, degree: int) -> list[Exponent]:
    """Component monomials admitted at the given bound, canonically ordered."""
    out = [
        m
        for m in grlex_monomials(dimension, degree + 1)
        if m[0] <= degree
    ]
    return out


@dataclass(frozen=True)
class SymmetryBasis:
    structure: NCStructure
    flavor: Flavor
    degree: int
    fields: tuple[TensorField, ...]

    @property
    def dimension(self) -> int:
        return len(self.fields)


def _condition_polys(s: NCStructure, x: TensorField, flavor: Flavor) -> list[Poly]:
    """The defining equations of the flavor evaluated on x, flattened."""
    g = s.base
    out = list(lie_derivative(x, g.gamma).components)
    out += list(lie_derivative(x, g.theta).components)
    if flavor == "galilei":
        out += list(lie_derivative_connection(x, s.connection).components)
    elif flavor == "milne":
        ld = lie_derivative_connection(x, s.connection)
        out += list(raise_connection_transport(ld, g.gamma, 1).components)
    return out


def solve_symmetries(
    s: NCStructure, flavor: str, degree: int | DegreeBound
) -> SymmetryBasis:
    """Exact kernel of the flavor's defining equations over the ansatz."""
    fl = canonical_flavor(flavor)
    d = degree.d if isinstance(degree, DegreeBound) else int(degree)
    if d < 0:
        raise ValueError("degree bound must be non-negative")
    dim = s.base.dimension
    monos = ansatz_monomials(dim, d)
    ncols = dim * len(monos)

    rows: dict[tuple[int, Exponent], dict[int, Fraction]] = {}
    for comp in range(dim):
        for j, mono in enumerate(monos):
            col = comp * len(monos) + j
            components = [Poly.zero(dim)] * dim
            components[comp] = Poly.monomial(dim, mono)
            basis_field = vector(dim, components)
            for cond_index, poly in enumerate(_condition_polys(s, basis_field, fl)):
                for exps, coeff in poly.terms.items():
                    row = rows.setdefault((cond_index, exps), {})
                    acc = row.get(col, Fraction(0)) + coeff
                    if acc:
                        row[col] = acc
                    else:
                        row.pop(col, None)

    elim = SparseEliminator(ncols)
    for key in sorted(rows):
        elim.add_row(rows[key])
    kernel = elim.kernel()

    fields = []
    for vec in kernel:
        comps = []
        for comp in range(dim):
            terms = {}
            for j, mono in enumerate(monos):
                coeff = vec.get(comp * len(monos) + j)
                if coeff:
                    terms[mono] = coeff
            comps.append(Poly(dim, terms))
        fields.append(vector(dim, comps))
    return SymmetryBasis(s, fl, d, tuple(fields))


@dataclass(frozen=True)
class ClassifyFlags:
    is_coriolis: bool
    is_milne: bool
    is_galilei: bool


def classify(x: TensorField, s: NCStructure) -> ClassifyFlags:
    """Exact membership flags; nesting enforced (galilei => milne => coriolis)."""
    g = s.base
    cor = (
        lie_derivative(x, g.gamma).is_zero
        and lie_derivative(x, g.theta).is_zero
    )
    if not cor:
        return ClassifyFlags(False, False, False)
    ld = lie_derivative_connection(x, s.connection)
    mil = raise_connection_transport(ld, g.gamma, 1).is_zero
    gal = mil and ld.is_zero
    return ClassifyFlags(True, mil, gal)


def verify_coriolis_identity(x: TensorField, s: NCStructure) -> bool:
    """Whether the doubly-raised transport gamma^{ak} gamma^{bl} (L_X G)_kl^c
    vanishes; requires x to preserve the metric pair."""
    g = s.base
    if not (
        lie_derivative(x, g.gamma).is_zero and lie_derivative(x, g.theta).is_zero
    ):
        raise NotInFlavorError(
            "field does not preserve the metric pair (coriolis conditions fail)"
        )
    ld = lie_derivative_connection(x, s.connection)
    return raise_connection_transport(ld, g.gamma, 2).is_zero


# ----------------------------------------------------------------------
# structure constants

def _field_coefficients(fields: Sequence[TensorField]) -> tuple[list[dict], list]:
    keys: dict[tuple[int, Exponent], int] = {}
    vectors = []
    for f in fields:
        entries = {}
        for comp in range(f.dimension):
            for exps, coeff in f.comp(comp).terms.items():
                key = (comp, exps)
                idx = keys.setdefault(key, len(keys))
                entries[idx] = coeff
        vectors.append(entries)
    return vectors, list(keys)


def structure_constants(
    basis: SymmetryBasis,
) -> tuple[list[list[list[Fraction]]], bool]:
    """Expand [X_i, X_j] in the basis by exact solve.

    Returns the 3-index constants c[i][j][k] and a closure flag; the flag is
    False when some bracket leaves the span (degree truncation need not be
    bracket-stable), in which case that pair's constants are zero.
    """
    if not basis.fields:
        raise ValueError("structure constants need a nonempty basis")
    k = len(basis.fields)
    dim = basis.fields[0].dimension
    brackets = {}
    for i in range(k):
        for j in range(i + 1, k):
            brackets[(i, j)] = vector_bracket(basis.fields[i], basis.fields[j])
    all_fields = list(basis.fields) + list(brackets.values())
    coeff_vectors, _ = _field_coefficients(all_fields)
    basis_vecs = coeff_vectors[:k]
    nrows = max((max(v, default=-1) for v in coeff_vectors), default=-1) + 1

    # columns are basis elements; one row per (component, monomial) key
    matrix_rows: list[dict[int, Fraction]] = [dict() for _ in range(nrows)]
    for col, v in enumerate(basis_vecs):
        for r, c in v.items():
            matrix_rows[r][col] = c

    constants = [
        [[Fraction(0)] * k for _ in range(k)] for _ in range(k)
    ]
    closed = True
    for (i, j), bracket_vec in zip(brackets, coeff_vectors[k:]):
        rhs = [bracket_vec.get(r, Fraction(0)) for r in range(nrows)]
        sol = sparse_solve(matrix_rows, rhs, k)
        if sol is None:
            closed = False
            continue
        particular, kernel = sol
        if kernel:
            raise ValueError("basis is linearly dependent")
        for m in range(k):
            constants[i][j][m] = particular[m]
            constants[j][i][m] = -particular[m]
    return constants, closed


# ----------------------------------------------------------------------
# solution templates

@dataclass(frozen=True)
class TimeCoefficientTemplate:
    """X^0 = tau; X^A = omega(t)^A_B x^B + rho(t)^A with omega antisymmetric.

    The shape of every metric-pair-preserving field of the standard
    structures; milne solutions additionally have constant omega.
    """

    n: int
    omega: dict[tuple[int, int], Poly]  # keys (a, b) with 1 <= a < b <= n
    rho: tuple[Poly, ...]
    tau: Fraction


def fit_time_template(x: TensorField) -> TimeCoefficientTemplate | None:
    """Exact template fit; None when the field does not have the shape."""
    dim = x.dimension
    n = dim - 1
    x0 = x.comp(0)
    if not x0.depends_only_on([]):  # constant
        return None
    tau = x0.coefficient((0,) * dim)
    omega_full: dict[tuple[int, int], Poly] = {}
    rho = []
    for a in range(1, dim):
        comp = x.comp(a)
        rho_terms = {}
        omega_terms: dict[int, dict] = {b: {} for b in range(1, dim)}
        for exps, coeff in comp.terms.items():
            spatial = [(i, e) for i, e in enumerate(exps) if i >= 1 and e > 0]
            if not spatial:
                rho_terms[exps] = coeff
            elif len(spatial) == 1 and spatial[0][1] == 1:
                b = spatial[0][0]
                key = (exps[0],) + (0,) * n
                omega_terms[b][key] = coeff
            else:
                return None
        rho.append(Poly(dim, rho_terms))
        for b in range(1, dim):
            omega_full[(a, b)] = Poly(dim, omega_terms[b])
    for a in range(1, dim):
        for b in range(1, dim):
            if omega_full[(a, b)] != -omega_full[(b, a)]:
                return None
    omega = {
        (a, b): omega_full[(a, b)]
        for a in range(1, dim)
        for b in range(a + 1, dim)
    }
    return TimeCoefficientTemplate(n, omega, tuple(rho), tau)


@dataclass(frozen=True)
class AffineTemplate:
    """X^0 = tau; X^A = omega^A_B x^B + beta^A t + sigma^A, omega constant
    antisymmetric: the affine symmetry fields of the flat structure."""

    n: int
    omega: dict[tuple[int, int], Fraction]
    beta: tuple[Fraction, ...]
    sigma: tuple[Fraction, ...]
    tau: Fraction


def fit_affine_template(x: TensorField) -> AffineTemplate | None:
    fit = fit_time_template(x)
    if fit is None:
        return None
    dim = x.dimension
    omega = {}
    for key, w in fit.omega.items():
        if not w.depends_only_on([]):
            return None
        omega[key] = w.coefficient((0,) * dim)
    beta = []
    sigma = []
    t_unit = tuple([1] + [0] * fit.n)
    zero = (0,) * dim
    for r in fit.rho:
        if r.total_degree() > 1 or not r.depends_only_on([0]):
            return None
        beta.append(r.coefficient(t_unit))
        sigma.append(r.coefficient(zero))
    return AffineTemplate(fit.n, omega, tuple(beta), tuple(sigma), fit.tau)
