"""Exact multivariate polynomial arithmetic over the rationals.

A polynomial in the coordinates (x0, x1, ..., x_n) is a dictionary mapping
exponent tuples to rational coefficients (Fraction).  Coordinate 0 is time,
written ``t`` in the text grammar; the remaining coordinates are spatial.
This representation is exact: no rounding ever occurs, so polynomial
identity tests are fully reliable.

  terms = {(2, 1): Fraction(3, 2)}  with dimension 2  means  3/2 * t^2 * x1

The zero polynomial has an empty term dictionary.  Stored coefficients are
never zero, so two polynomials are equal iff their term dictionaries are.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

Exponent = tuple[int, ...]

Scalar = int | Fraction


class Poly:
    """Immutable multivariate polynomial with exact rational coefficients."""

    __slots__ = ("dimension", "terms")

    dimension: int
    terms: dict[Exponent, Fraction]

    def __init__(self, dimension: int, terms: Mapping[Exponent, Scalar] | None = None):
        if dimension < 1:
            raise ValueError(f"dimension must be >= 1, got {dimension}")
        clean: dict[Exponent, Fraction] = {}
        if terms:
            for exps, coeff in terms.items():
                if len(exps) != dimension:
                    raise ValueError(
                        f"exponent tuple {exps} has length {len(exps)}, expected {dimension}"
                    )
                if any(e < 0 for e in exps):
                    raise ValueError(f"negative exponent in {exps}")
                c = Fraction(coeff)
                if c != 0:
                    clean[tuple(exps)] = c
        object.__setattr__(self, "dimension", dimension)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("Poly is immutable")

    # ------------------------------------------------------------------
    # constructors

    @classmethod
    def zero(cls, dimension: int) -> "Poly":
        return cls(dimension)

    @classmethod
    def const(cls, dimension: int, value: Scalar) -> "Poly":
        return cls(dimension, {(0,) * dimension: Fraction(value)})

    @classmethod
    def variable(cls, dimension: int, index: int) -> "Poly":
        """The coordinate polynomial x_index (index 0 is time)."""
        if not 0 <= index < dimension:
            raise ValueError(f"variable index {index} out of range for dimension {dimension}")
        exps = [0] * dimension
        exps[index] = 1
        return cls(dimension, {tuple(exps): Fraction(1)})

    @classmethod
    def monomial(cls, dimension: int, exps: Sequence[int], coeff: Scalar = 1) -> "Poly":
        return cls(dimension, {tuple(exps): Fraction(coeff)})

    # ------------------------------------------------------------------
    # ring operations

    def _coerce(self, other: object) -> "Poly | None":
        if isinstance(other, Poly):
            if other.dimension != self.dimension:
                raise ValueError(
                    f"dimension mismatch: {self.dimension} vs {other.dimension}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(self.dimension, other)
        return None

    def __add__(self, other: "Poly | Scalar") -> "Poly":
        p = self._coerce(other)
        if p is None:
            return NotImplemented
        out = dict(self.terms)
        for exps, coeff in p.terms.items():
            acc = out.get(exps, Fraction(0)) + coeff
            if acc:
                out[exps] = acc
            else:
                out.pop(exps, None)
        return Poly(self.dimension, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(self.dimension, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "Poly | Scalar") -> "Poly":
        p = self._coerce(other)
        if p is None:
            return NotImplemented
        return self + (-p)

    def __rsub__(self, other: "Poly | Scalar") -> "Poly":
        p = self._coerce(other)
        if p is None:
            return NotImplemented
        return p + (-self)

    def __mul__(self, other: "Poly | Scalar") -> "Poly":
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if c == 0:
                return Poly(self.dimension)
            return Poly(self.dimension, {e: k * c for e, k in self.terms.items()})
        p = self._coerce(other)
        if p is None:
            return NotImplemented
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in p.terms.items():
                exps = tuple(a + b for a, b in zip(e1, e2))
                acc = out.get(exps, Fraction(0)) + c1 * c2
                if acc:
                    out[exps] = acc
                else:
                    out.pop(exps, None)
        return Poly(self.dimension, out)

    __rmul__ = __mul__

    def __pow__(self, power: int) -> "Poly":
        if not isinstance(power, int) or power < 0:
            raise ValueError("polynomial powers must be non-negative integers")
        result = Poly.const(self.dimension, 1)
        base = self
        k = power
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly.const(self.dimension, other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.dimension == other.dimension and self.terms == other.terms

    __hash__ = None  # type: ignore[assignment]

    def __bool__(self) -> bool:
        return bool(self.terms)

    # ------------------------------------------------------------------
    # calculus and queries

    def partial(self, axis: int) -> "Poly":
        """Formal partial derivative with respect to coordinate ``axis``."""
        if not 0 <= axis < self.dimension:
            raise ValueError(f"axis {axis} out of range for dimension {self.dimension}")
        out: dict[Exponent, Fraction] = {}
        for exps, coeff in self.terms.items():
            e = exps[axis]
            if e == 0:
                continue
            new = list(exps)
            new[axis] = e - 1
            key = tuple(new)
            acc = out.get(key, Fraction(0)) + coeff * e
            if acc:
                out[key] = acc
            else:
                out.pop(key, None)
        return Poly(self.dimension, out)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, axis: int) -> int:
        if not self.terms:
            return -1
        return max(e[axis] for e in self.terms)

    def depends_only_on(self, axes: Iterable[int]) -> bool:
        allowed = set(axes)
        return all(
            all(e == 0 for i, e in enumerate(exps) if i not in allowed)
            for exps in self.terms
        )

    def coefficient(self, exps: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(exps), Fraction(0))

    def evaluate(self, point: Sequence[Scalar]) -> Fraction:
        """Exact value at a rational point."""
        if len(point) != self.dimension:
            raise ValueError("point has wrong length")
        vals = [Fraction(v) for v in point]
        total = Fraction(0)
        for exps, coeff in self.terms.items():
            term = coeff
            for v, e in zip(vals, exps):
                if e:
                    term *= v**e
            total += term
        return total

    def substitute(self, images: Sequence["Poly"]) -> "Poly":
        """Substitute coordinate i by images[i]; images share one dimension."""
        if len(images) != self.dimension:
            raise ValueError("need one image polynomial per coordinate")
        dims = {p.dimension for p in images}
        if len(dims) != 1:
            raise ValueError("image polynomials must share a dimension")
        new_dim = dims.pop()
        total = Poly(new_dim)
        for exps, coeff in self.terms.items():
            term = Poly.const(new_dim, coeff)
            for img, e in zip(images, exps):
                if e:
                    term = term * img**e
            total = total + term
        return total

    def extended(self, new_dimension: int) -> "Poly":
        """Reinterpret in a larger coordinate ring (new variables appended)."""
        if new_dimension < self.dimension:
            raise ValueError("cannot shrink dimension")
        pad = (0,) * (new_dimension - self.dimension)
        return Poly(new_dimension, {e + pad: c for e, c in self.terms.items()})

    # ------------------------------------------------------------------
    # canonical rendering (grammar shared with the structure-file parser)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        ordered = sorted(self.terms, key=_grlex_key, reverse=True)
        pieces: list[str] = []
        for exps in ordered:
            coeff = self.terms[exps]
            mono = _render_monomial(exps)
            if mono:
                if coeff == 1:
                    body = mono
                elif coeff == -1:
                    body = f"-{mono}"
                else:
                    body = f"{coeff}*{mono}"
            else:
                body = str(coeff)
            if not pieces:
                pieces.append(body)
            elif body.startswith("-"):
                pieces.append(f" - {body[1:]}")
            else:
                pieces.append(f" + {body}")
        return "".join(pieces)

    def __repr__(self) -> str:
        return f"Poly[{self.dimension}]({self})"


def _grlex_key(exps: Exponent) -> tuple[int, Exponent]:
    return (sum(exps), exps)


def grlex_monomials(dimension: int, max_degree: int) -> list[Exponent]:
    """All exponent tuples of total degree <= max_degree, graded-lex ascending."""

    def exact(degree: int, slots: int) -> Iterator[Exponent]:
        if slots == 1:
            yield (degree,)
            return
        for e in range(degree, -1, -1):
            for rest in exact(degree - e, slots - 1):
                yield (e,) + rest

    out: list[Exponent] = []
    for degree in range(max_degree + 1):
        out.extend(sorted(exact(degree, dimension), reverse=True))
    return out


def _render_monomial(exps: Exponent) -> str:
    parts: list[str] = []
    for i, e in enumerate(exps):
        if e == 0:
            continue
        name = "t" if i == 0 else f"x{i}"
        parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts)


def time_part(p: Poly) -> Poly:
    """The purely time-dependent part: p with all spatial coordinates at 0."""
    images = [Poly.variable(p.dimension, 0)]
    images += [Poly.zero(p.dimension) for _ in range(p.dimension - 1)]
    return p.substitute(images)


def poly_iter_terms(p: Poly) -> Iterator[tuple[Exponent, Fraction]]:
    return iter(p.terms.items())
