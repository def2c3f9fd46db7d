"""Shared builders for the test suite."""

from fractions import Fraction

from ncw.poly import Poly
from ncw.tensors import Connection, one_form, vector


def var(dim, i):
    return Poly.variable(dim, i)


def basis_vector(dim, axis):
    comps = [Poly.zero(dim)] * dim
    comps[axis] = Poly.const(dim, 1)
    return vector(dim, comps)


def standard_connection(n, phi):
    dim = n + 1

    def fn(a, b, c):
        if a == 0 and b == 0 and c >= 1:
            return phi.partial(c)
        return Poly.zero(dim)

    return Connection.build(dim, fn)


def random_poly(rng, dim, degree=2, terms=3):
    out = Poly.zero(dim)
    for _ in range(terms):
        exps = [0] * dim
        for _ in range(degree):
            exps[rng.randrange(dim)] += rng.randint(0, 1)
        out = out + Poly.monomial(dim, exps, Fraction(rng.randint(-3, 3)))
    return out


def random_vector(rng, dim, degree=2):
    return vector(dim, [random_poly(rng, dim, degree) for _ in range(dim)])


def random_one_form(rng, dim, degree=2):
    return one_form(dim, [random_poly(rng, dim, degree) for _ in range(dim)])


def time_poly(rng, dim, degree):
    t = Poly.variable(dim, 0)
    return sum(
        (Fraction(rng.randint(-2, 2)) * t**k for k in range(degree + 1)),
        Poly.zero(dim),
    )


def coriolis_field(n, omega, rho, tau):
    """Assemble X from an antisymmetric matrix-valued map omega[(a,b)] of
    time polynomials, a spatial tuple rho of time polynomials, and a
    rational time-translation tau.  Spatial indices are 1-based."""
    dim = n + 1
    comps = [Poly.const(dim, tau)]
    for a in range(1, n + 1):
        acc = rho[a - 1]
        for b in range(1, n + 1):
            w = omega.get((a, b))
            if w is not None:
                acc = acc + w * Poly.variable(dim, b)
    # antisymmetric completion: omega[(b,a)] = -omega[(a,b)] handled by caller
        comps.append(acc)
    return vector(dim, comps)


def random_coriolis_field(rng, n, degree=2):
    dim = n + 1
    omega = {}
    for a in range(1, n + 1):
        for b in range(a + 1, n + 1):
            w = time_poly(rng, dim, degree)
            omega[(a, b)] = w
            omega[(b, a)] = -w
    rho = tuple(time_poly(rng, dim, degree) for _ in range(n))
    return coriolis_field(n, omega, rho, Fraction(rng.randint(-2, 2)))


def random_milne_field(rng, n, degree=2):
    dim = n + 1
    omega = {}
    for a in range(1, n + 1):
        for b in range(a + 1, n + 1):
            w = Poly.const(dim, rng.randint(-2, 2))
            omega[(a, b)] = w
            omega[(b, a)] = -w
    rho = tuple(time_poly(rng, dim, degree) for _ in range(n))
    return coriolis_field(n, omega, rho, Fraction(rng.randint(-2, 2)))
