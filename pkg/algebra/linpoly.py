"""Linearized polynomials sum_i a_i X^(q^i) modulo X^(q^N) - X.

A polynomial is stored as its N coefficients over F_{q^N}. The ``*_arrays`` kernels operate on
stacks of coefficient vectors (shape (..., N)) so that searches and enumerations stay vectorized;
the ``lp_*`` functions are the single-polynomial interface.
"""
import math
from typing import Any, Dict, List, Optional, Sequence

import galois
import numpy as np

from algebra import fieldtower as ft
from algebra import linalg
from algebra.errors import (
    BadStep,
    BadSupport,
    DependentBasis,
    NonBijectiveComponent,
    TowerMismatch,
)
from algebra.fieldtower import FieldTower


class LinearizedPoly(object):
    """
    Linearized polynomial over a field tower, always reduced to N coefficient slots.
    """

    def __init__(self, tower: FieldTower, coefficients: Any) -> None:
        self.tower: FieldTower = tower
        coefficients = tower.GF(coefficients)
        assert coefficients.shape == (tower.N,), "{} != {}".format(
            coefficients.shape, (tower.N,)
        )
        coefficients.flags.writeable = False
        self.coefficients: galois.FieldArray = coefficients

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LinearizedPoly):
            return NotImplemented
        return self.tower == other.tower and bool(np.all(self.coefficients == other.coefficients))

    def __hash__(self) -> int:
        return hash((self.tower, tuple(self.to_json())))

    def __call__(self, x: galois.FieldArray) -> galois.FieldArray:
        return lp_evaluate(self, x)

    def __str__(self) -> str:
        terms = []
        for i, a in enumerate(self.coefficients):
            if a != 0:
                terms.append("{}*X^(q^{})".format(ft.element_literal(self.tower, a), i))
        return " + ".join(terms) if terms else "0"

    def __repr__(self) -> str:
        return "LinearizedPoly({})".format(self)

    @property
    def support(self) -> List[int]:
        return [int(_) for _ in np.nonzero(ft.as_ints(self.coefficients))[0]]

    def coefficient(self, i: int) -> galois.FieldArray:
        return self.coefficients[i % self.tower.N]

    def to_json(self) -> List[int]:
        return [int(_) for _ in ft.as_ints(self.coefficients)]


def poly_from_json(tower: FieldTower, data: Sequence[int]) -> LinearizedPoly:
    return LinearizedPoly(tower, list(data))


def _check_towers(*polys: LinearizedPoly) -> None:
    towers = {_.tower for _ in polys}
    if len(towers) > 1:
        raise TowerMismatch("Polynomials live over different towers")


# Vectorized kernels on coefficient arrays of shape (..., N)


def evaluate_arrays(tower: FieldTower, F: galois.FieldArray, x: galois.FieldArray) -> Any:
    """Evaluate every polynomial in F at every point in x, shape F.shape[:-1] + x.shape."""
    x = tower.GF(x)
    total = tower.zeros(F.shape[:-1] + x.shape)
    extra = (None,) * x.ndim
    for i in range(tower.N):
        total = total + F[(Ellipsis, i) + extra] * ft.frobenius(tower, x, i)
    return total


def compose_arrays(
    tower: FieldTower, F: galois.FieldArray, G: galois.FieldArray
) -> galois.FieldArray:
    """(f o g)_m = sum_i f_i (g_(m-i))^(q^i), broadcast over leading axes."""
    N = tower.N
    shape = np.broadcast_shapes(F.shape, G.shape)
    result = tower.zeros(shape)
    for i in range(N):
        shifted = ft.frobenius(tower, G, i)[..., (np.arange(N) - i) % N]
        result = result + F[..., i : i + 1] * shifted
    return result


def adjoint_arrays(tower: FieldTower, F: galois.FieldArray) -> galois.FieldArray:
    N = tower.N
    result = tower.zeros(F.shape)
    for i in range(N):
        target = (N - i) % N
        result[..., target] = ft.frobenius(tower, F[..., i], target)
    return result


def twist_arrays(tower: FieldTower, F: galois.FieldArray, rho: int) -> galois.FieldArray:
    """Apply x -> x^(p^rho) to every coefficient."""
    if rho % tower.degree == 0:
        return F
    return ft.prime_frobenius(tower, F, rho)


def shift_arrays(tower: FieldTower, F: galois.FieldArray, m: int) -> galois.FieldArray:
    """Right composition with X^(q^m): coefficient i moves to i + m."""
    return F[..., (np.arange(tower.N) - m) % tower.N]


def poly_coordinates(tower: FieldTower, F: galois.FieldArray) -> np.ndarray:
    """F_p coordinates of the coefficients, flattened to (..., N * eN), slot-major."""
    coords = ft.coordinates(tower, F)
    return coords.reshape(F.shape[:-1] + (tower.N * tower.degree,))


def polys_from_coordinates(tower: FieldTower, coords: np.ndarray) -> galois.FieldArray:
    coords = np.asarray(coords, dtype=np.int64)
    shaped = coords.reshape(coords.shape[:-1] + (tower.N, tower.degree))
    return ft.from_coordinates(tower, shaped)


def prime_matrices(tower: FieldTower, F: galois.FieldArray) -> np.ndarray:
    """F_p matrices (..., eN, eN); row r holds the coordinates of f(omega^r)."""
    values = evaluate_arrays(tower, F, ft.prime_basis(tower))
    return ft.coordinates(tower, values)


def ranks_arrays(tower: FieldTower, F: galois.FieldArray) -> np.ndarray:
    """F_p ranks of every polynomial in a stack."""
    mats = prime_matrices(tower, F).reshape((-1, tower.degree, tower.degree))
    return linalg.batch_rank(mats, tower.p).reshape(F.shape[:-1])


def monomial_basis(tower: FieldTower, index: int) -> galois.FieldArray:
    """The eN polynomials omega^u X^(q^index), an F_p-basis of {cX^(q^index)}."""
    basis = tower.zeros((tower.degree, tower.N))
    basis[:, index % tower.N] = ft.prime_basis(tower)
    return basis


def full_basis(tower: FieldTower) -> galois.FieldArray:
    """F_p-basis of all linearized polynomials, ordered as poly_coordinates."""
    return tower.GF(np.concatenate([ft.as_ints(monomial_basis(tower, i)) for i in range(tower.N)]))


# Single-polynomial interface


def lp_zero(tower: FieldTower) -> LinearizedPoly:
    return LinearizedPoly(tower, tower.zeros(tower.N))


def lp_monomial(tower: FieldTower, c: Any, i: int) -> LinearizedPoly:
    coefficients = tower.zeros(tower.N)
    coefficients[i % tower.N] = tower.GF(c)
    return LinearizedPoly(tower, coefficients)


def lp_identity(tower: FieldTower) -> LinearizedPoly:
    return lp_monomial(tower, 1, 0)


def lp_add(f: LinearizedPoly, g: LinearizedPoly) -> LinearizedPoly:
    _check_towers(f, g)
    return LinearizedPoly(f.tower, f.coefficients + g.coefficients)


def lp_scale(c: Any, f: LinearizedPoly) -> LinearizedPoly:
    """The polynomial cX o f."""
    return LinearizedPoly(f.tower, f.tower.GF(c) * f.coefficients)


def lp_evaluate(f: LinearizedPoly, x: Any) -> galois.FieldArray:
    return evaluate_arrays(f.tower, f.coefficients, x)


def lp_compose(f: LinearizedPoly, g: LinearizedPoly) -> LinearizedPoly:
    _check_towers(f, g)
    return LinearizedPoly(f.tower, compose_arrays(f.tower, f.coefficients, g.coefficients))


def lp_adjoint(f: LinearizedPoly) -> LinearizedPoly:
    return LinearizedPoly(f.tower, adjoint_arrays(f.tower, f.coefficients))


def lp_twist(f: LinearizedPoly, rho: int) -> LinearizedPoly:
    return LinearizedPoly(f.tower, twist_arrays(f.tower, f.coefficients, rho))


class FqMatrix(object):
    """Matrix of a linearized polynomial; a coordinate row vector u maps to u @ M (mod p)."""

    def __init__(self, entries: np.ndarray, p: int, e: int) -> None:
        self.entries: np.ndarray = linalg.mod_p(entries, p)
        self.p: int = p
        self.e: int = e

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FqMatrix):
            return NotImplemented
        return self.p == other.p and np.array_equal(self.entries, other.entries)

    def __add__(self, other: "FqMatrix") -> "FqMatrix":
        return FqMatrix(self.entries + other.entries, self.p, self.e)

    def __matmul__(self, other: "FqMatrix") -> "FqMatrix":
        return FqMatrix(self.entries @ other.entries, self.p, self.e)

    @property
    def rank(self) -> int:
        """Rank over F_q."""
        return linalg.rank_mod(self.entries, self.p) // self.e


def lp_matrix(f: LinearizedPoly, basis: Optional[Sequence[Any]] = None) -> FqMatrix:
    """Matrix of f with respect to a basis of F_{q^N}.

    Without a basis the polynomial basis 1, omega, ..., omega^(eN-1) is used. A supplied basis
    is an F_p-basis (for e = 1 this is an F_q-basis of N elements).

    :param f: Polynomial
    :type f: LinearizedPoly
    :param basis: Basis elements
    :type basis: list
    :return: Matrix, rows hold the coordinates of f(basis_i)
    :rtype: FqMatrix
    """
    tower = f.tower
    canonical = prime_matrices(tower, f.coefficients)
    if basis is None:
        return FqMatrix(canonical, tower.p, tower.e)

    B = ft.coordinates(tower, tower.GF(basis))
    if B.shape != (tower.degree, tower.degree) or linalg.rank_mod(B, tower.p) < tower.degree:
        raise DependentBasis("Basis of {} elements is not a basis over F_p".format(len(basis)))

    GFp = tower.prime_field
    # change of basis: M_B = B M B^-1 in row-vector convention
    M = GFp(B) @ GFp(canonical) @ np.linalg.inv(GFp(B))
    return FqMatrix(np.asarray(M.view(np.ndarray), dtype=np.int64), tower.p, tower.e)


def lp_rank(f: LinearizedPoly) -> int:
    return int(ranks_arrays(f.tower, f.coefficients)) // f.tower.e


def lp_is_bijective(f: LinearizedPoly) -> bool:
    return lp_rank(f) == f.tower.N


def lp_root_count(f: LinearizedPoly) -> int:
    """q^(N - rank), so q^N for the zero polynomial."""
    return f.tower.q ** (f.tower.N - lp_rank(f))


def lp_root_count_exhaustive(f: LinearizedPoly) -> int:
    values = lp_evaluate(f, f.tower.GF.elements)
    return int(np.count_nonzero(values == 0))


def lp_inverse(f: LinearizedPoly) -> LinearizedPoly:
    """Compositional inverse g with f o g = g o f = X."""
    tower = f.tower
    if not lp_is_bijective(f):
        raise NonBijectiveComponent("{} is not invertible".format(f))

    GFp = tower.prime_field
    target = np.linalg.inv(GFp(prime_matrices(tower, f.coefficients)))
    basis_mats = prime_matrices(tower, full_basis(tower)).reshape(tower.N * tower.degree, -1)
    coords = linalg.solve_consistent(
        basis_mats.T, np.asarray(target.view(np.ndarray), dtype=np.int64).reshape(-1), tower.p
    )
    assert coords is not None
    g = LinearizedPoly(tower, polys_from_coordinates(tower, coords))
    assert lp_compose(f, g) == lp_identity(tower), "{} != X".format(lp_compose(f, g))
    return g


def random_polys(
    tower: FieldTower, count: int, rng: np.random.Generator, support: Optional[Sequence[int]] = None
) -> galois.FieldArray:
    values = rng.integers(0, tower.order, size=(count, tower.N))
    if support is not None:
        mask = np.zeros(tower.N, dtype=bool)
        mask[list(support)] = True
        values[:, ~mask] = 0
    return tower.GF(values)


def conjugate_norm(tower: FieldTower, x: galois.FieldArray, s: int) -> galois.FieldArray:
    """N_{q^(sN)/q^s}(x) as the product of the conjugates x^(q^(si)), i < N."""
    total = tower.GF(np.ones(np.shape(x), dtype=np.int64))
    for i in range(tower.N):
        total = total * ft.frobenius(tower, x, s * i)
    return total


def _step_support(tower: FieldTower, s: int, k: int) -> List[int]:
    return [(i * s) % tower.N for i in range(k + 1)]


def gow_norm_check(f: LinearizedPoly, s: int, k: Optional[int] = None) -> Dict[str, Any]:
    """Norm criterion for a polynomial supported on X, X^(q^s), ..., X^(q^(ks)).

    If f has q^k roots then N(f_0) = (-1)^(kN) N(f_k). Returns the root count and whether the
    norm identity holds; ``violation`` is True only if the implication fails.

    :param f: Polynomial with s-arithmetic support
    :type f: LinearizedPoly
    :param s: Step, coprime to N
    :type s: int
    :param k: Leading index; inferred from the support when absent
    :type k: int
    :return: Report
    :rtype: dict
    """
    tower = f.tower
    N = tower.N
    if math.gcd(s, N) != 1:
        raise BadStep("gcd({}, {}) != 1".format(s, N))

    order = [(i * s) % N for i in range(N)]
    if k is None:
        nonzero = [i for i in range(N) if f.coefficient(order[i]) != 0]
        k = max(nonzero) if nonzero else 0
    support = set(_step_support(tower, s, k))
    outside = [_ for _ in f.support if _ not in support]
    if outside:
        raise BadSupport("coefficients outside {} at {}".format(sorted(support), outside))

    f_0 = f.coefficient(0)
    f_k = f.coefficient(k * s)
    norm_0 = conjugate_norm(tower, f_0, s)
    norm_k = conjugate_norm(tower, f_k, s)
    assert norm_0 == ft.norm(tower, f_0), "{} != {}".format(norm_0, ft.norm(tower, f_0))
    assert norm_k == ft.norm(tower, f_k), "{} != {}".format(norm_k, ft.norm(tower, f_k))
    sign = tower.GF(1) if (k * N) % 2 == 0 else -tower.GF(1)
    norms_equal = bool(norm_0 == sign * norm_k)
    root_count = lp_root_count(f)
    return {
        "root_count": root_count,
        "k": k,
        "norms_equal": norms_equal,
        "violation": root_count == tower.q**k and not norms_equal,
    }


def gow_norm_sweep(
    tower: FieldTower, s: int, k: int, samples: int, rng: np.random.Generator
) -> Dict[str, int]:
    """Random polynomials on the s-support with f_0, f_k != 0; counts violations of the criterion."""
    if math.gcd(s, tower.N) != 1:
        raise BadStep("gcd({}, {}) != 1".format(s, tower.N))

    support = _step_support(tower, s, k)
    F = random_polys(tower, samples, rng, support)
    F[:, 0] = tower.GF(rng.integers(1, tower.order, size=samples))
    F[:, (k * s) % tower.N] = tower.GF(rng.integers(1, tower.order, size=samples))
    ranks = ranks_arrays(tower, F) // tower.e
    full_roots = ranks == tower.N - k
    norm_0 = conjugate_norm(tower, F[:, 0], s)
    norm_k = conjugate_norm(tower, F[:, (k * s) % tower.N], s)
    assert np.all(norm_0 == ft.norm(tower, F[:, 0]))
    sign = tower.GF(1) if (k * tower.N) % 2 == 0 else -tower.GF(1)
    norms_equal = norm_0 == sign * norm_k
    return {
        "samples": samples,
        "full_root_count": int(np.count_nonzero(full_roots)),
        "violations": int(np.count_nonzero(full_roots & ~norms_equal)),
    }
