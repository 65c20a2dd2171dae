"""Field tower F_q < F_{q^n} < F_{q^N}, N = 2n, living inside one galois field.

Subfields are predicates on elements of the big field, not separate types. Field elements are
``galois.FieldArray`` scalars or arrays; their integer representation is the residue's
coefficient vector read in base p (constant term least significant).
"""
import functools
import math
from typing import Any, Dict, List, Optional, Sequence, Tuple

import galois
import numpy as np

from algebra.errors import (
    BadGamma,
    DegreeMismatch,
    EvenCharacteristic,
    NonPrimitivePolynomial,
    NotInSubfield,
    NotPrime,
    ReduciblePolynomial,
)

__author__ = "Erik Hemberg"


class FieldTower(object):
    """
    The chain F_q < F_{q^n} < F_{q^{2n}}, with q = p^e.

    The big field is ``galois.GF(p^(e*N))`` defined by a primitive polynomial, so the
    residue class of X is the fixed generator omega.
    """

    def __init__(self, p: int, e: int, n: int, defining_poly: galois.Poly) -> None:
        self.p: int = p
        self.e: int = e
        self.n: int = n
        self.N: int = 2 * n
        self.q: int = p**e
        self.order: int = self.q**self.N
        self.degree: int = e * self.N
        self.poly: galois.Poly = defining_poly
        self.defining_poly: Tuple[int, ...] = tuple(
            int(_) for _ in defining_poly.coefficients(order="asc")
        )
        self.prime_field = galois.GF(p)
        self.GF = galois.GF(self.order, irreducible_poly=defining_poly, primitive_element=p)
        self.generator = self.GF(p)
        assert self.GF.primitive_element == self.generator, "{} != {}".format(
            self.GF.primitive_element, self.generator
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FieldTower):
            return NotImplemented
        return (self.p, self.e, self.n, self.defining_poly) == (
            other.p,
            other.e,
            other.n,
            other.defining_poly,
        )

    def __hash__(self) -> int:
        return hash((self.p, self.e, self.n, self.defining_poly))

    def __str__(self) -> str:
        return "F_{}^{} p:{} e:{} n:{} poly:{}".format(
            self.q, self.N, self.p, self.e, self.n, list(self.defining_poly)
        )

    def tower_order(self, m: int) -> int:
        return self.q**m

    def element(self, value: Any) -> galois.FieldArray:
        return self.GF(value)

    def power(self, k: int) -> galois.FieldArray:
        """omega^k, exponent taken modulo q^N - 1."""
        return self.generator ** (k % (self.order - 1))

    def zeros(self, shape: Any) -> galois.FieldArray:
        return self.GF.Zeros(shape)


def build_tower(
    p: int, e: int, n: int, defining_poly: Optional[Sequence[int]] = None
) -> FieldTower:
    """Build (or fetch from cache) the tower F_q < F_{q^n} < F_{q^2n}.

    :param p: Characteristic
    :type p: int
    :param e: Extension degree of F_q over F_p
    :type e: int
    :param n: Half degree
    :type n: int
    :param defining_poly: Coefficients over F_p, constant term first. Lexicographically
        smallest primitive polynomial when absent
    :type defining_poly: list
    :return: Field tower
    :rtype: FieldTower
    """
    if not galois.is_prime(int(p)):
        raise NotPrime("{} is not prime".format(p))
    if e < 1 or n < 1:
        raise DegreeMismatch("e and n must be positive, got e:{} n:{}".format(e, n))
    _poly = None if defining_poly is None else tuple(int(_) % p for _ in defining_poly)
    return _build_tower(int(p), int(e), int(n), _poly)


@functools.lru_cache(maxsize=None)
def _build_tower(p: int, e: int, n: int, defining_poly: Optional[Tuple[int, ...]]) -> FieldTower:
    degree = e * 2 * n
    prime_field = galois.GF(p)
    if defining_poly is None:
        poly = galois.primitive_poly(p, degree, method="min")
    else:
        poly = galois.Poly(list(defining_poly), field=prime_field, order="asc")
        if poly.degree != degree:
            raise DegreeMismatch("degree {} != {}".format(poly.degree, degree))
        # Monic normalization keeps the same field
        poly = poly // galois.Poly([poly.coeffs[0]], field=prime_field)
        if not poly.is_irreducible():
            raise ReduciblePolynomial("{} is reducible over F_{}".format(poly, p))
        if not poly.is_primitive():
            raise NonPrimitivePolynomial("{} is not primitive over F_{}".format(poly, p))

    return FieldTower(p, e, n, poly)


def tower_to_json(tower: FieldTower) -> Dict[str, Any]:
    return {
        "p": tower.p,
        "e": tower.e,
        "n": tower.n,
        "defining_poly": list(tower.defining_poly),
    }


def tower_from_json(data: Dict[str, Any]) -> FieldTower:
    return build_tower(data["p"], data["e"], data["n"], data["defining_poly"])


def to_int(x: galois.FieldArray) -> Any:
    """Integer encoding of an element, or nested lists for arrays."""
    values = np.asarray(x.view(np.ndarray), dtype=np.int64)
    if values.ndim == 0:
        return int(values)
    return values.tolist()


def as_ints(x: galois.FieldArray) -> np.ndarray:
    return np.asarray(x.view(np.ndarray), dtype=np.int64)


def frobenius(tower: FieldTower, x: galois.FieldArray, i: int) -> galois.FieldArray:
    """x^(q^i) with i taken modulo N."""
    return x ** (tower.q ** (i % tower.N))


def prime_frobenius(tower: FieldTower, x: galois.FieldArray, r: int) -> galois.FieldArray:
    """x^(p^r), the automorphisms of F_q extended to the big field."""
    return x ** (tower.p ** (r % tower.degree))


def subfield_contains(tower: FieldTower, x: galois.FieldArray, m: int) -> Any:
    """x in F_{q^m} iff x^(q^m) = x. Works elementwise on arrays."""
    assert tower.N % m == 0, "{} does not divide {}".format(m, tower.N)
    result = x ** (tower.q**m) == x
    if np.ndim(result) == 0:
        return bool(result)
    return result


def _check_in_subfield(tower: FieldTower, x: galois.FieldArray, m: int) -> None:
    if not np.all(subfield_contains(tower, x, m)):
        raise NotInSubfield("{} not in F_{}^{}".format(x, tower.q, m))


def rel_norm(tower: FieldTower, x: galois.FieldArray, a: int, b: int) -> galois.FieldArray:
    """Relative norm N_{q^a/q^b}(x) = x^((q^a - 1)/(q^b - 1)).

    :param tower: Tower
    :type tower: FieldTower
    :param x: Element of F_{q^a}
    :type x: galois.FieldArray
    :param a: Degree of the field x lives in
    :type a: int
    :param b: Degree of the target subfield, dividing a
    :type b: int
    :return: Norm in F_{q^b}
    :rtype: galois.FieldArray
    """
    assert a % b == 0 and tower.N % a == 0, "bad degrees a:{} b:{}".format(a, b)
    _check_in_subfield(tower, x, a)
    return x ** ((tower.q**a - 1) // (tower.q**b - 1))


def norm(tower: FieldTower, x: galois.FieldArray) -> galois.FieldArray:
    return rel_norm(tower, x, tower.N, 1)


def trace_to_base(tower: FieldTower, x: galois.FieldArray) -> galois.FieldArray:
    """Sum of the N conjugates x^(q^i)."""
    total = tower.zeros(np.shape(x))
    for i in range(tower.N):
        total = total + frobenius(tower, x, i)
    return total


def is_square_in_base(tower: FieldTower, x: galois.FieldArray) -> Any:
    """Squareness in F_q; 0 counts as a square."""
    _check_in_subfield(tower, x, 1)
    if tower.q % 2 == 0:
        result = np.ones(np.shape(x), dtype=bool)
    else:
        result = (x == 0) | (x ** ((tower.q - 1) // 2) == 1)
    if np.ndim(result) == 0:
        return bool(result)
    return result


def is_valid_gamma(tower: FieldTower, gamma: galois.FieldArray) -> bool:
    if tower.q % 2 == 0 or gamma == 0:
        return False
    return not is_square_in_base(tower, norm(tower, gamma))


def check_gamma(tower: FieldTower, gamma: galois.FieldArray) -> None:
    if tower.q % 2 == 0:
        raise EvenCharacteristic("q = {} is even".format(tower.q))
    if not is_valid_gamma(tower, gamma):
        raise BadGamma("N({}) is a square in F_{}".format(to_int(gamma), tower.q))


def find_gamma(tower: FieldTower) -> galois.FieldArray:
    """First omega^t, t = 1, 2, ..., whose norm is a non-square in F_q."""
    if tower.q % 2 == 0:
        raise EvenCharacteristic("q = {} is even".format(tower.q))
    candidates = ordered_elements(tower)[2:]
    non_square = ~is_square_in_base(tower, norm(tower, candidates))
    gamma = candidates[int(np.argmax(non_square))]
    assert not subfield_contains(tower, gamma, tower.n)
    return gamma


@functools.lru_cache(maxsize=None)
def _ordered_ints(tower: FieldTower) -> np.ndarray:
    powers = tower.generator ** np.arange(tower.order - 1)
    return np.concatenate([np.zeros(1, dtype=np.int64), as_ints(powers)])


def ordered_elements(tower: FieldTower) -> galois.FieldArray:
    """[0, omega^0, omega^1, ...], the order every search iterates in."""
    return tower.GF(_ordered_ints(tower))


def element_index(tower: FieldTower, x: galois.FieldArray) -> Any:
    """Position of x in ordered_elements: 0 for 0, 1 + log(x) otherwise."""
    values = np.atleast_1d(as_ints(x))
    result = np.zeros(values.shape, dtype=np.int64)
    nonzero = values != 0
    if nonzero.any():
        result[nonzero] = np.asarray(tower.GF(values[nonzero]).log(), dtype=np.int64) + 1
    if np.ndim(x) == 0:
        return int(result[0])
    return result


def discrete_log(tower: FieldTower, x: galois.FieldArray) -> int:
    assert x != 0
    return int(x.log())


def subfield_generator(tower: FieldTower, m: int) -> galois.FieldArray:
    return tower.power((tower.order - 1) // (tower.q**m - 1))


def subfield_elements(tower: FieldTower, m: int) -> galois.FieldArray:
    """All elements of F_{q^m}, 0 first, then generator powers."""
    zeta = subfield_generator(tower, m)
    powers = zeta ** np.arange(tower.q**m - 1)
    return tower.GF(np.concatenate([np.zeros(1, dtype=np.int64), as_ints(powers)]))


def subfield_basis(tower: FieldTower, m: int) -> galois.FieldArray:
    """F_p-basis of F_{q^m}: the first e*m powers of its primitive element."""
    zeta = subfield_generator(tower, m)
    return zeta ** np.arange(tower.e * m)


def prime_basis(tower: FieldTower) -> galois.FieldArray:
    """Polynomial basis 1, omega, ..., omega^(eN-1) of the big field over F_p."""
    return tower.generator ** np.arange(tower.degree)


def coordinates(tower: FieldTower, x: galois.FieldArray) -> np.ndarray:
    """F_p coordinates in the polynomial basis, constant term first."""
    if np.size(x) == 0:
        return np.zeros(np.shape(x) + (tower.degree,), dtype=np.int64)
    vectors = np.asarray(x.vector().view(np.ndarray), dtype=np.int64)
    return np.ascontiguousarray(vectors[..., ::-1])


def from_coordinates(tower: FieldTower, coords: np.ndarray) -> galois.FieldArray:
    values = np.ascontiguousarray(np.asarray(coords, dtype=np.int64)[..., ::-1] % tower.p)
    if values.size == 0:
        return tower.zeros(values.shape[:-1])
    return tower.GF.Vector(tower.prime_field(values))


def coset_representative(tower: FieldTower, x: galois.FieldArray, m: int) -> galois.FieldArray:
    """Smallest generator power in the coset x * F_{q^m}^*."""
    assert x != 0
    step = (tower.order - 1) // (tower.q**m - 1)
    return tower.power(discrete_log(tower, x) % step)


def element_from_power(tower: FieldTower, k: int) -> galois.FieldArray:
    return tower.power(k)


def element_literal(tower: FieldTower, x: galois.FieldArray) -> str:
    if x == 0:
        return "0"
    return "w^{}".format(discrete_log(tower, x))


def describe_tower(tower: FieldTower) -> List[Dict[str, Any]]:
    """Rows for the `field` table."""
    rows = []
    for label, m in (("F_q", 1), ("F_q^n", tower.n), ("F_q^N", tower.N)):
        rows.append(
            {
                "field": label,
                "order": tower.tower_order(m),
                "generator": "w^{}".format((tower.order - 1) // (tower.q**m - 1)),
                "gcd": math.gcd(m, tower.N),
            }
        )
    return rows
