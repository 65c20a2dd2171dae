"""Hughes-Kleinfeld presemifield on F_{q^n}^2 and brute-force semifield nuclei.

(c, d) * (a, b) = (ac + b d^(q^s) u, ad + b c^(q^s) + b d^(q^s) v) where gamma^(q^s + 1) = u + v gamma.
Multiplication tables are integer arrays indexed by the integer encoding of field elements.
"""
import math
from typing import Any, Dict, List, Tuple

import galois
import numpy as np

from algebra import fieldtower as ft
from algebra.errors import BadGamma, BadStep, BudgetExceeded, NotBiadditive, ZeroDivisorFound
from algebra.fieldtower import FieldTower
from codes import codes as cd
from codes.codes import RankMetricCode

Pair = Tuple[galois.FieldArray, galois.FieldArray]

TABLE_EXPORT_LIMIT = 729


class HKParams(object):
    """
    Parameters of the Hughes-Kleinfeld multiplication.

    Attributes:
        - tower: Field tower
        - gamma: Element with non-square norm, outside F_{q^n}
        - s: Step coprime to 2n
        - u, v: Elements of F_{q^n} with gamma^(q^s + 1) = u + v gamma
    """

    def __init__(
        self,
        tower: FieldTower,
        gamma: galois.FieldArray,
        s: int,
        u: galois.FieldArray,
        v: galois.FieldArray,
    ) -> None:
        self.tower = tower
        self.gamma = gamma
        self.s = s
        self.u = u
        self.v = v

    def to_json(self) -> Dict[str, Any]:
        return {
            "gamma": ft.to_int(self.gamma),
            "s": self.s,
            "u": ft.to_int(self.u),
            "v": ft.to_int(self.v),
        }


def _pair_coordinates(tower: FieldTower, gamma: galois.FieldArray, z: Any) -> Pair:
    """(c, d) over F_{q^n} with z = c + d gamma."""
    z = tower.GF(z)
    gamma_bar = ft.frobenius(tower, gamma, tower.n)
    d = (z - ft.frobenius(tower, z, tower.n)) / (gamma - gamma_bar)
    return z - d * gamma, d


def hk_params(tower: FieldTower, gamma: Any, s: int) -> HKParams:
    """Solve gamma^(q^s + 1) = u + v gamma in the F_{q^n}-basis {1, gamma}.

    :param tower: Tower
    :type tower: FieldTower
    :param gamma: Element with non-square norm
    :type gamma: galois.FieldArray
    :param s: Step coprime to 2n
    :type s: int
    :return: Parameters
    :rtype: HKParams
    """
    gamma = tower.GF(gamma)
    if math.gcd(s, tower.N) != 1:
        raise BadStep("gcd({}, {}) != 1".format(s, tower.N))
    if ft.subfield_contains(tower, gamma, tower.n):
        raise BadGamma("{} lies in F_q^n".format(ft.element_literal(tower, gamma)))
    ft.check_gamma(tower, gamma)

    target = gamma ** (tower.q**s + 1)
    u, v = _pair_coordinates(tower, gamma, target)
    assert ft.subfield_contains(tower, u, tower.n) and ft.subfield_contains(tower, v, tower.n)
    assert u + v * gamma == target, "{} != {}".format(u + v * gamma, target)
    return HKParams(tower, gamma, s, u, v)


def with_uv(params: HKParams, u: Any, v: Any) -> HKParams:
    """Same gamma and s with arbitrary (u, v); no validation."""
    return HKParams(params.tower, params.gamma, params.s, params.tower.GF(u), params.tower.GF(v))


def to_pair(params: HKParams, z: Any) -> Pair:
    return _pair_coordinates(params.tower, params.gamma, z)


def from_pair(params: HKParams, c: Any, d: Any) -> galois.FieldArray:
    return params.tower.GF(c) + params.tower.GF(d) * params.gamma


def hk_mult(x: Pair, y: Pair, params: HKParams) -> Pair:
    """Pair product, elementwise on arrays."""
    tower = params.tower
    c, d = x
    a, b = y
    c_s = ft.frobenius(tower, c, params.s)
    d_s = ft.frobenius(tower, d, params.s)
    return a * c + b * d_s * params.u, a * d + b * c_s + b * d_s * params.v


def hk_mult_values(params: HKParams, X: Any, Y: Any) -> galois.FieldArray:
    """Product of field elements through their pair coordinates."""
    product = hk_mult(to_pair(params, X), to_pair(params, Y), params)
    return from_pair(params, *product)


def spread_set(params: HKParams) -> RankMetricCode:
    """{aX + gamma b X^(q^s) : a, b in F_q^n}, the spread set of the presemifield."""
    code = cd.make_D(params.tower, 1, params.s, params.gamma)
    code.family = cd.SPREAD_SET
    code.params.update({"u": params.u, "v": params.v})
    return code


class MultiplicationTable(object):
    """
    Binary operation on F_{q^N} given as a table of integer encodings.
    """

    def __init__(self, tower: FieldTower, table: np.ndarray, label: str) -> None:
        assert table.shape == (tower.order, tower.order), "{} != {}".format(
            table.shape, (tower.order, tower.order)
        )
        self.tower = tower
        self.table = table
        self.label = label


def _elements(tower: FieldTower) -> galois.FieldArray:
    return tower.GF(np.arange(tower.order))


def addition_table(tower: FieldTower) -> np.ndarray:
    E = _elements(tower)
    return ft.as_ints(E[:, None] + E[None, :])


def field_mult_table(tower: FieldTower) -> MultiplicationTable:
    E = _elements(tower)
    return MultiplicationTable(tower, ft.as_ints(E[:, None] * E[None, :]), "field")


def hk_mult_table(params: HKParams) -> MultiplicationTable:
    E = _elements(params.tower)
    table = ft.as_ints(hk_mult_values(params, E[:, None], E[None, :]))
    return MultiplicationTable(params.tower, table, "hughes-kleinfeld")


def is_biadditive(mult: MultiplicationTable) -> bool:
    """(x + y) * z = x * z + y * z and z * (x + y) = z * x + z * y for all x, y, z."""
    T = mult.table
    A = addition_table(mult.tower)
    for z in range(mult.tower.order):
        column = T[:, z]
        if not np.array_equal(column[A], A[column[:, None], column[None, :]]):
            return False
        row = T[z]
        if not np.array_equal(row[A], A[row[:, None], row[None, :]]):
            return False
    return True


def zero_divisors(mult: MultiplicationTable) -> List[Tuple[int, int]]:
    rows, cols = np.nonzero(mult.table[1:, 1:] == 0)
    return [(int(x) + 1, int(y) + 1) for x, y in zip(rows, cols)]


def is_presemifield(mult: MultiplicationTable) -> bool:
    return is_biadditive(mult) and not zero_divisors(mult)


def semifield_nuclei(mult: MultiplicationTable) -> Tuple[List[int], List[int], List[int]]:
    """Brute-force left, middle and right nuclei as sorted lists of element encodings.

    :param mult: Multiplication table
    :type mult: MultiplicationTable
    :return: (N_l, N_m, N_r)
    :rtype: tuple
    """
    if not is_biadditive(mult):
        raise NotBiadditive("{} multiplication is not biadditive".format(mult.label))
    divisors = zero_divisors(mult)
    if divisors:
        raise ZeroDivisorFound("{} * {} = 0".format(*divisors[0]))

    T = mult.table
    index = np.arange(mult.tower.order)
    left, middle, right = [], [], []
    for a in range(mult.tower.order):
        # a*(x*y) = (a*x)*y
        if np.array_equal(T[a][T], T[T[a][:, None], index[None, :]]):
            left.append(a)
        # x*(a*y) = (x*a)*y
        if np.array_equal(T[:, T[a]], T[T[:, a][:, None], index[None, :]]):
            middle.append(a)
        # x*(y*a) = (x*y)*a
        if np.array_equal(T[:, T[:, a]], T[:, a][T]):
            right.append(a)
    return left, middle, right


def hk_left_nucleus_condition(params: HKParams) -> List[int]:
    """Encodings of x + y gamma, x, y in F_q^n, solving the two-equation left-nucleus system."""
    tower = params.tower
    half = ft.subfield_elements(tower, tower.n)
    x = half[:, None]
    y = half[None, :]
    u, v, s = params.u, params.v, params.s

    def frob(z: galois.FieldArray, i: int) -> galois.FieldArray:
        return ft.frobenius(tower, z, i)

    first = frob(x, 2 * s) + frob(y, 2 * s) * frob(v, s) == x + frob(y, s) * v
    second = y * u + frob(x, s) * v + frob(y, s) * v**2 == (
        frob(y, 2 * s) * frob(u, s) + frob(x, 2 * s) * v + frob(y, 2 * s) * frob(v, s) * v
    )
    values = from_pair(params, x, y)
    return sorted(int(_) for _ in ft.as_ints(values)[np.asarray(first & second)])


def subfield_encodings(tower: FieldTower) -> List[int]:
    """Encodings of F_q^n, i.e. the pairs (a, 0)."""
    return sorted(int(_) for _ in ft.as_ints(ft.subfield_elements(tower, tower.n)))


def table_to_json(mult: MultiplicationTable) -> Dict[str, Any]:
    if mult.tower.order > TABLE_EXPORT_LIMIT:
        raise BudgetExceeded("table export limited to {} elements".format(TABLE_EXPORT_LIMIT))
    return {"label": mult.label, "order": mult.tower.order, "table": mult.table.tolist()}


def spread_set_consistency(params: HKParams) -> bool:
    """x * (a, b) equals the spread-set codeword aX + gamma b X^(q^s) evaluated at x."""
    tower = params.tower
    E = _elements(tower)
    half = ft.subfield_elements(tower, tower.n)
    a = half[:, None, None]
    b = half[None, :, None]
    x = E[None, None, :]
    product = from_pair(params, *hk_mult(to_pair(params, x), (a, b), params))
    evaluated = a * x + params.gamma * b * ft.frobenius(tower, x, params.s)
    return bool(np.all(product == evaluated))


def hk_report(params: HKParams) -> Dict[str, Any]:
    """Presemifield check, brute-force nuclei and the left-nucleus system, as one report."""
    mult = hk_mult_table(params)
    presemifield = is_presemifield(mult)
    left, middle, right = semifield_nuclei(mult)
    half = subfield_encodings(params.tower)
    condition = hk_left_nucleus_condition(params)
    return {
        "params": params.to_json(),
        "presemifield": presemifield,
        "spread_set_consistent": spread_set_consistency(params),
        "nuclei_sizes": {"left": len(left), "middle": len(middle), "right": len(right)},
        "middle_is_F_q^n": middle == half,
        "right_is_F_q^n": right == half,
        "left_matches_system": left == condition,
        "left": left,
    }
