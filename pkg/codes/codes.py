"""Rank-metric codes as F_q-subspaces of linearized polynomials.

Families: Gabidulin G_{k,s}, twisted Gabidulin H_{k,s}(eta, h), D_{k,s}(gamma), the
Hughes-Kleinfeld spread set and Generic codes given by a basis. Generators are kept as an
F_p-basis, so dim over F_q is the number of generators divided by e.
"""
import concurrent.futures
import math
import os
import time
from typing import Any, Dict, List, Optional, Sequence, Tuple

import galois
import numpy as np

from algebra import fieldtower as ft
from algebra import linalg
from algebra import linpoly as lp
from algebra.errors import BadEta, BadK, BadStep, BudgetExceeded, TowerMismatch
from algebra.fieldtower import FieldTower
from algebra.linpoly import LinearizedPoly

GABIDULIN = "Gabidulin"
TWISTED = "Twisted"
D_FAMILY = "DFamily"
SPREAD_SET = "SpreadSet"
GENERIC = "Generic"

DEFAULT_BUDGET = 2**22
CHUNK_SIZE = 2**14


def enumeration_budget(budget: Optional[int] = None) -> int:
    """Explicit budget, else RANKMETRIC_BUDGET, else 2^22 codewords."""
    if budget is not None:
        return int(budget)
    return int(os.environ.get("RANKMETRIC_BUDGET", DEFAULT_BUDGET))


class RankMetricCode(object):
    """
    F_q-linear rank-metric code in F_{q^N}[X] / (X^(q^N) - X).

    Attributes:
        - tower: The field tower
        - family: Family tag
        - params: Family parameters (k, s, gamma, eta, h, ...)
        - generators: F_p-basis, coefficient array of shape (dim_p, N)
    """

    def __init__(
        self, tower: FieldTower, family: str, params: Dict[str, Any], generators: galois.FieldArray
    ) -> None:
        self.tower: FieldTower = tower
        self.family: str = family
        self.params: Dict[str, Any] = dict(params)
        generators = tower.GF(generators).reshape(-1, tower.N)
        generators.flags.writeable = False
        self.generators: galois.FieldArray = generators
        self._coordinates: Optional[np.ndarray] = None
        self._parity: Optional[np.ndarray] = None

    def __str__(self) -> str:
        return code_label(self)

    @property
    def dim_p(self) -> int:
        return int(self.generators.shape[0])

    @property
    def dim_fq(self) -> int:
        return self.dim_p // self.tower.e

    @property
    def size(self) -> int:
        return int(self.tower.p**self.dim_p)

    @property
    def coordinate_matrix(self) -> np.ndarray:
        """F_p coordinates of the generators, one row each."""
        if self._coordinates is None:
            self._coordinates = lp.poly_coordinates(self.tower, self.generators)
        return self._coordinates

    @property
    def parity_check(self) -> np.ndarray:
        """Rows h with h . v = 0 exactly for coordinate vectors v of codewords."""
        if self._parity is None:
            self._parity = linalg.null_space_mod(self.coordinate_matrix, self.tower.p)
        return self._parity

    def generator_polys(self) -> List[LinearizedPoly]:
        return [LinearizedPoly(self.tower, _) for _ in self.generators]


def code_label(code: RankMetricCode) -> str:
    params = code.params
    tower = code.tower
    if code.family == GABIDULIN:
        return "G:{}:{}".format(params["k"], params["s"])
    if code.family == TWISTED:
        return "H:{}:{}:{}:{}".format(
            params["k"], params["s"], ft.element_literal(tower, params["eta"]), params["h"]
        )
    if code.family in (D_FAMILY, SPREAD_SET):
        return "D:{}:{}:{}".format(
            params["k"], params["s"], ft.element_literal(tower, params["gamma"])
        )
    return "Generic:{}".format(code.dim_fq)


def _check_step(tower: FieldTower, s: int) -> None:
    if math.gcd(s, tower.N) != 1:
        raise BadStep("gcd({}, {}) != 1".format(s, tower.N))


def _from_rows(tower: FieldTower, rows: Sequence[galois.FieldArray]) -> galois.FieldArray:
    blocks = [ft.as_ints(_).reshape(-1, tower.N) for _ in rows]
    if not blocks:
        return tower.zeros((0, tower.N))
    return tower.GF(np.concatenate(blocks))


def make_gabidulin(tower: FieldTower, k: int, s: int) -> RankMetricCode:
    """G_{k,s} = {sum_{i<k} a_i X^(q^(si))}."""
    _check_step(tower, s)
    if not 1 <= k <= tower.N:
        raise BadK("k = {} outside 1..{}".format(k, tower.N))

    rows = [lp.monomial_basis(tower, i * s) for i in range(k)]
    return RankMetricCode(tower, GABIDULIN, {"k": k, "s": s}, _from_rows(tower, rows))


def make_twisted(tower: FieldTower, k: int, s: int, eta: Any, h: int) -> RankMetricCode:
    """H_{k,s}(eta, h): Gabidulin shape plus eta * a_0^(q^h) X^(q^(sk)).

    :param tower: Tower
    :type tower: FieldTower
    :param k: Dimension over F_{q^N}, 1..N-1
    :type k: int
    :param s: Step coprime to N
    :type s: int
    :param eta: Twist coefficient, N(eta) != (-1)^(kN) unless eta = 0
    :type eta: galois.FieldArray
    :param h: Frobenius exponent of the twist, 0..N-1
    :type h: int
    :return: Code
    :rtype: RankMetricCode
    """
    _check_step(tower, s)
    if not 1 <= k <= tower.N - 1:
        raise BadK("k = {} outside 1..{}".format(k, tower.N - 1))
    if not 0 <= h < tower.N:
        raise BadEta("h = {} outside 0..{}".format(h, tower.N - 1))
    eta = tower.GF(eta)
    sign = tower.GF(1) if (k * tower.N) % 2 == 0 else -tower.GF(1)
    if eta != 0 and ft.norm(tower, eta) == sign:
        raise BadEta("N({}) = (-1)^(kN)".format(ft.element_literal(tower, eta)))

    beta = ft.prime_basis(tower)
    first = tower.zeros((tower.degree, tower.N))
    first[:, 0] = beta
    first[:, (k * s) % tower.N] = eta * ft.frobenius(tower, beta, h)
    rows = [first] + [lp.monomial_basis(tower, i * s) for i in range(1, k)]
    params = {"k": k, "s": s, "eta": eta, "h": h}
    return RankMetricCode(tower, TWISTED, params, _from_rows(tower, rows))


def _d_generators(tower: FieldTower, k: int, s: int, gamma: galois.FieldArray) -> galois.FieldArray:
    # a-slot, then c_1 .. c_(k-1), then b-slot
    half = ft.subfield_basis(tower, tower.n)
    a_slot = tower.zeros((half.size, tower.N))
    a_slot[:, 0] = half
    b_slot = tower.zeros((half.size, tower.N))
    b_slot[:, (k * s) % tower.N] = gamma * half
    rows = [a_slot] + [lp.monomial_basis(tower, i * s) for i in range(1, k)] + [b_slot]
    return _from_rows(tower, rows)


def make_D(tower: FieldTower, k: int, s: int, gamma: Any) -> RankMetricCode:
    """D_{k,s}(gamma) = {aX + sum c_i X^(q^(is)) + gamma b X^(q^(ks)) : a, b in F_{q^n}}.

    :param tower: Tower
    :type tower: FieldTower
    :param k: 1..N-1
    :type k: int
    :param s: Step coprime to N
    :type s: int
    :param gamma: Element whose norm is a non-square in F_q
    :type gamma: galois.FieldArray
    :return: Code with q^(Nk) codewords
    :rtype: RankMetricCode
    """
    _check_step(tower, s)
    if k == tower.N:
        raise BadK("k = 2n gives the full space")
    if not 1 <= k <= tower.N - 1:
        raise BadK("k = {} outside 1..{}".format(k, tower.N - 1))
    gamma = tower.GF(gamma)
    ft.check_gamma(tower, gamma)

    generators = _d_generators(tower, k, s, gamma)
    code = RankMetricCode(tower, D_FAMILY, {"k": k, "s": s, "gamma": gamma}, generators)
    assert code.dim_fq == tower.N * k, "{} != {}".format(code.dim_fq, tower.N * k)
    return code


def make_generic(
    tower: FieldTower, generators: Any, params: Optional[Dict[str, Any]] = None
) -> RankMetricCode:
    """Span of the given polynomials, stored as a row-reduced F_p-basis."""
    if isinstance(generators, (list, tuple)):
        for g in generators:
            if isinstance(g, LinearizedPoly) and g.tower != tower:
                raise TowerMismatch("Generator over a different tower")
        generators = [g.coefficients if isinstance(g, LinearizedPoly) else g for g in generators]
    rows = _from_rows(tower, [tower.GF(_) for _ in generators])
    basis = linalg.row_basis_mod(lp.poly_coordinates(tower, rows), tower.p)
    if basis.shape[0] == 0:
        return RankMetricCode(tower, GENERIC, params or {}, tower.zeros((0, tower.N)))
    return RankMetricCode(
        tower, GENERIC, params or {}, lp.polys_from_coordinates(tower, basis).reshape(-1, tower.N)
    )


def random_generic_code(tower: FieldTower, dim_fq: int, rng: np.random.Generator) -> RankMetricCode:
    """F_q-span of dim_fq random polynomials."""
    F = lp.random_polys(tower, dim_fq, rng)
    scalars = ft.subfield_basis(tower, 1)
    rows = (scalars[:, None, None] * F[None, :, :]).reshape(-1, tower.N)
    return make_generic(tower, rows)


def _in_subfield(tower: FieldTower, x: galois.FieldArray, m: int) -> np.ndarray:
    return np.asarray(x ** (tower.q**m) == x)


def contains_arrays(code: RankMetricCode, F: galois.FieldArray) -> np.ndarray:
    """Membership of a stack of polynomials (..., N) in the code."""
    tower = code.tower
    N = tower.N
    F = tower.GF(F)
    params = code.params
    if code.family == GENERIC:
        coords = lp.poly_coordinates(tower, F)
        return np.all((coords @ code.parity_check.T) % tower.p == 0, axis=-1)

    k, s = params["k"], params["s"]
    last = (k * s) % N
    allowed = {(i * s) % N for i in range(k)}
    if code.family != GABIDULIN:
        allowed.add(last)
    outside = [_ for _ in range(N) if _ not in allowed]
    result = np.all(ft.as_ints(F[..., outside]) == 0, axis=-1)
    if code.family == GABIDULIN:
        return result

    if code.family == TWISTED:
        a_0 = F[..., 0]
        expected = params["eta"] * ft.frobenius(tower, a_0, params["h"])
        return result & np.asarray(F[..., last] == expected)

    # D family and spread sets
    gamma = params["gamma"]
    return (
        result
        & _in_subfield(tower, F[..., 0], tower.n)
        & _in_subfield(tower, F[..., last] / gamma, tower.n)
    )


def contains(code: RankMetricCode, f: LinearizedPoly) -> bool:
    if f.tower != code.tower:
        raise TowerMismatch("{} is not over {}".format(f, code.tower))
    return bool(contains_arrays(code, f.coefficients[None, :])[0])


def contains_by_span(code: RankMetricCode, F: galois.FieldArray) -> np.ndarray:
    """Membership through the linear span system, for every family."""
    coords = lp.poly_coordinates(code.tower, code.tower.GF(F).reshape(-1, code.tower.N))
    return linalg.in_row_space(code.coordinate_matrix, coords, code.tower.p)


def codes_equal(C1: RankMetricCode, C2: RankMetricCode) -> bool:
    if C1.tower != C2.tower:
        raise TowerMismatch("Codes over different towers")
    if C1.dim_p != C2.dim_p:
        return False
    return bool(np.all(contains_arrays(C2, C1.generators)))


def random_codewords(code: RankMetricCode, count: int, rng: np.random.Generator) -> galois.FieldArray:
    digits = rng.integers(0, code.tower.p, size=(count, code.dim_p))
    return _codewords_from_digits(code, digits)


def _codewords_from_digits(code: RankMetricCode, digits: np.ndarray) -> galois.FieldArray:
    coords = (digits @ code.coordinate_matrix) % code.tower.p
    return lp.polys_from_coordinates(code.tower, coords).reshape(-1, code.tower.N)


def _norm_slots(code: RankMetricCode) -> Optional[Tuple[int, int, int]]:
    """(a-slot stop, b-slot start, rank for q^k roots) for the norm-argument check."""
    if code.family not in (D_FAMILY, SPREAD_SET):
        return None
    tower = code.tower
    half = tower.e * tower.n
    return half, code.dim_p - half, tower.e * (tower.N - code.params["k"])


def _min_rank_range(
    generator_matrices: np.ndarray,
    p: int,
    degree: int,
    start: int,
    stop: int,
    norm_slots: Optional[Tuple[int, int, int]],
) -> Tuple[int, int, int, np.ndarray]:
    """Worker: (min F_p rank, first index reaching it, norm violations, rank histogram)."""
    width = generator_matrices.shape[0]
    best, best_index, violations = degree + 1, -1, 0
    histogram = np.zeros(degree + 1, dtype=np.int64)
    for lo, hi in linalg.chunk_ranges(stop - start, CHUNK_SIZE):
        digits = linalg.odometer_digits(start + lo, start + hi, width, p)
        mats = ((digits @ generator_matrices) % p).reshape(-1, degree, degree)
        ranks = linalg.batch_rank(mats, p)
        histogram += np.bincount(ranks, minlength=degree + 1)
        nonzero = np.any(digits != 0, axis=1)
        if np.any(nonzero):
            masked = np.where(nonzero, ranks, degree + 1)
            position = int(np.argmin(masked))
            if masked[position] < best:
                best, best_index = int(masked[position]), start + lo + position
        if norm_slots is not None:
            a_stop, b_start, target = norm_slots
            both = np.any(digits[:, :a_stop] != 0, axis=1) & np.any(digits[:, b_start:] != 0, axis=1)
            violations += int(np.count_nonzero(both & (ranks == target)))
    return best, best_index, violations, histogram


def enumerate_ranks(
    code: RankMetricCode, budget: Optional[int] = None, jobs: int = 1
) -> Dict[str, Any]:
    """Exhaustive pass over all codewords in odometer order.

    :param code: Code
    :type code: RankMetricCode
    :param budget: Maximum number of codewords
    :type budget: int
    :param jobs: Worker processes; ranges are merged in order so the first witness wins
    :type jobs: int
    :return: min_distance, witness, codewords, rank_distribution, norm_argument_violations
    :rtype: dict
    """
    tower = code.tower
    total = code.size
    cap = enumeration_budget(budget)
    if total > cap:
        raise BudgetExceeded("{} codewords > budget {}".format(total, cap))

    start_time = time.time()
    matrices = lp.prime_matrices(tower, code.generators).reshape(code.dim_p, tower.degree**2)
    slots = _norm_slots(code)
    args = (matrices, tower.p, tower.degree)
    if jobs > 1 and total > CHUNK_SIZE:
        step = -(-total // jobs)
        ranges = list(linalg.chunk_ranges(total, step))
        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as executor:
            futures = [executor.submit(_min_rank_range, *args, a, b, slots) for a, b in ranges]
            results = [_.result() for _ in futures]
    else:
        results = [_min_rank_range(*args, 0, total, slots)]

    best, best_index, violations = tower.degree + 1, -1, 0
    histogram = np.zeros(tower.degree + 1, dtype=np.int64)
    for rank, index, count, part in results:
        if rank < best:
            best, best_index = rank, index
        violations += count
        histogram += part

    distribution = {r // tower.e: int(histogram[r]) for r in range(0, tower.degree + 1, tower.e)}
    witness = None
    min_distance = 0
    if best_index >= 0:
        digits = linalg.odometer_digits(best_index, best_index + 1, code.dim_p, tower.p)
        witness = LinearizedPoly(tower, _codewords_from_digits(code, digits)[0])
        min_distance = best // tower.e

    print(
        "Mindist:{} codewords:{} d:{} t:{:.3f}".format(
            code_label(code), total, min_distance, time.time() - start_time
        )
    )
    return {
        "min_distance": min_distance,
        "witness": witness,
        "codewords": total,
        "rank_distribution": distribution,
        "norm_argument_violations": violations if slots is not None else None,
    }


def min_distance(code: RankMetricCode, budget: Optional[int] = None, jobs: int = 1) -> int:
    """Minimum rank over nonzero codewords; 0 for the zero code."""
    return int(enumerate_ranks(code, budget, jobs)["min_distance"])


def sampled_min_distance(
    code: RankMetricCode, samples: int, rng: np.random.Generator
) -> Dict[str, Any]:
    """Upper bound on the distance from random nonzero codewords."""
    tower = code.tower
    digits = rng.integers(0, tower.p, size=(samples, code.dim_p))
    digits = digits[np.any(digits != 0, axis=1)]
    F = _codewords_from_digits(code, digits)
    ranks = lp.ranks_arrays(tower, F) // tower.e
    counts = np.bincount(ranks, minlength=tower.N + 1)
    return {
        "upper_bound": int(ranks.min()) if ranks.size else tower.N,
        "samples": int(digits.shape[0]),
        "rank_counts": {int(r): int(counts[r]) for r in range(tower.N + 1) if counts[r]},
    }


def is_mrd_for(code: RankMetricCode, d: int) -> bool:
    """Singleton-like bound |C| = q^(N(N-d+1)) for square N x N codes."""
    return d > 0 and code.dim_fq == code.tower.N * (code.tower.N - d + 1)


def is_mrd(code: RankMetricCode, budget: Optional[int] = None, jobs: int = 1) -> bool:
    return is_mrd_for(code, min_distance(code, budget, jobs))


def rank_distribution(code: RankMetricCode, budget: Optional[int] = None) -> Dict[int, int]:
    """Number of codewords of each F_q-rank, zero codeword included."""
    return dict(enumerate_ranks(code, budget)["rank_distribution"])


def certificate(
    code: RankMetricCode, budget: Optional[int] = None, jobs: int = 1, oracle: bool = False
) -> Dict[str, Any]:
    result = enumerate_ranks(code, budget, jobs)
    d = result["min_distance"]
    witness = result["witness"]
    if oracle and witness is not None:
        roots = lp.lp_root_count_exhaustive(witness)
        expected = code.tower.q ** (code.tower.N - d)
        assert roots == expected, "{} != {}".format(roots, expected)

    report = {
        "dim_Fq": code.dim_fq,
        "min_distance": d,
        "is_mrd": is_mrd_for(code, d),
        "witness_min_rank_codeword": witness.to_json() if witness is not None else None,
        "codewords": result["codewords"],
        "rank_distribution": {str(r): c for r, c in result["rank_distribution"].items()},
    }
    if result["norm_argument_violations"] is not None:
        assert result["norm_argument_violations"] == 0, "{} != 0".format(
            result["norm_argument_violations"]
        )
        report["norm_argument_violations"] = result["norm_argument_violations"]
    return report


def params_to_json(params: Dict[str, Any]) -> Dict[str, Any]:
    return {
        key: ft.to_int(value) if isinstance(value, galois.FieldArray) else value
        for key, value in params.items()
    }


def code_to_json(code: RankMetricCode) -> Dict[str, Any]:
    data = {
        "family": code.family,
        "params": params_to_json(code.params),
        "tower": ft.tower_to_json(code.tower),
        "dim_Fq": code.dim_fq,
    }
    if code.family == GENERIC:
        data["generators"] = [lp.LinearizedPoly(code.tower, _).to_json() for _ in code.generators]
    return data


def code_from_json(data: Dict[str, Any]) -> RankMetricCode:
    tower = ft.tower_from_json(data["tower"])
    params = data["params"]
    family = data["family"]
    if family == GABIDULIN:
        return make_gabidulin(tower, params["k"], params["s"])
    if family == TWISTED:
        return make_twisted(tower, params["k"], params["s"], params["eta"], params["h"])
    if family in (D_FAMILY, SPREAD_SET):
        code = make_D(tower, params["k"], params["s"], params["gamma"])
        code.family = family
        code.params.update({k: v for k, v in params.items() if k not in code.params})
        return code
    return make_generic(tower, tower.GF(data["generators"]), params)
