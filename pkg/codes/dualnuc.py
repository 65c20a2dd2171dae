"""Delsarte duals, adjoint codes and middle/right nuclei of rank-metric codes."""
import functools
import math
from typing import Any, Dict, List, Optional

import galois
import numpy as np

from algebra import fieldtower as ft
from algebra import linalg
from algebra import linpoly as lp
from algebra.errors import OutOfRegime
from algebra.fieldtower import FieldTower
from codes import codes as cd
from codes.codes import RankMetricCode

MIDDLE = "middle"
RIGHT = "right"
SIDES = (MIDDLE, RIGHT)


class NucleusSpace(object):
    """
    F_q-space of linearized polynomials, stored as an F_p-basis of shape (dim_p, N).
    """

    def __init__(self, tower: FieldTower, side: str, basis: galois.FieldArray) -> None:
        self.tower: FieldTower = tower
        self.side: str = side
        self.basis: galois.FieldArray = tower.GF(basis).reshape(-1, tower.N)

    @property
    def dim_p(self) -> int:
        return int(self.basis.shape[0])

    @property
    def dim_fq(self) -> int:
        return self.dim_p // self.tower.e

    @property
    def size(self) -> int:
        return int(self.tower.p**self.dim_p)

    def coordinates(self) -> np.ndarray:
        return lp.poly_coordinates(self.tower, self.basis)

    def contains_arrays(self, F: galois.FieldArray) -> np.ndarray:
        coords = lp.poly_coordinates(self.tower, self.tower.GF(F).reshape(-1, self.tower.N))
        return linalg.in_row_space(self.coordinates(), coords, self.tower.p)

    def elements(self) -> galois.FieldArray:
        """Every element of the space, odometer order."""
        digits = linalg.odometer_digits(0, self.size, self.dim_p, self.tower.p)
        coords = (digits @ self.coordinates()) % self.tower.p
        return lp.polys_from_coordinates(self.tower, coords).reshape(-1, self.tower.N)

    def to_json(self) -> Dict[str, Any]:
        return {
            "side": self.side,
            "dim_Fq": self.dim_fq,
            "size": self.size,
            "basis": [lp.LinearizedPoly(self.tower, _).to_json() for _ in self.basis],
        }


@functools.lru_cache(maxsize=None)
def trace_gram(tower: FieldTower) -> np.ndarray:
    """T[u, v] = Tr_{F_(p^eN)/F_p}(omega^u omega^v)."""
    beta = ft.prime_basis(tower)
    traces = (beta[:, None] * beta[None, :]).field_trace()
    return np.asarray(traces.view(np.ndarray), dtype=np.int64)


def bilinear_form(F: galois.FieldArray, G: galois.FieldArray) -> Any:
    """b(f, g) = Tr(sum_i a_i b_i), as an F_p value."""
    return np.add.reduce(F * G, axis=-1).field_trace()


def delsarte_dual(code: RankMetricCode) -> RankMetricCode:
    """Orthogonal complement under b(f, g) = Tr(sum a_i b_i), re-tagged when it is D-shaped.

    :param code: F_q-linear code
    :type code: RankMetricCode
    :return: Dual code
    :rtype: RankMetricCode
    """
    tower = code.tower
    gram = np.kron(np.eye(tower.N, dtype=np.int64), trace_gram(tower))
    constraints = (code.coordinate_matrix @ gram) % tower.p
    basis = linalg.null_space_mod(constraints, tower.p)
    dual = cd.make_generic(tower, lp.polys_from_coordinates(tower, basis).reshape(-1, tower.N))
    assert code.dim_p + dual.dim_p == tower.N * tower.degree, "{} != {}".format(
        code.dim_p + dual.dim_p, tower.N * tower.degree
    )
    return retag(dual)


def adjoint_code(code: RankMetricCode) -> RankMetricCode:
    adjoints = lp.adjoint_arrays(code.tower, code.generators)
    return retag(cd.make_generic(code.tower, adjoints))


def substitute(code: RankMetricCode, m: int) -> RankMetricCode:
    """{f o X^(q^m) : f in C}, i.e. every exponent index shifted by m."""
    shifted = lp.shift_arrays(code.tower, code.generators, m)
    return retag(cd.make_generic(code.tower, shifted))


def _slot_ranks(code: RankMetricCode) -> np.ndarray:
    tower = code.tower
    coords = code.coordinate_matrix.reshape(code.dim_p, tower.N, tower.degree)
    return np.array([linalg.rank_mod(coords[:, i, :], tower.p) for i in range(tower.N)])


def _slot_multiplier(code: RankMetricCode, index: int) -> Optional[galois.FieldArray]:
    """lambda with slot projection = lambda * F_{q^n}, if the projection has that form."""
    tower = code.tower
    coords = code.coordinate_matrix.reshape(code.dim_p, tower.N, tower.degree)[:, index, :]
    values = ft.from_coordinates(tower, linalg.row_basis_mod(coords, tower.p))
    lam = values[0]
    if not np.all(ft.subfield_contains(tower, values / lam, tower.n)):
        return None
    return lam


def recognize_d_shape(code: RankMetricCode) -> Optional[Dict[str, Any]]:
    """Descriptor {k, s, lambda, mu} when C = {lambda a X + sum c_i X^(q^(is)) + mu b X^(q^(ks))}.

    Slot 0 and slot ks must be one-dimensional over F_{q^n} and the middle slots full.
    """
    tower = code.tower
    N = tower.N
    half = tower.e * tower.n
    ranks = _slot_ranks(code)
    if int(ranks.sum()) != code.dim_p:
        return None

    support = {i for i in range(N) if ranks[i] > 0}
    for s in (_ for _ in range(1, N) if math.gcd(_, N) == 1):
        for k in range(1, N):
            middle = {(i * s) % N for i in range(1, k)}
            end = (k * s) % N
            if support != middle | {0, end}:
                continue
            if ranks[0] != half or ranks[end] != half:
                continue
            if any(ranks[i] != tower.degree for i in middle):
                continue
            lam = _slot_multiplier(code, 0)
            mu = _slot_multiplier(code, end)
            if lam is None or mu is None:
                continue
            return {"k": k, "s": s, "lambda": lam, "mu": mu}
    return None


def retag(code: RankMetricCode) -> RankMetricCode:
    """Re-tag a Generic code as D_{k,s}(mu) when its shape and mu allow it."""
    shape = recognize_d_shape(code)
    if shape is None:
        return code

    tower = code.tower
    lam, mu = shape["lambda"], shape["mu"]
    if not ft.subfield_contains(tower, lam, tower.n) or not ft.is_valid_gamma(tower, mu):
        code.params.update({"d_shape": describe_shape(tower, shape)})
        return code

    gamma = ft.coset_representative(tower, mu, tower.n)
    tagged = cd.make_D(tower, shape["k"], shape["s"], gamma)
    assert cd.codes_equal(tagged, code), "{} != {}".format(cd.code_label(tagged), "retagged code")
    return tagged


def describe_shape(tower: FieldTower, shape: Dict[str, Any]) -> Dict[str, Any]:
    return {
        "k": shape["k"],
        "s": shape["s"],
        "lambda": ft.element_literal(tower, shape["lambda"]),
        "mu": ft.element_literal(tower, shape["mu"]),
    }


def _solve_nucleus(code: RankMetricCode, side: str, candidates: galois.FieldArray) -> np.ndarray:
    """Coordinates (w.r.t. candidates) of all phi in span(candidates) in the side's nucleus."""
    tower = code.tower
    F = code.generators
    if side == MIDDLE:
        compositions = lp.compose_arrays(tower, F[:, None, :], candidates[None, :, :])
    elif side == RIGHT:
        compositions = lp.compose_arrays(tower, candidates[None, :, :], F[:, None, :])
    else:
        raise OutOfRegime("Nucleus side {} is not computed for codes".format(side))

    coords = lp.poly_coordinates(tower, compositions)
    constraints = np.einsum("grl,kl->gkr", coords, code.parity_check) % tower.p
    return linalg.null_space_mod(constraints.reshape(-1, candidates.shape[0]), tower.p)


def nucleus(code: RankMetricCode, side: str) -> NucleusSpace:
    """{phi : f o phi in C for all f} (middle) or {phi : phi o f in C} (right)."""
    tower = code.tower
    candidates = lp.full_basis(tower)
    solutions = _solve_nucleus(code, side, candidates)
    basis = lp.polys_from_coordinates(tower, solutions).reshape(-1, tower.N)
    return NucleusSpace(tower, side, basis)


def middle_nucleus(code: RankMetricCode) -> NucleusSpace:
    return nucleus(code, MIDDLE)


def right_nucleus(code: RankMetricCode) -> NucleusSpace:
    return nucleus(code, RIGHT)


def scalar_nucleus(code: RankMetricCode, side: str) -> NucleusSpace:
    """The scalar maps aX inside the nucleus; a subfield of F_{q^N}."""
    tower = code.tower
    candidates = lp.monomial_basis(tower, 0)
    solutions = _solve_nucleus(code, side, candidates)
    if solutions.shape[0] == 0:
        return NucleusSpace(tower, side, tower.zeros((0, tower.N)))
    basis = tower.zeros((solutions.shape[0], tower.N))
    basis[:, 0] = ft.from_coordinates(tower, solutions)
    return NucleusSpace(tower, side, basis)


def nucleus_sizes(code: RankMetricCode) -> Dict[str, int]:
    return {side: nucleus(code, side).size for side in SIDES}


def spaces_equal(S1: NucleusSpace, S2: NucleusSpace) -> bool:
    if S1.dim_p != S2.dim_p:
        return False
    return bool(np.all(S2.contains_arrays(S1.basis)))


def adjoint_space(space: NucleusSpace) -> NucleusSpace:
    return NucleusSpace(space.tower, space.side, lp.adjoint_arrays(space.tower, space.basis))


def is_field(space: NucleusSpace) -> bool:
    """Closed under composition and every nonzero element invertible."""
    tower = space.tower
    products = lp.compose_arrays(tower, space.basis[:, None, :], space.basis[None, :, :])
    if not np.all(space.contains_arrays(products.reshape(-1, tower.N))):
        return False

    ranks = lp.ranks_arrays(tower, space.elements()[1:])
    return bool(np.all(ranks == tower.degree))


def duality_identities(code: RankMetricCode) -> Dict[str, bool]:
    """N_m(adj C) = adj N_r(C) = N_r(dual C) and N_m(dual C) = adj N_m(C) = N_r(adj C)."""
    adjoint = adjoint_code(code)
    dual = delsarte_dual(code)
    spaces = {
        "Nm(adj)": middle_nucleus(adjoint),
        "adj Nr": adjoint_space(right_nucleus(code)),
        "Nr(dual)": right_nucleus(dual),
        "Nm(dual)": middle_nucleus(dual),
        "adj Nm": adjoint_space(middle_nucleus(code)),
        "Nr(adj)": right_nucleus(adjoint),
    }
    return {
        "Nm(adj) = adj Nr": spaces_equal(spaces["Nm(adj)"], spaces["adj Nr"]),
        "adj Nr = Nr(dual)": spaces_equal(spaces["adj Nr"], spaces["Nr(dual)"]),
        "Nm(dual) = adj Nm": spaces_equal(spaces["Nm(dual)"], spaces["adj Nm"]),
        "adj Nm = Nr(adj)": spaces_equal(spaces["adj Nm"], spaces["Nr(adj)"]),
    }


def nucleus_table(code: RankMetricCode) -> List[Dict[str, Any]]:
    rows = []
    for side in SIDES:
        space = nucleus(code, side)
        rows.append(
            {
                "code": cd.code_label(code),
                "side": side,
                "dim_Fq": space.dim_fq,
                "size": space.size,
                "field": is_field(space),
            }
        )
    return rows
