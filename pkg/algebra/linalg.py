"""Linear algebra over the prime field F_p.

Single matrices go through ``galois``; stacks of small matrices (codeword enumeration, candidate
constraint systems) are reduced all at once with a vectorized Gaussian elimination on integer
arrays.
"""
import functools
from typing import Iterator, Optional, Tuple

import galois
import numpy as np


def mod_p(A: np.ndarray, p: int) -> np.ndarray:
    return np.asarray(A, dtype=np.int64) % p


@functools.lru_cache(maxsize=None)
def inverse_table(p: int) -> np.ndarray:
    """inverse_table(p)[a] = a^-1 mod p, with 0 -> 0."""
    table = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        table[a] = pow(a, p - 2, p)
    return table


def batch_rank(A: np.ndarray, p: int) -> np.ndarray:
    """Ranks over F_p of a stack of matrices.

    :param A: Integer array of shape (batch, rows, cols)
    :type A: np.ndarray
    :param p: Prime
    :type p: int
    :return: Ranks, shape (batch,)
    :rtype: np.ndarray
    """
    A = mod_p(np.array(A, copy=True), p)
    batch, rows, cols = A.shape
    rank = np.zeros(batch, dtype=np.int64)
    if batch == 0 or rows == 0:
        return rank

    inverses = inverse_table(p)
    row_ids = np.arange(rows)
    for col in range(cols):
        candidates = (A[:, :, col] != 0) & (row_ids[None, :] >= rank[:, None])
        has_pivot = candidates.any(axis=1)
        if not has_pivot.any():
            continue

        idx = np.nonzero(has_pivot)[0]
        pivot_rows = candidates[idx].argmax(axis=1)
        target = rank[idx]
        pivot = A[idx, pivot_rows].copy()
        A[idx, pivot_rows] = A[idx, target]
        pivot = pivot * inverses[pivot[:, col]][:, None] % p
        A[idx, target] = pivot
        factors = A[idx, :, col].copy()
        factors[np.arange(idx.size), target] = 0
        A[idx] = (A[idx] - factors[:, :, None] * pivot[:, None, :]) % p
        rank[idx] += 1
        if np.all(rank >= rows):
            break

    return rank


def rank_mod(A: np.ndarray, p: int) -> int:
    A = mod_p(A, p)
    if A.size == 0:
        return 0
    return int(np.linalg.matrix_rank(galois.GF(p)(A)))


def null_space_mod(A: np.ndarray, p: int) -> np.ndarray:
    """Basis (rows) of {x : A x = 0} over F_p."""
    A = mod_p(A, p)
    cols = A.shape[1]
    if A.shape[0] == 0:
        return np.eye(cols, dtype=np.int64)

    basis = galois.GF(p)(A).null_space()
    return np.asarray(basis.view(np.ndarray), dtype=np.int64).reshape(-1, cols)


def row_basis_mod(A: np.ndarray, p: int) -> np.ndarray:
    """Nonzero rows of the reduced row echelon form of A."""
    A = mod_p(A, p)
    if A.shape[0] == 0:
        return A.reshape(0, A.shape[1])

    reduced = np.asarray(galois.GF(p)(A).row_reduce().view(np.ndarray), dtype=np.int64)
    return reduced[np.any(reduced != 0, axis=1)]


def solve_mod(A: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Unique solution of A x = b for square invertible A."""
    GFp = galois.GF(p)
    x = np.linalg.solve(GFp(mod_p(A, p)), GFp(mod_p(b, p)))
    return np.asarray(x.view(np.ndarray), dtype=np.int64)


def solve_consistent(A: np.ndarray, b: np.ndarray, p: int) -> Optional[np.ndarray]:
    """One solution of A x = b over F_p (free variables set to 0), or None if inconsistent."""
    A = mod_p(A, p)
    cols = A.shape[1]
    augmented = np.concatenate([A, mod_p(b, p).reshape(-1, 1)], axis=1)
    reduced = np.asarray(galois.GF(p)(augmented).row_reduce().view(np.ndarray), dtype=np.int64)
    x = np.zeros(cols, dtype=np.int64)
    for row in reduced:
        nonzero = np.nonzero(row)[0]
        if nonzero.size == 0:
            continue
        if nonzero[0] == cols:
            return None
        x[nonzero[0]] = row[cols]
    return x


def in_row_space(basis: np.ndarray, vectors: np.ndarray, p: int) -> np.ndarray:
    """Row-wise membership of vectors in the span of basis."""
    vectors = np.atleast_2d(mod_p(vectors, p))
    base = rank_mod(basis, p) if basis.size else 0
    if vectors.shape[0] == 0:
        return np.zeros(0, dtype=bool)

    stacked = np.concatenate(
        [np.broadcast_to(basis, (vectors.shape[0],) + basis.shape), vectors[:, None, :]], axis=1
    )
    return batch_rank(stacked, p) == base


def odometer_digits(start: int, stop: int, width: int, p: int) -> np.ndarray:
    """Base-p digits of start..stop-1, most significant digit first."""
    index = np.arange(start, stop, dtype=np.int64)
    powers = p ** np.arange(width - 1, -1, -1, dtype=np.int64)
    return (index[:, None] // powers[None, :]) % p


def chunk_ranges(total: int, chunk: int) -> Iterator[Tuple[int, int]]:
    for start in range(0, total, chunk):
        yield start, min(start + chunk, total)
