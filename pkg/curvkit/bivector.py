"""
The bivector space Λ²V in the lexicographic basis {e_i∧e_j : i < j}.

Coordinates of a bivector ω are the upper-triangle entries of the
antisymmetric matrix W with ω = Σ_{i<j} W_ij e_i∧e_j. The matching
metric-skew endomorphism is W·G, so u∧v corresponds to the operator
w ↦ ⟨v,w⟩u − ⟨u,w⟩v.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Dict, List, Tuple

from sympy import ImmutableMatrix, Matrix, Rational, eye, zeros

from .errors import NotSkew
from .space import MetricSpace, is_metric_skew


@lru_cache(maxsize=None)
def pairs(n: int) -> Tuple[Tuple[int, int], ...]:
    return tuple((i, j) for i in range(n) for j in range(i + 1, n))


@lru_cache(maxsize=None)
def pair_index(n: int) -> Dict[Tuple[int, int], int]:
    return {pair: k for k, pair in enumerate(pairs(n))}


def bivector_dim(n: int) -> int:
    return n * (n - 1) // 2


def wedge_coords(u, v) -> ImmutableMatrix:
    """Lexicographic coordinates of u∧v."""
    idx = pairs(len(u))
    return ImmutableMatrix(len(idx), 1, [u[i] * v[j] - u[j] * v[i] for i, j in idx])


def basis_bivector(n: int, k: int) -> ImmutableMatrix:
    return ImmutableMatrix(eye(bivector_dim(n))[:, k])


def induced_gram(s: MetricSpace) -> ImmutableMatrix:
    """
    BivMetric: ⟨e_i∧e_j, e_k∧e_l⟩ = G_jk·G_il − G_ik·G_jl.

    Equivalently ⟨u∧v, w∧t⟩ = ⟨(u∧v)w, t⟩. On Euclidean space this is −Id.
    """
    return _induced_gram(s.G)


@lru_cache(maxsize=256)
def _induced_gram(G: ImmutableMatrix) -> ImmutableMatrix:
    idx = pairs(G.rows)
    N = len(idx)
    M = zeros(N, N)
    for a, (i, j) in enumerate(idx):
        for b, (k, l) in enumerate(idx):
            M[a, b] = G[j, k] * G[i, l] - G[i, k] * G[j, l]
    return ImmutableMatrix(M)


def bivector_inner(s: MetricSpace, alpha, beta) -> Rational:
    return (Matrix(alpha).T * induced_gram(s) * Matrix(beta))[0, 0]


def _antisymmetric(n: int, coords) -> Matrix:
    W = zeros(n, n)
    for k, (i, j) in enumerate(pairs(n)):
        W[i, j] = coords[k]
        W[j, i] = -coords[k]
    return W


def skew_of_bivector(s: MetricSpace, omega) -> ImmutableMatrix:
    return ImmutableMatrix(_antisymmetric(s.n, omega) * s.G)


def bivector_of_skew(s: MetricSpace, A) -> ImmutableMatrix:
    """
    Inverse of skew_of_bivector.

    Raises:
        NotSkew: A is not skew with respect to the metric
    """
    if not is_metric_skew(s, A):
        raise NotSkew("endomorphism is not metric-skew")
    W = Matrix(A) * s.G.inv()
    idx = pairs(s.n)
    return ImmutableMatrix(len(idx), 1, [W[i, j] for i, j in idx])


def vee_operator(s: MetricSpace, alpha, beta) -> ImmutableMatrix:
    """α∨β on Λ²V: ω ↦ ½(⟨β,ω⟩α + ⟨α,ω⟩β)."""
    alpha, beta = Matrix(alpha), Matrix(beta)
    return ImmutableMatrix((alpha * beta.T + beta * alpha.T) * induced_gram(s) / 2)


def _columns_to_matrix(columns: List, N: int) -> ImmutableMatrix:
    if not columns:
        return ImmutableMatrix(zeros(N, N))
    return ImmutableMatrix(Matrix.hstack(*columns))


def induced_derivation(s: MetricSpace, A) -> ImmutableMatrix:
    """Â on Λ²V: a∧b ↦ Aa∧b + a∧Ab. Corresponds to ω ↦ [A, ω] under the skew identification."""
    A = Matrix(A)
    E = eye(s.n)
    cols = [
        Matrix(wedge_coords(A[:, i], E[:, j])) + Matrix(wedge_coords(E[:, i], A[:, j]))
        for i, j in pairs(s.n)
    ]
    return _columns_to_matrix(cols, bivector_dim(s.n))


def induced_group_action(Q) -> ImmutableMatrix:
    """Λ²Q: a∧b ↦ Qa∧Qb."""
    Q = Matrix(Q)
    n = Q.rows
    cols = [Matrix(wedge_coords(Q[:, i], Q[:, j])) for i, j in pairs(n)]
    return _columns_to_matrix(cols, bivector_dim(n))


__all__ = [
    "basis_bivector",
    "bivector_dim",
    "bivector_inner",
    "bivector_of_skew",
    "induced_derivation",
    "induced_gram",
    "induced_group_action",
    "pair_index",
    "pairs",
    "skew_of_bivector",
    "vee_operator",
    "wedge_coords",
]
