"""
Pseudo-Riemannian vector spaces.

A space is an exact symmetric nondegenerate Gram matrix G in the standard
basis. Vectors are n×1 Rational columns, endomorphisms n×n Rational
matrices acting on columns.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Tuple

from sympy import ImmutableMatrix, Matrix, Rational, eye, zeros

from .errors import DegenerateMetric, NotIsometry, NotSkew, NotSymmetric
from .exactnum import congruence_diagonal, inertia, is_zero, restricted_gram


@dataclass(frozen=True)
class MetricSpace:
    """(V, ⟨·,·⟩) with its exact Sylvester signature."""
    G: ImmutableMatrix
    signature: Tuple[int, int]
    n: int = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "n", self.G.rows)

    @property
    def is_lorentzian(self) -> bool:
        return min(self.signature) == 1

    @property
    def is_definite(self) -> bool:
        return min(self.signature) == 0


def make_space(G) -> MetricSpace:
    """
    Validate a Gram matrix and compute its signature.

    Args:
        G: Square symmetric matrix with Rational (or integer) entries

    Returns:
        MetricSpace with signature (p, q)
    """
    M = ImmutableMatrix(Matrix(G).applyfunc(Rational))
    if M.rows != M.cols:
        raise NotSymmetric(f"Gram matrix is {M.rows}x{M.cols}, not square")
    if M != M.T:
        i, j = next((i, j) for i in range(M.rows) for j in range(M.cols) if M[i, j] != M[j, i])
        raise NotSymmetric(f"Gram entry ({i},{j}) = {M[i, j]} but ({j},{i}) = {M[j, i]}")
    if M.rows == 0:
        raise DegenerateMetric("zero-dimensional space")
    if M.det() == 0:
        raise DegenerateMetric("Gram matrix has zero determinant")
    p, q, _ = inertia(M)
    return MetricSpace(G=M, signature=(p, q))


def inner(s: MetricSpace, u, v) -> Rational:
    return (Matrix(u).T * s.G * Matrix(v))[0, 0]


def basis_vector(s: MetricSpace, i: int) -> ImmutableMatrix:
    return ImmutableMatrix(eye(s.n)[:, i])


def wedge_endo(s: MetricSpace, u, v) -> ImmutableMatrix:
    """(u∧v)w = ⟨v,w⟩u − ⟨u,w⟩v."""
    u, v = Matrix(u), Matrix(v)
    return ImmutableMatrix(u * (v.T * s.G) - v * (u.T * s.G))


def vee_endo(s: MetricSpace, u, v) -> ImmutableMatrix:
    """(u∨v)w = ½(⟨v,w⟩u + ⟨u,w⟩v)."""
    u, v = Matrix(u), Matrix(v)
    return ImmutableMatrix((u * (v.T * s.G) + v * (u.T * s.G)) / 2)


def is_metric_skew(s: MetricSpace, A) -> bool:
    A = Matrix(A)
    return is_zero(s.G * A + A.T * s.G)


def is_metric_symmetric(s: MetricSpace, A) -> bool:
    GA = s.G * Matrix(A)
    return GA == GA.T


def is_isometry(s: MetricSpace, Q) -> bool:
    Q = Matrix(Q)
    return Q.T * s.G * Q == s.G


def cayley_transform(s: MetricSpace, S) -> ImmutableMatrix:
    """
    Rational isometry Q = (I − S)(I + S)⁻¹ of a metric-skew S.

    Raises:
        NotSkew: S is not skew for the metric
        NotIsometry: I + S is singular, so no transform exists
    """
    S = Matrix(S)
    if not is_metric_skew(s, S):
        raise NotSkew("Cayley transform needs a metric-skew endomorphism")
    identity = eye(s.n)
    plus = identity + S
    if plus.det() == 0:
        raise NotIsometry("I + S is singular")
    return ImmutableMatrix((identity - S) * plus.inv())


def restricted_signature(s: MetricSpace, basis: Sequence) -> Tuple[int, int, int]:
    """(p, q, r) of the metric restricted to span(basis); r is the radical dimension."""
    if not basis:
        return (0, 0, 0)
    return inertia(restricted_gram(s.G, basis))


def zero_endo(s: MetricSpace) -> ImmutableMatrix:
    return ImmutableMatrix(zeros(s.n, s.n))


__all__ = [
    "MetricSpace",
    "basis_vector",
    "cayley_transform",
    "congruence_diagonal",
    "inner",
    "is_isometry",
    "is_metric_skew",
    "is_metric_symmetric",
    "make_space",
    "restricted_signature",
    "vee_endo",
    "wedge_endo",
    "zero_endo",
]
