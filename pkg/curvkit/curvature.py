"""
Curvature tensors as self-adjoint operators on Λ²V.

The four-index form of an operator T is T(a,b,u,v) = ⟨T(a∧b), u∧v⟩ with
the induced metric; a curvature tensor is a self-adjoint T whose
four-index form satisfies the first Bianchi identity.

Ricci follows the convention ric(u,v) = trace(a ↦ K(u,a)v), so that
K = λ·Id on an n-dimensional space has Ric = λ(1 − n)·Id.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

from sympy import ImmutableMatrix, Matrix, Poly, Rational, eye, zeros

from .bivector import bivector_dim, induced_gram, pair_index, pairs, skew_of_bivector, wedge_coords
from .errors import InternalInvariantError, ValidationError
from .exactnum import is_zero, minimal_polynomial, nullspace_basis, squarefree_rational_factors
from .space import MetricSpace

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CurvatureTensor:
    space: MetricSpace
    matrix: ImmutableMatrix

    @property
    def n(self) -> int:
        return self.space.n

    @property
    def N(self) -> int:
        return self.matrix.rows


@dataclass(frozen=True)
class RicciData:
    operator: ImmutableMatrix
    form: ImmutableMatrix
    minpoly: Poly
    factors: List[Tuple[Poly, int]] = field(default_factory=list)


@dataclass(frozen=True)
class RicciClass:
    """kind is one of "einstein", "isotropic", "zero", "other"."""
    kind: str
    einstein_constant: Optional[Rational] = None

    def label(self) -> str:
        if self.kind == "einstein":
            return f"einstein({self.einstein_constant})"
        return self.kind


@dataclass(frozen=True)
class SymmetryReport:
    antisymmetric_first_pair: bool
    antisymmetric_second_pair: bool
    first_bianchi: bool
    pair_symmetry: bool
    witness: Optional[Tuple[str, Tuple[int, int, int, int]]] = None

    @property
    def ok(self) -> bool:
        return (
            self.antisymmetric_first_pair
            and self.antisymmetric_second_pair
            and self.first_bianchi
            and self.pair_symmetry
        )


# === Four-index view ===
def _four_index(s: MetricSpace, T) -> Callable[[int, int, int, int], Rational]:
    """Basis components T(i,j,k,l) = ⟨T(e_i∧e_j), e_k∧e_l⟩."""
    MT = induced_gram(s) * Matrix(T)
    idx = pair_index(s.n)

    def value(i: int, j: int, k: int, l: int) -> Rational:
        if i == j or k == l:
            return Rational(0)
        sign = 1
        if i > j:
            i, j, sign = j, i, -sign
        if k > l:
            k, l, sign = l, k, -sign
        return sign * MT[idx[(k, l)], idx[(i, j)]]

    return value


def _cyclic_sums(s: MetricSpace, T) -> Matrix:
    """C[(k,l),(i,j)] = T(i,j,k,l) + T(j,k,i,l) + T(k,i,j,l)."""
    value = _four_index(s, T)
    idx = pairs(s.n)
    N = len(idx)
    C = zeros(N, N)
    for col, (i, j) in enumerate(idx):
        for row, (k, l) in enumerate(idx):
            C[row, col] = value(i, j, k, l) + value(j, k, i, l) + value(k, i, j, l)
    return C


def bianchi_map(s: MetricSpace, T) -> ImmutableMatrix:
    """
    Bianchi cyclic map as an operator on Λ²V.

    On generators it sends (a∧b)∨(c∧d) to
    (a∧b)∨(c∧d) + (b∧c)∨(a∧d) + (c∧a)∨(b∧d).
    """
    if s.n < 2:
        return ImmutableMatrix(zeros(0, 0))
    return ImmutableMatrix(induced_gram(s).inv() * _cyclic_sums(s, T))


def bianchi_residual(s: MetricSpace, T) -> Optional[Tuple[Tuple[int, int, int, int], Rational]]:
    """First nonzero cyclic-sum component ((i,j,k,l), value), or None if T satisfies Bianchi."""
    value = _four_index(s, T)
    n = s.n
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(n):
                for l in range(k + 1, n):
                    total = value(i, j, k, l) + value(j, k, i, l) + value(k, i, j, l)
                    if total != 0:
                        return (i, j, k, l), total
    return None


def _self_adjoint_witness(s: MetricSpace, T) -> Optional[Tuple[int, int]]:
    MT = induced_gram(s) * Matrix(T)
    for a in range(MT.rows):
        for b in range(a + 1, MT.cols):
            if MT[a, b] != MT[b, a]:
                return (a, b)
    return None


def _project_by_kernel(s: MetricSpace, T) -> ImmutableMatrix:
    """Exact projection onto ker B along im B, from bases of both."""
    N = bivector_dim(s.n)
    columns = []
    for k in range(N * N):
        E = zeros(N, N)
        E[k // N, k % N] = 1
        columns.append(Matrix(bianchi_map(s, E)).reshape(N * N, 1))
    B = Matrix.hstack(*columns)
    kernel = nullspace_basis(B)
    image = [ImmutableMatrix(B[:, c]) for c in B.rref()[1]]
    frame = Matrix.hstack(*(kernel + image))
    target = Matrix(T).reshape(N * N, 1)
    coeffs, _ = frame.gauss_jordan_solve(target)
    kernel_part = zeros(N * N, 1)
    for c, vec in zip(coeffs, kernel):
        kernel_part += c * vec
    return ImmutableMatrix(kernel_part.reshape(N, N))


def project_to_curvature(s: MetricSpace, T) -> "CurvatureTensor":
    """
    Project a self-adjoint operator on Λ²V onto the Bianchi kernel.

    B² = 3B on self-adjoint operators, so T − B(T)/3 is the projection;
    the result is re-checked and the kernel/image solve is used if the
    residual is ever nonzero.
    """
    T = ImmutableMatrix(T)
    if s.n < 2:
        return CurvatureTensor(space=s, matrix=T)
    projected = ImmutableMatrix(Matrix(T) - Matrix(bianchi_map(s, T)) / 3)
    if bianchi_residual(s, projected) is not None:
        logger.debug("closed-form Bianchi projection left a residual; solving exactly")
        projected = _project_by_kernel(s, T)
        if bianchi_residual(s, projected) is not None:
            raise InternalInvariantError("Bianchi projection failed to reach the kernel")
    return CurvatureTensor(space=s, matrix=projected)


def make_curvature(s: MetricSpace, matrix) -> CurvatureTensor:
    """
    Validating constructor.

    Raises:
        ValidationError: wrong shape, not self-adjoint, or nonzero Bianchi residual
    """
    K = ImmutableMatrix(Matrix(matrix).applyfunc(Rational))
    N = bivector_dim(s.n)
    if K.rows != N or K.cols != N:
        raise ValidationError("tensor shape", f"expected {N}x{N}, got {K.rows}x{K.cols}")
    bad_pair = _self_adjoint_witness(s, K)
    if bad_pair is not None:
        raise ValidationError("self-adjointness on bivectors", {"entry": list(bad_pair)})
    residual = bianchi_residual(s, K)
    if residual is not None:
        (i, j, k, l), value = residual
        raise ValidationError("first Bianchi identity", {"indices": [i, j, k, l], "value": str(value)})
    return CurvatureTensor(space=s, matrix=K)


def zero_tensor(s: MetricSpace) -> CurvatureTensor:
    N = bivector_dim(s.n)
    return CurvatureTensor(space=s, matrix=ImmutableMatrix(zeros(N, N)))


# === Evaluation ===
def four_tensor(Kt: CurvatureTensor, a, b, u, v) -> Rational:
    """K(a,b,u,v) = ⟨K(a∧b)u, v⟩ = ⟨K(a∧b), u∧v⟩."""
    s = Kt.space
    return (Matrix(wedge_coords(u, v)).T * induced_gram(s) * Kt.matrix * Matrix(wedge_coords(a, b)))[0, 0]


def check_symmetries(Kt: CurvatureTensor) -> SymmetryReport:
    """Check the four Riemann symmetries on every basis 4-tuple."""
    value = _four_index(Kt.space, Kt.matrix)
    n = Kt.n
    flags = {"antisym_ab": True, "antisym_uv": True, "bianchi": True, "pair": True}
    witness = None

    def fail(name: str, quad: Tuple[int, int, int, int]) -> None:
        nonlocal witness
        flags[name] = False
        if witness is None:
            witness = (name, quad)

    for a in range(n):
        for b in range(n):
            for u in range(n):
                for v in range(n):
                    quad = (a, b, u, v)
                    t = value(a, b, u, v)
                    if t + value(b, a, u, v) != 0:
                        fail("antisym_ab", quad)
                    if t + value(a, b, v, u) != 0:
                        fail("antisym_uv", quad)
                    if t + value(b, u, a, v) + value(u, a, b, v) != 0:
                        fail("bianchi", quad)
                    if t != value(u, v, a, b):
                        fail("pair", quad)
    return SymmetryReport(
        antisymmetric_first_pair=flags["antisym_ab"],
        antisymmetric_second_pair=flags["antisym_uv"],
        first_bianchi=flags["bianchi"],
        pair_symmetry=flags["pair"],
        witness=witness,
    )


def apply_K(Kt: CurvatureTensor, u, v) -> ImmutableMatrix:
    """K(u,v) := K(u∧v) as a metric-skew endomorphism."""
    return skew_of_bivector(Kt.space, Kt.matrix * wedge_coords(u, v))


def basis_endomorphisms(Kt: CurvatureTensor) -> List[Tuple[Tuple[int, int], ImmutableMatrix]]:
    """((i, j), K(e_i, e_j)) for i < j in lexicographic order."""
    s = Kt.space
    E = eye(s.n)
    return [((i, j), apply_K(Kt, E[:, i], E[:, j])) for i, j in pairs(s.n)]


def ricci_form(Kt: CurvatureTensor) -> ImmutableMatrix:
    s = Kt.space
    n = s.n
    E = eye(n)
    ric = zeros(n, n)
    for i in range(n):
        endos = [apply_K(Kt, E[:, i], E[:, a]) for a in range(n)]
        for j in range(n):
            ric[i, j] = sum((endos[a][a, j] for a in range(n)), Rational(0))
    return ImmutableMatrix(ric)


def ricci(Kt: CurvatureTensor) -> RicciData:
    """
    Ricci form, operator, minimal polynomial and its factors.

    ric(u,v) = trace(a ↦ K(u,a)v); Ric = G⁻¹·ric.
    """
    form = ricci_form(Kt)
    if form != form.T:
        raise InternalInvariantError("Ricci form of a curvature tensor is not symmetric")
    operator = ImmutableMatrix(Kt.space.G.inv() * form)
    chi = minimal_polynomial(operator)
    return RicciData(operator=operator, form=form, minpoly=chi, factors=squarefree_rational_factors(chi))


def classify_ricci(rd: RicciData) -> RicciClass:
    Ric = rd.operator
    n = Ric.rows
    if is_zero(Ric):
        return RicciClass(kind="zero")
    if Ric == Ric[0, 0] * eye(n):
        return RicciClass(kind="einstein", einstein_constant=Rational(Ric[0, 0]))
    if is_zero(Ric * Ric):
        return RicciClass(kind="isotropic")
    return RicciClass(kind="other")


def operator_square(Kt: CurvatureTensor) -> ImmutableMatrix:
    return ImmutableMatrix(Kt.matrix * Kt.matrix)


__all__ = [
    "CurvatureTensor",
    "RicciClass",
    "RicciData",
    "SymmetryReport",
    "apply_K",
    "basis_endomorphisms",
    "bianchi_map",
    "bianchi_residual",
    "check_symmetries",
    "classify_ricci",
    "four_tensor",
    "make_curvature",
    "operator_square",
    "project_to_curvature",
    "ricci",
    "ricci_form",
    "zero_tensor",
]
