"""
Holonomy algebras of curvature tensors and their invariant subspaces.

h(K) is the span of all K(u,v); h̄(K) its Lie closure inside so(V). The
splitting routine looks for nondegenerate invariant summands of V under a
closed algebra and reports the weak decomposition built from them.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterator, List, Optional, Sequence, Tuple

from sympy import ImmutableMatrix, Matrix, Rational, eye, zeros

from .bivector import bivector_dim, bivector_of_skew, induced_derivation, induced_group_action, vee_operator
from .curvature import CurvatureTensor, basis_endomorphisms, bianchi_map
from .errors import InternalInvariantError, IterationCap, NotIsometry, NotSkew
from .exactnum import (
    column_basis,
    coordinates,
    hstack,
    intersect,
    is_zero,
    minimal_polynomial,
    nullspace_basis,
    orthogonal_complement_within,
    poly_at_matrix,
    rank_of,
    restricted_gram,
    squarefree_rational_factors,
)
from .space import MetricSpace, is_isometry, is_metric_skew

logger = logging.getLogger(__name__)

PROBE_COUNT = 20
PROBE_SEED = 0x5EED
COMMUTANT_PROBES = 5


@dataclass(frozen=True)
class SkewAlgebra:
    space: MetricSpace
    basis: Tuple[ImmutableMatrix, ...]
    closed: bool = False

    @property
    def dim(self) -> int:
        return len(self.basis)


@dataclass(frozen=True)
class Subspace:
    space: MetricSpace
    basis: Tuple[ImmutableMatrix, ...]
    restricted_gram_rank: int

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def is_degenerate(self) -> bool:
        return self.restricted_gram_rank < self.dim

    @property
    def is_totally_isotropic(self) -> bool:
        return self.restricted_gram_rank == 0


@dataclass(frozen=True)
class Summand:
    """A nondegenerate invariant summand W together with how far it was certified."""
    subspace: Subspace
    flat: bool
    certified: bool


@dataclass(frozen=True)
class InvariantSplit:
    v0: Subspace
    components: List[Subspace]
    certified: bool
    summands: List[Summand] = field(default_factory=list)


def make_subspace(s: MetricSpace, vectors: Sequence) -> Subspace:
    basis = tuple(column_basis(list(vectors), s.n))
    gram_rank = restricted_gram(s.G, basis).rank() if basis else 0
    return Subspace(space=s, basis=basis, restricted_gram_rank=gram_rank)


def whole_space(s: MetricSpace) -> Subspace:
    return make_subspace(s, [ImmutableMatrix(eye(s.n)[:, i]) for i in range(s.n)])


def is_invariant(alg: SkewAlgebra, W: Subspace) -> bool:
    return all(
        rank_of(list(W.basis) + [A * w], alg.space.n) == W.dim
        for A in alg.basis
        for w in W.basis
    )


# === Algebra ===
def bracket(A, B) -> ImmutableMatrix:
    A, B = Matrix(A), Matrix(B)
    return ImmutableMatrix(A * B - B * A)


def _independent_endos(endos: Sequence, n: int) -> List[ImmutableMatrix]:
    if not endos:
        return []
    flat = [Matrix(E).reshape(n * n, 1) for E in endos]
    _, pivots = Matrix.hstack(*flat).rref()
    return [ImmutableMatrix(endos[i]) for i in pivots]


def h_span(Kt: CurvatureTensor) -> SkewAlgebra:
    """Span of K(e_i, e_j) reduced to an independent basis; closure is not asserted."""
    endos = [E for _, E in basis_endomorphisms(Kt) if not is_zero(E)]
    return SkewAlgebra(space=Kt.space, basis=tuple(_independent_endos(endos, Kt.n)), closed=False)


def lie_closure(alg: SkewAlgebra) -> SkewAlgebra:
    """
    Smallest Lie subalgebra of so(V) containing alg.

    Raises:
        IterationCap: the span kept growing past dim so(V) + 1 rounds
    """
    s = alg.space
    basis = list(alg.basis)
    for round_no in range(bivector_dim(s.n) + 1):
        brackets = [
            bracket(basis[i], basis[j])
            for i in range(len(basis))
            for j in range(i + 1, len(basis))
        ]
        grown = _independent_endos(basis + [B for B in brackets if not is_zero(B)], s.n)
        logger.debug("lie closure round %d: dim %d -> %d", round_no, len(basis), len(grown))
        if len(grown) == len(basis):
            return SkewAlgebra(space=s, basis=tuple(basis), closed=True)
        basis = grown
    raise IterationCap(f"Lie closure did not stabilise within {bivector_dim(s.n) + 1} rounds")


def span_contains_endo(alg: SkewAlgebra, E) -> bool:
    n = alg.space.n
    if not alg.basis:
        return is_zero(E)
    vecs = [Matrix(A).reshape(n * n, 1) for A in alg.basis]
    return rank_of(vecs + [Matrix(E).reshape(n * n, 1)], n * n) == len(vecs)


def is_subalgebra(alg: SkewAlgebra) -> bool:
    return all(
        span_contains_endo(alg, bracket(alg.basis[i], alg.basis[j]))
        for i in range(alg.dim)
        for j in range(i + 1, alg.dim)
    )


# === Actions on tensors ===
def act_algebra(A, Kt: CurvatureTensor) -> ImmutableMatrix:
    """
    (A.K)(a,b) = [A, K(a,b)] − K(Aa, b) − K(a, Ab), as Â·K − K·Â on Λ²V.

    Raises:
        NotSkew: A is not metric-skew
    """
    s = Kt.space
    if not is_metric_skew(s, A):
        raise NotSkew("algebra action needs a metric-skew endomorphism")
    D = induced_derivation(s, A)
    return ImmutableMatrix(D * Kt.matrix - Kt.matrix * D)


def act_group(Q, Kt: CurvatureTensor) -> CurvatureTensor:
    """
    (σ.K)(a,b) = σ∘K(σ⁻¹a, σ⁻¹b)∘σ⁻¹, i.e. Λ²Q·K·(Λ²Q)⁻¹.

    Raises:
        NotIsometry: Q does not preserve the metric
    """
    s = Kt.space
    if not is_isometry(s, Q):
        raise NotIsometry("group action needs an isometry of the metric")
    L = induced_group_action(Q)
    if L.rows == 0:
        return Kt
    return CurvatureTensor(space=s, matrix=ImmutableMatrix(L * Kt.matrix * L.inv()))


# === Subspaces ===
def common_kernel(alg: SkewAlgebra) -> Subspace:
    s = alg.space
    if not alg.basis:
        return whole_space(s)
    stacked = Matrix.vstack(*[Matrix(A) for A in alg.basis])
    return make_subspace(s, nullspace_basis(stacked))


def image_span(alg: SkewAlgebra, vectors: Sequence) -> List[ImmutableMatrix]:
    n = alg.space.n
    images = [ImmutableMatrix(A * w) for A in alg.basis for w in vectors]
    return column_basis([v for v in images if not is_zero(v)], n)


def orbit_span(alg: SkewAlgebra, seeds: Sequence) -> List[ImmutableMatrix]:
    """Smallest alg-invariant subspace containing the seeds."""
    n = alg.space.n
    current = column_basis([v for v in seeds if not is_zero(v)], n)
    while True:
        grown = column_basis(current + image_span(alg, current), n)
        if len(grown) == len(current):
            return current
        current = grown


def _restricted_action(alg: SkewAlgebra, basis: Sequence) -> List[Matrix]:
    n = alg.space.n
    frame = hstack(basis, n)
    return [
        Matrix.hstack(*[Matrix(coordinates(basis, A * frame[:, c], n)) for c in range(len(basis))])
        for A in alg.basis
    ]


def _commutant(action: Sequence[Matrix], d: int, gram: Optional[Matrix] = None) -> List[ImmutableMatrix]:
    """
    Basis of {C : C·A = A·C for every A in action}, optionally restricted to
    gram-symmetric C (G·C symmetric). C is vectorised row-major.
    """
    rows = []
    for A in action:
        for i in range(d):
            for j in range(d):
                row = [Rational(0)] * (d * d)
                for k in range(d):
                    row[i * d + k] += A[k, j]
                    row[k * d + j] -= A[i, k]
                rows.append(row)
    if gram is not None:
        for i in range(d):
            for j in range(i + 1, d):
                row = [Rational(0)] * (d * d)
                for k in range(d):
                    row[k * d + j] += gram[i, k]
                    row[k * d + i] -= gram[j, k]
                rows.append(row)
    system = Matrix(rows) if rows else zeros(0, d * d)
    return [ImmutableMatrix(v.reshape(d, d)) for v in nullspace_basis(system)]


def _is_local(commutant: Sequence, d: int) -> bool:
    """True when the trace-free parts of the commutant generate a nilpotent algebra."""
    identity = eye(d)
    trace_free = [Matrix(C) - Matrix(C).trace() / d * identity for C in commutant]
    generators = _independent_endos([N for N in trace_free if not is_zero(N)], d)
    power = list(generators)
    for _ in range(d + 1):
        if not power:
            return True
        products = [Matrix(P) * Matrix(N) for P in power for N in generators]
        power = _independent_endos([P for P in products if not is_zero(P)], d)
    return not power


def _commutant_probes(symmetric: Sequence, seed: int) -> List[Matrix]:
    from .generators import SplitMix64

    rng = SplitMix64(seed)
    probes = [Matrix(C) for C in symmetric]
    for _ in range(COMMUTANT_PROBES):
        probe = zeros(symmetric[0].rows, symmetric[0].cols)
        for C in symmetric:
            probe += rng.small_int(-3, 3) * Matrix(C)
        probes.append(probe)
    return probes


def _commutant_split(W: Sequence, symmetric: Sequence, n: int) -> Optional[List[ImmutableMatrix]]:
    """
    Primary component of a gram-symmetric commuting operator with two or more
    distinct irreducible factors. Such components are invariant and mutually
    orthogonal, hence nondegenerate.
    """
    frame = hstack(W, n)
    for C in _commutant_probes(symmetric, PROBE_SEED + len(W)):
        factors = squarefree_rational_factors(minimal_polynomial(C))
        if len(factors) < 2:
            continue
        f, m = factors[0]
        primary = poly_at_matrix(f, C) ** m
        return column_basis([ImmutableMatrix(frame * u) for u in nullspace_basis(primary)], n)
    return None


def _acts_trivially(alg: SkewAlgebra, basis: Sequence) -> bool:
    return all(is_zero(A * w) for A in alg.basis for w in basis)


def _probe_vectors(basis: Sequence, count: int, seed: int) -> List[ImmutableMatrix]:
    from .generators import SplitMix64

    rng = SplitMix64(seed)
    frame = Matrix.hstack(*basis)
    probes = []
    for _ in range(count):
        coeffs = Matrix([rng.small_int(-3, 3) for _ in basis])
        probes.append(ImmutableMatrix(frame * coeffs))
    return probes


def _is_proper_nondegenerate(s: MetricSpace, candidate: Sequence, total: int) -> bool:
    return 0 < len(candidate) < total and restricted_gram(s.G, candidate).det() != 0


def _orbit_candidates(alg: SkewAlgebra, W: List[ImmutableMatrix], kernel: List[ImmutableMatrix]) -> Iterator[List[ImmutableMatrix]]:
    yield intersect(kernel, W, alg.space.n)
    yield image_span(alg, W)
    for w in W:
        yield orbit_span(alg, [w])
    for w in _probe_vectors(W, PROBE_COUNT, PROBE_SEED + len(W)):
        yield orbit_span(alg, [w])


def _split(alg: SkewAlgebra, W: List[ImmutableMatrix], kernel: List[ImmutableMatrix]) -> List[Summand]:
    s = alg.space
    if _acts_trivially(alg, W):
        return [Summand(subspace=make_subspace(s, W), flat=True, certified=True)]

    d = len(W)
    found = next((U for U in _orbit_candidates(alg, W, kernel) if _is_proper_nondegenerate(s, U, d)), None)
    if found is None:
        action = _restricted_action(alg, W)
        symmetric = _commutant(action, d, restricted_gram(s.G, W))
        if len(symmetric) > 1:
            found = _commutant_split(W, symmetric, s.n)
    if found is not None:
        rest = orthogonal_complement_within(s.G, W, found)
        return _split(alg, list(found), kernel) + _split(alg, rest, kernel)

    # an orthogonal splitting would put its projections in the symmetric commutant
    certified = len(symmetric) == 1 or _is_local(_commutant(action, d), d)
    if not certified:
        logger.debug("invariant summand of dim %d left unsplit after seed exhaustion", d)
    return [Summand(subspace=make_subspace(s, W), flat=False, certified=certified)]


def invariant_subspace_split(alg: SkewAlgebra) -> InvariantSplit:
    """
    Weak decomposition V = V0 + V1 + ... + Vs of a closed algebra's action.

    V0 is the common kernel. Nondegenerate invariant summands are split off
    recursively, from orbit spans first and then from primary components of
    self-adjoint operators commuting with the action. Each component Vi is
    the image of a non-flat summand under the algebra. certified is False when some summand
    could only be declared indecomposable heuristically.
    """
    s = alg.space
    if not alg.closed:
        alg = lie_closure(alg)
    v0 = common_kernel(alg)
    if not alg.basis:
        return InvariantSplit(v0=v0, components=[], certified=True, summands=[])

    full = list(whole_space(s).basis)
    summands = _split(alg, full, list(v0.basis))
    components = [
        make_subspace(s, image_span(alg, list(sm.subspace.basis)))
        for sm in summands
        if not sm.flat
    ]
    for comp in components:
        if not is_invariant(alg, comp):
            raise InternalInvariantError("orbit growth produced a non-invariant component")
    return InvariantSplit(
        v0=v0,
        components=components,
        certified=all(sm.certified for sm in summands),
        summands=summands,
    )


# === Tensors of a given type ===
def curvature_tensors_of_type(alg: SkewAlgebra) -> List[ImmutableMatrix]:
    """Basis of R(g) = ker B ∩ ∨²g for g = span(alg)."""
    s = alg.space
    N = bivector_dim(s.n)
    forms = [bivector_of_skew(s, A) for A in alg.basis]
    products = [
        vee_operator(s, forms[i], forms[j])
        for i in range(len(forms))
        for j in range(i, len(forms))
    ]
    if not products:
        return []
    images = Matrix.hstack(*[Matrix(bianchi_map(s, T)).reshape(N * N, 1) for T in products])
    tensors = []
    for coeffs in nullspace_basis(images):
        T = zeros(N, N)
        for c, P in zip(coeffs, products):
            T += c * Matrix(P)
        tensors.append(ImmutableMatrix(T))
    return tensors


def symmetric_tensors_of_type(alg: SkewAlgebra) -> List[ImmutableMatrix]:
    """Basis of {T ∈ R(g) : A.T = 0 for every A ∈ g}."""
    s = alg.space
    candidates = curvature_tensors_of_type(alg)
    if not candidates or not alg.basis:
        return candidates
    N = bivector_dim(s.n)
    derivations = [induced_derivation(s, A) for A in alg.basis]
    blocks = []
    for D in derivations:
        blocks.append(
            Matrix.hstack(*[Matrix(D * T - T * D).reshape(N * N, 1) for T in candidates])
        )
    tensors = []
    for coeffs in nullspace_basis(Matrix.vstack(*blocks)):
        T = zeros(N, N)
        for c, P in zip(coeffs, candidates):
            T += c * Matrix(P)
        tensors.append(ImmutableMatrix(T))
    return tensors


__all__ = [
    "InvariantSplit",
    "SkewAlgebra",
    "Subspace",
    "Summand",
    "act_algebra",
    "act_group",
    "bracket",
    "common_kernel",
    "curvature_tensors_of_type",
    "h_span",
    "image_span",
    "invariant_subspace_split",
    "is_invariant",
    "is_subalgebra",
    "lie_closure",
    "make_subspace",
    "orbit_span",
    "span_contains_endo",
    "symmetric_tensors_of_type",
    "whole_space",
]
