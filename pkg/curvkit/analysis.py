"""
Theorem engines over a single curvature tensor.

Each engine computes exactly and certifies what it claims. Certificates
that fail on a concrete instance are returned as `violations` entries
rather than raised, so one run can report every failed claim with its
witness. Preconditions (semi-symmetry, Lorentzian signature) are raised.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from sympy import ImmutableMatrix, Matrix, Poly, QQ, Rational, eye, zeros

from .bivector import induced_derivation, pairs, skew_of_bivector, wedge_coords
from .curvature import (
    CurvatureTensor,
    RicciData,
    apply_K,
    basis_endomorphisms,
    check_symmetries,
    classify_ricci,
    operator_square,
    ricci,
)
from .errors import FactorMultiplicityViolation, NotLorentzian, NotSemisymmetric, TheoremViolation
from .exactnum import (
    X,
    column_basis,
    format_rational,
    intersect,
    is_zero,
    nullspace_basis,
    poly_at_matrix,
    rank_of,
    restricted_gram,
    sturm_real_root_count,
)
from .holonomy import (
    SkewAlgebra,
    Subspace,
    bracket,
    h_span,
    invariant_subspace_split,
    is_invariant,
    is_subalgebra,
    lie_closure,
    make_subspace,
)
from .space import MetricSpace, restricted_signature

logger = logging.getLogger(__name__)

X_POLY = Poly(X, X, domain=QQ)


# === Formatting helpers shared by report builders ===
def fmt_vector(v) -> List[str]:
    return [format_rational(x) for x in v]


def fmt_matrix(M) -> List[List[str]]:
    M = Matrix(M)
    return [[format_rational(M[i, j]) for j in range(M.cols)] for i in range(M.rows)]


def fmt_poly(p: Poly) -> str:
    return str(p.as_expr())


def fmt_subspace(W: Subspace) -> Dict[str, Any]:
    return {
        "dim": W.dim,
        "basis": [fmt_vector(v) for v in W.basis],
        "restricted_signature": list(restricted_signature(W.space, list(W.basis))),
        "degenerate": W.is_degenerate,
        "totally_isotropic": W.dim > 0 and W.is_totally_isotropic,
    }


# === Types ===
@dataclass(frozen=True)
class SemisymmetryVerdict:
    semisymmetric: bool
    witness: Optional[Tuple[int, int, int, int]] = None
    residual: Optional[ImmutableMatrix] = None

    def __bool__(self) -> bool:
        return self.semisymmetric

    def to_dict(self) -> Dict[str, Any]:
        return {
            "semisymmetric": self.semisymmetric,
            "witness": list(self.witness) if self.witness else None,
            "residual": fmt_matrix(self.residual) if self.residual is not None else None,
        }


@dataclass(frozen=True)
class Block:
    """tag is one of E0, E<i>, V0, V<i>, V0'."""
    tag: str
    subspace: Subspace
    factor: Optional[Poly] = None
    einstein_constant: Optional[Rational] = None

    def to_dict(self) -> Dict[str, Any]:
        out = {"tag": self.tag, **fmt_subspace(self.subspace)}
        if self.factor is not None:
            out["factor"] = fmt_poly(self.factor)
        if self.einstein_constant is not None:
            out["einstein_constant"] = format_rational(self.einstein_constant)
        return out


@dataclass(frozen=True)
class Decomposition:
    blocks: List[Block]
    flags: Dict[str, bool]
    details: Dict[str, Any] = field(default_factory=dict)
    violations: List[Dict[str, Any]] = field(default_factory=list)

    def block(self, tag: str) -> Optional[Block]:
        return next((b for b in self.blocks if b.tag == tag), None)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "blocks": [b.to_dict() for b in self.blocks],
            "flags": dict(self.flags),
            "details": self.details,
            "violations": list(self.violations),
        }


@dataclass
class SymmetricPair:
    """g = h ⊕ V with [X,Y] = K(X,Y), [A,X] = A(X), [A,B] = AB − BA."""
    h: SkewAlgebra
    V: MetricSpace
    tensor: CurvatureTensor

    def elements(self) -> List[Tuple[str, ImmutableMatrix, ImmutableMatrix]]:
        n = self.V.n
        zero_vec = ImmutableMatrix(zeros(n, 1))
        zero_endo = ImmutableMatrix(zeros(n, n))
        out = [("A", A, zero_vec) for A in self.h.basis]
        out.extend(("X", zero_endo, ImmutableMatrix(eye(n)[:, i])) for i in range(n))
        return out

    def bracket(self, first, second) -> Tuple[ImmutableMatrix, ImmutableMatrix]:
        A, x = first
        B, y = second
        endo = Matrix(bracket(A, B))
        if not is_zero(x) and not is_zero(y):
            endo += Matrix(apply_K(self.tensor, x, y))
        return ImmutableMatrix(endo), ImmutableMatrix(Matrix(A) * y - Matrix(B) * x)


@dataclass(frozen=True)
class JacobiResult:
    holds: bool
    by_type: Dict[str, Dict[str, int]]
    closure_grew: bool
    span_dim: int
    closure_dim: int
    first_failure: Optional[Dict[str, Any]] = None

    def __bool__(self) -> bool:
        return self.holds

    def to_dict(self) -> Dict[str, Any]:
        return {
            "holds": self.holds,
            "by_type": self.by_type,
            "closure_grew": self.closure_grew,
            "span_dim": self.span_dim,
            "closure_dim": self.closure_dim,
            "first_failure": self.first_failure,
        }


# === Semi-symmetry ===
def is_semisymmetric(Kt: CurvatureTensor) -> SemisymmetryVerdict:
    """
    Check [K(u,v), K(a,b)] = K(K(u,v)a, b) + K(a, K(u,v)b) on every basis tuple.

    The defect for fixed (u, v) is the operator Â·K − K·Â on Λ²V with
    A = K(u, v); its first nonzero column names (a, b).
    """
    s = Kt.space
    idx = pairs(s.n)
    for (u, v), A in basis_endomorphisms(Kt):
        if is_zero(A):
            continue
        D = induced_derivation(s, A)
        defect = D * Kt.matrix - Kt.matrix * D
        if is_zero(defect):
            continue
        col = next(c for c in range(defect.cols) if not is_zero(defect[:, c]))
        a, b = idx[col]
        residual = skew_of_bivector(s, defect[:, col])
        return SemisymmetryVerdict(False, witness=(u, v, a, b), residual=residual)
    return SemisymmetryVerdict(True)


def _require_semisymmetric(Kt: CurvatureTensor) -> None:
    verdict = is_semisymmetric(Kt)
    if not verdict:
        raise NotSemisymmetric(verdict.witness)


def ricci_commutes(Kt: CurvatureTensor, rd: Optional[RicciData] = None) -> bool:
    Ric = Matrix((rd or ricci(Kt)).operator)
    return all(is_zero(Ric * A - Matrix(A) * Ric) for _, A in basis_endomorphisms(Kt))


# === Ricci decomposition ===
def _mixed_vanishing(Kt: CurvatureTensor, first: Sequence, second: Sequence) -> Optional[Tuple[List[str], List[str]]]:
    for a in first:
        for b in second:
            if not is_zero(Kt.matrix * wedge_coords(a, b)):
                return fmt_vector(a), fmt_vector(b)
    return None


def _local_algebra(Kt: CurvatureTensor, basis: Sequence) -> SkewAlgebra:
    endos = []
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            E = apply_K(Kt, basis[i], basis[j])
            if not is_zero(E):
                endos.append(E)
    n = Kt.n
    flat = [Matrix(E).reshape(n * n, 1) for E in endos]
    kept = [endos[i] for i in Matrix.hstack(*flat).rref()[1]] if flat else []
    return SkewAlgebra(space=Kt.space, basis=tuple(kept))


def _endo_rank(endos: Sequence, n: int) -> int:
    return rank_of([Matrix(E).reshape(n * n, 1) for E in endos], n * n)


def _einstein_constant_on(Ric: Matrix, basis: Sequence) -> Optional[Rational]:
    """c with Ric·v = c·v on every basis vector, or None."""
    constant = None
    for v in basis:
        image = Ric * Matrix(v)
        k = next(i for i in range(len(v)) if v[i] != 0)
        c = image[k] / v[k]
        if not is_zero(image - c * Matrix(v)):
            return None
        if constant is None:
            constant = c
        elif c != constant:
            return None
    return constant


def ricci_decomposition(Kt: CurvatureTensor, rd: Optional[RicciData] = None) -> Decomposition:
    """
    Orthogonal splitting V = E0 ⊕ E1 ⊕ ... ⊕ Er by the Ricci minimal polynomial.

    E0 = ker Ric², Ei = ker Pi(Ric) for each irreducible factor Pi ≠ X.

    Raises:
        NotSemisymmetric: K fails the semi-symmetry check
        FactorMultiplicityViolation: a factor other than X repeats, or X³ divides χ
    """
    _require_semisymmetric(Kt)
    s = Kt.space
    rd = rd or ricci(Kt)
    Ric = Matrix(rd.operator)

    for factor, mult in rd.factors:
        if factor == X_POLY and mult >= 3:
            raise FactorMultiplicityViolation(fmt_poly(factor), mult)
        if factor != X_POLY and mult >= 2:
            raise FactorMultiplicityViolation(fmt_poly(factor), mult)

    blocks: List[Block] = []
    e0 = make_subspace(s, nullspace_basis(Ric * Ric))
    if e0.dim:
        blocks.append(Block(tag="E0", subspace=e0))
    coarse = False
    for factor, _ in rd.factors:
        if factor == X_POLY:
            continue
        space_basis = nullspace_basis(poly_at_matrix(factor, Ric))
        constant = -factor.all_coeffs()[-1] if factor.degree() == 1 else None
        coarse = coarse or factor.degree() >= 2
        blocks.append(
            Block(
                tag=f"E{len([b for b in blocks if b.tag != 'E0']) + 1}",
                subspace=make_subspace(s, space_basis),
                factor=factor,
                einstein_constant=Rational(constant) if constant is not None else None,
            )
        )
    if coarse:
        logger.warning("Ricci decomposition kept an irrational-eigenvalue factor whole")

    violations: List[Dict[str, Any]] = []
    total = sum(b.subspace.dim for b in blocks)
    if total != s.n or rank_of([v for b in blocks for v in b.subspace.basis], s.n) != s.n:
        violations.append({"certificate": "blocks span V", "dims": [b.subspace.dim for b in blocks]})

    orthogonal = True
    cross = True
    for first, second in itertools.combinations(blocks, 2):
        B1 = Matrix.hstack(*first.subspace.basis)
        B2 = Matrix.hstack(*second.subspace.basis)
        if not is_zero(B1.T * s.G * B2):
            orthogonal = False
            violations.append({"certificate": "orthogonality", "blocks": [first.tag, second.tag]})
        witness = _mixed_vanishing(Kt, first.subspace.basis, second.subspace.basis)
        if witness is not None:
            cross = False
            violations.append({"certificate": "mixed bivectors vanish", "blocks": [first.tag, second.tag], "witness": list(witness)})

    h = h_span(Kt)
    invariant = True
    for b in blocks:
        if not is_invariant(h, b.subspace):
            invariant = False
            violations.append({"certificate": "h(K)-invariance", "block": b.tag})

    dims_ok = True
    for b in blocks:
        if b.tag != "E0" and b.subspace.dim < 2:
            dims_ok = False
            violations.append({"certificate": "nonzero-eigenvalue block has dim >= 2", "block": b.tag, "dim": b.subspace.dim})

    local_algebras = [_local_algebra(Kt, list(b.subspace.basis)) for b in blocks]
    combined = [A for alg in local_algebras for A in alg.basis]
    sum_is_h = _endo_rank(combined + list(h.basis), s.n) == h.dim and _endo_rank(combined, s.n) == h.dim
    direct = sum(alg.dim for alg in local_algebras) == h.dim
    subalgebras = [is_subalgebra(alg) for alg in local_algebras]
    if not sum_is_h:
        violations.append({"certificate": "h(K) is the sum of the block algebras"})
    if not all(subalgebras):
        violations.append({"certificate": "block algebras are subalgebras", "blocks": [b.tag for b, ok in zip(blocks, subalgebras) if not ok]})

    nonzero_blocks = [b for b in blocks if b.tag != "E0"]
    return Decomposition(
        blocks=blocks,
        flags={
            "orthogonal_certified": orthogonal,
            "invariant_certified": invariant,
            "cross_vanishing_certified": cross,
            "dimension_certified": dims_ok,
            "coarse": coarse,
        },
        details={
            "minpoly": fmt_poly(rd.minpoly),
            "nullity_index": e0.dim,
            "co_nullity_index": nonzero_blocks[0].subspace.dim if len(nonzero_blocks) == 1 else None,
            "holonomy_split": {
                "block_algebra_dims": [alg.dim for alg in local_algebras],
                "sum_equals_h": sum_is_h,
                "direct": direct,
                "subalgebras": subalgebras,
            },
        },
        violations=violations,
    )


# === Primitive decomposition ===
def dual_isotropic_basis(s: MetricSpace, isotropic: Sequence) -> List[ImmutableMatrix]:
    """
    q_1..q_k with ⟨p_i, q_j⟩ = δ_ij, every q_j isotropic and ⟨q_i, q_j⟩ = 0.

    A particular solution of the pairing system (free parameters set to 0)
    is corrected by q_j -= ½ Σ_i ⟨q_j, q_i⟩ p_i, which keeps the pairing
    because the p_i span a totally isotropic subspace.
    """
    if not isotropic:
        return []
    P = Matrix.hstack(*isotropic)
    system = P.T * s.G
    k = len(isotropic)
    raw = []
    for j in range(k):
        target = zeros(k, 1)
        target[j] = 1
        sol, params = system.gauss_jordan_solve(target)
        if params.rows:
            sol = sol.subs({t: 0 for t in params})
        raw.append(sol)
    gram = Matrix([[(raw[i].T * s.G * raw[j])[0, 0] for j in range(k)] for i in range(k)])
    duals = []
    for j in range(k):
        q = raw[j] - sum((gram[j, i] / 2 * Matrix(isotropic[i]) for i in range(k)), zeros(s.n, 1))
        duals.append(ImmutableMatrix(q))
    return duals


def primitive_decomposition(Kt: CurvatureTensor) -> Decomposition:
    """
    Weak decomposition V = V0 + V1 + ... + Vs + V0' under h̄(K).

    Raises:
        NotSemisymmetric: K fails the semi-symmetry check
    """
    _require_semisymmetric(Kt)
    s = Kt.space
    span = h_span(Kt)
    closure = lie_closure(span)
    split = invariant_subspace_split(closure)
    if not split.certified:
        logger.warning("primitive decomposition: indecomposability of some block is heuristic")

    blocks = [Block(tag="V0", subspace=split.v0)]
    blocks.extend(Block(tag=f"V{i + 1}", subspace=comp) for i, comp in enumerate(split.components))

    component_sum = column_basis([v for comp in split.components for v in comp.basis], s.n)
    overlap = make_subspace(s, intersect(list(split.v0.basis), component_sum, s.n))
    violations: List[Dict[str, Any]] = []
    if overlap.dim and not overlap.is_totally_isotropic:
        violations.append({"certificate": "V0 ∩ ΣVi is totally isotropic", "gram": fmt_matrix(restricted_gram(s.G, overlap.basis))})
        duals: List[ImmutableMatrix] = []
    else:
        duals = dual_isotropic_basis(s, list(overlap.basis))
    if duals:
        blocks.append(Block(tag="V0'", subspace=make_subspace(s, duals)))

    invariant = all(is_invariant(closure, b.subspace) for b in blocks if b.tag != "V0'")
    cross = True
    for first, second in itertools.combinations(split.components, 2):
        witness = _mixed_vanishing(Kt, first.basis, second.basis)
        if witness is not None:
            cross = False
            violations.append({"certificate": "K(Vi, Vj) = 0", "witness": list(witness)})
    orthogonal = all(
        is_zero(Matrix.hstack(*first.basis).T * s.G * Matrix.hstack(*second.basis))
        for first, second in itertools.combinations(split.components, 2)
    )
    total = rank_of([v for b in blocks for v in b.subspace.basis], s.n)
    if total != s.n:
        violations.append({"certificate": "V0 + ΣVi + V0' spans V", "rank": total})

    return Decomposition(
        blocks=blocks,
        flags={
            "orthogonal_certified": orthogonal,
            "invariant_certified": invariant,
            "cross_vanishing_certified": cross,
            "heuristic": not split.certified,
            "direct": sum(b.subspace.dim for b in blocks) == s.n,
        },
        details={
            "holonomy_span_dim": span.dim,
            "holonomy_closure_dim": closure.dim,
            "intersection": fmt_subspace(overlap),
            "summands": [
                {"dim": sm.subspace.dim, "flat": sm.flat, "certified": sm.certified}
                for sm in split.summands
            ],
        },
        violations=violations,
    )


# === Lorentzian structure ===
def _is_definite(W: Subspace) -> bool:
    p, q, r = restricted_signature(W.space, list(W.basis))
    return r == 0 and (p == 0 or q == 0)


LORENTZIAN_OBSERVATIONS = (
    "single_eigenvalue_shape",
    "leaf_shape",
    "nonzero_eigenvalues",
    "square.on_all_bivectors",
    "square.compositions_vanish",
)


def _leaf_shape(rd: RicciData) -> str:
    x_power = next((m for f, m in rd.factors if f == X_POLY), 0)
    others = [f for f, _ in rd.factors if f != X_POLY]
    if len(others) > 1:
        return "other"
    shape = {0: "", 1: "X", 2: "X^2"}.get(x_power)
    if shape is None:
        return "other"
    shape += "P" if others else ""
    return shape or "1"


def lorentzian_report(Kt: CurvatureTensor) -> Dict[str, Any]:
    """
    Certify the Lorentzian eigenvalue and structure statements on one tensor.

    Entries named in "observations" describe the shape the tensor takes but
    never produce violations; their statements need a simple-leaf manifold.

    Raises:
        NotLorentzian: signature is not Lorentzian
        NotSemisymmetric: K fails the semi-symmetry check
    """
    s = Kt.space
    if not s.is_lorentzian:
        raise NotLorentzian(f"signature {s.signature} is not Lorentzian")
    _require_semisymmetric(Kt)
    rd = ricci(Kt)
    Ric = Matrix(rd.operator)
    violations: List[Dict[str, Any]] = []

    realness = []
    for factor, _ in rd.factors:
        if factor == X_POLY:
            continue
        count = sturm_real_root_count(factor)
        realness.append({"factor": fmt_poly(factor), "degree": factor.degree(), "real_roots": count})
        if count != factor.degree():
            violations.append({"certificate": "Ricci eigenvalues are real", "factor": fmt_poly(factor), "real_roots": count})

    ker_ric = nullspace_basis(Ric)
    ker_ric2 = nullspace_basis(Ric * Ric)
    case = "a" if len(ker_ric) == len(ker_ric2) else "b"

    rdec = ricci_decomposition(Kt, rd)
    pdec = primitive_decomposition(Kt)
    violations.extend(rdec.violations)
    violations.extend(pdec.violations)

    v0 = pdec.block("V0").subspace
    components = [b for b in pdec.blocks if b.tag not in ("V0", "V0'")]
    indefinite = [b for b in components if not _is_definite(b.subspace)]
    if len(indefinite) > 1:
        violations.append({"certificate": "at most one non-definite component", "blocks": [b.tag for b in indefinite]})
    v1 = indefinite[0] if indefinite else None
    component_report = []
    for b in components:
        constant = _einstein_constant_on(Ric, b.subspace.basis)
        definite = _is_definite(b.subspace)
        component_report.append({
            "tag": b.tag,
            "role": "V1" if b is v1 else "Vi",
            "definite": definite,
            "einstein_constant": format_rational(constant) if constant is not None else None,
        })
        if b is not v1 and constant is None:
            violations.append({"certificate": "definite component is Einstein", "block": b.tag})

    nonzero_blocks = [b for b in rdec.blocks if b.tag != "E0"]
    shape = None
    if len(nonzero_blocks) == 1:
        eigen_block = nonzero_blocks[0].subspace
        together = rank_of(list(eigen_block.basis) + list(v0.basis), s.n)
        shape = {
            "eigen_block_dim": eigen_block.dim,
            "v0_dim": v0.dim,
            "splits_as_eigenspace_plus_v0": together == s.n == eigen_block.dim + v0.dim,
        }

    e0_block = rdec.block("E0")
    e0_basis = list(e0_block.subspace.basis) if e0_block else []
    overlap = make_subspace(s, intersect(list(v0.basis), list(v1.subspace.basis), s.n)) if v1 else None
    square = operator_square(Kt)
    square_on_e0 = all(
        is_zero(square * wedge_coords(e0_basis[i], e0_basis[j]))
        for i in range(len(e0_basis))
        for j in range(i + 1, len(e0_basis))
    )
    endos = [A for _, A in basis_endomorphisms(Kt)]
    compositions_vanish = all(is_zero(Matrix(A) * Matrix(B)) for A in endos for B in endos)
    degenerate_case = overlap is not None and overlap.dim > 0 and overlap.is_totally_isotropic
    if degenerate_case and not square_on_e0:
        violations.append({"certificate": "K∘K = 0 on Λ²E0 when V0 ∩ V1 is isotropic"})

    e0_definite = e0_block is None or _is_definite(e0_block.subspace)
    definite_e0 = None
    if e0_definite:
        same = rank_of(e0_basis, s.n) == v0.dim == rank_of(e0_basis + list(v0.basis), s.n)
        v1_constant = _einstein_constant_on(Ric, v1.subspace.basis) if v1 else None
        definite_e0 = {"v0_equals_e0": same, "v1_einstein": v1_constant is not None}
        if not same:
            violations.append({"certificate": "E0 definite implies V0 = E0"})
        if v1 is None:
            violations.append({"certificate": "E0 definite implies a Lorentzian component V1"})
        elif v1_constant is None:
            violations.append({"certificate": "E0 definite implies V1 is Einstein"})

    dual = pdec.block("V0'")
    dual_dim = dual.subspace.dim if dual else 0
    if case == "b" and dual_dim != 1:
        violations.append({"certificate": "isotropic-type Ricci has dim V0' = 1", "dim": dual_dim})

    if violations:
        logger.error("Lorentzian report found %d failed certificate(s)", len(violations))
    return {
        "case": case,
        "ricci_class": classify_ricci(rd).label(),
        "realness": realness,
        "all_real": all(r["real_roots"] == r["degree"] for r in realness),
        "components": component_report,
        "single_eigenvalue_shape": shape,
        "isotropic_overlap_dim": overlap.dim if degenerate_case else 0,
        "square": {
            "on_e0_bivectors": square_on_e0,
            "on_all_bivectors": is_zero(square),
            "compositions_vanish": compositions_vanish,
        },
        "definite_e0": definite_e0,
        "dual_dim": dual_dim,
        "leaf_shape": _leaf_shape(rd),
        "nonzero_eigenvalues": sum(f.degree() for f, _ in rd.factors if f != X_POLY),
        "observations": list(LORENTZIAN_OBSERVATIONS),
        "violations": violations,
    }


# === Symmetric-space Jacobi identity ===
_TRIPLE_TYPES = {0: "XYZ", 1: "AXY", 2: "ABX", 3: "ABC"}


def jacobi_check(Kt: CurvatureTensor) -> JacobiResult:
    """
    Jacobi identity on g = h̄(K) ⊕ V over every triple of distinct basis elements.

    XYZ triples hold iff first Bianchi holds; AXY triples hold iff every
    A in h̄(K) annihilates K.
    """
    span = h_span(Kt)
    closure = lie_closure(span)
    pair = SymmetricPair(h=closure, V=Kt.space, tensor=Kt)
    elements = pair.elements()
    by_type = {name: {"checked": 0, "failed": 0} for name in _TRIPLE_TYPES.values()}
    first_failure = None
    for i, j, k in itertools.combinations(range(len(elements)), 3):
        a, b, c = elements[i], elements[j], elements[k]
        kind = _TRIPLE_TYPES[sum(1 for e in (a, b, c) if e[0] == "A")]
        x, y, z = (a[1], a[2]), (b[1], b[2]), (c[1], c[2])
        total_endo = zeros(Kt.n, Kt.n)
        total_vec = zeros(Kt.n, 1)
        for p, q, r in ((x, y, z), (y, z, x), (z, x, y)):
            endo, vec = pair.bracket(p, pair.bracket(q, r))
            total_endo += endo
            total_vec += vec
        by_type[kind]["checked"] += 1
        if not (is_zero(total_endo) and is_zero(total_vec)):
            by_type[kind]["failed"] += 1
            if first_failure is None:
                first_failure = {"type": kind, "elements": [i, j, k]}
    holds = all(entry["failed"] == 0 for entry in by_type.values())
    return JacobiResult(
        holds=holds,
        by_type=by_type,
        closure_grew=closure.dim > span.dim,
        span_dim=span.dim,
        closure_dim=closure.dim,
        first_failure=first_failure,
    )


# === Everything at once ===
def analyze_instance(Kt: CurvatureTensor) -> Dict[str, Any]:
    """
    Run every applicable engine and collect verdicts and violations.

    Theorem engines that need semi-symmetry are only run when it holds;
    a TheoremViolation raised by one of them is recorded, not propagated.
    """
    s = Kt.space
    symmetries = check_symmetries(Kt)
    verdict = is_semisymmetric(Kt)
    rd = ricci(Kt)
    jacobi = jacobi_check(Kt)
    commutes = ricci_commutes(Kt, rd)
    violations: List[Dict[str, Any]] = []

    if not symmetries.ok:
        violations.append({"certificate": "Riemann symmetries", "witness": list(symmetries.witness)})
    if bool(verdict) != jacobi.holds or jacobi.by_type["XYZ"]["failed"]:
        violations.append({"certificate": "semi-symmetry iff Jacobi", "semisymmetric": bool(verdict), "jacobi": jacobi.holds})
    if verdict and not commutes:
        violations.append({"certificate": "Ricci commutes with every K(u,v)"})

    report: Dict[str, Any] = {
        "dimension": s.n,
        "signature": list(s.signature),
        "lorentzian": s.is_lorentzian,
        "symmetries_ok": symmetries.ok,
        "semisymmetry": verdict.to_dict(),
        "ricci": {
            "operator": fmt_matrix(rd.operator),
            "minpoly": fmt_poly(rd.minpoly),
            "factors": [{"factor": fmt_poly(f), "multiplicity": m} for f, m in rd.factors],
            "class": classify_ricci(rd).label(),
            "commutes_with_holonomy": commutes,
        },
        "jacobi": jacobi.to_dict(),
        "ricci_decomposition": None,
        "primitive_decomposition": None,
        "lorentzian_report": None,
    }
    if verdict:
        try:
            rdec = ricci_decomposition(Kt, rd)
            report["ricci_decomposition"] = rdec.to_dict()
            violations.extend(rdec.violations)
            pdec = primitive_decomposition(Kt)
            report["primitive_decomposition"] = pdec.to_dict()
            violations.extend(pdec.violations)
            if s.is_lorentzian:
                lor = lorentzian_report(Kt)
                report["lorentzian_report"] = lor
                violations.extend(v for v in lor["violations"] if v not in violations)
        except TheoremViolation as exc:
            violations.append({"certificate": type(exc).__name__, "message": str(exc)})
    report["holonomy_dim"] = report["jacobi"]["closure_dim"]
    report["violations"] = violations
    return report


__all__ = [
    "Block",
    "Decomposition",
    "JacobiResult",
    "SemisymmetryVerdict",
    "SymmetricPair",
    "analyze_instance",
    "dual_isotropic_basis",
    "fmt_matrix",
    "fmt_poly",
    "fmt_vector",
    "is_semisymmetric",
    "jacobi_check",
    "lorentzian_report",
    "primitive_decomposition",
    "ricci_commutes",
    "ricci_decomposition",
]
