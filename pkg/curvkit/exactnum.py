"""
Exact scalars, polynomials and the small kit of rational linear algebra
that every other module builds on.

Nothing in here ever touches a float: scalars are sympy Rationals,
matrices carry Rational entries, polynomials live in QQ[X].
"""
from __future__ import annotations

import re
from typing import Iterable, List, Optional, Sequence, Tuple

from sympy import ImmutableMatrix, Matrix, Poly, QQ, Rational, Symbol, eye, zeros

from .errors import InputError, InternalInvariantError, NonSquarefreeInput, ParseError

X = Symbol("X")

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


# === Scalars ===
def parse_rational(text: str) -> Rational:
    """
    Parse an exact rational written as "p/q" or "p".

    Args:
        text: Rational literal; decimal points and exponents are rejected

    Returns:
        Reduced sympy Rational
    """
    match = _RATIONAL_RE.match(text)
    if not match:
        raise ParseError(f"not an exact rational: {text!r}")
    numerator = int(match.group(1))
    denominator = int(match.group(2)) if match.group(2) is not None else 1
    if denominator == 0:
        raise ParseError(f"zero denominator in {text!r}")
    return Rational(numerator, denominator)


def format_rational(value) -> str:
    q = Rational(value)
    if q.q == 1:
        return str(q.p)
    return f"{q.p}/{q.q}"


# === Matrices ===
def as_matrix(rows: Sequence[Sequence]) -> ImmutableMatrix:
    return ImmutableMatrix([[Rational(x) for x in row] for row in rows])


def is_zero(M) -> bool:
    return all(entry == 0 for entry in M)


def column(values: Iterable) -> ImmutableMatrix:
    entries = [Rational(v) for v in values]
    return ImmutableMatrix(len(entries), 1, entries)


def hstack(vectors: Sequence, rows: int) -> Matrix:
    if not vectors:
        return zeros(rows, 0)
    return Matrix.hstack(*vectors)


def rank_of(vectors: Sequence, rows: int) -> int:
    if not vectors:
        return 0
    return hstack(vectors, rows).rank()


def column_basis(vectors: Sequence, rows: int) -> List[ImmutableMatrix]:
    """Independent subfamily of `vectors`, first occurrences kept, order preserved."""
    if not vectors:
        return []
    _, pivots = hstack(vectors, rows).rref()
    return [ImmutableMatrix(vectors[i]) for i in pivots]


def nullspace_basis(M) -> List[ImmutableMatrix]:
    """Basis of {x : M x = 0} as column vectors."""
    M = Matrix(M)
    if M.rows == 0:
        return [ImmutableMatrix(eye(M.cols)[:, i]) for i in range(M.cols)]
    return [ImmutableMatrix(v) for v in M.nullspace()]


def span_contains(basis: Sequence, v, rows: int) -> bool:
    if not basis:
        return is_zero(v)
    return rank_of(list(basis) + [v], rows) == rank_of(basis, rows)


def intersect(first: Sequence, second: Sequence, rows: int) -> List[ImmutableMatrix]:
    """Basis of span(first) ∩ span(second); both inputs must be independent."""
    if not first or not second:
        return []
    system = Matrix.hstack(hstack(first, rows), -hstack(second, rows))
    A = hstack(first, rows)
    found = [ImmutableMatrix(A * c[: len(first), :]) for c in nullspace_basis(system)]
    return column_basis(found, rows)


def coordinates(basis: Sequence, v, rows: int) -> ImmutableMatrix:
    """Coordinates of v in an independent basis; raises InputError if v is outside the span."""
    if not basis:
        if is_zero(v):
            return ImmutableMatrix(zeros(0, 1))
        raise InputError("vector is not in the span")
    try:
        solution, params = hstack(basis, rows).gauss_jordan_solve(Matrix(v))
    except ValueError as exc:
        raise InputError("vector is not in the span") from exc
    if params.rows:
        solution = solution.subs({p: 0 for p in params})
    return ImmutableMatrix(solution)


def restricted_gram(G, basis: Sequence) -> ImmutableMatrix:
    B = hstack(basis, G.rows)
    return ImmutableMatrix(B.T * G * B)


def orthogonal_complement_within(G, ambient: Sequence, sub: Sequence) -> List[ImmutableMatrix]:
    """Basis of {w ∈ span(ambient) : ⟨u, w⟩ = 0 for all u ∈ sub}."""
    rows = G.rows
    if not ambient:
        return []
    if not sub:
        return [ImmutableMatrix(a) for a in ambient]
    W = hstack(ambient, rows)
    constraints = hstack(sub, rows).T * G * W
    return column_basis([ImmutableMatrix(W * c) for c in nullspace_basis(constraints)], rows)


def congruence_diagonal(G) -> List[Rational]:
    """
    Diagonal entries of an exact symmetric congruence reduction of G.

    Pivots on a nonzero diagonal entry when one exists; otherwise a nonzero
    off-diagonal entry A[i, j] is folded into the diagonal by the congruence
    e_i -> e_i + e_j, which leaves 2·A[i, j] on the diagonal.
    """
    A = Matrix(G)
    diagonal: List[Rational] = []
    while A.rows > 0:
        size = A.rows
        pivot = next((i for i in range(size) if A[i, i] != 0), None)
        if pivot is None:
            pair = next(
                ((i, j) for i in range(size) for j in range(i + 1, size) if A[i, j] != 0),
                None,
            )
            if pair is None:
                diagonal.extend([Rational(0)] * size)
                break
            i, j = pair
            E = eye(size)
            E[j, i] = 1
            A = E.T * A * E
            pivot = i
        if pivot != 0:
            P = eye(size)
            P.row_swap(0, pivot)
            A = P * A * P
        d = A[0, 0]
        diagonal.append(Rational(d))
        if size == 1:
            break
        rest = A[1:, 1:]
        col = A[1:, 0]
        A = rest - col * col.T / d
    return diagonal


def inertia(G) -> Tuple[int, int, int]:
    """(positive, negative, zero) counts of the congruence diagonal."""
    diagonal = congruence_diagonal(G)
    return (
        sum(1 for d in diagonal if d > 0),
        sum(1 for d in diagonal if d < 0),
        sum(1 for d in diagonal if d == 0),
    )


# === Polynomials ===
def make_poly(coefficients_low_first: Sequence) -> Poly:
    coeffs = [Rational(c) for c in reversed(list(coefficients_low_first))]
    return Poly(coeffs or [0], X, domain=QQ)


def poly_at_matrix(p: Poly, M) -> ImmutableMatrix:
    """Horner evaluation of p at a square matrix."""
    n = M.rows
    result = zeros(n, n)
    identity = eye(n)
    for c in p.all_coeffs():
        result = result * M + Rational(c) * identity
    return ImmutableMatrix(result)


def minimal_polynomial(M) -> Poly:
    """
    Monic minimal polynomial of a square rational matrix.

    The first power M^k whose flattening lies in the span of
    I, M, ..., M^{k-1} gives the annihilator of least degree. The result is
    then re-checked: p(M) = 0 and p/f fails to annihilate M for every
    irreducible factor f of p.
    """
    M = Matrix(M)
    n = M.rows
    if n == 0:
        return Poly(1, X, domain=QQ)
    flat = [eye(n).reshape(n * n, 1)]
    power = eye(n)
    p: Optional[Poly] = None
    for k in range(1, n + 1):
        power = power * M
        target = power.reshape(n * n, 1)
        try:
            solution, params = Matrix.hstack(*flat).gauss_jordan_solve(target)
        except ValueError:
            flat.append(target)
            continue
        if params.rows:
            solution = solution.subs({t: 0 for t in params})
        p = make_poly([-c for c in solution] + [1])
        break
    if p is None:
        raise InternalInvariantError("Krylov search exceeded the matrix size")

    if not is_zero(poly_at_matrix(p, M)):
        raise InternalInvariantError(f"minimal polynomial {p.as_expr()} does not annihilate")
    for factor, _ in squarefree_rational_factors(p):
        if is_zero(poly_at_matrix(p.quo(factor), M)):
            raise InternalInvariantError(f"{p.as_expr()} is not minimal: {factor.as_expr()} can be dropped")
    return p


def squarefree_rational_factors(p: Poly) -> List[Tuple[Poly, int]]:
    """
    Monic irreducible factors of p over Q with multiplicities.

    Irreducible factors are squarefree and pairwise coprime, and rational
    roots come out as linear factors. Ordered by degree, then coefficients.
    """
    p = Poly(p, X, domain=QQ)
    if p.is_zero:
        raise InputError("cannot factor the zero polynomial")
    _, factors = p.factor_list()
    monic = [(Poly(f, X, domain=QQ).monic(), int(m)) for f, m in factors]
    return sorted(monic, key=lambda item: (item[0].degree(), tuple(Rational(c) for c in item[0].all_coeffs())))


def _sign_changes(values: Iterable) -> int:
    signs = [1 if v > 0 else -1 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _chain_signs_at(chain: Sequence[Poly], point: Optional[Rational], at_minus_infinity: bool) -> List:
    if point is not None:
        return [q.eval(point) for q in chain]
    values = []
    for q in chain:
        lc = q.LC()
        values.append(-lc if at_minus_infinity and q.degree() % 2 else lc)
    return values


def sturm_real_root_count(p: Poly, lower: Optional[Rational] = None, upper: Optional[Rational] = None) -> int:
    """
    Exact number of distinct real roots of p in the open interval (lower, upper).

    Args:
        p: Squarefree polynomial over Q
        lower: Left endpoint, None for -infinity
        upper: Right endpoint, None for +infinity

    Returns:
        Root count from the sign variations of the Sturm chain
    """
    p = Poly(p, X, domain=QQ)
    if p.is_zero:
        raise NonSquarefreeInput("zero polynomial has no Sturm chain")
    if p.degree() <= 0:
        return 0
    if p.gcd(p.diff(X)).degree() > 0:
        raise NonSquarefreeInput(f"{p.as_expr()} shares a factor with its derivative")
    lo = Rational(lower) if lower is not None else None
    hi = Rational(upper) if upper is not None else None
    if lo is not None and hi is not None and lo >= hi:
        return 0

    chain = p.sturm()
    v_lo = _sign_changes(_chain_signs_at(chain, lo, at_minus_infinity=True))
    v_hi = _sign_changes(_chain_signs_at(chain, hi, at_minus_infinity=False))
    # V(lo) - V(hi) counts roots in (lo, hi]
    count = v_lo - v_hi
    if hi is not None and p.eval(hi) == 0:
        count -= 1
    return count


def all_roots_real(p: Poly) -> bool:
    square_free = Poly(p, X, domain=QQ).sqf_part()
    if square_free.degree() <= 0:
        return True
    return sturm_real_root_count(square_free) == square_free.degree()


__all__ = [
    "X",
    "all_roots_real",
    "as_matrix",
    "column",
    "column_basis",
    "congruence_diagonal",
    "coordinates",
    "format_rational",
    "hstack",
    "inertia",
    "intersect",
    "is_zero",
    "make_poly",
    "minimal_polynomial",
    "nullspace_basis",
    "orthogonal_complement_within",
    "parse_rational",
    "poly_at_matrix",
    "rank_of",
    "restricted_gram",
    "span_contains",
    "squarefree_rational_factors",
    "sturm_real_root_count",
]
