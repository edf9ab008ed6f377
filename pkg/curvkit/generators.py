"""
Seeded instance generators.

Every random choice is drawn from SplitMix64, so a GeneratorSpec fully
determines its output. Semi-symmetric generators certify their output
before returning it.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from sympy import ImmutableMatrix, Matrix, Rational, diag, eye, zeros

from .analysis import is_semisymmetric
from .bivector import bivector_dim, induced_gram, pair_index, pairs, vee_operator, wedge_coords
from .curvature import CurvatureTensor, project_to_curvature, zero_tensor
from .errors import GaveUp, InputError, InternalInvariantError, NotIsometry, SpecInvalid
from .exactnum import format_rational, parse_rational
from .holonomy import act_group
from .space import MetricSpace, cayley_transform, make_space

logger = logging.getLogger(__name__)

MASK64 = (1 << 64) - 1
KINDS = ("constant", "product", "direct_sum", "isotropic", "random_semisym", "adversarial", "projected")
BLOCK_TYPES = ("flat", "constant", "isotropic")
MAX_ATTEMPTS = 1000


class SplitMix64:
    """
    SplitMix64: state += 0x9E3779B97F4A7C15, then
    z = (z ^ z>>30)·0xBF58476D1CE4E5B9, z = (z ^ z>>27)·0x94D049BB133111EB, z ^ z>>31.
    """

    def __init__(self, seed: int) -> None:
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        return self.next_u64() % bound

    def small_int(self, lo: int, hi: int) -> int:
        return lo + self.below(hi - lo + 1)

    def nonzero_int(self, bound: int) -> int:
        value = self.small_int(1, bound)
        return value if self.below(2) else -value

    def rational(self, bound: int = 3, max_den: int = 2) -> Rational:
        return Rational(self.small_int(-bound, bound), self.small_int(1, max_den))

    def choice(self, options: Sequence):
        return options[self.below(len(options))]


@dataclass(frozen=True)
class GeneratorSpec:
    seed: int
    kind: str
    params: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {"seed": self.seed, "kind": self.kind, "params": self.params}

    @classmethod
    def from_dict(cls, raw: Dict[str, Any]) -> "GeneratorSpec":
        if not isinstance(raw, dict):
            raise SpecInvalid("generator spec must be a JSON object")
        kind = raw.get("kind")
        if kind not in KINDS:
            raise SpecInvalid(f"unknown generator kind {kind!r}; expected one of {', '.join(KINDS)}")
        seed = raw.get("seed", 0)
        if not isinstance(seed, int) or isinstance(seed, bool) or not 0 <= seed <= MASK64:
            raise SpecInvalid(f"seed must be a 64-bit unsigned integer, got {seed!r}")
        params = raw.get("params") or {}
        if not isinstance(params, dict):
            raise SpecInvalid("params must be a JSON object")
        return cls(seed=seed, kind=kind, params=params)


@dataclass(frozen=True)
class AdversarialResult:
    tensor: CurvatureTensor
    seed: int
    witness: Optional[Tuple[int, int, int, int]]
    attempts: int


@dataclass(frozen=True)
class Generated:
    space: MetricSpace
    tensor: CurvatureTensor
    meta: Dict[str, Any]


# === Parameter helpers ===
def _rational_param(params: Dict[str, Any], key: str, default: str) -> Rational:
    raw = params.get(key, default)
    try:
        return parse_rational(str(raw))
    except InputError as exc:
        raise SpecInvalid(f"parameter {key!r}: {exc}") from exc


def _signature_param(params: Dict[str, Any], default: Tuple[int, int]) -> Tuple[int, int]:
    raw = params.get("signature", list(default))
    if (
        not isinstance(raw, (list, tuple))
        or len(raw) != 2
        or not all(isinstance(x, int) and x >= 0 for x in raw)
        or sum(raw) < 1
    ):
        raise SpecInvalid(f"signature must be [p, q] with p + q >= 1, got {raw!r}")
    return int(raw[0]), int(raw[1])


def signature_gram(p: int, q: int) -> ImmutableMatrix:
    return ImmutableMatrix(diag(*([1] * p + [-1] * q)))


# === Constructors ===
def constant_curvature(s: MetricSpace, lam) -> CurvatureTensor:
    """K = λ·Id on Λ²V."""
    N = bivector_dim(s.n)
    return CurvatureTensor(space=s, matrix=ImmutableMatrix(Rational(lam) * eye(N)))


def product_tensor(s: MetricSpace, quadruples: Sequence[Tuple[Any, Any, Any, Any, Any]]) -> CurvatureTensor:
    """Σ coeff·(a∧b)∨(c∧d), projected onto the Bianchi kernel."""
    N = bivector_dim(s.n)
    T = zeros(N, N)
    for a, b, c, d, coeff in quadruples:
        T += Rational(coeff) * Matrix(vee_operator(s, wedge_coords(a, b), wedge_coords(c, d)))
    return project_to_curvature(s, T)


def direct_sum(blocks: Sequence[Tuple[MetricSpace, CurvatureTensor]]) -> Tuple[MetricSpace, CurvatureTensor]:
    """Block-diagonal Gram and block-diagonal curvature with zero mixed components."""
    if not blocks:
        raise SpecInvalid("direct sum needs at least one block")
    if len(blocks) == 1:
        return blocks[0]
    space = make_space(diag(*[Matrix(s.G) for s, _ in blocks]))
    N = bivector_dim(space.n)
    K = zeros(N, N)
    idx = pair_index(space.n)
    offset = 0
    for s, Kt in blocks:
        local = pairs(s.n)
        for r, (i, j) in enumerate(local):
            for c, (k, l) in enumerate(local):
                K[idx[(offset + i, offset + j)], idx[(offset + k, offset + l)]] = Kt.matrix[r, c]
        offset += s.n
    return space, CurvatureTensor(space=space, matrix=ImmutableMatrix(K))


def isotropic_block(p: int, q: int, curvature) -> Tuple[MetricSpace, CurvatureTensor]:
    """
    c·(p∧x)∨(p∧x) on a space whose first two basis vectors are a hyperbolic pair.

    Raises:
        SpecInvalid: dimension below 3 or a definite signature
    """
    if p + q < 3 or p < 1 or q < 1:
        raise SpecInvalid(f"isotropic block needs an indefinite signature of dim >= 3, got ({p},{q})")
    G = diag(Matrix([[0, 1], [1, 0]]), *([1] * (p - 1) + [-1] * (q - 1)))
    s = make_space(G)
    e = eye(s.n)
    omega = wedge_coords(e[:, 0], e[:, 2])
    return s, CurvatureTensor(space=s, matrix=ImmutableMatrix(Rational(curvature) * vee_operator(s, omega, omega)))


def _block_from_params(raw: Dict[str, Any]) -> Tuple[MetricSpace, CurvatureTensor]:
    if not isinstance(raw, dict) or raw.get("type") not in BLOCK_TYPES:
        raise SpecInvalid(f"block must be an object with type in {BLOCK_TYPES}, got {raw!r}")
    p, q = _signature_param(raw, (2, 0))
    kind = raw["type"]
    if kind == "isotropic":
        return isotropic_block(p, q, _rational_param(raw, "curvature", "1"))
    s = make_space(signature_gram(p, q))
    if kind == "flat":
        return s, zero_tensor(s)
    return s, constant_curvature(s, _rational_param(raw, "curvature", "1"))


def random_isometry(s: MetricSpace, rng: SplitMix64) -> ImmutableMatrix:
    """Cayley transform of a random metric-skew S = W·G, W antisymmetric with entries in {-1, 0, 1}."""
    for _ in range(MAX_ATTEMPTS):
        W = zeros(s.n, s.n)
        for i, j in pairs(s.n):
            entry = Rational(rng.small_int(-1, 1), 2)
            W[i, j] = entry
            W[j, i] = -entry
        try:
            return cayley_transform(s, W * s.G)
        except NotIsometry:
            continue
    raise GaveUp(MAX_ATTEMPTS)


def _random_blocks(rng: SplitMix64) -> List[Dict[str, Any]]:
    plans = [
        [{"type": "flat", "signature": [1, 1]}, {"type": "constant", "signature": [2, 0]}],
        [{"type": "constant", "signature": [2, 1]}],
        [{"type": "isotropic", "signature": [2, 1]}],
        [{"type": "isotropic", "signature": [2, 1]}, {"type": "constant", "signature": [2, 0]}],
        [{"type": "constant", "signature": [2, 0]}, {"type": "constant", "signature": [1, 1]}],
        [{"type": "flat", "signature": [1, 0]}, {"type": "constant", "signature": [2, 1]}],
    ]
    blocks = [dict(b) for b in rng.choice(plans)]
    for b in blocks:
        if b["type"] != "flat":
            b["curvature"] = format_rational(rng.nonzero_int(3))
    return blocks


def random_semisymmetric(spec: GeneratorSpec) -> Tuple[MetricSpace, CurvatureTensor]:
    """
    Direct sum of flat, constant and isotropic blocks, conjugated by a seeded isometry.

    Raises:
        SpecInvalid: wrong kind or an impossible block
    """
    if spec.kind != "random_semisym":
        raise SpecInvalid(f"random_semisymmetric needs kind random_semisym, got {spec.kind}")
    rng = SplitMix64(spec.seed)
    raw_blocks = spec.params.get("blocks") or _random_blocks(rng)
    if not isinstance(raw_blocks, list):
        raise SpecInvalid("blocks must be a list")
    s, Kt = direct_sum([_block_from_params(b) for b in raw_blocks])
    if spec.params.get("conjugate", True):
        Kt = act_group(random_isometry(s, rng), Kt)
    if not is_semisymmetric(Kt):
        raise InternalInvariantError("generated block sum is not semi-symmetric")
    return s, Kt


def random_projected(s: MetricSpace, rng: SplitMix64) -> CurvatureTensor:
    """Random self-adjoint operator on Λ²V projected to the Bianchi kernel."""
    N = bivector_dim(s.n)
    S = zeros(N, N)
    for i in range(N):
        for j in range(i, N):
            S[i, j] = S[j, i] = rng.rational()
    return project_to_curvature(s, induced_gram(s).inv() * S)


def _random_vector(s: MetricSpace, rng: SplitMix64) -> ImmutableMatrix:
    return ImmutableMatrix([rng.small_int(-2, 2) for _ in range(s.n)])


def adversarial_perturbation(Kt: CurvatureTensor, spec: GeneratorSpec) -> AdversarialResult:
    """
    Add ε·project((a∧b)∨(c∧d)) with seeded a, b, c, d until semi-symmetry fails.

    Attempt k draws from seed spec.seed + k. ε = 0 returns the input unchanged.

    Raises:
        GaveUp: no failing perturbation within MAX_ATTEMPTS seeds
    """
    epsilon = _rational_param(spec.params, "epsilon", "1")
    if epsilon == 0:
        return AdversarialResult(tensor=Kt, seed=spec.seed, witness=None, attempts=0)
    s = Kt.space
    for attempt in range(MAX_ATTEMPTS):
        seed = (spec.seed + attempt) & MASK64
        rng = SplitMix64(seed)
        a, b, c, d = (_random_vector(s, rng) for _ in range(4))
        term = product_tensor(s, [(a, b, c, d, 1)])
        candidate = CurvatureTensor(space=s, matrix=ImmutableMatrix(Kt.matrix + epsilon * term.matrix))
        verdict = is_semisymmetric(candidate)
        if not verdict:
            logger.debug("adversarial perturbation found after %d attempt(s), seed %d", attempt + 1, seed)
            return AdversarialResult(tensor=candidate, seed=seed, witness=verdict.witness, attempts=attempt + 1)
    logger.warning("adversarial search exhausted %d seeds", MAX_ATTEMPTS)
    raise GaveUp(MAX_ATTEMPTS)


# === Dispatcher ===
def _quadruples_param(s: MetricSpace, params: Dict[str, Any], rng: SplitMix64) -> List[Tuple]:
    raw = params.get("quadruples")
    if raw is None:
        terms = int(params.get("terms", 1))
        return [tuple(_random_vector(s, rng) for _ in range(4)) + (1,) for _ in range(terms)]
    quads = []
    for entry in raw:
        if not isinstance(entry, list) or len(entry) != 5:
            raise SpecInvalid("each quadruple is [a, b, c, d, coeff]")
        vectors = []
        for vec in entry[:4]:
            if not isinstance(vec, list) or len(vec) != s.n:
                raise SpecInvalid(f"quadruple vectors need {s.n} entries")
            vectors.append(ImmutableMatrix([parse_rational(str(x)) for x in vec]))
        quads.append(tuple(vectors) + (parse_rational(str(entry[4])),))
    return quads


def _blocks_dimension(raw_blocks: Any) -> int:
    if not isinstance(raw_blocks, list) or not raw_blocks:
        raise SpecInvalid("blocks must be a non-empty list")
    total = 0
    for raw in raw_blocks:
        if not isinstance(raw, dict):
            raise SpecInvalid(f"block must be an object, got {raw!r}")
        total += sum(_signature_param(raw, (2, 0)))
    return total


def spec_dimension(spec: GeneratorSpec) -> int:
    """Dimension of the instance generate(spec) builds, read off the spec without building it."""
    params = spec.params
    if spec.kind in ("constant", "projected"):
        return sum(_signature_param(params, (3, 0)))
    if spec.kind == "product":
        return sum(_signature_param(params, (4, 0)))
    if spec.kind == "isotropic":
        return sum(_signature_param(params, (2, 1)))
    if spec.kind == "direct_sum":
        return _blocks_dimension(params.get("blocks"))
    if spec.kind == "random_semisym":
        return _blocks_dimension(params.get("blocks") or _random_blocks(SplitMix64(spec.seed)))
    if spec.kind == "adversarial":
        base = params.get("base") or {"kind": "constant", "seed": spec.seed, "params": {"signature": [3, 0]}}
        base_spec = GeneratorSpec.from_dict(base)
        if base_spec.kind == "adversarial":
            raise SpecInvalid("adversarial base cannot itself be adversarial")
        return spec_dimension(base_spec)
    raise SpecInvalid(f"unknown generator kind {spec.kind!r}")


def generate(spec: GeneratorSpec) -> Generated:
    """Build the instance a spec describes."""
    rng = SplitMix64(spec.seed)
    params = spec.params
    meta: Dict[str, Any] = {"name": spec.kind, "generator_spec": spec.to_dict()}

    if spec.kind == "constant":
        s = make_space(signature_gram(*_signature_param(params, (3, 0))))
        Kt = constant_curvature(s, _rational_param(params, "curvature", "1"))
    elif spec.kind == "product":
        s = make_space(signature_gram(*_signature_param(params, (4, 0))))
        Kt = product_tensor(s, _quadruples_param(s, params, rng))
    elif spec.kind == "direct_sum":
        raw_blocks = params.get("blocks")
        if not isinstance(raw_blocks, list) or not raw_blocks:
            raise SpecInvalid("direct_sum needs a non-empty blocks list")
        s, Kt = direct_sum([_block_from_params(b) for b in raw_blocks])
    elif spec.kind == "isotropic":
        p, q = _signature_param(params, (2, 1))
        s, Kt = isotropic_block(p, q, _rational_param(params, "curvature", "1"))
    elif spec.kind == "random_semisym":
        s, Kt = random_semisymmetric(spec)
    elif spec.kind == "projected":
        s = make_space(signature_gram(*_signature_param(params, (3, 0))))
        Kt = random_projected(s, rng)
    elif spec.kind == "adversarial":
        base = GeneratorSpec.from_dict(params.get("base") or {"kind": "constant", "seed": spec.seed, "params": {"signature": [3, 0]}})
        if base.kind == "adversarial":
            raise SpecInvalid("adversarial base cannot itself be adversarial")
        origin = generate(base)
        result = adversarial_perturbation(origin.tensor, spec)
        s, Kt = origin.space, result.tensor
        meta["adversarial"] = {
            "seed": result.seed,
            "attempts": result.attempts,
            "witness": list(result.witness) if result.witness else None,
        }
    else:
        raise SpecInvalid(f"unknown generator kind {spec.kind!r}")
    return Generated(space=s, tensor=Kt, meta=meta)


def suite_specs(seed: int, count: int) -> List[GeneratorSpec]:
    """Deterministic suite plan cycling over kinds and signatures."""
    rng = SplitMix64(seed)
    plan = []
    for index in range(count):
        sub_seed = rng.next_u64()
        slot = index % 6
        if slot == 0:
            sig = [[3, 0], [2, 1], [1, 2], [3, 1]][(index // 6) % 4]
            plan.append(GeneratorSpec(sub_seed, "constant", {"signature": sig, "curvature": format_rational(rng.nonzero_int(3))}))
        elif slot == 1:
            plan.append(GeneratorSpec(sub_seed, "random_semisym", {}))
        elif slot == 2:
            sig = [[2, 1], [3, 1], [1, 2]][(index // 6) % 3]
            plan.append(GeneratorSpec(sub_seed, "isotropic", {"signature": sig, "curvature": format_rational(rng.nonzero_int(3))}))
        elif slot == 3:
            sig = [[2, 0], [1, 1], [0, 2]][(index // 6) % 3]
            plan.append(GeneratorSpec(sub_seed, "projected", {"signature": sig}))
        elif slot == 4:
            plan.append(GeneratorSpec(sub_seed, "direct_sum", {"blocks": [
                {"type": "flat", "signature": [1, 1]},
                {"type": "constant", "signature": [2, 0], "curvature": format_rational(rng.nonzero_int(3))},
            ]}))
        else:
            plan.append(GeneratorSpec(sub_seed, "adversarial", {
                "base": {"kind": "constant", "seed": sub_seed, "params": {"signature": [3, 0]}},
            }))
    return plan


__all__ = [
    "AdversarialResult",
    "GeneratorSpec",
    "Generated",
    "KINDS",
    "SplitMix64",
    "adversarial_perturbation",
    "constant_curvature",
    "direct_sum",
    "generate",
    "isotropic_block",
    "product_tensor",
    "random_isometry",
    "random_projected",
    "random_semisymmetric",
    "signature_gram",
    "spec_dimension",
    "suite_specs",
]
