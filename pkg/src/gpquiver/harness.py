"""Seeded random modules and the agreement experiments behind each theorem.

Randomness comes from numpy's PCG64; every sample draws from its own child of
``SeedSequence(seed)``, so reports do not depend on evaluation order.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import __version__
from .algebra import (
    BasedAlgebra,
    PathPresentation,
    commutative_square_presentation,
    cyclic_presentation,
    dual_numbers_presentation,
    enveloping,
    from_presentation,
    kA2_presentation,
    kA3_relation_presentation,
    tensor,
)
from .exactla import ExactMatrix, FieldSpec, hstack, image_basis, kernel_basis, kron
from .fileio import dumps, module_to_dict, read_presentation
from .gptest import (
    NO,
    UNKNOWN,
    YES,
    HypothesisError,
    GpVerdict,
    gp_direct,
    gp_propB,
    gp_quiver,
    gp_selfinj,
    gp_thm_condition2,
    gp_thm_condition3,
    lemma22_check,
    lemma32_check,
)
from .homology import (
    DEFAULT_CAP,
    ext_dims,
    global_dim,
    is_gorenstein,
    is_self_injective,
    minimal_resolution,
    projective_cover,
)
from .modules import (
    Module,
    ModuleHom,
    bimodule_dual,
    direct_sum,
    dual,
    evaluation_iso_check,
    hom_basis,
    kernel,
    lambda_dual,
    outer,
    projective,
    projective_sum,
    quotient,
    regular_module,
    restrict_to_A,
    tensor_over_B,
)
from .periodic import bimodule_module, lemma51_check, prop53_check

PRNG = "numpy.random.PCG64 seeded by SeedSequence(seed).spawn(samples)"

THEOREMS = (
    "thm34", "prop42", "cor35", "lemma22", "lemma32", "lemma51", "prop53",
    "lemma21_dims", "lemma31_dims", "gp2_closure", "gp3_duality",
)

_FAMILIES: Dict[str, Callable[[FieldSpec], PathPresentation]] = {
    "kA2": kA2_presentation,
    "kA3_with_relation": kA3_relation_presentation,
    "dual_numbers": dual_numbers_presentation,
    "square_with_commutativity": commutative_square_presentation,
}

DEFAULT_FAMILIES = {
    "thm34": "dual_numbers*kA2",
    "prop42": "dual_numbers*kA2",
    "cor35": "kA2*Bn:2",
    "lemma22": "dual_numbers",
    "lemma32": "dual_numbers*kA2",
    "lemma51": "kA2*Bn:2",
    "prop53": "dual_numbers,kA2,Bn:2,Bn:3",
    "lemma21_dims": "dual_numbers*kA2",
    "lemma31_dims": "dual_numbers*kA2",
    "gp2_closure": "dual_numbers*kA2",
    "gp3_duality": "dual_numbers*kA2",
}


def family_presentation(name: str, field: FieldSpec) -> PathPresentation:
    """Presentation of a named family: a shipped name, ``Bn:<n>`` or ``custom:<path>``."""
    if name in _FAMILIES:
        return _FAMILIES[name](field)
    if name.startswith("Bn:"):
        return cyclic_presentation(int(name[3:]), field)
    if name.startswith("custom:"):
        p = read_presentation(name[len("custom:"):])
        if p.field != field:
            p = PathPresentation(p.quiver, p.relations, field)
        return p
    raise ValueError(f"unknown algebra family {name!r}")


_alg_memo: Dict[Tuple[str, FieldSpec], BasedAlgebra] = {}


def family_algebra(name: str, field: FieldSpec) -> BasedAlgebra:
    key = (name, field)
    if key not in _alg_memo:
        if "*" in name:
            a, b = name.split("*", 1)
            _alg_memo[key] = tensor(family_algebra(a, field), family_algebra(b, field))
        else:
            _alg_memo[key] = from_presentation(family_presentation(name, field))
    return _alg_memo[key]


@dataclass(frozen=True)
class GenSpec:
    """Experiment parameters. ``family`` None picks the theorem's default."""

    family: Optional[str] = None
    dim_cap: int = 12
    samples: int = 200
    seed: int = 0
    field: str = "Fp:101"
    bound: int = DEFAULT_CAP
    degrees: int = 6

    def __post_init__(self):
        if self.dim_cap < 1 or self.samples < 1:
            raise ValueError("dim_cap and samples must be positive")


@dataclass
class AgreementReport:
    theorem: str
    family: str
    field: str
    seed: int
    prng: str
    caps: Dict[str, int]
    hypotheses: Dict[str, object]
    rows: List[dict]
    disagreements: List[dict] = field(default_factory=list)
    version: str = __version__

    @property
    def totals(self) -> Dict[str, int]:
        agree = sum(1 for r in self.rows if r["agree"] is True)
        disagree = sum(1 for r in self.rows if r["agree"] is False)
        return {
            "samples": len(self.rows),
            "agree": agree,
            "disagree": disagree,
            "inconclusive": len(self.rows) - agree - disagree,
        }

    @property
    def passed(self) -> bool:
        t = self.totals
        return t["disagree"] == 0 and t["inconclusive"] == 0

    def to_json(self) -> dict:
        d = asdict(self)
        d["totals"] = self.totals
        return d

    def dumps(self) -> str:
        return dumps(self.to_json())

    @classmethod
    def from_json(cls, data: dict) -> "AgreementReport":
        data = dict(data)
        data.pop("totals", None)
        return cls(**data)


# random generation


def _coeff(F: FieldSpec, v: int):
    return F.scalar(int(v))


def random_vector(F: FieldSpec, n: int, rng: np.random.Generator, lo: int = -2, hi: int = 2) -> np.ndarray:
    return F.array([_coeff(F, v) for v in rng.integers(lo, hi + 1, size=n)]) if n else F.zeros((0,))


def random_module(alg: BasedAlgebra, dim_cap: int, rng: np.random.Generator, max_summands: int = 3) -> Module:
    """Cokernel of a random map ``Q1 -> Q0`` of sums of indecomposable projectives with ``dim Q0 <= dim_cap``."""
    F = alg.field
    nv = alg.vertex_count
    dims = [projective(alg, t).dim for t in range(nv)]
    q0: List[int] = []
    total = 0
    for _ in range(int(rng.integers(1, max_summands + 1))):
        t = int(rng.integers(nv))
        if total + dims[t] <= dim_cap:
            q0.append(t)
            total += dims[t]
    if not q0:
        q0 = [int(np.argmin(dims))]
    P0 = projective_sum(alg, q0)
    q1 = [int(rng.integers(nv)) for _ in range(int(rng.integers(0, max_summands + 1)))]
    rad = set(alg.radical)
    basis = [b for t in q0 for b in projective(alg, t)._cache["basis_elements"]]
    cols = []
    for t in q1:
        idx = P0.vertex_indices(t)
        if rng.integers(4):
            # relations inside the radical keep the presentation minimal more often
            idx = [i for i in idx if basis[i] in rad]
        if not idx:
            continue
        v = F.zeros((P0.dim,))
        v[idx] = random_vector(F, len(idx), rng)
        vec = ExactMatrix(F, v.reshape(-1, 1))
        for b in projective(alg, t)._cache["basis_elements"]:
            cols.append(P0.rho(b) @ vec)
    if not cols:
        return P0
    span = image_basis(hstack(F, cols, P0.dim))
    if span.cols == 0:
        return P0
    return quotient(P0, span)[0]


def random_hom(m: Module, n: Module, rng: np.random.Generator) -> ModuleHom:
    F = m.field
    H = hom_basis(m, n)
    acc = ExactMatrix.zeros(F, n.dim, m.dim)
    for h, c in zip(H, rng.integers(-2, 3, size=len(H))):
        if c:
            acc = acc + h.matrix.scale(_coeff(F, c))
    return ModuleHom(m, n, acc)


def random_gp_module(alg: BasedAlgebra, dim_cap: int, rng: np.random.Generator, bound: int, tries: int = 8) -> Module:
    """A module certified GP: a random module if it passes, else a high syzygy of one, else a projective."""
    gor = is_gorenstein(alg, bound)
    depth = max(gor.left_idim.value, gor.right_idim.value) if gor.gorenstein else None
    for _ in range(tries):
        m = random_module(alg, dim_cap, rng)
        if gp_direct(alg, m, bound).is_yes:
            return m
        if depth:
            # over a Gorenstein algebra the syzygies beyond the injective dimension are GP
            syz = _syzygy(m, depth)
            if 0 < syz.dim <= dim_cap and gp_direct(alg, syz, bound).is_yes:
                return syz
    return projective(alg, int(rng.integers(alg.vertex_count)))


def _syzygy(m: Module, d: int) -> Module:
    """``Omega^d m``, the image of ``P_d -> P_{d-1}`` (or ``m`` itself for ``d = 0``)."""
    if d == 0:
        return m
    res = minimal_resolution(m, d)
    if d >= len(res.terms):
        return projective_sum(m.algebra, [])
    eps = res.augmentation if d == 1 else res.differentials[d - 2]
    return kernel(eps)[0]


# per-theorem samplers


def _verdict_row(verdicts: Dict[str, GpVerdict], extra_ok: bool = True) -> Tuple[Optional[bool], Dict[str, str]]:
    outs = {k: v.outcome for k, v in verdicts.items()}
    if any(o == UNKNOWN for o in outs.values()):
        return None, outs
    return (len(set(outs.values())) == 1 and extra_ok), outs


def _split(name: str, field: FieldSpec):
    if "*" not in name:
        raise ValueError(f"family {name!r} must be a tensor pair 'A*B'")
    a, b = name.split("*", 1)
    return family_algebra(a, field), family_algebra(b, field), family_presentation(b, field)


def _certify(hyp: Dict[str, object], label: str, alg: BasedAlgebra, bound: int, need: str) -> None:
    if need == "gorenstein":
        g = is_gorenstein(alg, bound)
        hyp[f"{label} Gorenstein"] = [g.left_idim.to_json(), g.right_idim.to_json()]
        if not g.gorenstein:
            raise HypothesisError(f"{label} not certified Gorenstein at cap {bound}")
    elif need == "gldim":
        gd = global_dim(alg, bound)
        hyp[f"{label} gldim"] = gd.to_json()
        if not gd.finite:
            raise HypothesisError(f"gldim {label} not finite within cap {bound}")
    elif need == "selfinj":
        s = is_self_injective(alg)
        hyp[f"{label} self-injective"] = s
        if not s:
            raise HypothesisError(f"{label} not self-injective")


def _run_thm34(spec, F, rngs, hyp):
    A, B, _ = _split(spec.family, F)
    T = family_algebra(spec.family, F)
    for lab, alg in (("A", A), ("B", B), ("A⊗B", T)):
        _certify(hyp, lab, alg, spec.bound, "gorenstein")
    for rng in rngs:
        x = random_module(T, spec.dim_cap, rng)
        vs = {
            "direct": gp_direct(T, x, spec.bound),
            "thm2": gp_thm_condition2(A, B, x, spec.bound),
            "thm3": gp_thm_condition3(A, B, x, spec.bound),
        }
        agree, outs = _verdict_row(vs)
        yield x, outs, agree


def _run_prop42(spec, F, rngs, hyp):
    A, B, Bpres = _split(spec.family, F)
    T = family_algebra(spec.family, F)
    _certify(hyp, "B", B, spec.bound, "gldim")
    _certify(hyp, "A⊗B", T, spec.bound, "gorenstein")
    for rng in rngs:
        x = random_module(T, spec.dim_cap, rng)
        q = gp_quiver(A, Bpres, x, spec.bound)
        iso = bool(q.checks.get("cokernel_iso"))
        vs = {"direct": gp_direct(T, x, spec.bound), "propB": gp_propB(A, B, x, spec.bound), "quiver": q}
        agree, outs = _verdict_row(vs, iso)
        outs["cokernel_iso"] = iso
        yield x, outs, agree


def _run_cor35(spec, F, rngs, hyp):
    A, B, _ = _split(spec.family, F)
    T = family_algebra(spec.family, F)
    _certify(hyp, "B", B, spec.bound, "selfinj")
    _certify(hyp, "A⊗B", T, spec.bound, "gorenstein")
    for rng in rngs:
        x = random_module(T, spec.dim_cap, rng)
        vs = {"direct": gp_direct(T, x, spec.bound), "selfinj": gp_selfinj(A, B, x, spec.bound)}
        agree, outs = _verdict_row(vs)
        yield x, outs, agree


def _sequence(alg: BasedAlgebra, spec, rng) -> List[ModuleHom]:
    """A random two- or three-term sequence of certified GP modules."""
    kind = int(rng.integers(4))
    cap = max(1, spec.dim_cap // 2)
    if kind == 0:
        # truncated resolution of a GP module: exact with GP cokernel
        n = random_gp_module(alg, cap, rng, spec.bound)
        res = minimal_resolution(n, 2)
        maps = list(res.differentials[:2])
        if maps:
            return maps[: 1 + int(rng.integers(len(maps)))]
    if kind == 1:
        # 0 -> Omega N -> P(N): exact, cokernel N
        n = random_gp_module(alg, cap, rng, spec.bound)
        res = minimal_resolution(n, 1)
        syz, incl = kernel(res.augmentation)
        if syz.dim:
            return [ModuleHom(syz, res.terms[0], incl)]
    m0 = random_gp_module(alg, cap, rng, spec.bound)
    m1 = random_gp_module(alg, cap, rng, spec.bound)
    d1 = random_hom(m1, m0, rng)
    if kind == 3:
        m2 = random_gp_module(alg, cap, rng, spec.bound)
        d2 = _random_hom_killed_by(m2, m1, d1, rng)
        return [d1, d2]
    return [d1]


def _random_hom_killed_by(m2: Module, m1: Module, d1: ModuleHom, rng) -> ModuleHom:
    """Random ``d2: m2 -> m1`` with ``d1 d2 = 0``."""
    F = m1.field
    H = hom_basis(m2, m1)
    if not H:
        return ModuleHom(m2, m1, ExactMatrix.zeros(F, m1.dim, m2.dim))
    if d1.target.dim == 0 or m2.dim == 0:
        return random_hom(m2, m1, rng)
    system = ExactMatrix(F, np.stack([(d1.matrix @ h.matrix).a.reshape(-1) for h in H], axis=1))
    K = kernel_basis(system)
    acc = ExactMatrix.zeros(F, m1.dim, m2.dim)
    for k in range(K.cols):
        c = _coeff(F, rng.integers(-2, 3))
        for j, h in enumerate(H):
            if K.a[j, k]:
                acc = acc + h.matrix.scale(F.reduce(np.array([K.a[j, k] * c]))[0])
    return ModuleHom(m2, m1, acc)


def _run_lemma22(spec, F, rngs, hyp):
    alg = family_algebra(spec.family, F)
    _certify(hyp, "algebra", alg, spec.bound, "gorenstein")
    for rng in rngs:
        maps = _sequence(alg, spec, rng)
        r = lemma22_check(alg, maps, spec.bound)
        yield maps[0].target, {"xi* exact": r.lhs, "xi exact, coker GP": r.rhs, "terms": len(maps) + 1}, r.agree


def _run_lemma32(spec, F, rngs, hyp):
    A, B, _ = _split(spec.family, F)
    T = family_algebra(spec.family, F)
    _certify(hyp, "B", B, spec.bound, "gorenstein")
    _certify(hyp, "A", A, spec.bound, "gorenstein")
    for rng in rngs:
        x = random_module(T, spec.dim_cap, rng)
        if not gp_direct(A, restrict_to_A(x), spec.bound).is_yes:
            x = random_gp_module(T, spec.dim_cap, rng, spec.bound)
        u = random_module(B, max(1, spec.dim_cap // 2), rng)
        r = lemma32_check(A, B, u, x, spec.bound)
        yield x, {"(1)": r.lhs, "(3)": r.rhs, "U": u.digest()}, r.agree


def _run_lemma51(spec, F, rngs, hyp):
    A, B, _ = _split(spec.family, F)
    T = family_algebra(spec.family, F)
    _certify(hyp, "A", A, spec.bound, "gldim")
    for rng in rngs:
        x = random_module(T, spec.dim_cap, rng)
        r = lemma51_check(A, x, spec.bound)
        yield x, {
            "gp": r.gp, "termwise projective": r.termwise_projective,
            "projective": r.projective, "contractible": r.contractible,
        }, r.agree


def _run_prop53(spec, F, rngs, hyp):
    for name in spec.family.split(","):
        A = family_algebra(name, F)
        r = prop53_check(A, spec.bound)
        hyp[f"{name} Gorenstein"] = True
        yield bimodule_module(A), {"algebra": name, "gp": r.gp_over_env.outcome, "self-injective": r.selfinj}, r.agree


def _lemma21_sides(A, B, T, x, m, t, degrees):
    Bop = B.opposite()
    DP = dual(projective(Bop, t))  # D(e_t B) as a left B-module
    lhs = ext_dims(x, outer(m, DP, T), degrees)
    rhs = ext_dims(tensor_over_B(DP, x), m, degrees)
    return lhs, rhs


def _run_lemma21(spec, F, rngs, hyp):
    A, B, _ = _split(spec.family, F)
    T = family_algebra(spec.family, F)
    for rng in rngs:
        x = random_module(T, spec.dim_cap, rng)
        m = random_module(A, max(1, spec.dim_cap // 2), rng)
        t = int(rng.integers(B.vertex_count))
        lhs, rhs = _lemma21_sides(A, B, T, x, m, t, spec.degrees)
        yield x, {"Ext(X, M⊗DP)": lhs, "Ext(X⊗P, M)": rhs, "vertex": t, "M": m.digest()}, lhs == rhs


def vee_dual(x: Module) -> Module:
    """``X^vee = Hom(X, A ⊗ DB)`` as a module over ``(A ⊗ B)^op``."""
    T = x.algebra
    A, B = T.tensor_of
    W = outer(regular_module(A), dual(regular_module(B.opposite())), T)
    rights = []
    for g in T.generators:
        a, b = divmod(g, B.dim)
        rights.append(kron(A.right_mult(a), B.left_mult(b).T))
    return bimodule_dual(x, W, rights, T.opposite())


def _lemma31_sides(A, B, T, x, u, degrees):
    W = outer(regular_module(A), dual(regular_module(B.opposite())), T)
    hyp = ext_dims(x, W, degrees)
    lhs = ext_dims(x, outer(regular_module(A), u, T), degrees)
    left = outer(regular_module(A.opposite()), dual(u), T.opposite())
    rhs = ext_dims(left, vee_dual(x), degrees)
    return hyp, lhs, rhs


def _run_lemma31(spec, F, rngs, hyp):
    A, B, _ = _split(spec.family, F)
    T = family_algebra(spec.family, F)
    for rng in rngs:
        x = random_module(T, spec.dim_cap, rng)
        u = random_module(B, max(1, spec.dim_cap // 3), rng)
        h, lhs, rhs = _lemma31_sides(A, B, T, x, u, spec.degrees)
        if any(h[1:]):
            yield x, {"hypothesis Ext(X, A⊗DB)": h}, None
            continue
        yield x, {"Ext(X, A⊗U)": lhs, "Ext(A⊗DU, X^vee)": rhs, "U": u.digest()}, lhs == rhs


def _run_gp2(spec, F, rngs, hyp):
    alg = family_algebra(spec.family, F)
    _certify(hyp, "algebra", alg, spec.bound, "gorenstein")
    for rng in rngs:
        target = random_gp_module(alg, max(1, spec.dim_cap // 2), rng, spec.bound)
        extra = random_gp_module(alg, max(1, spec.dim_cap // 2), rng, spec.bound)
        P, eps = projective_cover(target)
        E = direct_sum([P, extra])
        # epimorphism E -> target: the cover plus a random map on the extra summand
        f = hstack(F, [eps.matrix, random_hom(extra, target, rng).matrix], target.dim)
        K, _ = kernel(ModuleHom(E, target, f))
        ends = {"E": gp_direct(alg, E, spec.bound).outcome, "target": gp_direct(alg, target, spec.bound).outcome}
        kv = gp_direct(alg, K, spec.bound).outcome
        if UNKNOWN in ends.values() or kv == UNKNOWN:
            yield E, dict(ends, kernel=kv), None
            continue
        premise = all(v == YES for v in ends.values())
        yield E, dict(ends, kernel=kv), (not premise) or kv == YES


def _run_gp3(spec, F, rngs, hyp):
    alg = family_algebra(spec.family, F)
    _certify(hyp, "algebra", alg, spec.bound, "gorenstein")
    for rng in rngs:
        x = random_gp_module(alg, spec.dim_cap, rng, spec.bound) if rng.integers(4) else random_module(alg, spec.dim_cap, rng)
        v = gp_direct(alg, x, spec.bound).outcome
        if v == UNKNOWN:
            yield x, {"gp": v}, None
            continue
        if v == NO:
            yield x, {"gp": v}, True
            continue
        xs = lambda_dual(x)
        w = gp_direct(alg.opposite(), xs, spec.bound).outcome
        xss = lambda_dual(xs)
        ok = w == YES and xss.dim == x.dim and evaluation_iso_check(x)
        yield x, {"gp": v, "dual gp": w, "dim": x.dim, "dual dim": xs.dim, "double dual dim": xss.dim}, ok


_RUNNERS = {
    "thm34": _run_thm34,
    "prop42": _run_prop42,
    "cor35": _run_cor35,
    "lemma22": _run_lemma22,
    "lemma32": _run_lemma32,
    "lemma51": _run_lemma51,
    "prop53": _run_prop53,
    "lemma21_dims": _run_lemma21,
    "lemma31_dims": _run_lemma31,
    "gp2_closure": _run_gp2,
    "gp3_duality": _run_gp3,
}


def verify_theorem(theorem: str, spec: GenSpec = GenSpec()) -> AgreementReport:
    """Run every relevant criterion on ``spec.samples`` seeded samples and compare."""
    if theorem not in _RUNNERS:
        raise ValueError(f"unknown theorem {theorem!r}; choose from {', '.join(THEOREMS)}")
    if spec.family is None:
        spec = GenSpec(DEFAULT_FAMILIES[theorem], spec.dim_cap, spec.samples, spec.seed, spec.field, spec.bound, spec.degrees)
    F = FieldSpec.parse(spec.field)
    children = np.random.SeedSequence(spec.seed).spawn(spec.samples)
    rngs = (np.random.Generator(np.random.PCG64(c)) for c in children)
    hyp: Dict[str, object] = {}
    rows, bad = [], []
    for k, (mod, details, agree) in enumerate(_RUNNERS[theorem](spec, F, rngs, hyp)):
        rows.append({"sample": k, "module": mod.digest(), "dim": mod.dim, "verdicts": _plain(details), "agree": agree})
        if agree is False:
            bad.append({"sample": k, "module": module_to_dict(mod)})
    return AgreementReport(
        theorem, spec.family, str(F), spec.seed, PRNG,
        {"bound": spec.bound, "dim_cap": spec.dim_cap, "degrees": spec.degrees, "samples": spec.samples},
        hyp, rows, bad,
    )


def _plain(obj):
    """JSON-safe copy (numpy scalars to ints)."""
    return json.loads(json.dumps(obj, default=lambda o: int(o) if isinstance(o, np.integer) else str(o)))
