"""Decision procedures for Gorenstein projectivity, with three-valued verdicts.

Every criterion returns a :class:`GpVerdict`. A ``no`` always carries a
concrete witness; a ``yes`` is only reported when the vanishing range was
certified by finite injective dimensions of the algebra.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from .algebra import BasedAlgebra, PathPresentation, from_presentation
from .exactla import ExactMatrix, hstack, image_basis, rank, solve
from .homology import (
    DEFAULT_CAP,
    ext_dims,
    global_dim,
    inj_dim,
    is_gorenstein,
    is_self_injective,
    proj_dim,
    tor_dims,
)
from .modules import (
    Module,
    ModuleHom,
    adapt,
    cokernel,
    corner,
    dual,
    evaluation_iso_check,
    hom_basis,
    is_isomorphic,
    is_projective,
    lambda_dual,
    outer,
    quotient,
    rad_B_quotient,
    regular_module,
    restrict_to_A,
    restrict_to_B,
    simple,
    tensor_over_B,
)

YES = "yes"
NO = "no"
UNKNOWN = "unknown_at_bound"
OUTCOMES = (YES, NO, UNKNOWN)


class HypothesisError(ValueError):
    """A criterion's standing hypothesis failed or could not be certified."""


@dataclass
class GpVerdict:
    outcome: str
    witness: str
    criterion: str
    bound_used: int
    checks: Dict[str, object] = field(default_factory=dict)

    def __post_init__(self):
        if self.outcome not in OUTCOMES:
            raise ValueError(f"bad outcome {self.outcome!r}")

    @property
    def is_yes(self) -> bool:
        return self.outcome == YES

    def to_json(self) -> dict:
        return {
            "outcome": self.outcome,
            "witness": self.witness,
            "criterion": self.criterion,
            "bound_used": self.bound_used,
            "checks": self.checks,
        }

    @classmethod
    def from_json(cls, data: dict) -> "GpVerdict":
        return cls(data["outcome"], data["witness"], data["criterion"], int(data["bound_used"]), dict(data.get("checks", {})))

    def renamed(self, criterion: str) -> "GpVerdict":
        return GpVerdict(self.outcome, self.witness, criterion, self.bound_used, dict(self.checks))


def conjoin(criterion: str, parts: Sequence[GpVerdict]) -> GpVerdict:
    """Three-valued AND: any ``no`` wins, otherwise any unknown wins."""
    bound = max((p.bound_used for p in parts), default=0)
    checks: Dict[str, object] = {}
    for p in parts:
        checks.update(p.checks)
    fails = [p for p in parts if p.outcome == NO]
    if fails:
        return GpVerdict(NO, "; ".join(f"{p.criterion}: {p.witness}" for p in fails), criterion, bound, checks)
    unk = [p for p in parts if p.outcome == UNKNOWN]
    if unk:
        return GpVerdict(UNKNOWN, "; ".join(f"{p.criterion}: {p.witness}" for p in unk), criterion, bound, checks)
    return GpVerdict(YES, "; ".join(p.witness for p in parts if p.witness), criterion, bound, checks)


def _nonzero_degrees(dims: List[int], start: int = 1) -> List[int]:
    return [n for n in range(start, len(dims)) if dims[n]]


def _check_bound(bound: int):
    if bound < 1:
        raise ValueError("bound must be at least 1")


def gp_direct(alg: BasedAlgebra, x: Module, bound: int = DEFAULT_CAP) -> GpVerdict:
    """Ext-vanishing against ``alg`` on both sides plus reflexivity."""
    _check_bound(bound)
    name = "direct"
    if x.algebra != alg:
        raise ValueError("module is not over the given algebra")
    gor = is_gorenstein(alg, bound)
    if gor.gorenstein:
        left, right = gor.left_idim.value, gor.right_idim.value
        exact = True
        note = f"exact: Ext^n(-, A) vanishes above idim (left {left}, right {right})"
    else:
        left = right = bound
        exact = False
        note = f"Gorenstein status not certified at cap {bound}"
    used = max(left, right)
    if x.dim == 0:
        return GpVerdict(YES, "zero module", name, used)
    failures = []
    if left:
        bad = _nonzero_degrees(ext_dims(x, regular_module(alg), left))
        if bad:
            failures.append(f"Ext^{bad[0]}(X, A) != 0")
    ev_ok = evaluation_iso_check(x)
    if not ev_ok:
        failures.append("evaluation map X -> X** not bijective")
    if right and not failures:
        xs = lambda_dual(x)
        if xs.dim:
            bad = _nonzero_degrees(ext_dims(xs, regular_module(alg.opposite()), right))
            if bad:
                failures.append(f"Ext^{bad[0]}(X*, A) != 0")
    if failures:
        return GpVerdict(NO, "; ".join(failures), name, used)
    return GpVerdict(YES if exact else UNKNOWN, note, name, used)


def gp_tor_criterion(B: BasedAlgebra, m: Module, bound: int = DEFAULT_CAP) -> GpVerdict:
    """``Tor_n(DB, m) = 0`` for ``1 <= n <= pd(DB_B)``; needs ``B`` Gorenstein."""
    _check_bound(bound)
    name = "tor"
    if m.algebra != B:
        raise ValueError("module is not over the given algebra")
    gor = is_gorenstein(B, bound)
    if not gor.gorenstein:
        return GpVerdict(UNKNOWN, f"Gorenstein status of B not certified at cap {bound}", name, bound)
    DB = dual(regular_module(B))
    pd = proj_dim(DB, bound)
    if not pd.finite:
        return GpVerdict(UNKNOWN, f"pd(DB) >= {bound}", name, bound)
    if pd.value == 0 or m.dim == 0:
        return GpVerdict(YES, "DB projective" if pd.value == 0 else "zero module", name, pd.value)
    bad = _nonzero_degrees(tor_dims(DB, m, pd.value))
    if bad:
        return GpVerdict(NO, f"Tor^{bad[0]}(DB, X) != 0", name, pd.value)
    return GpVerdict(YES, f"Tor vanishes up to pd(DB) = {pd.value}", name, pd.value)


def _factors(x: Module, A: BasedAlgebra, B: BasedAlgebra):
    if x.algebra.tensor_of is None or x.algebra.tensor_of != (A, B):
        raise ValueError("module is not over A ⊗ B for the given factors")


def _require_gorenstein(B: BasedAlgebra, bound: int, name: str) -> Optional[GpVerdict]:
    if not is_gorenstein(B, bound).gorenstein:
        return GpVerdict(UNKNOWN, f"B not certified Gorenstein at cap {bound}", name, bound)
    return None


def gp_thm_condition3(A: BasedAlgebra, B: BasedAlgebra, x: Module, bound: int = DEFAULT_CAP) -> GpVerdict:
    """``DB ⊗_B X`` GP over ``A`` and ``_BX`` GP over ``B``."""
    name = "thm3"
    _factors(x, A, B)
    pending = _require_gorenstein(B, bound, name)
    if pending:
        return pending
    left = gp_direct(A, tensor_over_B(regular_module(B), x), bound).renamed("A(DB⊗_B X) GP")
    right = gp_tor_criterion(B, restrict_to_B(x), bound).renamed("_BX GP")
    return conjoin(name, [left, right])


def gp_thm_condition2(A: BasedAlgebra, B: BasedAlgebra, x: Module, bound: int = DEFAULT_CAP) -> GpVerdict:
    """``_AX`` GP and ``Ext^n(X, A⊗B) = 0`` for ``n >= 1``."""
    name = "thm2"
    _factors(x, A, B)
    pending = _require_gorenstein(B, bound, name)
    if pending:
        return pending
    left = gp_direct(A, restrict_to_A(x), bound).renamed("_AX GP")
    T = x.algebra
    gor = is_gorenstein(T, bound)
    top = gor.left_idim.value if gor.gorenstein else bound
    if x.dim == 0 or top == 0:
        ext = GpVerdict(YES if gor.gorenstein else UNKNOWN, "", "Ext(X, A⊗B)", top)
    else:
        bad = _nonzero_degrees(ext_dims(x, regular_module(T), top))
        if bad:
            ext = GpVerdict(NO, f"Ext^{bad[0]}(X, A⊗B) != 0", "Ext(X, A⊗B)", top)
        elif gor.gorenstein:
            ext = GpVerdict(YES, "", "Ext(X, A⊗B)", top)
        else:
            ext = GpVerdict(UNKNOWN, f"A⊗B not certified Gorenstein at cap {bound}", "Ext(X, A⊗B)", top)
    return conjoin(name, [left, ext])


def _require_finite_gldim(B: BasedAlgebra, bound: int):
    return global_dim(B, bound).finite


def gp_propB(A: BasedAlgebra, B: BasedAlgebra, x: Module, bound: int = DEFAULT_CAP) -> GpVerdict:
    """``X / rad_B X`` GP over ``A`` and ``_BX`` projective; needs finite gldim ``B``."""
    name = "propB"
    _factors(x, A, B)
    if not _require_finite_gldim(B, bound):
        return GpVerdict(UNKNOWN, f"gldim B not finite within cap {bound}", name, bound)
    quot = gp_direct(A, restrict_to_A(rad_B_quotient(x)), bound).renamed("A(X/rad_B X) GP")
    proj = is_projective(restrict_to_B(x))
    pv = GpVerdict(YES if proj else NO, "" if proj else "_BX not projective", "B-projectivity", 0)
    return conjoin(name, [quot, pv])


def gp_selfinj(A: BasedAlgebra, B: BasedAlgebra, x: Module, bound: int = DEFAULT_CAP) -> GpVerdict:
    """For self-injective ``B``: GP iff ``_AX`` is GP."""
    _factors(x, A, B)
    if not is_self_injective(B):
        raise HypothesisError("B not self-injective")
    return gp_direct(A, restrict_to_A(x), bound).renamed("selfinj")


def quiver_cokernels(Bpres: PathPresentation, x: Module) -> List[Module]:
    """``Coker f_i`` for each vertex, where ``f_i`` collects the arrows ending at ``i``."""
    A, B = x.algebra.tensor_of
    xa, _ = adapt(x)
    F = x.field
    corners = [corner(xa, v) for v in range(B.vertex_count)]
    out = []
    for i, (Xi, idx_i) in enumerate(corners):
        blocks = []
        for arrow in Bpres.quiver.arrows:
            if arrow.target != i:
                continue
            _, idx_s = corners[arrow.source]
            act = restrict_to_B(xa).gen_action(B.labels.index(arrow.id))
            blocks.append(act[idx_i, idx_s] if idx_i and idx_s else ExactMatrix.zeros(F, len(idx_i), len(idx_s)))
        if blocks and Xi.dim:
            img = image_basis(hstack(F, blocks, Xi.dim))
        else:
            img = ExactMatrix.zeros(F, Xi.dim, 0)
        out.append(quotient(Xi, img)[0] if img.cols else Xi)
    return out


def gp_quiver(A: BasedAlgebra, Bpres: PathPresentation, x: Module, bound: int = DEFAULT_CAP) -> GpVerdict:
    """``_BX`` projective and every ``Coker f_i`` GP over ``A``."""
    name = "quiver"
    B = from_presentation(Bpres)
    _factors(x, A, B)
    if not _require_finite_gldim(B, bound):
        raise HypothesisError(f"gldim B unknown at cap {bound}")
    cokers = quiver_cokernels(Bpres, x)
    iso = all(is_isomorphic(c, tensor_over_B(simple(B, i), x)) for i, c in enumerate(cokers))
    parts = [gp_direct(A, c, bound).renamed(f"Coker f_{i} GP") for i, c in enumerate(cokers)]
    proj = is_projective(restrict_to_B(x))
    parts.append(GpVerdict(YES if proj else NO, "" if proj else "_BX not projective", "B-projectivity", 0))
    out = conjoin(name, parts)
    out.checks["cokernel_iso"] = iso
    return out


# cross-validation checkers


@dataclass(frozen=True)
class SidesResult:
    """Both sides of an equivalence, computed independently."""

    lhs: bool
    rhs: bool

    @property
    def agree(self) -> bool:
        return self.lhs == self.rhs

    def __bool__(self) -> bool:
        return self.agree


def _dual_map(f: ModuleHom) -> ExactMatrix:
    """Matrix of ``f* : N* -> M*`` in the hom bases of the Λ-duals."""
    F = f.source.field
    ms = lambda_dual(f.source)
    ns = lambda_dual(f.target)
    mb = ms._cache.get("hom_basis", [])
    nb = ns._cache.get("hom_basis", [])
    if not mb or not nb:
        return ExactMatrix.zeros(F, len(mb), len(nb))
    Phi = ExactMatrix(F, np.stack([h.matrix.a.reshape(-1) for h in mb], axis=1))
    img = ExactMatrix(F, np.stack([(h.matrix @ f.matrix).a.reshape(-1) for h in nb], axis=1))
    coords = solve(Phi, img)
    if coords is None:
        raise ArithmeticError("composite is not a homomorphism into the regular module")
    return coords


def _exact_at(into: ExactMatrix, out: ExactMatrix, dim: int) -> bool:
    """Exactness at a term of dimension ``dim`` between maps ``into`` and ``out``."""
    if into.cols and out.rows and not (out @ into).is_zero():
        return False
    r_in = rank(into) if into.cols and into.rows else 0
    r_out = rank(out) if out.cols and out.rows else 0
    return dim - r_out == r_in


def lemma22_check(alg: BasedAlgebra, maps: Sequence[ModuleHom], bound: int = DEFAULT_CAP) -> SidesResult:
    """``xi* exact`` versus ``xi exact and Coker d_1 GP``.

    ``maps[k]`` is ``d_{k+1}: M_{k+1} -> M_k``, so the sequence reads
    ``0 -> M_m -> ... -> M_1 -> M_0`` with ``m = len(maps)``.
    """
    if not maps:
        raise ValueError("need at least one map")
    terms = [maps[0].target] + [d.source for d in maps]
    for k in range(1, len(maps)):
        if maps[k].target.dim != maps[k - 1].source.dim:
            raise ValueError("maps do not compose")
    for t in terms:
        v = gp_direct(alg, t, bound)
        if v.outcome != YES:
            raise HypothesisError(f"term not certified Gorenstein projective: {v.witness}")
    F = alg.field
    m = len(maps)
    mats = [d.matrix for d in maps]
    # xi exact at M_m, ..., M_1
    exact = True
    for k in range(1, m + 1):
        into = mats[k] if k < m else ExactMatrix.zeros(F, terms[m].dim, 0)
        exact = exact and _exact_at(into, mats[k - 1], terms[k].dim)
    rhs = exact
    if rhs:
        coker, _ = cokernel(maps[0])
        v = gp_direct(alg, coker, bound)
        if v.outcome == UNKNOWN:
            raise HypothesisError("cokernel verdict inconclusive")
        rhs = v.outcome == YES
    # xi*: M_0* -> M_1* -> ... -> M_m* -> 0, exact at M_1*, ..., M_m*
    duals = [_dual_map(d) for d in maps]  # duals[k]: M_k* -> M_{k+1}*
    dims = [lambda_dual(t).dim for t in terms]
    lhs = True
    for k in range(1, m + 1):
        out = duals[k] if k < m else ExactMatrix.zeros(F, 0, dims[m])
        lhs = lhs and _exact_at(duals[k - 1], out, dims[k])
    return SidesResult(lhs, rhs)


def lemma32_check(A: BasedAlgebra, B: BasedAlgebra, u: Module, x: Module, bound: int = DEFAULT_CAP) -> SidesResult:
    """``Ext^n(X, A⊗U) = 0`` versus ``DU⊗_B X`` GP with ``Tor_n(DU, X) = 0``, for ``n`` up to ``idim U``."""
    _factors(x, A, B)
    idim = inj_dim(u, bound)
    if not idim.finite:
        raise HypothesisError(f"idim U not finite within cap {bound}")
    if gp_direct(A, restrict_to_A(x), bound).outcome != YES:
        raise HypothesisError("_AX not certified Gorenstein projective")
    m = idim.value
    AU = outer(regular_module(A), u, x.algebra)
    lhs = m == 0 or not _nonzero_degrees(ext_dims(x, AU, m))
    v = gp_direct(A, tensor_over_B(u, x), bound)
    if v.outcome == UNKNOWN:
        raise HypothesisError("DU⊗_B X verdict inconclusive")
    rhs = v.outcome == YES and (m == 0 or not _nonzero_degrees(tor_dims(dual(u), restrict_to_B(x), m)))
    return SidesResult(lhs, rhs)
