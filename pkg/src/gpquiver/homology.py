"""Projective covers, minimal resolutions, Ext/Tor and homological dimensions."""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .algebra import BasedAlgebra
from .exactla import ExactMatrix, complement_coordinates, image_basis, inverse, rank
from .modules import (
    Module,
    ModuleHom,
    adapt,
    dual,
    is_projective,
    kernel,
    projective,
    projective_sum,
    radical_span,
    regular_module,
    simple,
)

DEFAULT_CAP = 20

_memo_lock = threading.Lock()


@dataclass(frozen=True)
class DimVerdict:
    """A homological dimension, or a lower bound when the cap was reached."""

    value: Optional[int]
    cap: int

    @property
    def finite(self) -> bool:
        return self.value is not None

    def __str__(self) -> str:
        return str(self.value) if self.finite else f">= {self.cap}"

    def to_json(self):
        return self.value if self.finite else f">={self.cap}"


@dataclass
class Resolution:
    """Minimal projective resolution ``... -> P_1 -> P_0 -> target``.

    ``differentials[i]`` maps ``P_{i+1} -> P_i``. ``terms[i]`` carries its
    summand vertices in ``summands[i]``.
    """

    target: Module
    terms: List[Module]
    summands: List[List[int]]
    differentials: List[ModuleHom]
    augmentation: ModuleHom
    terminated: bool
    cap: int
    # last syzygy and its inclusion into the last term, for extending
    _syzygy: Optional[Module] = field(default=None, repr=False)
    _syz_incl: Optional[ExactMatrix] = field(default=None, repr=False)

    @property
    def length(self) -> int:
        return len(self.terms) - 1


def _generator_positions(alg: BasedAlgebra, summands: List[int]) -> List[int]:
    pos = []
    off = 0
    for t in summands:
        basis = projective(alg, t)._cache["basis_elements"]
        pos.append(off + basis.index(alg.idempotents[t]))
        off += len(basis)
    return pos


def projective_cover(m: Module) -> Tuple[Module, ModuleHom]:
    """``P -> m`` with ``P`` a sum of ``A e_t``, one per top generator."""
    p, epi, _ = _cover(m)
    return p, epi


def _cover(m: Module):
    ma, C = adapt(m)
    alg = m.algebra
    F = m.field
    rad = radical_span(ma)
    gens = []  # (vertex, coordinate in ma)
    for t in range(alg.vertex_count):
        idx = ma.vertex_indices(t)
        if not idx:
            continue
        block = rad[idx, :] if rad.cols else ExactMatrix.zeros(F, len(idx), 0)
        for c in complement_coordinates(image_basis(block) if block.cols else block):
            gens.append((t, idx[c]))
    summands = [t for t, _ in gens]
    P = projective_sum(alg, summands)
    cols = []
    for t, j in gens:
        for b in projective(alg, t)._cache["basis_elements"]:
            cols.append(ma.rho(b).a[:, j])
    epi = F.zeros((ma.dim, P.dim))
    if cols:
        epi[:, :] = np.stack(cols, axis=1)
    epi = ExactMatrix(F, epi)
    if C is not None:
        epi = C @ epi
    return P, ModuleHom(P, m, epi), summands


def minimal_resolution(m: Module, cap: int = DEFAULT_CAP) -> Resolution:
    """Resolution with terms ``P_0 .. P_n``, ``n <= cap``; memoized on ``m``."""
    if cap < 0:
        raise ValueError("cap must be non-negative")
    with _memo_lock:
        res = m._cache.get("resolution")
    if res is None:
        P0, eps, summ = _cover(m)
        syz, incl = kernel(eps)
        res = Resolution(m, [P0], [summ], [], eps, syz.dim == 0, 0, syz, incl)
    while not res.terminated and res.length < cap:
        P, eps, summ = _cover(res._syzygy)
        d = ModuleHom(P, res.terms[-1], res._syz_incl @ eps.matrix)
        syz, incl = kernel(eps)
        res.terms.append(P)
        res.summands.append(summ)
        res.differentials.append(d)
        res._syzygy, res._syz_incl = syz, incl
        res.terminated = syz.dim == 0
    res.cap = max(res.cap, cap)
    with _memo_lock:
        m._cache["resolution"] = res
    if res.length > cap:
        return Resolution(
            m, res.terms[:cap + 1], res.summands[:cap + 1], res.differentials[:cap],
            res.augmentation, False, cap,
        )
    return res


def _induced(res: Resolution, i: int, n: Module, tor: bool = False) -> ExactMatrix:
    """Map induced by ``d: P_{i+1} -> P_i`` on ``Hom(-, n)`` or, with ``tor``, on ``- ⊗ n``.

    Both are assembled from ``sum_b c_b rho_n(b)`` where ``c_b`` are the
    coordinates of the images of the generators of ``P_{i+1}``. The Hom map has
    rows over the summands of ``P_{i+1}``; the tensor map has rows over ``P_i``.
    """
    F = n.field
    na, _ = adapt(n)
    alg = res.terms[0].algebra
    src = res.summands[i + 1]
    tgt = res.summands[i]
    blocks = [na.vertex_indices(t) for t in range(alg.vertex_count)]
    src_off = np.cumsum([0] + [len(blocks[t]) for t in src])
    tgt_off = np.cumsum([0] + [len(blocks[t]) for t in tgt])
    shape = (src_off[-1], tgt_off[-1])
    out = F.zeros(shape[::-1] if tor else shape)
    if src_off[-1] == 0 or tgt_off[-1] == 0:
        return ExactMatrix(F, out)
    G = res.differentials[i].matrix.a[:, _generator_positions(alg, src)]
    p_off = 0
    for l, t in enumerate(tgt):
        basis = projective(alg, t)._cache["basis_elements"]
        coeff = G[p_off:p_off + len(basis), :]
        p_off += len(basis)
        if not blocks[t]:
            continue
        R = np.stack([na.rho(b).a for b in basis])
        T = F.reduce(np.tensordot(coeff, R, axes=([0], [0])))
        for k, s in enumerate(src):
            if not blocks[s]:
                continue
            if tor:
                out[tgt_off[l]:tgt_off[l + 1], src_off[k]:src_off[k + 1]] = T[k][np.ix_(blocks[t], blocks[s])]
            else:
                out[src_off[k]:src_off[k + 1], tgt_off[l]:tgt_off[l + 1]] = T[k][np.ix_(blocks[s], blocks[t])]
    return ExactMatrix(F, out)


def _hom_from_projective_dim(alg: BasedAlgebra, summands: List[int], n: Module) -> int:
    na, _ = adapt(n)
    return sum(len(na.vertex_indices(t)) for t in summands)


def ext_dims(m: Module, n: Module, max_degree: int) -> List[int]:
    """``[dim Ext^i(m, n) for i in 0..max_degree]``."""
    if m.algebra != n.algebra:
        raise ValueError("modules live over different algebras")
    res = minimal_resolution(m, max_degree + 1)
    alg = m.algebra
    dims = [_hom_from_projective_dim(alg, s, n) for s in res.summands]
    ranks = []  # rank of delta^i : Hom(P_i, n) -> Hom(P_{i+1}, n)
    for i in range(min(max_degree + 1, len(res.differentials))):
        ranks.append(rank(_induced(res, i, n)))
    out = []
    for i in range(max_degree + 1):
        if i >= len(dims):
            out.append(0)
            continue
        r_out = ranks[i] if i < len(ranks) else 0
        r_in = ranks[i - 1] if i >= 1 else 0
        out.append(dims[i] - r_out - r_in)
    return out


def ext_dim(m: Module, n: Module, degree: int) -> int:
    return ext_dims(m, n, degree)[degree]


def tor_dims(u: Module, x: Module, max_degree: int) -> List[int]:
    """``[dim Tor_i(u, x) for i in 0..max_degree]`` for ``u`` over ``A^op`` and ``x`` over ``A``."""
    if u.algebra != x.algebra.opposite():
        raise ValueError("first argument must be a module over the opposite algebra")
    res = minimal_resolution(u, max_degree + 1)
    alg = x.algebra
    dims = [_hom_from_projective_dim(alg, s, x) for s in res.summands]
    ranks = [rank(_induced(res, i, x, tor=True)) for i in range(min(max_degree + 1, len(res.differentials)))]
    out = []
    for i in range(max_degree + 1):
        if i >= len(dims):
            out.append(0)
            continue
        r_in = ranks[i] if i < len(ranks) else 0  # boundary from C_{i+1}
        r_out = ranks[i - 1] if i >= 1 else 0
        out.append(dims[i] - r_out - r_in)
    return out


def tor_dim(u: Module, x: Module, degree: int) -> int:
    return tor_dims(u, x, degree)[degree]


def proj_dim(m: Module, cap: int = DEFAULT_CAP) -> DimVerdict:
    res = minimal_resolution(m, cap)
    if m.dim == 0:
        return DimVerdict(0, cap)
    return DimVerdict(res.length if res.terminated else None, cap)


def inj_dim(m: Module, cap: int = DEFAULT_CAP) -> DimVerdict:
    return proj_dim(dual(m), cap)


def global_dim(alg: BasedAlgebra, cap: int = DEFAULT_CAP) -> DimVerdict:
    key = ("gldim", cap)
    if key not in alg._cache:
        best = 0
        verdict = None
        for t in range(alg.vertex_count):
            pd = proj_dim(simple(alg, t), cap)
            if not pd.finite:
                verdict = DimVerdict(None, cap)
                break
            best = max(best, pd.value)
        alg._cache[key] = verdict or DimVerdict(best, cap)
    return alg._cache[key]


@dataclass(frozen=True)
class GorensteinVerdict:
    gorenstein: Optional[bool]
    left_idim: DimVerdict
    right_idim: DimVerdict

    def __iter__(self):
        return iter((self.gorenstein, self.left_idim, self.right_idim))

    @property
    def certified_bound(self) -> Optional[int]:
        if self.gorenstein:
            return max(self.left_idim.value, self.right_idim.value)
        return None


def is_gorenstein(alg: BasedAlgebra, cap: int = DEFAULT_CAP) -> GorensteinVerdict:
    """Injective dimensions of ``_A A`` and ``A_A``; Gorenstein iff both finite within ``cap``."""
    key = ("gorenstein", cap)
    if key not in alg._cache:
        left = inj_dim(regular_module(alg), cap)
        right = inj_dim(regular_module(alg.opposite()), cap)
        verdict = True if left.finite and right.finite else None
        alg._cache[key] = GorensteinVerdict(verdict, left, right)
    return alg._cache[key]


def is_self_injective(alg: BasedAlgebra) -> bool:
    """Whether ``_A DA`` is projective."""
    key = "self_injective"
    if key not in alg._cache:
        alg._cache[key] = is_projective(dual(regular_module(alg.opposite())))
    return alg._cache[key]
