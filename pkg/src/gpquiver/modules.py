"""Finite-dimensional left modules given by generator actions, and functors on them.

Most algorithms want an *adapted* basis, in which every idempotent acts as a
diagonal 0/1 matrix, so each basis vector sits over one vertex. Modules built
here are adapted by construction; :func:`adapt` converts anything else.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .algebra import BasedAlgebra
from .exactla import (
    ExactMatrix,
    block_diag,
    complement_coordinates,
    cokernel_projection,
    hstack,
    image_basis,
    inverse,
    kernel_basis,
    kron,
    left_inverse,
    rank,
    vstack,
)


class ModuleError(ValueError):
    """Actions violate the algebra relations, or operands do not fit together."""


def _gen_pos(alg: BasedAlgebra) -> Dict[int, int]:
    pos = alg._cache.get("gen_pos")
    if pos is None:
        pos = {g: i for i, g in enumerate(alg.generators)}
        alg._cache["gen_pos"] = pos
    return pos


class Module:
    """Left module over ``algebra``; ``actions[k]`` is the matrix of ``algebra.generators[k]``."""

    def __init__(self, algebra: BasedAlgebra, dim: int, actions: Sequence[ExactMatrix], validate: bool = True):
        self.algebra = algebra
        self.dim = dim
        self.actions = list(actions)
        self._rho: Optional[List[ExactMatrix]] = None
        self._cache: Dict[object, object] = {}
        if len(self.actions) != len(algebra.generators):
            raise ModuleError(f"expected {len(algebra.generators)} generator actions, got {len(self.actions)}")
        for a in self.actions:
            if a.shape != (dim, dim) or a.field != algebra.field:
                raise ModuleError(f"action of shape {a.shape} does not fit a module of dimension {dim}")
        if validate:
            self.validate()

    @property
    def field(self):
        return self.algebra.field

    def gen_action(self, b: int) -> ExactMatrix:
        return self.actions[_gen_pos(self.algebra)[b]]

    def rho(self, b: int) -> ExactMatrix:
        """Action of basis element ``b``."""
        if self._rho is None:
            pos = _gen_pos(self.algebra)
            F = self.field
            out = []
            for w in self.algebra.words:
                acc = self.actions[pos[w[0]]].a
                for g in w[1:]:
                    acc = F.reduce(acc @ self.actions[pos[g]].a)
                out.append(ExactMatrix(F, acc))
            self._rho = out
        return self._rho[b]

    def act(self, coeffs: np.ndarray) -> ExactMatrix:
        """Action of the algebra element with coordinates ``coeffs``."""
        F = self.field
        acc = F.zeros((self.dim, self.dim))
        for b in np.nonzero(coeffs)[0]:
            acc = acc + self.rho(int(b)).a * coeffs[b]
        return ExactMatrix(F, F.reduce(acc))

    def validate(self) -> None:
        """Check that generator actions define an algebra map."""
        alg = self.algebra
        F = self.field
        d = self.dim
        eye = F.eye(d)
        total = F.zeros((d, d))
        for e in alg.idempotents:
            total = F.reduce(total + self.gen_action(e).a)
        if not np.all(total == eye):
            raise ModuleError("idempotent actions do not sum to the identity")
        if d == 0:
            return
        R = np.stack([self.rho(b).a for b in range(alg.dim)])
        for g in alg.generators:
            lhs = F.reduce(np.matmul(self.gen_action(g).a, R))
            rhs = F.reduce(np.tensordot(alg.mult[g], R, axes=([1], [0])))
            if not np.all(lhs == rhs):
                raise ModuleError(f"action of {alg.labels[g]} violates the algebra relations")

    # adapted bases

    @property
    def vertex_of(self) -> Optional[List[int]]:
        """Vertex index of each basis vector, or None if the basis is not adapted."""
        if "vertex_of" not in self._cache:
            out = [-1] * self.dim
            ok = True
            for t, e in enumerate(self.algebra.idempotents):
                a = self.gen_action(e).a
                diag = np.diagonal(a)
                if np.count_nonzero(a) != np.count_nonzero(diag) or not all(x in (0, 1) for x in diag):
                    ok = False
                    break
                for i in np.nonzero(diag)[0]:
                    out[int(i)] = t
            self._cache["vertex_of"] = out if ok else None
        return self._cache["vertex_of"]

    def vertex_indices(self, t: int) -> List[int]:
        vo = self.vertex_of
        if vo is None:
            raise ModuleError("basis is not adapted")
        return [i for i, v in enumerate(vo) if v == t]

    def vertex_dims(self) -> List[int]:
        return [len(self.vertex_indices(t)) for t in range(self.algebra.vertex_count)]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Module):
            return NotImplemented
        return self.algebra == other.algebra and self.dim == other.dim and all(
            a == b for a, b in zip(self.actions, other.actions)
        )

    __hash__ = object.__hash__

    def digest(self) -> str:
        payload = json.dumps([self.dim, [a.to_lists() for a in self.actions]], separators=(",", ":"))
        return hashlib.sha256(payload.encode()).hexdigest()[:16]

    def __repr__(self) -> str:
        return f"Module(dim={self.dim}, over {self.algebra!r})"


@dataclass(eq=False)
class ModuleHom:
    source: Module
    target: Module
    matrix: ExactMatrix

    def is_homomorphism(self) -> bool:
        if self.matrix.shape != (self.target.dim, self.source.dim):
            return False
        return all(
            self.matrix @ self.source.gen_action(g) == self.target.gen_action(g) @ self.matrix
            for g in self.source.algebra.generators
        )

    def is_injective(self) -> bool:
        return rank(self.matrix) == self.source.dim

    def is_surjective(self) -> bool:
        return rank(self.matrix) == self.target.dim

    def is_iso(self) -> bool:
        return self.source.dim == self.target.dim and self.is_surjective()

    def __matmul__(self, other: "ModuleHom") -> "ModuleHom":
        return ModuleHom(other.source, self.target, self.matrix @ other.matrix)


def _check_same(m: Module, n: Module):
    if m.algebra != n.algebra:
        raise ModuleError("modules live over different algebras")


# constructions


def zero_module(alg: BasedAlgebra) -> Module:
    F = alg.field
    return Module(alg, 0, [ExactMatrix.zeros(F, 0, 0) for _ in alg.generators], validate=False)


def projective(alg: BasedAlgebra, t: int) -> Module:
    """Indecomposable projective ``A e_t``; basis = basis elements with right idempotent ``t``."""
    key = ("projective", t)
    if key not in alg._cache:
        F = alg.field
        idx = [b for b in range(alg.dim) if alg.right_idem[b] == t]
        sel = np.array(idx, dtype=int)
        acts = [ExactMatrix(F, alg.mult[g][np.ix_(sel, sel)].T.copy()) for g in alg.generators]
        m = Module(alg, len(idx), acts, validate=False)
        m._cache["basis_elements"] = idx
        alg._cache[key] = m
    return alg._cache[key]


def regular_module(alg: BasedAlgebra) -> Module:
    """``A`` as a left module over itself, in the algebra's own basis."""
    key = "regular"
    if key not in alg._cache:
        acts = [alg.left_mult(g) for g in alg.generators]
        alg._cache[key] = Module(alg, alg.dim, acts, validate=False)
    return alg._cache[key]


def simple(alg: BasedAlgebra, t: int) -> Module:
    F = alg.field
    acts = []
    for g in alg.generators:
        v = 1 if g == alg.idempotents[t] else 0
        acts.append(ExactMatrix.from_rows(F, [[v]]))
    return Module(alg, 1, acts, validate=False)


def direct_sum(mods: Sequence[Module], alg: Optional[BasedAlgebra] = None) -> Module:
    if not mods:
        if alg is None:
            raise ModuleError("empty direct sum needs an algebra")
        return zero_module(alg)
    alg = mods[0].algebra
    for m in mods[1:]:
        _check_same(mods[0], m)
    F = alg.field
    acts = [block_diag(F, [m.actions[k] for m in mods]) for k in range(len(alg.generators))]
    return Module(alg, sum(m.dim for m in mods), acts, validate=False)


def free_module(alg: BasedAlgebra, rank_: int = 1) -> Module:
    """``A^rank`` as a direct sum of indecomposable projectives (adapted basis)."""
    parts = [projective(alg, t) for _ in range(rank_) for t in range(alg.vertex_count)]
    return direct_sum(parts, alg)


def projective_sum(alg: BasedAlgebra, vertices: Sequence[int]) -> Module:
    m = direct_sum([projective(alg, t) for t in vertices], alg)
    m._cache["summands"] = list(vertices)
    return m


def adapt(m: Module) -> Tuple[Module, Optional[ExactMatrix]]:
    """Return ``(m2, C)`` with ``m2`` adapted and ``rho_m(g) C = C rho_m2(g)``; ``C`` None if already adapted."""
    if m.vertex_of is not None:
        return m, None
    if "adapted" not in m._cache:
        F = m.field
        cols = [image_basis(m.gen_action(e)) for e in m.algebra.idempotents]
        C = hstack(F, cols, m.dim)
        Ci = inverse(C)
        acts = [Ci @ a @ C for a in m.actions]
        m._cache["adapted"] = (Module(m.algebra, m.dim, acts, validate=False), C)
    return m._cache["adapted"]


def submodule(m: Module, span: ExactMatrix) -> Tuple[Module, ExactMatrix]:
    """Submodule spanned by the columns of ``span`` (assumed stable). Returns ``(sub, inclusion)``."""
    m, C = adapt(m)
    F = m.field
    if C is not None:
        span = inverse(C) @ span
    cols = []
    for t in range(m.algebra.vertex_count):
        idx = m.vertex_indices(t)
        if not idx or span.cols == 0:
            continue
        block = image_basis(span[idx, :])
        emb = F.zeros((m.dim, block.cols))
        emb[idx, :] = block.a
        cols.append(ExactMatrix(F, emb))
    K = hstack(F, cols, m.dim)
    L = left_inverse(K)
    acts = [L @ a @ K for a in m.actions]
    sub = Module(m.algebra, K.cols, acts, validate=False)
    return sub, (C @ K if C is not None else K)


def quotient(m: Module, span: ExactMatrix) -> Tuple[Module, ExactMatrix]:
    """Quotient by the stable subspace spanned by ``span``. Returns ``(quot, projection)``."""
    m, C = adapt(m)
    F = m.field
    if C is not None:
        span = inverse(C) @ span
    projs = []
    lifts = []
    for t in range(m.algebra.vertex_count):
        idx = m.vertex_indices(t)
        if not idx:
            continue
        block = span[idx, :] if span.cols else ExactMatrix.zeros(F, len(idx), 0)
        comp = complement_coordinates(image_basis(block) if block.cols else block)
        if not comp:
            continue
        P, _ = cokernel_projection(block)
        P = inverse(P[:, comp]) @ P
        fullP = F.zeros((len(comp), m.dim))
        fullP[:, idx] = P.a
        projs.append(ExactMatrix(F, fullP))
        lift = F.zeros((m.dim, len(comp)))
        for k, c in enumerate(comp):
            lift[idx[c], k] = F.scalar(1)
        lifts.append(ExactMatrix(F, lift))
    P = vstack(F, projs, m.dim)
    Lf = hstack(F, lifts, m.dim)
    acts = [P @ a @ Lf for a in m.actions]
    quot = Module(m.algebra, P.rows, acts, validate=False)
    return quot, (P @ inverse(C) if C is not None else P)


def kernel(f: ModuleHom) -> Tuple[Module, ExactMatrix]:
    return submodule(f.source, kernel_basis(f.matrix))


def cokernel(f: ModuleHom) -> Tuple[Module, ExactMatrix]:
    return quotient(f.target, f.matrix)


# Hom spaces


def hom_basis(m: Module, n: Module) -> List[ModuleHom]:
    """A basis of ``Hom_A(m, n)``."""
    _check_same(m, n)
    key = ("hom", id(n))
    cached = m._cache.get(key)
    if cached is not None and cached[0] is n:
        return cached[1]
    ma, Cm = adapt(m)
    na, Cn = adapt(n)
    F = m.field
    alg = m.algebra
    r = alg.vertex_count
    midx = [ma.vertex_indices(t) for t in range(r)]
    nidx = [na.vertex_indices(t) for t in range(r)]
    offsets = []
    total = 0
    for t in range(r):
        offsets.append(total)
        total += len(midx[t]) * len(nidx[t])
    blocks = []
    for g in alg.generators:
        if g in alg.idempotents:
            continue
        a, b = alg.left_idem[g], alg.right_idem[g]
        ma_b, mb_b = midx[a], midx[b]
        na_b, nb_b = nidx[a], nidx[b]
        if not (mb_b and na_b):
            continue
        Mg = ma.gen_action(g)[ma_b, mb_b] if ma_b else ExactMatrix.zeros(F, 0, len(mb_b))
        Ng = na.gen_action(g)[na_b, nb_b] if nb_b else ExactMatrix.zeros(F, len(na_b), 0)
        rows = len(na_b) * len(mb_b)
        eq = F.zeros((rows, total))
        if ma_b:
            # vec(T_a Mg) = (Mg^T kron I) vec(T_a)
            term = kron(Mg.T, ExactMatrix.identity(F, len(na_b)))
            eq[:, offsets[a]:offsets[a] + len(ma_b) * len(na_b)] = F.reduce(
                eq[:, offsets[a]:offsets[a] + len(ma_b) * len(na_b)] + term.a
            )
        if nb_b:
            term = kron(ExactMatrix.identity(F, len(mb_b)), Ng)
            eq[:, offsets[b]:offsets[b] + len(mb_b) * len(nb_b)] = F.reduce(
                eq[:, offsets[b]:offsets[b] + len(mb_b) * len(nb_b)] - term.a
            )
        blocks.append(ExactMatrix(F, eq))
    if total == 0:
        result: List[ModuleHom] = []
    else:
        system = vstack(F, blocks, total) if blocks else ExactMatrix.zeros(F, 0, total)
        K = kernel_basis(system)
        result = []
        Cmi = inverse(Cm) if Cm is not None else None
        for k in range(K.cols):
            T = F.zeros((n.dim, m.dim))
            for t in range(r):
                mt, nt = len(midx[t]), len(nidx[t])
                if mt == 0 or nt == 0:
                    continue
                vec = K.a[offsets[t]:offsets[t] + mt * nt, k]
                T[np.ix_(nidx[t], midx[t])] = vec.reshape(mt, nt).T
            T = ExactMatrix(F, T)
            if Cn is not None:
                T = Cn @ T
            if Cmi is not None:
                T = T @ Cmi
            result.append(ModuleHom(m, n, T))
    m._cache[key] = (n, result)
    return result


def hom_dim(m: Module, n: Module) -> int:
    return len(hom_basis(m, n))


# restriction along A -> A⊗B <- B


def _tensor_factors(alg: BasedAlgebra):
    if alg.tensor_of is None:
        raise ModuleError("algebra is not a recorded tensor product")
    return alg.tensor_of


def restrict_to_A(x: Module) -> Module:
    if "res_A" not in x._cache:
        A, B = _tensor_factors(x.algebra)
        F = x.field
        acts = []
        for g in A.generators:
            acc = ExactMatrix.zeros(F, x.dim, x.dim)
            for f in B.idempotents:
                acc = acc + x.gen_action(g * B.dim + f)
            acts.append(acc)
        x._cache["res_A"] = Module(A, x.dim, acts, validate=False)
    return x._cache["res_A"]


def restrict_to_B(x: Module) -> Module:
    if "res_B" not in x._cache:
        A, B = _tensor_factors(x.algebra)
        F = x.field
        acts = []
        for h in B.generators:
            acc = ExactMatrix.zeros(F, x.dim, x.dim)
            for e in A.idempotents:
                acc = acc + x.rho(e * B.dim + h)
            acts.append(acc)
        x._cache["res_B"] = Module(B, x.dim, acts, validate=False)
    return x._cache["res_B"]


def outer(m: Module, n: Module, alg: BasedAlgebra) -> Module:
    """``m ⊗_k n`` over ``alg = A ⊗ B`` for ``m`` over ``A`` and ``n`` over ``B``."""
    A, B = _tensor_factors(alg)
    if m.algebra != A or n.algebra != B:
        raise ModuleError("factors do not match the tensor algebra")
    acts = []
    for g in alg.generators:
        x, y = divmod(g, B.dim)
        acts.append(kron(m.rho(x), n.rho(y)))
    return Module(alg, m.dim * n.dim, acts, validate=False)


def corner(x: Module, v: int) -> Tuple[Module, List[int]]:
    """``e_v X`` as an ``A``-module for ``X`` over ``A ⊗ B`` and ``v`` a vertex of ``B``.

    Returns the module and the coordinates of ``restrict_to_A(x)`` it occupies;
    ``x`` must be adapted.
    """
    A, B = _tensor_factors(x.algebra)
    vo = x.vertex_of
    if vo is None:
        raise ModuleError("corner needs an adapted module")
    nb = B.vertex_count
    idx = [i for i, t in enumerate(vo) if t % nb == v]
    xa = restrict_to_A(x)
    sel = np.array(idx, dtype=int)
    acts = [ExactMatrix(x.field, a.a[np.ix_(sel, sel)].copy()) for a in xa.actions]
    return Module(A, len(idx), acts, validate=False), idx


# duality


def dual(m: Module) -> Module:
    """``D m = Hom_k(m, k)`` over the opposite algebra."""
    return Module(m.algebra.opposite(), m.dim, [a.T for a in m.actions], validate=False)


def bimodule_dual(m: Module, w: Module, right_actions: Sequence[ExactMatrix], target: BasedAlgebra) -> Module:
    """``Hom(m, w)`` as a left ``target``-module, where ``right_actions[k]`` is the
    right action on ``w`` of ``target.generators[k]`` (commuting with the left action)."""
    F = m.field
    basis = hom_basis(m, w)
    if not basis:
        return zero_module(target)
    Phi = ExactMatrix(F, np.stack([h.matrix.a.reshape(-1) for h in basis], axis=1))
    L = left_inverse(Phi)
    acts = []
    for R in right_actions:
        moved = ExactMatrix(F, np.stack([(R @ h.matrix).a.reshape(-1) for h in basis], axis=1))
        acts.append(L @ moved)
    out = Module(target, len(basis), acts, validate=False)
    out._cache["hom_basis"] = basis
    return out


def lambda_dual(m: Module) -> Module:
    """``m* = Hom_A(m, A)`` as a left module over the opposite algebra."""
    if "lambda_dual" not in m._cache:
        alg = m.algebra
        reg = regular_module(alg)
        rights = [alg.right_mult(g) for g in alg.generators]
        m._cache["lambda_dual"] = bimodule_dual(m, reg, rights, alg.opposite())
    return m._cache["lambda_dual"]


def evaluation_iso_check(m: Module) -> bool:
    """Whether ``ev: m -> m**`` is bijective."""
    if m.dim == 0:
        return True
    mstar = lambda_dual(m)
    basis = mstar._cache.get("hom_basis", [])
    if not basis:
        return False
    E = vstack(m.field, [h.matrix for h in basis])
    if rank(E) != m.dim:
        return False
    return hom_dim(mstar, regular_module(m.algebra.opposite())) == m.dim


# radical and top


def radical_span(m: Module) -> ExactMatrix:
    F = m.field
    if m.dim == 0 or not m.algebra.radical:
        return ExactMatrix.zeros(F, m.dim, 0)
    return image_basis(hstack(F, [m.rho(r) for r in m.algebra.radical]))


def radical_submodule(m: Module) -> Tuple[Module, ModuleHom]:
    sub, incl = submodule(m, radical_span(m))
    return sub, ModuleHom(sub, m, incl)


def top(m: Module) -> Tuple[Module, ModuleHom]:
    q, proj = quotient(m, radical_span(m))
    return q, ModuleHom(m, q, proj)


def top_multiplicities(m: Module) -> List[int]:
    """``dim e_t top(m)`` for each vertex ``t``."""
    if "top_mult" not in m._cache:
        ma, C = adapt(m)
        rad = radical_span(m)
        if C is not None:
            rad = inverse(C) @ rad
        out = []
        for t in range(m.algebra.vertex_count):
            idx = ma.vertex_indices(t)
            out.append(len(idx) - (rank(rad[idx, :]) if idx and rad.cols else 0))
        m._cache["top_mult"] = out
    return m._cache["top_mult"]


def is_projective(m: Module) -> bool:
    mu = top_multiplicities(m)
    alg = m.algebra
    return sum(k * projective(alg, t).dim for t, k in enumerate(mu)) == m.dim


def rad_B_quotient(x: Module) -> Module:
    """``X / rad_B X`` for ``X`` over ``A ⊗ B``."""
    A, B = _tensor_factors(x.algebra)
    F = x.field
    cols = []
    for r in B.radical:
        acc = ExactMatrix.zeros(F, x.dim, x.dim)
        for e in A.idempotents:
            acc = acc + x.rho(e * B.dim + r)
        cols.append(acc)
    span = image_basis(hstack(F, cols, x.dim)) if cols and x.dim else ExactMatrix.zeros(F, x.dim, 0)
    q, _ = quotient(x, span)
    return q


# tensor products over an algebra


def tensor_over(u: Module, x: Module) -> Tuple[int, ExactMatrix]:
    """``u ⊗_A x`` for ``u`` over ``A^op`` and ``x`` over ``A``: ``(dim, projection from u ⊗_k x)``."""
    if u.algebra != x.algebra.opposite():
        raise ModuleError("first factor must be a module over the opposite algebra")
    F = x.field
    relations = _balance_relations(u, x, x.algebra.generators, lambda g: x.gen_action(g))
    P, d = cokernel_projection(relations)
    return d, P


def _balance_relations(u: Module, x: Module, gens, x_action) -> ExactMatrix:
    F = x.field
    du, dx = u.dim, x.dim
    if du * dx == 0:
        return ExactMatrix.zeros(F, du * dx, 0)
    cols = []
    Iu = ExactMatrix.identity(F, du)
    Ix = ExactMatrix.identity(F, dx)
    for g in gens:
        cols.append(kron(u.gen_action(g), Ix) - kron(Iu, x_action(g)))
    return image_basis(hstack(F, cols))


def tensor_over_B(u: Module, x: Module) -> Module:
    """``DU ⊗_B X`` as an ``A``-module for ``U`` over ``B`` and ``X`` over ``A ⊗ B``."""
    A, B = _tensor_factors(x.algebra)
    if u.algebra != B:
        raise ModuleError("U must be a module over the second tensor factor")
    F = x.field
    du = dual(u)
    xb = restrict_to_B(x)
    xa = restrict_to_A(x)
    rel = _balance_relations(du, xb, B.generators, lambda h: xb.gen_action(h))
    Iu = ExactMatrix.identity(F, du.dim)
    big = Module(A, du.dim * x.dim, [kron(Iu, a) for a in xa.actions], validate=False)
    q, _ = quotient(big, rel)
    return q


# isomorphism testing


def is_isomorphic(m: Module, n: Module, seed: int = 0, tries: int = 40) -> bool:
    """Search ``Hom(m, n)`` for a bijection: random combinations, then small supports."""
    _check_same(m, n)
    if m.dim != n.dim:
        return False
    if m.dim == 0:
        return True
    if top_multiplicities(m) != top_multiplicities(n):
        return False
    H = hom_basis(m, n)
    if not H:
        return False
    F = m.field
    rng = np.random.default_rng(seed)
    hi = F.p if F.p is not None else 1000
    for _ in range(tries):
        coeffs = [int(c) for c in rng.integers(-hi // 2, hi // 2 + 1, size=len(H))]
        T = _combo(F, coeffs, H)
        if rank(T) == m.dim:
            return True
    small = range(1, min(hi, 4))
    for i in range(len(H)):
        for j in range(i, len(H)):
            for a in small:
                for b in small:
                    T = H[i].matrix.scale(a) if i == j else H[i].matrix.scale(a) + H[j].matrix.scale(b)
                    if rank(T) == m.dim:
                        return True
    return False


def _combo(F, coeffs, H: Sequence[ModuleHom]) -> ExactMatrix:
    acc = None
    for c, h in zip(coeffs, H):
        term = h.matrix.scale(c)
        acc = term if acc is None else acc + term
    return acc
