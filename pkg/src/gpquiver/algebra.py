"""Finite-dimensional based algebras built from bound quivers.

Paths compose like functions: the path that travels ``a`` and then ``b`` is
the algebra element ``b*a``, so an arrow ``a: i -> j`` lies in ``e_j A e_i``
and ``A e_i`` is the indecomposable projective at vertex ``i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .exactla import DEFAULT_FIELD, ExactMatrix, FieldSpec, rref

DEFAULT_PATH_CAP = 64
# Guards against exponential path growth in presentations that are not admissible.
_MAX_PATHS = 20000


class PresentationError(ValueError):
    """A quiver presentation is malformed, not admissible, or not finite-dimensional."""


@dataclass(frozen=True)
class Arrow:
    id: str
    source: int
    target: int


@dataclass(frozen=True)
class Quiver:
    vertex_count: int
    arrows: Tuple[Arrow, ...] = ()

    def __post_init__(self):
        if self.vertex_count < 1:
            raise PresentationError("a quiver needs at least one vertex")
        seen = set()
        for a in self.arrows:
            if a.id in seen:
                raise PresentationError(f"duplicate arrow id {a.id!r}")
            if _looks_like_trivial_label(a.id) or "*" in a.id or "|" in a.id:
                raise PresentationError(f"arrow id {a.id!r} clashes with basis labels")
            seen.add(a.id)
            for v in (a.source, a.target):
                if not 0 <= v < self.vertex_count:
                    raise PresentationError(f"arrow {a.id!r} has vertex {v} outside 0..{self.vertex_count - 1}")

    def arrow(self, arrow_id: str) -> Arrow:
        for a in self.arrows:
            if a.id == arrow_id:
                return a
        raise PresentationError(f"unknown arrow id {arrow_id!r}")


def _looks_like_trivial_label(s: str) -> bool:
    return len(s) > 1 and s[0] == "e" and s[1:].isdigit()


# A relation is a tuple of (coefficient, path) terms; a path lists arrow ids in travel order.
Relation = Tuple[Tuple[object, Tuple[str, ...]], ...]


@dataclass(frozen=True)
class PathPresentation:
    quiver: Quiver
    relations: Tuple[Relation, ...] = ()
    field: FieldSpec = DEFAULT_FIELD

    def __post_init__(self):
        # canonical coefficients, so equal presentations compare equal
        rels = tuple(tuple((self.field.scalar(c), tuple(path)) for c, path in rel) for rel in self.relations)
        object.__setattr__(self, "relations", rels)

    def relation_endpoints(self, rel: Relation) -> Tuple[int, int]:
        ends = set()
        for coeff, path in rel:
            if len(path) < 2:
                raise PresentationError(f"relation term {list(path)} has length < 2 (not admissible)")
            arrows = [self.quiver.arrow(a) for a in path]
            for x, y in zip(arrows, arrows[1:]):
                if x.target != y.source:
                    raise PresentationError(f"path {list(path)} is not composable at {x.id!r} -> {y.id!r}")
            ends.add((arrows[0].source, arrows[-1].target))
        if len(ends) != 1:
            raise PresentationError(f"relation terms do not share source and target: {sorted(ends)}")
        return ends.pop()


class BasedAlgebra:
    """Finite-dimensional algebra with a distinguished basis.

    ``mult[i, j]`` holds the coordinates of ``b_i * b_j``. ``idempotents``,
    ``generators`` and ``radical`` are lists of basis indices; ``words[b]``
    lists generator basis indices whose product, left to right, is ``b``.
    """

    def __init__(
        self,
        field: FieldSpec,
        labels: Sequence[str],
        mult: np.ndarray,
        idempotents: Sequence[int],
        generators: Sequence[int],
        radical: Sequence[int],
        words: Sequence[Sequence[int]],
        tensor_of: Optional[Tuple["BasedAlgebra", "BasedAlgebra"]] = None,
        presentation: Optional[PathPresentation] = None,
    ):
        self.field = field
        self.labels = list(labels)
        self.dim = len(self.labels)
        self.mult = mult
        self.idempotents = list(idempotents)
        self.generators = list(generators)
        self.radical = list(radical)
        self.words = [list(w) for w in words]
        self.tensor_of = tensor_of
        self.presentation = presentation
        self._op: Optional[BasedAlgebra] = None
        self._cache: Dict[object, object] = {}
        if mult.shape != (self.dim, self.dim, self.dim):
            raise ValueError("structure constants have the wrong shape")
        gens = set(self.generators)
        if not set(self.idempotents) <= gens:
            raise ValueError("idempotents must be among the generators")
        for b, w in enumerate(self.words):
            if not w or not set(w) <= gens:
                raise ValueError(f"basis element {self.labels[b]} has no generator word")
        self.left_idem, self.right_idem = self._locate()
        self._key = (
            field,
            tuple(self.labels),
            self.mult.tobytes() if self.mult.dtype != object else tuple(self.mult.flat),
            tuple(self.idempotents),
            tuple(self.generators),
        )

    def _locate(self):
        left, right = [], []
        for b in range(self.dim):
            lo = [t for t, e in enumerate(self.idempotents) if self.mult[e, b, b] == 1 and self._is_basis(self.mult[e, b], b)]
            ro = [t for t, e in enumerate(self.idempotents) if self.mult[b, e, b] == 1 and self._is_basis(self.mult[b, e], b)]
            if len(lo) != 1 or len(ro) != 1:
                raise ValueError(f"basis element {self.labels[b]} is not in a single e_i A e_j")
            left.append(lo[0])
            right.append(ro[0])
        return left, right

    @staticmethod
    def _is_basis(vec, b) -> bool:
        nz = np.nonzero(vec)[0]
        return len(nz) == 1 and nz[0] == b and vec[b] == 1

    def __eq__(self, other) -> bool:
        if not isinstance(other, BasedAlgebra):
            return NotImplemented
        return self is other or self._key == other._key

    def __hash__(self):
        return hash(self._key[:2] + self._key[3:])

    def __repr__(self) -> str:
        return f"BasedAlgebra(dim={self.dim}, idempotents={len(self.idempotents)}, field={self.field})"

    @property
    def vertex_count(self) -> int:
        return len(self.idempotents)

    def is_idempotent(self, b: int) -> bool:
        return b in self.idempotents

    def product(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Product of two coordinate vectors."""
        t = np.tensordot(x, self.mult, axes=([0], [0]))
        return self.field.reduce(np.tensordot(y, t, axes=([0], [0])))

    def left_mult(self, b: int) -> ExactMatrix:
        """Matrix of ``v -> b_b * v``."""
        return ExactMatrix(self.field, self.mult[b].T.copy())

    def right_mult(self, b: int) -> ExactMatrix:
        """Matrix of ``v -> v * b_b``."""
        return ExactMatrix(self.field, self.mult[:, b, :].T.copy())

    def check_axioms(self) -> None:
        """Raise ValueError unless associativity, unit, orthogonality and radical conditions hold."""
        F = self.field
        m = self.mult
        # (b_i b_j) b_k versus b_i (b_j b_k)
        lhs = F.reduce(np.einsum("ijl,lkm->ijkm", m, m))
        rhs = F.reduce(np.einsum("jkl,ilm->ijkm", m, m))
        if not np.all(lhs == rhs):
            raise ValueError("multiplication is not associative")
        one = F.zeros(self.dim)
        for e in self.idempotents:
            one[e] = F.scalar(1)
        eye = F.eye(self.dim)
        for b in range(self.dim):
            if not (np.all(self.product(one, eye[b]) == eye[b]) and np.all(self.product(eye[b], one) == eye[b])):
                raise ValueError(f"sum of idempotents is not a unit on {self.labels[b]}")
        for s in self.idempotents:
            for t in self.idempotents:
                expect = eye[s] if s == t else F.zeros(self.dim)
                if not np.all(m[s, t] == expect):
                    raise ValueError("idempotents are not orthogonal")
        rad = set(self.radical)
        top = [b for b in range(self.dim) if b not in rad]
        if sorted(top) != sorted(self.idempotents):
            raise ValueError("radical complement is not spanned by the idempotents")
        for x in self.radical:
            for b in range(self.dim):
                for prod in (m[x, b], m[b, x]):
                    if any(prod[c] != 0 for c in top):
                        raise ValueError("radical is not a two-sided ideal")
        # nilpotency: rad^k = 0 for some k <= dim
        span = ExactMatrix(F, F.eye(self.dim)[:, self.radical])
        for _ in range(self.dim + 1):
            if span.cols == 0 or span.is_zero():
                return
            cols = []
            for x in self.radical:
                cols.append((self.left_mult(x) @ span).a)
            stacked = ExactMatrix(F, np.concatenate(cols, axis=1))
            R, piv = rref(stacked)
            span = stacked[:, piv] if piv else ExactMatrix.zeros(F, self.dim, 0)
        raise ValueError("radical is not nilpotent")

    def opposite(self) -> "BasedAlgebra":
        if self._op is None:
            tensor_of = None
            if self.tensor_of is not None:
                tensor_of = (self.tensor_of[0].opposite(), self.tensor_of[1].opposite())
            op = BasedAlgebra(
                self.field,
                self.labels,
                np.ascontiguousarray(self.mult.transpose(1, 0, 2)),
                self.idempotents,
                self.generators,
                self.radical,
                [list(reversed(w)) for w in self.words],
                tensor_of=tensor_of,
            )
            op._op = self
            self._op = op
        return self._op


def _paths_below(quiver: Quiver, max_len: int) -> Dict[int, List[Tuple[int, ...]]]:
    """Nontrivial paths by length (travel order, arrow indices), lengths 1..max_len."""
    out: Dict[int, List[Tuple[int, ...]]] = {1: [(i,) for i in range(len(quiver.arrows))]}
    total = len(out[1])
    for L in range(2, max_len + 1):
        nxt = []
        for p in out[L - 1]:
            end = quiver.arrows[p[-1]].target
            for i, a in enumerate(quiver.arrows):
                if a.source == end:
                    nxt.append(p + (i,))
        out[L] = nxt
        total += len(nxt)
        if total > _MAX_PATHS:
            raise PresentationError(f"more than {_MAX_PATHS} paths below length {L}; presentation is not finite-dimensional")
        if not nxt:
            break
    return out


def _reduce_presentation(p: PathPresentation, cap: int):
    """Find the first truncation length at which the quotient stabilizes.

    Returns ``(paths, basis_paths, reduction)`` where ``reduction`` maps each
    non-basis path of length >= 2 to its normal form over basis paths.
    """
    F = p.field
    Q = p.quiver
    rels = []
    for rel in p.relations:
        s, t = p.relation_endpoints(rel)
        terms = {}
        for coeff, path in rel:
            key = tuple(Q.arrows.index(Q.arrow(a)) for a in path)
            terms[key] = F.reduce(terms.get(key, 0) + F.scalar(coeff))
        terms = {k: v for k, v in terms.items() if v != 0}
        if terms:
            rels.append((s, t, terms))

    for M in range(3, cap + 2):
        # work modulo paths of length >= M
        by_len = _paths_below(Q, M - 1)
        long_paths = [q for L in sorted(by_len, reverse=True) if L >= 2 for q in sorted(by_len[L])]
        col = {q: i for i, q in enumerate(long_paths)}
        # prefixes/suffixes: any path (incl. trivial) ending at s / starting at t
        all_paths = [()] + [q for L in sorted(by_len) for q in by_len[L]]

        def src(q):
            return Q.arrows[q[0]].source

        def tgt(q):
            return Q.arrows[q[-1]].target

        rows = []
        for s, t, terms in rels:
            for before in all_paths:
                if before and tgt(before) != s:
                    continue
                for after in all_paths:
                    if after and src(after) != t:
                        continue
                    vec = {}
                    for q, c in terms.items():
                        w = before + q + after
                        if len(w) < M:
                            vec[col[w]] = c
                    if vec:
                        rows.append(vec)
        R = None
        pivots: List[int] = []
        if rows:
            mat = F.zeros((len(rows), len(long_paths)))
            for i, vec in enumerate(rows):
                for j, c in vec.items():
                    mat[i, j] = c
            R, pivots = rref(ExactMatrix(F, mat))
        pivset = set(pivots)
        basis_long = [q for q in long_paths if col[q] not in pivset]
        # stable once no residue class of the top length survives
        if any(len(q) == M - 1 for q in basis_long):
            continue
        reduction = {}
        for i, pc in enumerate(pivots):
            q = long_paths[pc]
            nf = {}
            for b in basis_long:
                c = R.a[i, col[b]]
                if c != 0:
                    nf[b] = F.reduce(-c)
            reduction[q] = nf
        return M, basis_long, reduction
    raise PresentationError(f"path growth does not stop below length cap {cap}; presentation is not finite-dimensional")


def from_presentation(p: PathPresentation, cap: int = DEFAULT_PATH_CAP) -> BasedAlgebra:
    F = p.field
    Q = p.quiver
    M, basis_long, reduction = _reduce_presentation(p, cap)
    n = Q.vertex_count
    arrow_paths = [(i,) for i in range(len(Q.arrows))]
    basis_long = sorted(basis_long, key=lambda q: (len(q), q))
    # basis: trivial paths, arrows, longer residue classes
    basis: List[object] = [("e", v) for v in range(n)] + arrow_paths + basis_long
    index = {b: i for i, b in enumerate(basis)}
    dim = len(basis)

    def ends(b):
        if b[0] == "e":
            return b[1], b[1]
        return Q.arrows[b[0]].source, Q.arrows[b[-1]].target

    def normal_form(path) -> Dict[int, object]:
        if len(path) >= M:
            return {}
        if path in index:
            return {index[path]: F.scalar(1)}
        return {index[b]: c for b, c in reduction.get(path, {}).items()}

    mult = F.zeros((dim, dim, dim))
    for i, x in enumerate(basis):
        sx, tx = ends(x)
        for j, y in enumerate(basis):
            sy, ty = ends(y)
            # x * y: travel y, then x
            if ty != sx:
                continue
            if x[0] == "e":
                mult[i, j, j] = F.scalar(1)
                continue
            if y[0] == "e":
                mult[i, j, i] = F.scalar(1)
                continue
            for k, c in normal_form(y + x).items():
                mult[i, j, k] = c

    def label(b):
        if b[0] == "e":
            return f"e{b[1]}"
        return "*".join(Q.arrows[a].id for a in reversed(b))

    words = []
    for b in basis:
        if b[0] == "e":
            words.append([index[b]])
        else:
            words.append([index[(a,)] for a in reversed(b)])
    alg = BasedAlgebra(
        F,
        [label(b) for b in basis],
        mult,
        idempotents=list(range(n)),
        generators=list(range(n + len(Q.arrows))),
        radical=list(range(n, dim)),
        words=words,
        presentation=p,
    )
    return alg


def tensor(a: BasedAlgebra, b: BasedAlgebra) -> BasedAlgebra:
    """``a ⊗_k b`` with basis pairs ``(x, y)`` at index ``x * b.dim + y``."""
    if a.field != b.field:
        raise ValueError(f"field mismatch: {a.field} vs {b.field}")
    F = a.field
    da, db = a.dim, b.dim
    mult = np.einsum("ijk,lmn->iljmkn", a.mult, b.mult).reshape(da * db, da * db, da * db)
    mult = F.reduce(mult)

    def pair(x, y):
        return x * db + y

    idem = [pair(e, f) for e in a.idempotents for f in b.idempotents]
    gens: List[int] = []
    for g in a.generators:
        for f in b.idempotents:
            gens.append(pair(g, f))
    for h in b.generators:
        if h in b.idempotents:
            continue
        for e in a.idempotents:
            gens.append(pair(e, h))
    rad_a, rad_b = set(a.radical), set(b.radical)
    radical = [pair(x, y) for x in range(da) for y in range(db) if x in rad_a or y in rad_b]
    words = []
    for x in range(da):
        for y in range(db):
            f_left = b.idempotents[b.left_idem[y]]
            e_right = a.idempotents[a.right_idem[x]]
            # x ⊗ y = (x ⊗ f_left(y)) (e_right(x) ⊗ y)
            w = [pair(g, f_left) for g in a.words[x]]
            if not (y in b.idempotents):
                w += [pair(e_right, h) for h in b.words[y]]
            words.append(w)
    labels = [f"{a.labels[x]}|{b.labels[y]}" for x in range(da) for y in range(db)]
    return BasedAlgebra(F, labels, mult, idem, gens, radical, words, tensor_of=(a, b))


def enveloping(a: BasedAlgebra) -> BasedAlgebra:
    key = "enveloping"
    if key not in a._cache:
        a._cache[key] = tensor(a, a.opposite())
    return a._cache[key]


def ground_field_algebra(field: FieldSpec = DEFAULT_FIELD) -> BasedAlgebra:
    return from_presentation(PathPresentation(Quiver(1), (), field))


def cyclic_presentation(n: int, field: FieldSpec = DEFAULT_FIELD) -> PathPresentation:
    """The oriented cycle on ``n`` vertices with every path of length two killed."""
    if n < 1:
        raise ValueError("n must be at least 1")
    arrows = tuple(Arrow(f"a{i}", i, (i + 1) % n) for i in range(n))
    rels = tuple(((1, (f"a{i}", f"a{(i + 1) % n}")),) for i in range(n))
    return PathPresentation(Quiver(n, arrows), rels, field)


def make_Bn(n: int, field: FieldSpec = DEFAULT_FIELD) -> BasedAlgebra:
    return from_presentation(cyclic_presentation(n, field))


# Shipped families.

def kA2_presentation(field: FieldSpec = DEFAULT_FIELD) -> PathPresentation:
    return PathPresentation(Quiver(2, (Arrow("a", 0, 1),)), (), field)


def kA3_relation_presentation(field: FieldSpec = DEFAULT_FIELD) -> PathPresentation:
    """``0 -a-> 1 -b-> 2`` with ``b*a = 0``."""
    q = Quiver(3, (Arrow("a", 0, 1), Arrow("b", 1, 2)))
    return PathPresentation(q, (((1, ("a", "b")),),), field)


def dual_numbers_presentation(field: FieldSpec = DEFAULT_FIELD, name: str = "x") -> PathPresentation:
    return PathPresentation(Quiver(1, (Arrow(name, 0, 0),)), (((1, (name, name)),),), field)


def commutative_square_presentation(field: FieldSpec = DEFAULT_FIELD) -> PathPresentation:
    """``0 -> 1 -> 3`` and ``0 -> 2 -> 3`` with the two paths identified."""
    q = Quiver(4, (Arrow("a", 0, 1), Arrow("b", 1, 3), Arrow("c", 0, 2), Arrow("d", 2, 3)))
    return PathPresentation(q, (((1, ("a", "b")), (-1, ("c", "d"))),), field)


def kA2(field: FieldSpec = DEFAULT_FIELD) -> BasedAlgebra:
    return from_presentation(kA2_presentation(field))


def dual_numbers(field: FieldSpec = DEFAULT_FIELD, name: str = "x") -> BasedAlgebra:
    return from_presentation(dual_numbers_presentation(field, name))


def kA3_with_relation(field: FieldSpec = DEFAULT_FIELD) -> BasedAlgebra:
    return from_presentation(kA3_relation_presentation(field))


def commutative_square(field: FieldSpec = DEFAULT_FIELD) -> BasedAlgebra:
    return from_presentation(commutative_square_presentation(field))
