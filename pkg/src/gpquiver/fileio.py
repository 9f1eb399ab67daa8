"""JSON file formats for presentations, modules and algebra references.

An algebra reference is one of: a path to a presentation file, an inline
presentation object, ``{"tensor": [ref, ref]}`` or ``{"opposite": ref}``.
"""

from __future__ import annotations

import json
import os
import threading
from typing import Any, Dict, Optional

from .algebra import Arrow, BasedAlgebra, PathPresentation, PresentationError, Quiver, from_presentation, tensor
from .exactla import ExactMatrix, FieldSpec
from .modules import Module, ModuleError


class FormatError(ValueError):
    """A file could not be parsed or does not describe a valid object."""


_algebra_memo: Dict[str, BasedAlgebra] = {}
_memo_lock = threading.Lock()


def load_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise FormatError(f"{path}: {exc.strerror}") from None
    return loads(text, path)


def loads(text: str, where: str = "<string>") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{where}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _need(d: dict, key: str, where: str):
    if not isinstance(d, dict) or key not in d:
        raise FormatError(f"{where}: missing field {key!r}")
    return d[key]


# presentations


def presentation_to_dict(p: PathPresentation) -> dict:
    F = p.field
    return {
        "field": str(F),
        "vertices": p.quiver.vertex_count,
        "arrows": [{"id": a.id, "from": a.source, "to": a.target} for a in p.quiver.arrows],
        "relations": [
            [{"coeff": F.scalar_str(F.scalar(c)), "path": list(path)} for c, path in rel] for rel in p.relations
        ],
    }


def presentation_from_dict(d: dict, where: str = "<presentation>") -> PathPresentation:
    try:
        field = FieldSpec.parse(str(_need(d, "field", where)))
    except ValueError as exc:
        raise FormatError(f"{where}: {exc}") from None
    nv = _need(d, "vertices", where)
    if not isinstance(nv, int):
        raise FormatError(f"{where}: 'vertices' must be an integer")
    arrows = []
    for k, a in enumerate(d.get("arrows", [])):
        loc = f"{where}: arrows[{k}]"
        aid, src, tgt = _need(a, "id", loc), _need(a, "from", loc), _need(a, "to", loc)
        if not isinstance(aid, str) or not isinstance(src, int) or not isinstance(tgt, int):
            raise FormatError(f"{loc}: expected string id and integer endpoints")
        arrows.append(Arrow(aid, src, tgt))
    rels = []
    for r, rel in enumerate(d.get("relations", [])):
        terms = []
        for t, term in enumerate(rel):
            loc = f"{where}: relations[{r}][{t}]"
            coeff = _need(term, "coeff", loc)
            path = _need(term, "path", loc)
            try:
                c = field.scalar(coeff)
            except (ValueError, ZeroDivisionError) as exc:
                raise FormatError(f"{loc}: bad coefficient {coeff!r}: {exc}") from None
            if not isinstance(path, list) or not all(isinstance(x, str) for x in path):
                raise FormatError(f"{loc}: path must be a list of arrow ids")
            terms.append((c, tuple(path)))
        rels.append(tuple(terms))
    try:
        p = PathPresentation(Quiver(nv, tuple(arrows)), tuple(rels), field)
        for r, rel in enumerate(p.relations):
            p.relation_endpoints(rel)
    except PresentationError as exc:
        raise FormatError(f"{where}: {exc}") from None
    return p


def read_presentation(path: str) -> PathPresentation:
    return presentation_from_dict(load_json(path), path)


def write_presentation(p: PathPresentation, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(presentation_to_dict(p)))


# algebra references


def _inline_ref(ref: Any, base_dir: str, where: str) -> Any:
    """Replace file paths by their contents, recursively."""
    if isinstance(ref, str):
        path = ref if os.path.isabs(ref) else os.path.join(base_dir, ref)
        return _inline_ref(load_json(path), os.path.dirname(path), path)
    if isinstance(ref, dict) and "tensor" in ref:
        pair = ref["tensor"]
        if not isinstance(pair, list) or len(pair) != 2:
            raise FormatError(f"{where}: 'tensor' needs exactly two algebra references")
        return {"tensor": [_inline_ref(x, base_dir, where) for x in pair]}
    if isinstance(ref, dict) and "opposite" in ref:
        return {"opposite": _inline_ref(ref["opposite"], base_dir, where)}
    if isinstance(ref, dict):
        return presentation_to_dict(presentation_from_dict(ref, where))
    raise FormatError(f"{where}: cannot read an algebra from {type(ref).__name__}")


def _build(ref: Any) -> BasedAlgebra:
    key = json.dumps(ref, sort_keys=True)
    with _memo_lock:
        hit = _algebra_memo.get(key)
    if hit is not None:
        return hit
    if "tensor" in ref:
        alg = tensor(_build(ref["tensor"][0]), _build(ref["tensor"][1]))
    elif "opposite" in ref:
        alg = _build(ref["opposite"]).opposite()
    else:
        try:
            alg = from_presentation(presentation_from_dict(ref))
        except PresentationError as exc:
            raise FormatError(str(exc)) from None
    with _memo_lock:
        return _algebra_memo.setdefault(key, alg)


def resolve_algebra(ref: Any, base_dir: str = ".", where: str = "<algebra>") -> BasedAlgebra:
    return _build(_inline_ref(ref, base_dir, where))


def read_algebra(path: str) -> BasedAlgebra:
    return resolve_algebra(path)


def algebra_ref(alg: BasedAlgebra) -> dict:
    """Inline reference rebuilding ``alg`` (structurally equal)."""
    if alg.presentation is not None:
        return presentation_to_dict(alg.presentation)
    if alg.tensor_of is not None:
        return {"tensor": [algebra_ref(alg.tensor_of[0]), algebra_ref(alg.tensor_of[1])]}
    if alg._op is not None and (alg._op.presentation is not None or alg._op.tensor_of is not None):
        return {"opposite": algebra_ref(alg._op)}
    raise FormatError("algebra has no recorded construction to serialize")


def algebra_export(alg: BasedAlgebra) -> dict:
    """Human-facing description: basis labels and the generator order used in module files."""
    return {
        "field": str(alg.field),
        "dim": alg.dim,
        "basis": list(alg.labels),
        "idempotents": [alg.labels[e] for e in alg.idempotents],
        "generators": [alg.labels[g] for g in alg.generators],
        "radical": [alg.labels[r] for r in alg.radical],
        "ref": algebra_ref(alg),
    }


# modules


def module_to_dict(m: Module, ref: Optional[Any] = None) -> dict:
    alg = m.algebra
    F = m.field
    return {
        "algebra": algebra_ref(alg) if ref is None else ref,
        "dim": m.dim,
        "actions": {
            alg.labels[g]: [[F.scalar_str(v) for v in row] for row in act.a.tolist()]
            for g, act in zip(alg.generators, m.actions)
        },
    }


def module_from_dict(d: dict, base_dir: str = ".", where: str = "<module>") -> Module:
    alg = resolve_algebra(_need(d, "algebra", where), base_dir, where)
    dim = _need(d, "dim", where)
    if not isinstance(dim, int) or dim < 0:
        raise FormatError(f"{where}: 'dim' must be a non-negative integer")
    actions = _need(d, "actions", where)
    if not isinstance(actions, dict):
        raise FormatError(f"{where}: 'actions' must map generator labels to matrices")
    labels = [alg.labels[g] for g in alg.generators]
    unknown = sorted(set(actions) - set(labels))
    if unknown:
        raise FormatError(f"{where}: unknown generator label(s) {unknown}; expected {labels}")
    F = alg.field
    mats = []
    for lab in labels:
        rows = actions.get(lab)
        if rows is None:
            raise FormatError(f"{where}: missing action for generator {lab!r}")
        if len(rows) != dim or any(len(r) != dim for r in rows):
            raise FormatError(f"{where}: action of {lab!r} is not {dim}x{dim}")
        try:
            vals = [[F.scalar(v) for v in r] for r in rows]
        except (ValueError, ZeroDivisionError, TypeError) as exc:
            raise FormatError(f"{where}: action of {lab!r}: bad scalar ({exc})") from None
        mats.append(ExactMatrix.from_rows(F, vals, dim) if dim else ExactMatrix.zeros(F, 0, 0))
    try:
        return Module(alg, dim, mats)
    except ModuleError as exc:
        raise FormatError(f"{where}: {exc}") from None


def read_module(path: str) -> Module:
    return module_from_dict(load_json(path), os.path.dirname(os.path.abspath(path)), path)


def write_module(m: Module, path: str, ref: Optional[Any] = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(module_to_dict(m, ref)))
