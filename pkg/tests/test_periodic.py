import numpy as np
import pytest

from gpquiver.algebra import Arrow, PathPresentation, Quiver, dual_numbers, from_presentation, make_Bn, tensor
from gpquiver.exactla import ExactMatrix
from gpquiver.gptest import HypothesisError
from gpquiver.harness import random_module
from gpquiver.modules import ModuleHom, is_projective, projective, simple
from gpquiver.periodic import (
    PeriodicChainMap,
    PeriodicComplex,
    bimodule_module,
    functor_R,
    identity_map,
    is_contractible,
    is_periodic_complex_of_projectives,
    lemma51_check,
    null_homotopy,
    prop53_check,
)


def hom(src, tgt, mat=None):
    F = src.field
    if mat is None:
        return ModuleHom(src, tgt, ExactMatrix.zeros(F, tgt.dim, src.dim))
    return ModuleHom(src, tgt, mat)


def two_periodic(P, d0_identity):
    F = P.field
    d0 = hom(P, P, ExactMatrix.identity(F, P.dim)) if d0_identity else hom(P, P)
    return PeriodicComplex(2, [P, P], [d0, hom(P, P)])


def check_homotopy(f, h):
    n = f.source.n
    for i in range(n):
        lhs = f.components[i].matrix
        a = h[(i + 1) % n].matrix @ f.source.diffs[i].matrix
        b = f.target.diffs[(i - 1) % n].matrix @ h[i].matrix
        assert lhs == a + b


# oracles first: hand-built complexes


def test_cone_of_identity_is_contractible(A2):
    c = two_periodic(projective(A2, 0), True)
    assert c.is_complex()
    assert is_contractible(c)
    check_homotopy(identity_map(c), null_homotopy(identity_map(c)))


def test_zero_differentials_not_contractible(A2):
    c = two_periodic(projective(A2, 0), False)
    assert c.is_complex()
    assert not is_contractible(c)


def test_one_periodic_square_zero(D):
    # k[y]/(y^2) with d = y: homology is nonzero, so not contractible
    P = projective(D, 0)
    y = ExactMatrix.from_rows(D.field, [[0, 0], [1, 0]])
    c = PeriodicComplex(1, [P], [hom(P, P, y)])
    assert c.is_complex()
    assert not is_contractible(c)


def test_not_a_complex(A2):
    P = projective(A2, 0)
    I = ExactMatrix.identity(A2.field, P.dim)
    assert not PeriodicComplex(2, [P, P], [hom(P, P, I), hom(P, P, I)]).is_complex()


def test_contractibility_needs_projectives(A2):
    S = simple(A2, 0)
    c = PeriodicComplex(1, [S], [hom(S, S)])
    assert not is_periodic_complex_of_projectives(c)
    with pytest.raises(ValueError):
        is_contractible(c)


def test_bad_shape():
    with pytest.raises(ValueError):
        PeriodicComplex(2, [], [])


# properties


@pytest.mark.parametrize("n", [1, 2, 3])
def test_projectives_map_to_contractible_complexes(A2, n):
    T = tensor(A2, make_Bn(n))
    for t in range(T.vertex_count):
        c = functor_R(projective(T, t))
        assert c.is_complex()
        assert is_periodic_complex_of_projectives(c)
        assert is_contractible(c)


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("seed", range(4))
def test_functor_R_is_complex_of_right_size(A2, n, seed):
    T = tensor(A2, make_Bn(n))
    x = random_module(T, 10, np.random.default_rng(seed))
    c = functor_R(x)
    assert c.n == n and c.is_complex() and c.dim == x.dim


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("seed", range(5))
def test_periodic_object_check_on_random_modules(A2, n, seed):
    T = tensor(A2, make_Bn(n))
    x = random_module(T, 10, np.random.default_rng(seed))
    r = lemma51_check(A2, x)
    assert r.agree
    if r.contractible is not None:
        assert r.contractible == is_projective(x)


def test_identity_map_commutes(A2):
    c = two_periodic(projective(A2, 0), True)
    assert identity_map(c).commutes()
    F = A2.field
    bad = PeriodicChainMap(c, c, [hom(c.terms[0], c.terms[0], ExactMatrix.identity(F, 2)), hom(c.terms[1], c.terms[1])])
    assert not bad.commutes()


def test_functor_R_rejects_other_factors(DA2, X_y):
    with pytest.raises(ValueError):
        functor_R(X_y)


def test_periodic_object_check_requires_finite_gldim():
    D = dual_numbers()
    T = tensor(D, make_Bn(2))
    x = random_module(T, 6, np.random.default_rng(1))
    with pytest.raises(HypothesisError):
        lemma51_check(D, x, 6)


# enveloping algebra


def test_bimodule_module_is_regular_as_one_sided(A2):
    m = bimodule_module(A2)
    m.validate()
    assert m.dim == A2.dim


def test_enveloping_check_small_cases(A2, D):
    gp, selfinj, agree = prop53_check(D)
    assert gp.is_yes and selfinj and agree
    gp, selfinj, agree = prop53_check(A2)
    assert not gp.is_yes and not selfinj and agree


def test_enveloping_check_needs_gorenstein():
    # k[x, y]/(x, y)^2 has infinite injective dimension on both sides
    q = Quiver(1, (Arrow("x", 0, 0), Arrow("y", 0, 0)))
    rels = tuple(((1, (a, b)),) for a in "xy" for b in "xy")
    alg = from_presentation(PathPresentation(q, rels))
    with pytest.raises(HypothesisError):
        prop53_check(alg, bound=4)
