import numpy as np
import pytest

from conftest import data_path
from gpquiver.exactla import FieldSpec
from gpquiver.gptest import HypothesisError, gp_direct
from gpquiver.harness import (
    DEFAULT_FAMILIES,
    THEOREMS,
    AgreementReport,
    GenSpec,
    family_algebra,
    random_gp_module,
    random_hom,
    random_module,
    verify_theorem,
)
from gpquiver.modules import is_projective

F = FieldSpec(101)


def test_every_theorem_has_a_default_family():
    assert set(THEOREMS) == set(DEFAULT_FAMILIES)


@pytest.mark.parametrize("theorem", THEOREMS)
def test_small_runs_agree(theorem):
    report = verify_theorem(theorem, GenSpec(samples=8, seed=3))
    assert report.passed, report.disagreements
    assert report.totals["samples"] == (4 if theorem == "prop53" else 8)


def test_report_is_deterministic():
    a = verify_theorem("thm34", GenSpec(samples=15, seed=11)).dumps()
    b = verify_theorem("thm34", GenSpec(samples=15, seed=11)).dumps()
    c = verify_theorem("thm34", GenSpec(samples=15, seed=12)).dumps()
    assert a == b
    assert a != c


def test_report_round_trip():
    r = verify_theorem("cor35", GenSpec(samples=5))
    again = AgreementReport.from_json(r.to_json())
    assert again.dumps() == r.dumps()
    assert r.prng.startswith("numpy.random.PCG64")
    assert r.caps["samples"] == 5 and r.field == "Fp:101"


def test_sample_streams_are_prefix_stable():
    # sample k depends only on (seed, k)
    short = verify_theorem("prop42", GenSpec(samples=5, seed=4)).rows
    long = verify_theorem("prop42", GenSpec(samples=9, seed=4)).rows
    assert [r["module"] for r in long[:5]] == [r["module"] for r in short]


def test_samples_are_not_all_trivial():
    rows = verify_theorem("thm34", GenSpec(samples=40, seed=0)).rows
    outs = {r["verdicts"]["direct"] for r in rows}
    assert outs == {"yes", "no"}
    assert sum(1 for r in rows if r["dim"] == 0) < 10


@pytest.mark.parametrize("seed", range(6))
def test_random_module_respects_cap(seed):
    T = family_algebra("dual_numbers*kA2", F)
    rng = np.random.default_rng(seed)
    m = random_module(T, 5, rng)
    assert m.dim <= 5
    n = random_module(T, 5, rng)
    assert random_hom(m, n, rng).is_homomorphism()


@pytest.mark.parametrize("seed", range(6))
def test_random_gp_module_is_gp(seed):
    T = family_algebra("dual_numbers*kA2", F)
    m = random_gp_module(T, 8, np.random.default_rng(seed), 20)
    assert gp_direct(T, m).is_yes


def test_gp_modules_over_finite_gldim_are_projective():
    A = family_algebra("kA3_with_relation", F)
    m = random_gp_module(A, 8, np.random.default_rng(0), 20)
    assert is_projective(m)


def test_custom_family_and_field():
    fam = f"custom:{data_path('dual_numbers.json')}*custom:{data_path('kA2.json')}"
    r = verify_theorem("thm34", GenSpec(family=fam, samples=6, field="Fp:5"))
    assert r.passed and r.field == "Fp:5"


def test_hypothesis_failures_raise():
    with pytest.raises(HypothesisError):
        verify_theorem("cor35", GenSpec(family="kA2*kA2", samples=2))
    with pytest.raises(HypothesisError):
        verify_theorem("lemma51", GenSpec(family="dual_numbers*Bn:2", samples=2, bound=6))


def test_bad_inputs():
    with pytest.raises(ValueError):
        verify_theorem("thm99", GenSpec(samples=1))
    with pytest.raises(ValueError):
        verify_theorem("thm34", GenSpec(family="kA2", samples=1))
    with pytest.raises(ValueError):
        verify_theorem("thm34", GenSpec(family="nope*kA2", samples=1))
    with pytest.raises(ValueError):
        GenSpec(samples=0)
