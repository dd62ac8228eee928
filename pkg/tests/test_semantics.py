import random

import pytest

from mvmodal import (BudgetError, InputError, StageTower, StepEvaluator,
                     check_lemma1, check_stage_coherence, check_truth_lemma,
                     eval_model, eval_step, lemma2_model, load_model,
                     model_consequence, model_to_dict, sigma_k, sigma_states,
                     step_consequence, terminal_stage)
from conftest import make_session, random_formula, random_model

FUNCTORS = ["powerset", "fuzzyhom", "neighborhood", "selection", "distribution:2"]


# -- concrete evaluation ----------------------------------------------------------------


def test_eval_model_powerset_hand_values(luk3_ps):
    s = luk3_ps
    m = load_model(s, {"states": 3, "valuation": [[2, 0], [1, 2], [0, 1]],
                       "sigma": [[1, 2], [], [0]]})
    assert eval_model(s, m, s.parse("box(p)")).values == (0, 2, 2)
    assert eval_model(s, m, s.parse("diamond(p)")).values == (1, 0, 2)
    assert eval_model(s, m, s.parse("p & q")).values == (0, 1, 0)
    assert eval_model(s, m, s.parse("p -> q")).values == (0, 2, 2)


def test_eval_model_distribution_hand_values():
    s = make_session(algebra="lukasiewicz:3", functor="distribution:2",
                     propositions=("p",))
    m = load_model(s, {"states": 2, "valuation": [[1], [2]],
                       "sigma": [[1, 1], [0, 2]]})
    # state 0: E(p) = (1/2)(1/2) + (1/2)(1) = 3/4 -> floor 1/2
    assert eval_model(s, m, s.parse("prob(p)")).values == (1, 2)


def test_model_consequence_witness(boolean_ps):
    s = boolean_ps
    m = load_model(s, {"states": 2, "valuation": [[1, 0], [1, 1]],
                       "sigma": [[0], [1]]})
    ok, state = model_consequence(s, m, [s.parse("p")], s.parse("q"))
    assert not ok and state == 0
    ok, state = model_consequence(s, m, [s.parse("q")], s.parse("p"))
    assert ok and state is None


def test_model_json_round_trip_and_validation(boolean_ps):
    s = boolean_ps
    data = {"states": 2, "valuation": [[1, 0], [0, 1]], "sigma": [[0, 1], []]}
    m = load_model(s, data)
    assert model_to_dict(s, m) == data
    with pytest.raises(InputError):
        load_model(s, {"states": 0, "valuation": [], "sigma": []})
    with pytest.raises(InputError):
        load_model(s, {"states": 1, "valuation": [[1]], "sigma": [[0]]})
    with pytest.raises(InputError):
        load_model(s, {"states": 1, "valuation": [[1, 0]], "sigma": [[3]]})
    with pytest.raises(InputError):
        load_model(s, {"states": 1, "valuation": [[1, 2]], "sigma": [[0]]})


def test_distribution_model_counts_must_sum():
    s = make_session(functor="distribution:2", propositions=("p",))
    with pytest.raises(InputError):
        load_model(s, {"states": 2, "valuation": [[0], [0]], "sigma": [[1, 0], [1, 1]]})


# -- stage tower -------------------------------------------------------------------------


def test_stage_sizes_powerset(boolean_ps1):
    tower = StageTower(boolean_ps1)
    assert [tower.size(k) for k in range(3)] == [2, 8, 512]


def test_stage_budget_error_names_level(boolean_ps):
    tower = StageTower(boolean_ps)
    with pytest.raises(BudgetError) as err:
        tower.size(2)
    assert "stage 2" in str(err.value)


def test_stage_codecs_round_trip(boolean_ps1):
    tower = StageTower(boolean_ps1)
    for k in range(3):
        for t in range(tower.size(k)):
            assert tower.encode_full(k, tower.decode_full(k, t)) == t


def test_stage_describe_nested(boolean_ps1):
    tower = StageTower(boolean_ps1)
    assert tower.describe(0, 0) == "<p=0>"
    assert tower.describe(1, 0) == "<p=0; {}>"
    assert tower.describe(1, 7) == "<p=1; {<p=0>, <p=1>}>"


def test_terminal_stage_wrapper(boolean_ps1):
    stage = terminal_stage(boolean_ps1, 1)
    assert stage.level == 1 and stage.carrier.size == 8
    assert stage.carrier.describe(0) == "<p=0; {}>"


def test_iota_gamma_tables_retraction(boolean_ps1):
    tower = StageTower(boolean_ps1)
    for k in range(2):
        iota = tower.iota_table(k)
        gamma = tower.gamma_table(k)
        assert len(iota) == tower.size(k) and len(gamma) == tower.size(k + 1)
        for t in range(tower.size(k)):
            assert gamma[iota[t]] == t


def test_iota0_override_changes_section(boolean_ps1):
    plain = StageTower(boolean_ps1)
    s_over = make_session(propositions=("p",), iota0=3)  # T(stage0) id 3 = {0,1}
    over = StageTower(s_over)
    assert plain.iota_table(0) != over.iota_table(0)
    assert check_lemma1(s_over, 2).ok  # sections retract for any section choice


def test_stage_tables_cached_on_disk(tmp_path, monkeypatch):
    s = make_session(propositions=("p",), cache_dir=str(tmp_path))
    tower = StageTower(s)
    iota = tower.iota_table(1)
    files = list(tmp_path.glob("*-iota1.json"))
    assert len(files) == 1
    fresh = StageTower(s)
    assert fresh.iota_table(1) == iota


# -- step semantics -----------------------------------------------------------------------


def test_eval_step_stage_zero_is_propositional(luk3_ps):
    s = luk3_ps
    vals = eval_step(s, s.parse("p -> q"), 0)
    tower = StageTower(s)
    for t in range(9):
        pv, qv = s.valuations.decode(t)
        assert vals[t] == s.lat.residuum(pv, qv)


def test_eval_step_rejects_underranked_stage(boolean_ps):
    with pytest.raises(InputError):
        eval_step(boolean_ps, boolean_ps.parse("box(p)"), 0)


def test_step_consequence_witness(boolean_ps1):
    s = boolean_ps1
    ok, t = step_consequence(s, [s.parse("box(p)")], s.parse("diamond(p)"), 1)
    assert not ok
    assert StageTower(s).describe(1, t) == "<p=0; {}>"
    ok, t = step_consequence(s, [s.parse("box(p)"), s.parse("diamond(c1)")],
                             s.parse("diamond(p)"), 1)
    assert ok and t is None


def test_step_evaluator_memoizes_across_formulas(boolean_ps1):
    s = boolean_ps1
    ev = StepEvaluator(s)
    tower = StageTower(s)
    elem = tower.decode_full(1, 5)
    a = ev.value(s.parse("box(p)"), 1, elem)
    b = ev.value(s.parse("box(p) | box(p)"), 1, elem)
    assert b == a


# -- sigma tower and the truth lemma ------------------------------------------------------


def test_sigma_states_shapes(boolean_ps1):
    s = boolean_ps1
    m = load_model(s, {"states": 2, "valuation": [[1], [0]], "sigma": [[0, 1], []]})
    s0 = sigma_states(s, m, 0)
    assert s0 == [(1, None), (0, None)]
    ids = sigma_k(s, m, 1)
    tower = StageTower(s)
    assert tower.describe(1, ids[0]) == "<p=1; {<p=0>, <p=1>}>"
    assert tower.describe(1, ids[1]) == "<p=0; {}>"


@pytest.mark.parametrize("functor", FUNCTORS)
def test_truth_lemma_randomized(functor):
    rng = random.Random(hash(functor) % 10**6)
    s = make_session(algebra="lukasiewicz:3", functor=functor, propositions=("p", "q"))
    for _ in range(40):
        m = random_model(s, rng.randrange(1, 4), rng)
        phi = random_formula(s, rng, max_rank=2)
        report = check_truth_lemma(s, m, phi)
        assert report.ok, (functor, s.pretty(phi), report.summary())


def test_truth_lemma_detects_broken_step_semantics(boolean_ps1, monkeypatch):
    s = boolean_ps1
    m = load_model(s, {"states": 1, "valuation": [[1]], "sigma": [[]]})
    import mvmodal.semantics as sem

    real = StepEvaluator.value

    def corrupted(self, phi, k, elem):
        out = real(self, phi, k, elem)
        from mvmodal.syntax import Modal
        if isinstance(phi, Modal) and k == 1:
            return self.s.lat.bot
        return out

    monkeypatch.setattr(StepEvaluator, "value", corrupted)
    report = check_truth_lemma(s, m, s.parse("box(p)"))
    assert not report.ok
    assert report.violations[0].witness == (0,)


# -- tower section checks -------------------------------------------------------------------


@pytest.mark.parametrize("functor", FUNCTORS)
def test_lemma1_level_one_all_functors(functor):
    s = make_session(functor=functor, propositions=("p",))
    report = check_lemma1(s, 1)
    assert report.ok and report.checked > 0


def test_lemma1_level_two_powerset(boolean_ps1):
    report = check_lemma1(boolean_ps1, 2)
    assert report.ok
    assert report.checked == 512 * 5


def test_lemma1_detects_broken_projection(boolean_ps1, monkeypatch):
    real = StageTower.gamma_dec

    def bad_gamma(self, k):
        if k == 0:
            return lambda elem: (1 - elem[0], None)  # flips the valuation
        return real(self, k)

    monkeypatch.setattr(StageTower, "gamma_dec", bad_gamma)
    report = check_lemma1(boolean_ps1, 1)
    assert not report.ok
    assert any(v.law == "projection-retracts-section" for v in report.violations)


def test_stage_coherence(boolean_ps1):
    s = boolean_ps1
    report = check_stage_coherence(s, s.parse("box(p)"), 2, 1)
    assert report.ok and report.checked == 512
    report = check_stage_coherence(s, s.parse("p"), 1, 0)
    assert report.ok
    with pytest.raises(InputError):
        check_stage_coherence(s, s.parse("box(p)"), 2, 0)
