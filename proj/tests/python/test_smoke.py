"""Smoke tests for the iqrip_py extension module.

These only check that the bindings are importable and wired to the C++ core;
the behavioral depth lives in the C++ unit and acceptance suites.
"""

import math
import os

import pytest

import iqrip_py as iq


@pytest.fixture(scope="module")
def model():
    corpus_path = os.environ["IQRIP_TEST_CORPUS"]
    with open(corpus_path, "r", encoding="utf-8") as fh:
        text = fh.read()
    return iq.train_ngram(iq.tokenize(text))


def test_normalize_and_distribution():
    d = iq.normalize([2.0, 1.0, 1.0], [5, 7, 9])
    assert len(d) == 3
    assert d.probs[0] == pytest.approx(0.5)
    assert sum(d.probs) == pytest.approx(1.0)
    # Canonical order: descending probability, ties by ascending id.
    assert d.ids[0] == 5 and d.ids[1] == 7 and d.ids[2] == 9
    assert d.prob_of(9) == pytest.approx(0.25)


def test_filters_roundtrip():
    d = iq.normalize([0.4, 0.3, 0.2, 0.1], [0, 1, 2, 3])
    assert iq.top_k_set(d, 2).ids == [0, 1]
    assert iq.top_p_set(d, 1.0).ids == [0, 1, 2, 3]
    assert iq.top1ctrl_set(d, 2.0).ids == [0, 1, 2]
    assert iq.joint_filter(d, 3, 1.0).ids == [0, 1, 2]
    kept = iq.renormalize(d, iq.CandidateSet([0, 1]))
    assert sum(kept.probs) == pytest.approx(1.0)


def test_partition_and_permutation():
    weights = [0.04, 0.05, 0.06, 0.08, 0.10, 0.12, 0.15, 0.40]
    d = iq.normalize(weights, list(range(8)))
    part = iq.iqr_partition(d, 1.5)
    assert part.q1 == pytest.approx(0.0575)
    assert part.q3 == pytest.approx(0.1275)
    assert part.very_high().ids == [7]

    swapped = iq.inverse_permute(d, iq.CandidateSet([7, 6]))
    assert swapped.prob_of(7) < swapped.prob_of(6)
    assert sum(swapped.probs) == pytest.approx(1.0)


def test_step_and_bound():
    d = iq.normalize([0.4, 0.2, 0.4], [0, 1, 2])
    cfg = iq.SamplerConfig()
    cfg.validate()
    out = iq.iqr_ip_step(d, cfg)
    assert sum(out.probs) == pytest.approx(1.0)

    rep = iq.corollary_bound(d, iq.CandidateSet([0, 1]), d)
    assert rep.z_p == pytest.approx(0.08)
    assert rep.m == pytest.approx(0.2)
    assert rep.bound == pytest.approx(0.44)
    assert rep.satisfied


def test_metrics_surface():
    assert iq.h_rep([1, 1, 1, 1]) == 0.0
    assert iq.h_rep([1, 2, 3, 4]) == pytest.approx(math.log(4))
    spans = iq.detect_loops([3] * 400, window_len=10, threshold=0.5)
    assert spans and spans[0].start == 0
    assert iq.self_bleu([[1, 2, 3, 4, 5]] * 3, max_ngram=4) == 1.0
    assert iq.zipf_coefficient([[1, 1, 1, 1, 1, 1, 2, 2, 2, 3, 3, 4]]) > 0.0


def test_generation_is_deterministic(model):
    assert model.vocab_size > 0
    cfg = iq.SamplerConfig()
    cfg.seed = 11
    cfg.max_len = 30
    a = iq.generate(model, cfg, iq.Method.iqr_ip, model.default_prompt, False)
    b = iq.generate(model, cfg, iq.Method.iqr_ip, model.default_prompt, False)
    assert a.sample.tokens == b.sample.tokens
    assert len(a.sample.tokens) == 30
    assert len(a.sample.step_logprobs) == 30
    words = [model.word_of(t) for t in a.sample.tokens[:5]]
    assert all(isinstance(w, str) and w for w in words)

    ppl = iq.perplexity(model, [(a.sample.prompt, a.sample.tokens)])
    assert ppl > 1.0


def test_errors_are_typed():
    with pytest.raises(iq.ParameterError):
        iq.normalize([1.0, 2.0], [0])  # length mismatch
    with pytest.raises(iq.ParameterError):
        iq.top_k_set(iq.normalize([1.0], [0]), 0)
    with pytest.raises(iq.DataError):
        iq.ToyModel.from_json("{}")
