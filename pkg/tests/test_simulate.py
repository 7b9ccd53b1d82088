import numpy as np
import pytest

from ctxkit.exceptions import IncompatibleContextError, NumericError
from ctxkit.inequalities import Term, catalog_get
from ctxkit.runtime import substream
from ctxkit.simulate import (
    estimate_term,
    marginal_consistency,
    report_to_json,
    run_protocol,
    sequential_measure,
)
from ctxkit.states import haar_random, maximally_mixed, singlet, zero_product


def outcome_product(record):
    prod = 1
    for _, outcome in record.outcomes:
        prod *= outcome
    return prod


def test_sequential_measure_record_shape(ks18_obs):
    rng = substream(0, 1, 0, 0)
    ctx = ks18_obs.contexts[0]
    record = sequential_measure(maximally_mixed(4), ks18_obs, ctx, rng)
    assert tuple(lab for lab, _ in record.outcomes) == ctx
    assert all(outcome in (-1, 1) for _, outcome in record.outcomes)
    assert np.trace(record.post_state) == pytest.approx(1.0)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_ks18_context_products_always_minus_one(ks18_obs, seed):
    rho = haar_random(4, seed=seed)
    for index, ctx in enumerate(ks18_obs.contexts):
        for shot in range(5):
            rng = substream(seed, 1, index, shot)
            record = sequential_measure(rho, ks18_obs, ctx, rng)
            assert outcome_product(record) == -1


def test_sequential_measure_deterministic_outcome(pm_obs):
    # |00> is a +1 eigenstate of both Z x 1 and 1 x Z.
    rng = substream(3, 1, 0, 0)
    record = sequential_measure(zero_product(2), pm_obs, ("P14", "P15"), rng)
    assert record.outcomes == (("P14", 1), ("P15", 1))


def test_sequential_measure_rejects_incompatible(pm_obs):
    with pytest.raises(IncompatibleContextError):
        sequential_measure(singlet(), pm_obs, ("P14", "P25"), substream(0, 1))


def test_sequential_measure_rejects_wrong_dimension(ks18_obs):
    with pytest.raises(ValueError):
        sequential_measure(np.eye(2) / 2, ks18_obs, ("A12",), substream(0, 1))


def test_zero_probability_branch_raises(pm_obs):
    class AlwaysHigh:
        # A real generator never returns 1.0; this forces the sampler
        # into the probability-zero branch to exercise the guard.
        def random(self):
            return 1.0

    with pytest.raises(NumericError):
        sequential_measure(zero_product(2), pm_obs, ("P14",), AlwaysHigh())


def test_estimate_term_matches_per_shot_replay(ks18_obs):
    """The batched estimator must reproduce, bit for bit, what per-shot
    sequential measurement with the documented substreams gives."""
    rho = haar_random(4, seed=8)
    term = catalog_get("kcbs3").terms[1]
    shots, seed, term_index = 64, 5, 1
    est = estimate_term(rho, ks18_obs, term, shots, seed, term_index=term_index)

    values = np.empty(shots)
    for s in range(shots):
        rng = substream(seed, 1, term_index, s)
        record = sequential_measure(rho, ks18_obs, term.factors, rng)
        values[s] = term.sign * outcome_product(record)
    assert est.estimate == float(values.mean())
    assert est.standard_error == float(values.std(ddof=1) / np.sqrt(shots))
    assert est.shots == shots


def test_estimate_term_exact_cases(pm_obs, ks18_obs):
    est = estimate_term(zero_product(2), pm_obs, Term(1, ("P14", "P15")), 50, seed=0)
    assert est.estimate == 1.0
    assert est.standard_error == 0.0

    # A full minus-identity context estimates its sign exactly.
    full_context = catalog_get("ineq1").terms[0]
    est = estimate_term(maximally_mixed(4), ks18_obs, full_context, 50, seed=0)
    assert est.estimate == 1.0
    assert est.standard_error == 0.0


def test_estimate_term_constant_term(pm_obs):
    est = estimate_term(singlet(), pm_obs, Term(-1, ()), 10, seed=0)
    assert est.estimate == -1.0
    assert est.standard_error == 0.0
    assert est.shots == 10


def test_estimate_term_needs_two_shots(pm_obs):
    with pytest.raises(ValueError):
        estimate_term(singlet(), pm_obs, Term(1, ("P14",)), 1, seed=0)


def test_singlet_z_outcomes_anticorrelated(pm_obs):
    for shot in range(8):
        rng = substream(1, 1, 0, shot)
        record = sequential_measure(singlet(), pm_obs, ("P14", "P15"), rng)
        assert record.outcomes[0][1] == -record.outcomes[1][1]


def test_estimate_term_converges(pm_obs):
    # The pair terms of cfrh6 genuinely fluctuate on the maximally mixed
    # state (expectation 0); the reported error bars must cover the truth.
    term = catalog_get("cfrh6").terms[0]
    rho = maximally_mixed(4)
    for shots in (100, 1000):
        est = estimate_term(rho, pm_obs, term, shots, seed=12)
        assert est.standard_error > 0
        assert abs(est.estimate) <= 5 * est.standard_error
        assert est.standard_error <= 2 / np.sqrt(shots)


def test_run_protocol_report(pm_obs):
    expr = catalog_get("cfrh6")
    report = run_protocol(maximally_mixed(4), pm_obs, expr, 200, seed=4)
    assert report.inequality_id == "cfrh6"
    assert report.seed == 4
    assert report.shots_per_term == 200
    assert len(report.terms) == len(expr.terms)
    assert report.lhs_estimate == pytest.approx(sum(t.estimate for t in report.terms))
    rss = np.sqrt(sum(t.standard_error**2 for t in report.terms))
    assert report.lhs_standard_error == pytest.approx(float(rss))
    assert report.lhs_standard_error > 0  # the pair terms fluctuate here


def test_run_protocol_repeatable(pm_obs):
    a = run_protocol(singlet(), pm_obs, catalog_get("cfrh6"), 150, seed=21)
    b = run_protocol(singlet(), pm_obs, catalog_get("cfrh6"), 150, seed=21)
    assert a == b


def test_run_protocol_terms_use_independent_streams(pm_obs):
    # chsh8 repeats the pair (P14, P16) nowhere, but its four terms all
    # draw from distinct term-index substreams; estimates must not be
    # copies of each other even for equal-distribution terms.
    report = run_protocol(maximally_mixed(4), pm_obs, catalog_get("chsh8"), 300, seed=2)
    estimates = [t.estimate for t in report.terms]
    assert len(set(estimates)) > 1


def test_report_to_json_shape(pm_obs):
    report = run_protocol(singlet(), pm_obs, catalog_get("chsh8"), 80, seed=6)
    data = report_to_json(report, "singlet")
    assert list(data) == [
        "inequality", "state", "seed", "shots_per_term",
        "terms", "lhs_estimate", "lhs_stderr",
    ]
    assert data["inequality"] == "chsh8"
    assert data["state"] == "singlet"
    assert data["seed"] == 6
    assert data["shots_per_term"] == 80
    assert [list(t) for t in data["terms"]] == [["estimate", "stderr"]] * 4
    assert data["lhs_estimate"] == report.lhs_estimate
    assert data["lhs_stderr"] == report.lhs_standard_error


def test_marginal_consistency_repeatable(ks18_obs):
    contexts = (ks18_obs.contexts[0], ks18_obs.contexts[1])
    a = marginal_consistency(maximally_mixed(4), ks18_obs, "A12", contexts, 500, seed=7)
    b = marginal_consistency(maximally_mixed(4), ks18_obs, "A12", contexts, 500, seed=7)
    assert a == b
    assert a.label == "A12"
    assert a.shots == 500


def test_marginal_same_context_twice_is_identical(ks18_obs):
    ctx = ks18_obs.contexts[0]
    report = marginal_consistency(haar_random(4, seed=3), ks18_obs, "A12", (ctx, ctx), 400, seed=7)
    assert report.freq_plus_first == report.freq_plus_second
    assert report.z_statistic == 0.0


def test_marginal_swapping_contexts_negates_z(ks18_obs):
    first, second = ks18_obs.contexts[0], ks18_obs.contexts[1]
    rho = maximally_mixed(4)
    fwd = marginal_consistency(rho, ks18_obs, "A12", (first, second), 600, seed=7)
    rev = marginal_consistency(rho, ks18_obs, "A12", (second, first), 600, seed=7)
    assert rev.freq_plus_first == fwd.freq_plus_second
    assert rev.z_statistic == pytest.approx(-fwd.z_statistic)


def test_marginals_agree_between_contexts(ks18_obs):
    # Quantum mechanics gives one marginal for a ray regardless of what
    # it is measured with; the z statistic stays at noise level.
    rho = haar_random(4, seed=11)
    contexts = [c for c in ks18_obs.contexts if "A45" in c]
    for seed in range(10):
        report = marginal_consistency(rho, ks18_obs, "A45", contexts, 1000, seed=seed)
        assert abs(report.z_statistic) <= 5.0


def test_marginal_validation(ks18_obs):
    contexts = (ks18_obs.contexts[0], ks18_obs.contexts[1])
    with pytest.raises(ValueError):
        marginal_consistency(maximally_mixed(4), ks18_obs, "A45", contexts, 100, seed=0)
    with pytest.raises(ValueError):
        marginal_consistency(maximally_mixed(4), ks18_obs, "A12", contexts, 1, seed=0)
