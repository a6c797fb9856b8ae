from app.oracles.suite import (
    check_closed_form,
    check_exact_beats_hoeffding,
    run_validation_suite,
)


def test_individual_checks_pass():
    assert check_closed_form().passed
    check = check_exact_beats_hoeffding(200, seed=3)
    assert check.passed
    assert check.cases == 200


def test_full_suite_passes():
    report = run_validation_suite(trials=100, seed=1)
    assert report.passed
    assert [c.name for c in report.checks] == [
        "binomial_tail_vs_enumeration",
        "relaxed_tail_vs_vertex_lp",
        "all_correct_closed_form",
        "exact_at_least_hoeffding",
        "simulator_soundness",
        "tp_dominated_by_binomial",
    ]
    assert all(check.cases > 0 for check in report.checks)
