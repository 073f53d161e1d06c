import pytest

from config_utils import RuntimeSettings
from error_utils import ContextError
from verify_utils import (
    SUITES, VerificationCase, all_passed, build_suite, class_representatives,
    generalized_leibniz_instance, run_cases, run_suite,
)


def test_unknown_suite():
    with pytest.raises(ValueError):
        build_suite("everything")


def test_case_ids_are_unique():
    for suite in SUITES:
        cases = build_suite(suite, [2], [3], random_cases=5, seed=1)
        ids = [case.case_id for case in cases]
        assert len(ids) == len(set(ids))
        assert all(case.case_id.startswith(f"{suite}/") for case in cases)


def test_relations_suite():
    report = run_suite("relations", [2, 3], [3, 4], settings=RuntimeSettings(threads=2), progress=False)
    assert all_passed(report), report[~report["passed"]].to_string(index=False)


def test_relations_suite_wide_arity():
    report = run_suite("relations", [2], [5], settings=RuntimeSettings(threads=2), progress=False)
    assert all_passed(report), report[~report["passed"]].to_string(index=False)


def test_composition_suite():
    report = run_suite("composition", [2], [3], settings=RuntimeSettings(threads=2), progress=False)
    assert all_passed(report), report[~report["passed"]].to_string(index=False)


def test_signs_suite():
    report = run_suite("signs", settings=RuntimeSettings(threads=2), progress=False)
    assert all_passed(report)


def test_representatives_have_expected_classes():
    names = [name for name, _ in class_representatives(2, 3)]
    assert names == ["I", "II-brace", "II-tree", "III"]


def test_cluster_instance_needs_room():
    assert generalized_leibniz_instance(2, 3, "brace", "x", True) is None
    built = generalized_leibniz_instance(2, 4, "brace", "x", False)
    assert built is not None and built[1] == 6


def test_run_cases_reports_failures_and_exceptions():
    def boom():
        raise RuntimeError("터짐")

    cases = [
        VerificationCase("b", "signs", "", lambda: (True, "")),
        VerificationCase("a", "signs", "", boom),
    ]
    report = run_cases(cases, threads=2, progress=False)
    assert list(report["case_id"]) == ["a", "b"]
    assert list(report["passed"]) == [False, True]
    assert report.loc[0, "detail"] == "RuntimeError - 터짐"
    assert not all_passed(report)


def test_label_range_filters_cases():
    cases = build_suite("relations", [2], [3], ns=[4])
    assert cases
    assert {case.n for case in cases} == {4}
    signs = [case.case_id for case in build_suite("signs", [2], [3], ns=[4])]
    assert signs == [case.case_id for case in build_suite("signs", [2], [3])]


def test_label_range_drives_confluence_arity():
    cases = build_suite("confluence", [2], [3], random_cases=10, seed=1, ns=[2, 5])
    assert len(cases) == 10
    assert {case.n for case in cases} <= {2, 5}
    report = run_cases(cases, threads=1, progress=False)
    assert all_passed(report)


def test_label_range_must_be_positive():
    with pytest.raises(ContextError):
        build_suite("relations", [2], [3], ns=[0, 3])
