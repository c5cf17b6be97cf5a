import pytest

from diffeocurv.verify import CHECKS, run_verify

IDS = [c.id for c in CHECKS]


@pytest.fixture(scope="module")
def report():
    rep = run_verify()
    assert rep.seconds < 60
    return {c.id: c for c in rep.checks}


def test_registry_is_complete():
    assert len(IDS) == 13
    assert len(set(IDS)) == 13


@pytest.mark.parametrize("check_id", IDS)
def test_acceptance(report, check_id, capsys):
    res = report[check_id]
    with capsys.disabled():
        print(f"\n{'PASS' if res.passed else 'FAIL'} {res.id} (tol {res.tolerance:g}): "
              f"expected {res.expected}, computed {res.computed}")
    assert res.passed, res.details
