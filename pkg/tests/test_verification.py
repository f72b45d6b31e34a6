import math

import pytest

from src.core.errors import ConfigError, ConvergenceError
from src.modules import verification
from src.modules.verification import (CHECKS, GROUPS, Check, VerificationSuite, run_check,
                                      select_checks)
from src.reporters import HTMLReporter


def test_check_ids_are_unique_and_grouped():
    ids = [c.check_id for c in CHECKS]
    assert len(ids) == len(set(ids))
    assert {c.group for c in CHECKS} == set(GROUPS)
    assert all(c.check_id.startswith(c.group + '.') for c in CHECKS)


def test_select_by_group_and_id():
    assert [c.group for c in select_checks(['ktrig'])] == ['ktrig'] * 5
    selected = select_checks(['oracle.harmonic', 'ktrig.continuity'])
    assert [c.check_id for c in selected] == ['ktrig.continuity', 'oracle.harmonic']
    assert len(select_checks(None)) == len(CHECKS)


def test_unknown_group():
    with pytest.raises(ConfigError):
        select_checks(['ktrig', 'astrology'])


def test_tolerance_override():
    result = run_check('ktrig.fundamental')
    assert result.passed and result.measured <= 1e-12
    result = run_check('ktrig.fundamental', tolerance=-1.0)
    assert not result.passed and result.tolerance == -1.0


def test_raising_check_is_a_failure(monkeypatch):
    def broken():
        raise ConvergenceError("grid too coarse")

    check = Check('oracle.broken', 'oracle', broken, 1.0, 'always raises')
    monkeypatch.setitem(verification._BY_ID, check.check_id, check)
    result = run_check(check.check_id)
    assert not result.passed
    assert math.isnan(result.measured)
    assert result.error == 'ConvergenceError: grid too coarse'


def test_suite_runs_serially():
    suite = VerificationSuite(only=['ktrig', 'separability'], workers=1)
    results = suite.run()
    assert len(results) == 8
    assert suite.passed
    summary = suite.summary()
    assert summary == {'total': 8, 'passed': 8, 'failed': [],
                       'groups': ['ktrig', 'separability']}


def test_empty_suite_has_not_passed():
    assert not VerificationSuite().passed


def test_html_report(tmp_path):
    suite = VerificationSuite(only=['ktrig'], workers=1)
    results = suite.run()
    results.append(run_check('ktrig.continuity', tolerance=-1.0))
    reporter = HTMLReporter()
    page = reporter.render(results, duration='0.1s')
    for r in results:
        assert r.check_id in page
    assert 'class="badge badge-danger"' in page and '❌' in page

    path = reporter.generate([r.to_dict() for r in results[:5]], str(tmp_path / 'r' / 'v.html'))
    text = (tmp_path / 'r' / 'v.html').read_text(encoding='utf-8')
    assert path.endswith('v.html')
    assert '✅' in text and 'class="badge badge-danger"' not in text
