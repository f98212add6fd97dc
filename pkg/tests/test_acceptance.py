"""Acceptance criteria 1 to 13, one pass/fail line each, with pinned runtime limits."""
import time

import pytest

from cogalois.classify import enumerate_mncg, enumerate_mnk, mnk_invariant_audit
from cogalois.suites import (
    abelian_module_sweep,
    small_triple_sweep,
    suite_adequate_units,
    suite_character,
    suite_d8q,
    suite_mncg,
    suite_pronil,
    suite_quad_family,
    suite_rings,
    suite_selfact,
)
from cogalois.report import Report

from conftest import record

MINUTE = 60.0


def _detail(rep, seconds, limit=None):
    s = f"checked={rep.checked} violations={len(rep.violations)} time={seconds:.1f}s"
    if limit is not None:
        s += f" (limit {limit:.0f}s)"
    if rep.violations:
        s += f" first: {rep.violations[0][:160]}"
    return s


def _timed(fn, *args, **kw):
    t0 = time.perf_counter()
    out = fn(*args, **kw)
    return out, time.perf_counter() - t0


@pytest.fixture(scope="module")
def sweep():
    return _timed(small_triple_sweep, 8)


@pytest.fixture(scope="module")
def mnk_run():
    return _timed(enumerate_mnk, 16, 16, "character")


def test_criterion_01_connexion_laws(sweep):
    reports, seconds = sweep
    rep = reports["laws"]
    ok = rep.ok and seconds < 5 * MINUTE
    record(1, ok, _detail(rep, seconds, 5 * MINUTE) + f" triples={rep.data['triples']}")
    assert rep.ok, rep.violations[:5]
    assert seconds < 5 * MINUTE


def test_criterion_02_omitting_criteria(sweep):
    reports, seconds = sweep
    rep = reports["criteria"]
    record(2, rep.ok, _detail(rep, seconds))
    assert rep.ok, rep.violations[:5]


def test_criterion_03_surjectivity_witnesses(sweep):
    reports, seconds = sweep
    rep = reports["index"]
    record(3, rep.ok, _detail(rep, seconds))
    assert rep.ok, rep.violations[:5]


def test_criterion_04_pronilpotent():
    rep, seconds = _timed(suite_pronil)
    record(4, rep.ok, _detail(rep, seconds))
    assert rep.ok, rep.violations[:5]


def test_criterion_05_adequate_units():
    rep, seconds = _timed(suite_adequate_units, 500)
    ok = rep.ok and seconds < MINUTE
    record(5, ok, _detail(rep, seconds, MINUTE))
    assert rep.ok, rep.violations[:5]
    assert seconds < MINUTE


def test_criterion_06_selfaction_deformations():
    rep, seconds = _timed(suite_selfact)
    record(6, rep.ok, _detail(rep, seconds) + f" classes={rep.data}")
    assert rep.ok, rep.violations


def test_criterion_07_d8_q():
    rep, seconds = _timed(suite_d8q)
    record(7, rep.ok, _detail(rep, seconds))
    assert rep.ok, rep.violations


def test_criterion_08_mncg_classification():
    run, seconds = _timed(enumerate_mncg, 16, 16, "character", 1, 15)
    rep = suite_mncg(run=run)
    ok = rep.ok and seconds < 15 * MINUTE
    record(8, ok, _detail(rep, seconds, 15 * MINUTE) + f" classes={rep.data['found']}")
    assert rep.ok, rep.violations
    assert rep.data["family_iii_flags"] == []
    assert seconds < 15 * MINUTE


def test_criterion_09_mnk_character_classification(mnk_run):
    run, seconds = mnk_run
    rep = suite_character(run=run)
    ok = rep.ok and seconds < 15 * MINUTE
    record(9, ok, _detail(rep, seconds, 15 * MINUTE) + f" classes={rep.data['found']}")
    assert rep.ok, rep.violations
    assert seconds < 15 * MINUTE


def test_criterion_10_principal_rings():
    rep, seconds = _timed(suite_rings)
    record(10, rep.ok, _detail(rep, seconds))
    assert rep.ok, rep.violations


def test_criterion_11_quadratic_family():
    rep, seconds = _timed(suite_quad_family, 0, 200)
    ok = rep.ok and seconds < 10 * MINUTE
    record(11, ok, _detail(rep, seconds, 10 * MINUTE) + f" s2={rep.data['s2']} s3={rep.data['s3']}")
    assert rep.ok, rep.violations
    assert rep.data["s2"]["classes"] == 2 and rep.data["s3"]["classes"] == 1
    assert seconds < 10 * MINUTE


def test_criterion_12_abelian_modules():
    rep, seconds = _timed(abelian_module_sweep)
    ok = rep.ok and seconds < 10 * MINUTE
    record(12, ok, _detail(rep, seconds, 10 * MINUTE) + f" modules={rep.data['modules']}")
    assert rep.ok, rep.violations[:5]
    assert seconds < 10 * MINUTE


def test_criterion_13_mnk_audit(mnk_run):
    run, _ = mnk_run
    extra = []
    suite_rings(Report(), extra)
    suite_quad_family(0, 200, Report(), extra)
    triples = [c.triple for c in run.classes] + extra
    rep, seconds = _timed(mnk_invariant_audit, triples)
    record(13, rep.ok, _detail(rep, seconds) + f" audited={len(triples)}")
    assert rep.ok, rep.violations
