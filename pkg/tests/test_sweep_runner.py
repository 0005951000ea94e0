#!/usr/bin/env python
# -*- coding: utf-8 -*-

from hypothesis import given, settings, strategies as st

from distinction.characters import restrict
from distinction.config import RunConfig, Setting
from distinction.result_store import ResultStore
from distinction.scalars import ComputationError
from distinction.sweep_runner import run_sweep


def _square_or_fail(setting, item):
    if item % 5 == 0:
        raise ComputationError(f"{item} is a multiple of 5")
    if item == 7:
        raise RuntimeError("unexpected")
    return item * item


def test_results_come_back_in_task_order(setting_D):
    tasks = list(range(1, 21))
    store = run_sweep(setting_D, tasks, _square_or_fail, workers=3, name="test")
    expected = [t * t for t in tasks if t % 5 and t != 7]
    assert store.ordered_results() == expected
    failed = store.get_failed_tasks()
    assert sorted(failed) == [4, 6, 9, 14, 19]
    assert "ComputationError" in failed[4]["reason"]
    assert store.is_failed(6)
    assert "unexpected" in store.failure_reason(6)
    stats = store.get_stats()
    assert stats == {"total_tasks": 20, "completed_tasks": 15, "failed_tasks": 5}


def test_empty_sweep(setting_D):
    store = run_sweep(setting_D, [], _square_or_fail)
    assert store.ordered_results() == []
    assert store.get_stats()["total_tasks"] == 0


def test_completion_clears_failure():
    store = ResultStore("retry", 1)
    store.mark_failed(0, "first try")
    assert store.mark_completed(0, "ok")
    assert not store.is_failed(0)
    assert store.result(0) == "ok"
    assert store.update_stats() == {"total_tasks": 1, "completed_tasks": 1, "failed_tasks": 0}


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(min_value=0, max_value=50), max_size=30), st.integers(min_value=1, max_value=4))
def test_every_task_is_accounted_for(setting_D, tasks, workers):
    store = run_sweep(setting_D, tasks, _square_or_fail, workers=workers)
    stats = store.get_stats()
    assert stats["completed_tasks"] + stats["failed_tasks"] == len(tasks)


def _cold_lookup(setting, name):
    chars = setting.characters(name)
    return chars, restrict(setting.tower, chars[-1], "E" if name == "K" else "F")


def test_cold_caches_are_shared_between_workers():
    # not warmed: every worker races to fill the same caches
    setting = Setting(RunConfig(p=3, ell=7, ext="unram"))
    store = run_sweep(setting, ["K"] * 6 + ["E"] * 6, _cold_lookup, workers=6, name="cold")
    results = store.ordered_results()
    assert len(results) == 12
    for group in (results[:6], results[6:]):
        chars, restricted = group[0]
        assert all(other is chars for other, _ in group)
        assert all(r is restricted for _, r in group)
