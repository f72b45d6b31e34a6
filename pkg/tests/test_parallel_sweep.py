import pytest

from src.core import parallel_sweep
from src.core.errors import DomainError
from src.core.parallel_sweep import THREADS_ENV, ParallelSweep, default_workers


def square(x):
    return x * x


def fragile(x):
    if x < 0:
        raise DomainError(f"negative input {x}")
    if x == 0:
        raise ValueError("zero")
    return x


def test_serial_results_in_order():
    results = ParallelSweep(max_workers=1).run(square, [3, 1, 2])
    assert [r['result'] for r in results] == [9, 1, 4]
    assert [r['job'] for r in results] == ['3', '1', '2']
    assert all(r['status'] == 'ok' for r in results)


def test_pool_results_in_order():
    results = ParallelSweep(max_workers=2).run(square, list(range(12)),
                                               labels=[f"j{i}" for i in range(12)])
    assert [r['result'] for r in results] == [i * i for i in range(12)]
    assert results[5]['job'] == 'j5'


def test_failures_are_collected():
    results = ParallelSweep(max_workers=1).run(fragile, [-1, 0, 4])
    assert results[0]['status'] == 'failed'
    assert results[0]['code'] == 'domain'
    assert 'negative' in results[0]['error']
    assert results[1]['status'] == 'failed' and results[1]['code'] is None
    assert results[2] == {'job': '4', 'status': 'ok', 'result': 4}


def test_default_workers_from_environment(monkeypatch):
    monkeypatch.setenv(THREADS_ENV, '3')
    assert default_workers() == 3
    monkeypatch.setenv(THREADS_ENV, '0')
    assert default_workers() == 1


def test_invalid_environment_value(monkeypatch):
    monkeypatch.setenv(THREADS_ENV, 'many')
    monkeypatch.setattr(parallel_sweep.multiprocessing, 'cpu_count', lambda: 5)
    assert default_workers() == 5
    assert ParallelSweep().max_workers == 5


@pytest.mark.parametrize("workers", [1, 4])
def test_explicit_workers(workers):
    assert ParallelSweep(max_workers=workers).max_workers == workers
