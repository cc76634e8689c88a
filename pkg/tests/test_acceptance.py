"""Acceptance criteria, each run at its stated tolerance with one summary line.

The same checks back ``memkick verify``; see ``memkick.verify``.
"""

import pytest

import mutants
from memkick import verify

_cache = {}


def _result(number):
    if number not in _cache:
        _cache[number] = verify.CRITERIA[number - 1]()
    return _cache[number]


def _report(capsys, label, passed, detail):
    with capsys.disabled():
        print(f"\n[acceptance] {label}: {'PASS' if passed else 'FAIL'} ({detail})")


@pytest.mark.parametrize("number", range(1, len(verify.CRITERIA) + 1))
def test_criterion(number, capsys):
    crit = _result(number)
    worst = max(crit.checks, key=lambda c: (not c.passed, c.max_err / c.tol if c.tol else c.max_err))
    detail = f"{crit.title}; worst: {worst.name} = {worst.max_err:.3e} vs tol {worst.tol:.1e}; {crit.seconds:.2f} s"
    _report(capsys, f"criterion {number}", crit.passed, detail)
    failed = [c for c in crit.checks if not c.passed]
    assert not failed, "; ".join(f"{c.name}: {c.max_err:.3e} (tol {c.tol:.1e})" for c in failed)


@pytest.mark.parametrize("number", [1, 2])
@pytest.mark.parametrize("name", list(mutants.MUTANTS))
def test_mutation_sanity(number, name, monkeypatch, capsys):
    mutants.apply(monkeypatch, name)
    crit = verify.CRITERIA[number - 1]()
    caught = not crit.passed
    _report(capsys, f"mutation sanity: criterion {number} under '{name}'", caught, "criterion must fail")
    assert caught, f"criterion {number} still passes with the '{name}' mutant"
