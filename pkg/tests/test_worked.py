import pytest

from relcalc.worked import EXAMPLES, run_worked_examples


@pytest.mark.parametrize("name", list(EXAMPLES))
def test_worked_example(name):
    checks = run_worked_examples([name])[name]
    assert checks and all(ok for _, ok in checks), checks


def test_run_all_names():
    assert set(run_worked_examples()) == set(EXAMPLES)


def test_unknown_name():
    with pytest.raises(KeyError):
        run_worked_examples(["nope"])
