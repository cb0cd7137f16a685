import json

import pytest

from licert import jsonio, verify as V
from licert.errors import ValidationError


@pytest.mark.parametrize("name,kw", [("counterexamples", {}), ("explicit-el", {}),
                                     ("poincare", {"seeds": 5}), ("heisenberg", {"seeds": 5}),
                                     ("fourier-identity", {"seeds": 3})])
def test_suites_pass(name, kw):
    res = V.run_suite(name, **kw)
    assert res.passed, res.table()
    out = json.loads(jsonio.dumps(res))
    assert out["suite"] == name and out["passed"] is True
    assert all(set(c) >= {"name", "passed", "value", "threshold"} for c in out["checks"])


def test_unknown_suite():
    with pytest.raises(ValidationError):
        V.run_suite("bogus")


def test_failing_check_is_reported():
    res = V.SuiteResult("x")
    res.add("ok", True, 0.0, 1.0)
    res.add("bad", False, 2.0, 1.0)
    assert not res.passed and "FAIL  bad" in res.table()
