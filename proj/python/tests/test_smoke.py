import math

import pytest

import ymflow


def test_dimension_constants():
    dim = ymflow.make_dimension(6)
    assert dim.n == 8
    assert dim.a == pytest.approx(1 / math.sqrt(2), rel=1e-15)
    assert dim.b == pytest.approx(0.68629150101523960959, rel=1e-14)
    assert not ymflow.make_dimension(10).has_profile()


def test_profile_values():
    w = ymflow.profile("W", 5, [0.0, 1.0])
    dim = ymflow.make_dimension(5)
    assert w[0] == pytest.approx(1 / dim.b, rel=1e-15)
    assert w[1] == pytest.approx(1 / (dim.a + dim.b), rel=1e-15)
    with pytest.raises(ValueError):
        ymflow.profile("nope", 5, [1.0])
    with pytest.raises(ValueError):
        ymflow.profile("QSusy", 5, [0.0])


def test_ggmt_pair():
    rec = ymflow.ggmt(6, 4, "paper")
    assert rec["passes"] is True
    assert rec["B"] == pytest.approx(0.57346573537768694787, rel=1e-11)
    assert ymflow.positivity_threshold(6) == pytest.approx(4.6043764010029087139791, rel=1e-13)
    with pytest.raises(ValueError):
        ymflow.ggmt(10, 4, "tight")
    with pytest.raises(ValueError):
        ymflow.ggmt(6, 4, "other")


def test_spectrum_ground_state():
    rec = ymflow.spectrum(6, "linearized", N=1000)
    assert rec["eigenvalues"][0] == pytest.approx(-1.0000984771565844, abs=1e-10)
    free = ymflow.spectrum(5, "free", N=2000, k=2, extrapolate=True)
    assert [float(v) for v in free["extrapolated"]] == pytest.approx([1.0, 2.0], abs=1e-3)


def test_criterion():
    assert ymflow.criterion_ids() == list(range(1, 10))
    res = ymflow.run_criterion(1)
    assert res.passed, str(res)
