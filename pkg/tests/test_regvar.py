import pytest

from ncgame.analysis import regvar_diagnostics
from ncgame.prices import Polynomial, PowerLog


def test_x_squared_log():
    d = regvar_diagnostics(PowerLog(1.0, 2, 1))
    assert d.index_estimate == pytest.approx(2, abs=0.05)
    assert d.karamata_estimate == pytest.approx(2, abs=0.01)
    assert d.matches(0.05)
    assert set(d.karamata_samples) == {1e4, 1e6, 1e8}


def test_constant():
    d = regvar_diagnostics(Polynomial([3.0]))
    assert d.index_estimate == pytest.approx(0, abs=1e-9) and d.karamata_estimate == pytest.approx(0, abs=1e-9)


def test_bpr_quartic():
    d = regvar_diagnostics(Polynomial([1, 0, 0, 0, 0.15]))
    assert d.index_estimate == pytest.approx(4, abs=0.05) and d.karamata_estimate == pytest.approx(4, abs=0.05)
    assert d.index_at_1e6 == pytest.approx(4, abs=1e-6)


def test_zero_price_has_no_index():
    d = regvar_diagnostics(Polynomial([0]))
    assert d.index is None and d.matches()


@pytest.mark.parametrize("price", [PowerLog(2.0, "3/2", -1), PowerLog(1.0, "1/2", 2), PowerLog(1.0, 3, 0, offset=4)])
def test_powerlog_family(price):
    d = regvar_diagnostics(price)
    assert d.matches(0.05), d.to_dict()
