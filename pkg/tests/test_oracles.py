import math

import numpy as np
import pytest

from morsim import OracleId, oracle


def test_p_non_spot_value():
    # tanh^4(1)/cosh^4(1)
    expected = math.tanh(1.0) ** 4 / math.cosh(1.0) ** 4
    assert oracle(OracleId.P_NON, r=1.0, theta=0.0) == pytest.approx(expected, rel=1e-14)
    assert abs(expected - 0.059339) < 1e-5


def test_p_col_spot_value():
    expected = math.tanh(1.0) ** 4 / math.cosh(1.0) ** 2
    assert oracle(OracleId.P_COL, r=1.0, theta=0.0) == pytest.approx(expected, rel=1e-14)
    assert abs(expected - 0.141293) < 1e-5


def test_i_hhvv_vacuum_input():
    for theta in np.linspace(0.0, 2.0 * math.pi, 17):
        assert oracle(OracleId.I_HHVV, r=0.0, theta=theta) == 0.0


def test_projection_identity_links_p_col_and_i_hhvv_leading_term():
    # (1/16)(1 + 3 cos 2t)^2 == (3 cos^2 t - 1)^2 / 4 for all t
    for theta in np.linspace(-math.pi, math.pi, 101):
        lhs = (1.0 + 3.0 * math.cos(2.0 * theta)) ** 2 / 16.0
        rhs = (3.0 * math.cos(theta) ** 2 - 1.0) ** 2 / 4.0
        assert lhs == pytest.approx(rhs, abs=1e-14)


def test_coherent_intensities_sum_to_alpha_squared():
    for alpha in (0.5, 1.0, 2.0, 3.7):
        for theta in np.linspace(0.0, 2.0 * math.pi, 41):
            ix = oracle(OracleId.COH_IX, alpha=alpha, theta=theta)
            iy = oracle(OracleId.COH_IY, alpha=alpha, theta=theta)
            assert ix + iy == pytest.approx(alpha**2, rel=1e-14)


def test_two_photon_amplitudes_normalized():
    for theta in np.linspace(0.0, 2.0 * math.pi, 101):
        c, d, f = oracle(OracleId.TWO_PHOTON_AMPLITUDES, theta=theta)
        assert c**2 + d**2 + f**2 == pytest.approx(1.0, abs=1e-14)
        assert c == -d


def test_vis2_closed_values():
    assert oracle(OracleId.VIS2_CLOSED, r=1.0) == pytest.approx(
        1.0 / (1.0 + 2.0 * math.tanh(1.0) ** 2), rel=1e-15
    )
    assert oracle(OracleId.VIS2_CLOSED, r=0.01) > 0.999
    # saturates toward 1/3 with strong pumping
    assert abs(oracle(OracleId.VIS2_CLOSED, r=3.0) - 1.0 / 3.0) < 0.01


def test_col_ihv_spot_values():
    s, c = math.sinh(0.5), math.cosh(0.5)
    assert oracle(OracleId.COL_IHV, r=0.5, theta=0.0) == pytest.approx(
        s * s * c * c + s**4, rel=1e-14
    )
    assert oracle(OracleId.COL_IHV, r=0.5, theta=math.pi / 2) == pytest.approx(s**4, rel=1e-12)


def test_unknown_id_rejected():
    with pytest.raises(ValueError):
        oracle("no_such_formula", r=1.0)


def test_missing_parameter_rejected():
    with pytest.raises(ValueError):
        oracle(OracleId.COL_IHV, theta=0.1)
    with pytest.raises(ValueError):
        oracle(OracleId.COH_IX, theta=0.1)
    with pytest.raises(ValueError):
        oracle(OracleId.P_NON, r=-0.5)
