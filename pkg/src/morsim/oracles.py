"""Closed-form evaluators for every measured quantity of the model.

Used as independent test oracles and as the CLI "exact" mode.  This module
deliberately depends on nothing but the standard library so that a defect in
the numeric Fock engine cannot leak into the reference values.
"""

from __future__ import annotations

import math
from enum import Enum


class OracleId(str, Enum):
    COH_IX = "coh_ix"
    COH_IY = "coh_iy"
    COH_VAR = "coh_var"
    COL_IHV = "col_ihv"
    COL_VAR = "col_var"
    P_NON = "p_non"
    P_COL = "p_col"
    I_HHVV = "i_hhvv"
    TWO_PHOTON_AMPLITUDES = "two_photon_amplitudes"
    VIS2_CLOSED = "vis2_closed"


def coherent_intensity_x(alpha_sq: float, theta: float) -> float:
    return alpha_sq * math.cos(theta / 2.0) ** 2


def coherent_intensity_y(alpha_sq: float, theta: float) -> float:
    return alpha_sq * math.sin(theta / 2.0) ** 2


def coherent_nd_variance(alpha_sq: float, theta: float) -> float:
    return alpha_sq * math.sin(theta) ** 2


def collinear_two_photon(r: float, theta: float) -> float:
    s, c = math.sinh(r), math.cosh(r)
    return math.cos(theta) ** 2 * s * s * c * c + s**4


def collinear_nd_variance(r: float, theta: float) -> float:
    s, c = math.sinh(r), math.cosh(r)
    return 4.0 * s * s * c * c * math.sin(theta) ** 2


def noncollinear_four_photon_probability(r: float, theta: float) -> float:
    t, c = math.tanh(r), math.cosh(r)
    return t**4 / c**4 * math.cos(2.0 * theta) ** 2


def collinear_four_photon_probability(r: float, theta: float) -> float:
    t, c = math.tanh(r), math.cosh(r)
    return t**4 / (c * c) * (1.0 + 3.0 * math.cos(2.0 * theta)) ** 2 / 16.0


def collinear_four_photon_counts(r: float, theta: float) -> float:
    s, c = math.sinh(r), math.cosh(r)
    g = 3.0 * math.cos(theta) ** 2
    return (g - 1.0) ** 2 * s**4 * c**4 + 4.0 * (g + 1.0) * s**6 * c * c + 4.0 * s**8


def two_photon_pair_amplitudes(theta: float) -> tuple[float, float, float]:
    """Amplitudes on (|2,0>, |0,2>, |1,1>) for an evolved |1,1> pair."""
    s = math.sin(theta) / math.sqrt(2.0)
    return (s, -s, math.cos(theta))


def two_photon_visibility_closed(r: float) -> float:
    return 1.0 / (1.0 + 2.0 * math.tanh(r) ** 2)


_SCALAR = {
    OracleId.COH_IX: lambda a2, r, th: coherent_intensity_x(a2, th),
    OracleId.COH_IY: lambda a2, r, th: coherent_intensity_y(a2, th),
    OracleId.COH_VAR: lambda a2, r, th: coherent_nd_variance(a2, th),
    OracleId.COL_IHV: lambda a2, r, th: collinear_two_photon(r, th),
    OracleId.COL_VAR: lambda a2, r, th: collinear_nd_variance(r, th),
    OracleId.P_NON: lambda a2, r, th: noncollinear_four_photon_probability(r, th),
    OracleId.P_COL: lambda a2, r, th: collinear_four_photon_probability(r, th),
    OracleId.I_HHVV: lambda a2, r, th: collinear_four_photon_counts(r, th),
    OracleId.VIS2_CLOSED: lambda a2, r, th: two_photon_visibility_closed(r),
}


def oracle(oracle_id, *, r: float | None = None, alpha: complex | None = None,
           theta: float = 0.0):
    """Evaluate one closed form; returns a float (or a triple for the
    two-photon amplitude oracle)."""
    try:
        oid = OracleId(oracle_id)
    except ValueError:
        raise ValueError(f"unknown oracle id: {oracle_id!r}") from None
    if oid is OracleId.TWO_PHOTON_AMPLITUDES:
        return two_photon_pair_amplitudes(theta)
    if r is not None and r < 0:
        raise ValueError("interaction parameter r must be nonnegative")
    needs_r = oid in (OracleId.COL_IHV, OracleId.COL_VAR, OracleId.P_NON,
                      OracleId.P_COL, OracleId.I_HHVV, OracleId.VIS2_CLOSED)
    if needs_r and r is None:
        raise ValueError(f"oracle {oid.value} requires r")
    if not needs_r and alpha is None:
        raise ValueError(f"oracle {oid.value} requires alpha")
    alpha_sq = abs(alpha) ** 2 if alpha is not None else 0.0
    return _SCALAR[oid](alpha_sq, r if r is not None else 0.0, theta)
