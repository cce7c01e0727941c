"""Exact algebra on truncated multimode bosonic Fock states.

Four physical modes (two spatial beams a, b; two polarizations H, V) in the
fixed canonical order aH < aV < bH < bV.  States are sparse maps from
occupation tuples to complex amplitudes.  Photon-number-conserving two-mode
unitaries act by substitution on creation operators,

    a_i^dag  ->  sum_j u[i, j] a_j^dag ,

so the rows of ``u`` give the images of the pair's creation operators.  With
this convention applying ``u`` and then ``v`` equals applying ``u @ v`` in a
single step, and the lifted subspace matrices compose as
``M(u @ v, n) = M(v, n) @ M(u, n)``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import IntEnum

import numpy as np

UNITARY_TOL = 1e-12
PRUNE_TOL = 1e-15

Occupation = tuple[int, int, int, int]


class Mode(IntEnum):
    """The four optical modes, totally ordered for canonical layouts."""

    AH = 0
    AV = 1
    BH = 2
    BV = 3

    @property
    def spatial(self) -> str:
        return "a" if self < Mode.BH else "b"

    @property
    def polarization(self) -> str:
        return "H" if self in (Mode.AH, Mode.BH) else "V"


A_MODES = (Mode.AH, Mode.AV)
B_MODES = (Mode.BH, Mode.BV)


@dataclass(frozen=True)
class KetState:
    """Sparse pure state over occupation tuples plus analytic truncation tail.

    ``amplitudes`` maps (n_aH, n_aV, n_bH, n_bV) to a complex amplitude;
    ``truncation_tail`` is the squared weight of components discarded
    analytically at construction (plus anything pruned during evolution), so
    norm_squared() + truncation_tail == 1 for source states.  Instances are
    treated as immutable values; never mutate the dict after construction.
    """

    amplitudes: dict[Occupation, complex]
    truncation_tail: float = 0.0

    def amplitude(self, occ: Occupation) -> complex:
        return self.amplitudes.get(tuple(occ), 0j)

    def norm_squared(self) -> float:
        return sum((a.real * a.real + a.imag * a.imag) for a in self.amplitudes.values())


def _check_occupation(occ) -> Occupation:
    occ = tuple(int(n) for n in occ)
    if len(occ) != 4:
        raise ValueError(f"occupation must have 4 entries, got {len(occ)}")
    if any(n < 0 for n in occ):
        raise ValueError(f"occupation counts must be nonnegative, got {occ}")
    return occ


def make_basis_state(occ) -> KetState:
    """Single-component normalized Fock state |occ>."""
    return KetState(amplitudes={_check_occupation(occ): 1.0 + 0j})


def inner_product(bra: KetState, ket: KetState) -> complex:
    """<bra|ket>, conjugate-linear in the first argument."""
    small, other, conj_small = (
        (bra, ket, True) if len(bra.amplitudes) <= len(ket.amplitudes) else (ket, bra, False)
    )
    total = 0j
    for occ, amp in small.amplitudes.items():
        o = other.amplitudes.get(occ)
        if o is None:
            continue
        total += (amp.conjugate() * o) if conj_small else (o.conjugate() * amp)
    return total


def normally_ordered_moment(state: KetState, powers) -> float:
    """<prod_m a_m^dag^p a_m^p> for per-mode powers p.

    Diagonal in the Fock basis: sum over components of |amp|^2 times the
    falling factorials n_m! / (n_m - p_m)!.
    """
    powers = tuple(int(p) for p in powers)
    if len(powers) != 4 or any(p < 0 for p in powers):
        raise ValueError(f"powers must be 4 nonnegative integers, got {powers}")
    total = 0.0
    for occ, amp in state.amplitudes.items():
        w = 1.0
        for n, p in zip(occ, powers):
            if p == 0:
                continue
            if p > n:
                w = 0.0
                break
            w *= math.perm(n, p)
        if w:
            total += (amp.real * amp.real + amp.imag * amp.imag) * w
    return total


def projection_probability(state: KetState, occ) -> float:
    """|<occ|state>|^2 for a Fock basis target."""
    a = state.amplitude(_check_occupation(occ))
    return a.real * a.real + a.imag * a.imag


# ---------------------------------------------------------------------------
# Photon-number-conserving lifts of 2x2 mode unitaries.
#
# The n-photon pair subspace is indexed by k = photon count in the second
# mode of the pair, i.e. index k <-> |n-k, k>.  A naive column recurrence
# (repeated normalized application of the substituted creation operator) is
# exponentially unstable here: rounding errors grow like sqrt(C(n, n/2)),
# which is fatal beyond n ~ 50.  Instead every unitary is reduced to ZYZ
# Euler form u = e^{i delta} Rz(alpha) Ry(beta) Rz(gamma); the Rz lifts are
# exact diagonal phases and the Ry lift is computed in the eigenbasis of the
# (theta-independent) tridiagonal J_y generator, which is backward stable
# and cacheable across angles.
# ---------------------------------------------------------------------------

_ROT_BASIS_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _rotation_basis(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of the lifted J_y generator on the n-photon subspace.

    Returns (lam, V) with exact integer spectrum lam = (-n, -n+2, ..., n) and
    unitary V such that the lift of Ry(beta) equals V diag(e^{i beta lam / 2}) V^dag.
    """
    cached = _ROT_BASIS_CACHE.get(n)
    if cached is not None:
        return cached
    k = np.arange(n + 1)
    T = np.zeros((n + 1, n + 1))
    t = np.sqrt((n - k[1:] + 1.0) * k[1:])
    T[k[1:], k[1:] - 1] = t
    T[k[1:] - 1, k[1:]] = t
    _, W = np.linalg.eigh(T)
    lam = np.arange(-n, n + 1, 2, dtype=float)
    V = np.ascontiguousarray((1j ** (k % 4))[:, None] * W)
    _ROT_BASIS_CACHE[n] = (lam, V)
    return lam, V


def _ry_lift(beta: float, n: int) -> np.ndarray:
    lam, V = _rotation_basis(n)
    return (V * np.exp(1j * (beta / 2.0) * lam)) @ V.conj().T


def _ry_lift_columns(beta: float, n: int, columns: np.ndarray) -> np.ndarray:
    """Selected columns of the Ry(beta) lift, shape (n+1, len(columns))."""
    lam, V = _rotation_basis(n)
    rows = np.exp(1j * (beta / 2.0) * lam)[None, :] * V[columns, :].conj()
    return V @ rows.T


def _zyz_angles(u: np.ndarray) -> tuple[float, float, float, float]:
    """(delta, alpha, beta, gamma) with u = e^{i delta} Rz(alpha) Ry(beta) Rz(gamma)."""
    det = u[0, 0] * u[1, 1] - u[0, 1] * u[1, 0]
    delta = cmath.phase(det) / 2.0
    v00 = u[0, 0] * cmath.exp(-1j * delta)
    v10 = u[1, 0] * cmath.exp(-1j * delta)
    beta = 2.0 * math.atan2(abs(v10), abs(v00))
    apg = -2.0 * cmath.phase(v00) if abs(v00) > 1e-14 else 0.0
    amg = 2.0 * cmath.phase(v10) if abs(v10) > 1e-14 else 0.0
    return delta, 0.5 * (apg + amg), beta, 0.5 * (apg - amg)


def _require_unitary(u) -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2):
        raise ValueError(f"two-mode unitary must be 2x2, got shape {u.shape}")
    defect = np.max(np.abs(u.conj().T @ u - np.eye(2)))
    if defect > 100 * UNITARY_TOL:
        raise ValueError(f"matrix is not unitary: max |u^dag u - 1| = {defect:.3e}")
    return u


def two_mode_unitary_subspace_matrix(u, n: int) -> np.ndarray:
    """Exact lift of a 2x2 mode unitary onto the n-photon pair subspace.

    Index k of the returned (n+1) x (n+1) unitary corresponds to the pair
    occupation |n-k, k> (k photons in the second mode).  Column k is the
    image of that basis state under the creation-operator substitution.
    """
    u = _require_unitary(u)
    if n < 0:
        raise ValueError("photon number must be nonnegative")
    delta, alpha, beta, gamma = _zyz_angles(u)
    k = np.arange(n + 1)
    # anti-homomorphism: M(A B C) = M(C) M(B) M(A)
    d_alpha = np.exp(1j * alpha * (k - n / 2.0))
    d_gamma = np.exp(1j * gamma * (k - n / 2.0))
    m = (d_gamma[:, None] * _ry_lift(beta, n)) * d_alpha[None, :]
    return cmath.exp(1j * delta * n) * m


def _prune(amps: dict, tail: float) -> KetState:
    kept: dict[Occupation, complex] = {}
    for occ, amp in amps.items():
        mag = abs(amp)
        if mag < PRUNE_TOL:
            tail += mag * mag
        else:
            kept[occ] = amp
    return KetState(amplitudes=kept, truncation_tail=tail)


def apply_two_mode_unitary(state: KetState, pair, u) -> KetState:
    """Apply a 2x2 unitary to an ordered mode pair of a state.

    Preserves the norm and the photon count of the untouched modes; total
    photon number per component is conserved so truncation never grows.
    """
    m1, m2 = (Mode(pair[0]), Mode(pair[1]))
    if m1 == m2:
        raise ValueError("mode pair must consist of two distinct modes")
    u = _require_unitary(u)

    lifted: dict[int, np.ndarray] = {}
    out: dict[Occupation, complex] = {}
    for occ, amp in state.amplitudes.items():
        n = occ[m1] + occ[m2]
        mat = lifted.get(n)
        if mat is None:
            mat = lifted[n] = two_mode_unitary_subspace_matrix(u, n)
        col = mat[:, occ[m2]]
        template = list(occ)
        for k in range(n + 1):
            template[m1] = n - k
            template[m2] = k
            key = tuple(template)
            prev = out.get(key)
            contrib = amp * col[k]
            out[key] = contrib if prev is None else prev + contrib
    return _prune(out, state.truncation_tail)
