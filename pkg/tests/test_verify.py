import math

from morsim import Geometry, Mode, apply_two_mode_unitary, rotation_matrix
from morsim.verify import (
    check_two_photon_closed_form,
    check_normalization_and_invariance,
    check_oracle_equivalence,
    run_all,
)


def broken_apply_mor(state, medium, geometry):
    """Channel with the counter-propagation sign error: the b beam sees
    +theta instead of -theta."""
    out = apply_two_mode_unitary(state, (Mode.AH, Mode.AV),
                                 rotation_matrix(medium.theta, medium.theta_plus))
    if Geometry(geometry) is Geometry.NONCOLLINEAR:
        out = apply_two_mode_unitary(out, (Mode.BH, Mode.BV),
                                     rotation_matrix(medium.theta, medium.theta_plus))
    return out


def test_default_oracle_equivalence_passes():
    results = check_oracle_equivalence()
    assert all(r.passed for r in results)


def test_two_photon_closed_form_check_passes():
    assert check_two_photon_closed_form().passed


def test_mutated_b_rotation_is_caught_by_projection_oracle(monkeypatch):
    import morsim.verify as verify_mod

    monkeypatch.setattr(verify_mod, "ORACLE_R_VALUES", (0.5,))
    results = {r.name: r for r in check_oracle_equivalence(broken_apply_mor)}
    assert not results["oracle_noncollinear_projection"].passed
    # the sign error does not touch the single-beam observables
    assert results["oracle_two_photon_coincidence"].passed
    assert results["oracle_collinear_projection"].passed
    assert results["oracle_four_photon_counts"].passed


def test_mutated_channel_still_norm_preserving():
    # the mutation is a perfectly valid unitary, so only oracle checks see it
    results = check_normalization_and_invariance(broken_apply_mor)
    by_name = {r.name: r for r in results}
    assert by_name["channel_norm_preservation"].passed


def test_run_all_shape():
    results = run_all()
    names = [r.name for r in results]
    assert len(names) == len(set(names))
    assert all(r.passed for r in results)
    assert any("noncollinear_projection" in n for n in names)
    for r in results:
        assert math.isfinite(r.max_error)
