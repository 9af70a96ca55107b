import numpy as np
import pytest

from bollobas_lab.errors import NotMaterializableError, NotNormalizedError
from bollobas_lab.sequences import (BoundedTail, ConstantTail, SequenceSpec,
                                    ZeroTail, drifting_phase_tail,
                                    geometric_tail, projection_spec,
                                    ratio_to_one_tail)


def test_snap_to_unit_circle():
    wobble = np.exp(1j * 0.3)            # |.| may be off by one ulp
    spec = SequenceSpec((wobble, 0.5))
    assert spec.prefix_unimodular_mask() == [True, False]
    assert spec.sup_modulus() == 1.0


def test_J_and_off_sup():
    spec = SequenceSpec((1.0, -0.3), ConstantTail(0.5))
    assert spec.prefix_J() == [1]
    assert spec.off_J_sup() == 0.5
    assert not spec.J_is_everything()
    assert spec.sup_attained()


def test_J_everything():
    spec = SequenceSpec((1.0, -1.0), ConstantTail(1.0))
    assert spec.J_is_everything()
    finite, phases = spec.phases_on_J()
    assert finite and set(phases) == {1.0, -1.0}


def test_ratio_tail_sup_unattained():
    spec = SequenceSpec((0.5,), ratio_to_one_tail())
    assert spec.sup_modulus() == 1.0
    assert not spec.sup_attained()
    assert not spec.J_nonempty()
    vals = spec.materialize(5)
    assert np.allclose(vals, [0.5, 1 / 2, 2 / 3, 3 / 4, 4 / 5])


def test_drifting_phases_infinite():
    spec = SequenceSpec((), drifting_phase_tail())
    finite, phases = spec.phases_on_J()
    assert not finite and phases is None
    assert spec.J_is_everything()
    m = spec.materialize(4)
    assert np.allclose(np.abs(m), 1.0)


def test_geometric_tail_pnorm():
    tail = geometric_tail(1.0, 0.5)
    assert tail.abs_pnorm_pow(1.0) == pytest.approx(1.0)
    assert tail.abs_pnorm_pow(2.0) == pytest.approx(0.25 / 0.75)
    spec = SequenceSpec((), tail)
    assert np.allclose(spec.materialize(3), [0.5, 0.25, 0.125])


def test_unmaterializable_tail():
    tail = BoundedTail(sup_modulus=0.7, sup_attained=True)
    spec = SequenceSpec((1.0,), tail)
    assert not spec.materializable()
    with pytest.raises(NotMaterializableError):
        spec.materialize(5)


def test_attained_sup_needs_phase_content():
    with pytest.raises(ValueError):
        BoundedTail(sup_modulus=1.0, sup_attained=True)


def test_projection_spec():
    spec = projection_spec(3)
    assert spec.prefix_J() == [1, 2, 3]
    assert spec.finitely_supported()
    assert np.allclose(spec.materialize(5), [1, 1, 1, 0, 0])


def test_normalization_check():
    spec = SequenceSpec((0.5,), ZeroTail())
    with pytest.raises(NotNormalizedError):
        spec.check_sup_norm_one()


def test_materialize_shorter_than_prefix():
    spec = SequenceSpec((1.0, 0.5, 0.25))
    with pytest.raises(NotMaterializableError):
        spec.materialize(2)
