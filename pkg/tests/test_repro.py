import json

import numpy as np
import pytest

from fovprod import repro


def test_intro_hermitian():
    res = repro.repro_intro_hermitian()
    assert res.overall_pass, [c.description for c in res.claims if not c.passed]
    json.dumps(res.to_dict())


@pytest.mark.parametrize("M,eps", [(4, 0.01), (1, 1), (9, 0.04), (2, 0)])
def test_additive(M, eps):
    assert repro.repro_additive_perturbation(M, eps).overall_pass


def test_additive_bad_params():
    with pytest.raises(ValueError):
        repro.repro_additive_perturbation(0, 1)


def test_truncation_small_n():
    res = repro.repro_truncated_example_1_3(n=8, trials=20)
    assert res.overall_pass


def test_oplus_small_n():
    res = repro.repro_example_1_4(n=16, d=0.5)
    assert res.overall_pass
    assert res.claims[0].observed == pytest.approx(np.sqrt(2) * 0.25 / (34 + 0.25))


def test_oplus_rejects_bad_d():
    with pytest.raises(ValueError):
        repro.repro_example_1_4(n=16, d=1.5)


def test_cited_inclusions_small():
    assert repro.repro_cited_inclusions(trials=10, seed=3).overall_pass


def test_roots_of_unity_matrix():
    A = repro.roots_of_unity_matrix(4)
    assert np.allclose(np.diag(A), [2, 1 + 1j, 0, 1 - 1j])


def test_margin_ladder_decreasing_prefix():
    m = repro.margin_ladder((4, 8, 16))
    assert m[0] > m[1] > m[2] > 0


def test_run_repro_unknown():
    with pytest.raises(ValueError):
        repro.run_repro("nope")


def test_margin_ladder_custom_sequence():
    golden = lambda n: np.exp(2j * np.pi * np.arange(n) * (np.sqrt(5) - 1) / 2)
    m = repro.margin_ladder((4, 16), sequence=golden)
    assert m[0] > m[1] > 0
    with pytest.raises(ValueError):
        repro.circle_sequence_matrix([2.0])
