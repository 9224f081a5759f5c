import json

import numpy as np
import pytest

from corrmap import serialize as ser
from corrmap.assignment import apply, from_basis, product_assignment
from corrmap.dynamics import compose
from corrmap.errors import ValidationError
from corrmap.rand import random_density, random_hermitian, random_unitary
from corrmap.tensor_core import DimSpec

from factories import random_basis_pair


def test_matrix_roundtrip(rng):
    m = rng.normal(size=(3, 2)) + 1j * rng.normal(size=(3, 2))
    obj = ser.matrix_to_obj(m)
    assert set(obj) == {"rows", "cols", "re", "im"}
    assert obj["re"][:2] == [m[0, 0].real, m[0, 1].real]
    back = ser.matrix_from_obj(json.loads(json.dumps(obj)))
    assert np.array_equal(back, m)


@pytest.mark.parametrize("obj", [
    {"rows": 2, "cols": 2, "re": [1, 0, 0], "im": [0, 0, 0, 0]},
    {"rows": 2, "cols": 2, "re": [1, 0, 0, "x"], "im": [0, 0, 0, 0]},
    {"rows": 0, "cols": 2, "re": [], "im": []},
    {"rows": 1, "cols": 1, "re": [1.0]},
    {"rows": 1, "cols": 1, "re": [float("nan")], "im": [0.0]},
    [1, 2, 3],
])
def test_matrix_rejects_malformed(obj):
    with pytest.raises(ValidationError):
        ser.matrix_from_obj(obj)


def test_assignment_roundtrip_both_forms(rng):
    dims = DimSpec(2, 2, 1)
    P, R = random_basis_pair(dims, rng)
    a = from_basis(P, R, dims)
    eta = random_hermitian(2, rng)
    for form in ("eigen", "basis"):
        obj = json.loads(ser.dumps(ser.assignment_to_obj(a, form)))
        b = ser.assignment_from_obj(obj)
        assert np.abs(apply(a, eta) - apply(b, eta)).max() < 1e-12
    with pytest.raises(ValidationError):
        ser.assignment_to_obj(product_assignment(np.eye(2) / 2, dims), "basis")


def test_assignment_rejects_bad_documents(rng):
    good = ser.assignment_to_obj(product_assignment(np.eye(2) / 2, DimSpec(2, 2, 1)))
    for mutate in (
        lambda d: d.update(form="other"),
        lambda d: d.pop("dims"),
        lambda d: d["dims"].update(d_s=0),
        lambda d: d.update(terms=[]),
        lambda d: d["terms"][0].update(A=ser.matrix_to_obj(np.eye(3))),
    ):
        doc = json.loads(json.dumps(good))
        mutate(doc)
        with pytest.raises(ValidationError):
            ser.assignment_from_obj(doc)


def test_dynamical_map_roundtrip(rng):
    b = compose(product_assignment(random_density(2, rng), DimSpec(2, 2, 1)), random_unitary(4, rng))
    obj = json.loads(ser.dumps(ser.dynamical_map_to_obj(b)))
    assert set(obj) == {"d_s", "choi"}
    assert np.array_equal(ser.dynamical_map_from_obj(obj).choi, b.choi)


def test_config_roundtrip(rng):
    from corrmap.collision import CollisionConfig
    cfg = CollisionConfig(2, 2, random_hermitian(4, rng), 0.5, random_density(2, rng), 3,
                          random_density(2, rng))
    obj = json.loads(ser.dumps(ser.config_to_obj(cfg)))
    assert set(obj) == {"d_s", "d_anc", "V", "T", "tau", "eta0", "steps"}
    back = ser.config_from_obj(obj)
    assert np.array_equal(back.V, cfg.V) and back.steps == 3


def test_load_json_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ValidationError, match="malformed"):
        ser.load_json(bad)
    with pytest.raises(ValidationError):
        ser.load_json(tmp_path / "missing.json")
