import json
import os
from fractions import Fraction

import numpy as np
import pytest

from hyperlab.errors import ConfigError, DimensionMismatch
from hyperlab.io import matrix_from_json, matrix_to_json, scalar_to_json, vector_from_json, write_atomic, write_json
from hyperlab.surd import Surd


def test_exact_matrix_decodes_to_objects():
    A, field = matrix_from_json({"field": "R", "n": 2, "entries": [[1, "1/3"], ["sqrt(2)", "1 - sqrt(2)"]]})
    assert field == "R" and A.dtype == object
    assert A[0, 0] == 1 and A[0, 1] == Fraction(1, 3)
    assert A[1, 0] == Surd.sqrt(2) and A[1, 1] == 1 - Surd.sqrt(2)


def test_decimal_entry_makes_float_matrix():
    A, _ = matrix_from_json({"entries": [[0.5, 1], [0, "2.5e-1"]]})
    assert A.dtype == float and A.tolist() == [[0.5, 1.0], [0.0, 0.25]]


def test_complex_matrix():
    A, field = matrix_from_json({"field": "C", "entries": [[[1, 2], 0], [0, [0, -1]]]})
    assert field == "C" and A.tolist() == [[1 + 2j, 0], [0, -1j]]


def test_bad_shapes_and_entries():
    with pytest.raises(DimensionMismatch):
        matrix_from_json({"n": 2, "entries": [[1, 2]]})
    with pytest.raises(ConfigError):
        matrix_from_json({"rows": []})
    with pytest.raises(ConfigError):
        matrix_from_json({"entries": [[True]]})


@pytest.mark.parametrize("entries", [
    [[1, "1/3"], ["sqrt(2)", "-2*sqrt(3)"]],
    [["1/2+sqrt(5)", 0], [7, "-sqrt(7)"]],
])
def test_exact_round_trip(entries):
    A, _ = matrix_from_json({"entries": entries})
    B, _ = matrix_from_json(json.loads(json.dumps(matrix_to_json(A))))
    assert B.dtype == object and (A == B).all()


def test_float_round_trip_is_bitwise():
    A = np.random.default_rng(0).normal(size=(3, 3))
    B, _ = matrix_from_json(json.loads(json.dumps(matrix_to_json(A))))
    assert A.tobytes() == B.tobytes()


def test_scalar_to_json_forms():
    assert scalar_to_json(Fraction(4, 2)) == 2
    assert scalar_to_json(Fraction(1, 3)) == "1/3"
    assert scalar_to_json(Surd(5)) == "5"
    assert scalar_to_json(1 + 2j) == [1.0, 2.0]
    assert scalar_to_json(np.int64(3)) == 3


def test_vector_from_json():
    v = vector_from_json(["1/2", "sqrt(3)"])
    assert v.dtype == object and v[1] == Surd.sqrt(3)
    assert vector_from_json([0.5, 1]).dtype == float
    assert vector_from_json([[1, 1], 2], "C").tolist() == [1 + 1j, 2]


def test_write_atomic_leaves_no_temporaries(tmp_path):
    target = tmp_path / "sub" / "report.json"
    write_json(target, {"b": np.arange(2), "a": Fraction(1, 3)})
    assert json.loads(target.read_text()) == {"a": "1/3", "b": [0, 1]}
    assert os.listdir(target.parent) == ["report.json"]


def test_write_atomic_failure_keeps_old_file(tmp_path):
    target = tmp_path / "r.json"
    write_atomic(target, "old")

    class Boom:
        pass

    with pytest.raises(TypeError):
        write_json(target, {"x": Boom()})
    assert target.read_text() == "old"
    assert os.listdir(tmp_path) == ["r.json"]
