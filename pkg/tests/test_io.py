import json

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from conftest import random_unknowns
from galerkin_toc.io import load_unknowns, read_csv, unknowns_to_dict, write_csv, write_json


@settings(max_examples=50, deadline=None)
@given(arrays(np.float64, st.tuples(st.integers(0, 6), st.integers(1, 5)),
              elements=st.floats(allow_nan=False, allow_infinity=False, width=64)))
def test_csv_roundtrip_is_exact(tmp_path_factory, table):
    path = tmp_path_factory.mktemp("csv") / "t.csv"
    header = [f"c{i}" for i in range(table.shape[1])]
    write_csv(path, header, table)
    got_header, got = read_csv(path)
    assert got_header == header
    assert got.shape == table.shape
    assert np.array_equal(got, table)


def test_integers_are_written_plainly(tmp_path):
    write_csv(tmp_path / "a.csv", ["i", "x"], [(3, 0.1)])
    assert (tmp_path / "a.csv").read_text() == "i,x\n3,0.10000000000000001\n"


def test_unknowns_roundtrip(tmp_path):
    u = random_unknowns(np.random.default_rng(0), 20)
    write_json(tmp_path / "u.json", unknowns_to_dict(u))
    v = load_unknowns(tmp_path / "u.json")
    assert np.array_equal(u.to_vector(), v.to_vector())


def test_unknowns_file_must_be_complete(tmp_path):
    (tmp_path / "u.json").write_text(json.dumps({"alpha": [[0, 0, 0]]}))
    try:
        load_unknowns(tmp_path / "u.json")
    except ValueError as exc:
        assert "lambda_x" in str(exc)
    else:
        raise AssertionError("incomplete unknowns accepted")
