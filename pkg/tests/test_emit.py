import json

import numpy as np

from cbwsim.analysis import Curve, Map2D
from cbwsim.emit import emit_curve_csv, emit_map_csv, emit_map_json, emit_records_csv, format_number


def test_two_point_curve_bytes():
    c = Curve([0.0, np.pi], [1.0, 0.0])
    assert emit_curve_csv(c) == "phi,value\n0,1\n3.1415926535897931,0\n"


def test_number_format():
    assert format_number(-0.0) == "0"
    assert format_number(0.1) == "0.10000000000000001"
    assert format_number(1e-20) == "9.9999999999999995e-21"
    assert format_number(np.int64(3)) == "3"


def test_single_cell_map_json():
    m = Map2D([0.5], [0.25], [[0.75]])
    assert json.loads(emit_map_json(m)) == {"phis": [0.5], "psis": [0.25], "values_row_major": [0.75]}


def test_map_json_row_major():
    m = Map2D([0.0, 1.0, 2.0], [0.0, 1.0], [[1, 2, 3], [4, 5, 6]])
    assert json.loads(emit_map_json(m))["values_row_major"] == [1, 2, 3, 4, 5, 6]
    assert emit_map_csv(m).splitlines()[1:3] == ["0,0,1", "0,1,2"]
    assert emit_map_csv(m).splitlines()[4] == "1,0,4"


def test_records():
    text = emit_records_csv({"n": 3, "ok": True, "width": 0.5, "port": "C"})
    assert text == "quantity,value\nn,3\nok,true\nwidth,0.5\nport,C\n"
