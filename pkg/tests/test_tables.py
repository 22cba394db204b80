import json

import pytest

from artin_scattering.errors import SchemaError
from artin_scattering.tables import (
    SCHEMAS,
    TableRow,
    TableWriter,
    check_schema,
    load_published_table,
    published_table_resolution,
    read_csv_header,
    read_json_table,
)


def _zero_rows():
    return [
        TableRow.of(n=1, u=14.134725141734693, residual=1.5e-13),
        TableRow.of(n=2, u=21.022039638771555, residual=0.0),
    ]


def test_row_rendering():
    row = TableRow.of(check="unitarity", passed=True, detail=None, value=50.135113)
    assert row.columns == ("check", "passed", "detail", "value")
    assert row.rendered() == {"check": "unitarity", "passed": "true", "detail": "", "value": "50.1351"}
    assert row.rendered(digits=3)["value"] == "50.1"


def test_check_schema():
    check_schema("zeros", ("n", "u", "residual"))
    for layout in SCHEMAS["resonances"]:
        check_schema("resonances", layout)
    with pytest.raises(SchemaError):
        check_schema("zeros", ("n", "u"))
    with pytest.raises(SchemaError):
        check_schema("resonances", ("n", "u", "E_approx", "Gamma_approx", "delta_offset"))
    with pytest.raises(SchemaError):
        check_schema("spectrum", ("n",))


def test_csv_rendering():
    text = TableWriter(fmt="csv").render("zeros", {"count": 2}, _zero_rows())
    assert text == "n,u,residual\n1,14.1347,1.5e-13\n2,21.022,0\n"


def test_empty_csv_has_header():
    assert TableWriter().render("phase", {}, []) == "E,p,delta,re_S,im_S\n"


def test_json_round_trip_is_exact(tmp_path):
    path = tmp_path / "zeros.json"
    rows = _zero_rows()
    TableWriter(str(path), fmt="json").write("zeros", {"count": 2, "tol": None}, rows)
    document = read_json_table(str(path))
    assert document["command"] == "zeros"
    assert document["params"] == {"count": 2, "tol": None}
    assert [row["u"] for row in document["rows"]] == [row.as_dict()["u"] for row in rows]


def test_mixed_layouts_are_rejected():
    rows = [TableRow.of(n=1, u=14.1, E=50.1, Gamma=3.5), TableRow.of(n=2, u=21.0, residual=0.0)]
    with pytest.raises(SchemaError):
        TableWriter().render("resonances", {}, rows)


def test_writer_stdout(capsys):
    TableWriter("-").write("zeros", {}, _zero_rows()[:1])
    assert capsys.readouterr().out.startswith("n,u,residual\n")


def test_writer_rejects_unknown_format():
    with pytest.raises(SchemaError):
        TableWriter(fmt="xlsx")


def test_csv_files_use_lf(tmp_path):
    path = tmp_path / "nested" / "zeros.csv"
    TableWriter(str(path)).write("zeros", {}, _zero_rows())
    assert b"\r\n" not in path.read_bytes()
    assert read_csv_header(str(path)) == ["n", "u", "residual"]


def test_read_json_table_rejects_other_documents(tmp_path):
    path = tmp_path / "other.json"
    path.write_text(json.dumps({"rows": []}))
    with pytest.raises(SchemaError):
        read_json_table(str(path))


def test_published_tables():
    exact = load_published_table("exact")
    approx = load_published_table("approx")
    assert list(exact.columns) == ["u", "E", "Gamma"]
    assert list(approx.columns) == ["u", "E_approx", "Gamma_approx"]
    assert len(exact) == len(approx) == 10
    assert exact.loc[1, "E"] == pytest.approx(50.1351)
    assert approx.loc[10, "E_approx"] == pytest.approx(621.9)
    with pytest.raises(SchemaError):
        load_published_table("fitted")


def test_published_table_resolution():
    units = published_table_resolution("exact")
    assert units.loc[1, "E"] == pytest.approx(1e-4)
    assert units.loc[2, "E"] == pytest.approx(1e-3)
    assert units.loc[1, "Gamma"] == pytest.approx(1e-5)
    assert published_table_resolution("approx").loc[10, "E_approx"] == pytest.approx(0.1)
