import csv
import io
import json
import math
import re

import pytest

from beamcoherence.cli import main, parse_range, UsageError
from beamcoherence.fresnel import fresnel_derivatives, snell


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def csv_rows(text):
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(lines))))


def test_fresnel_sweep(capsys):
    code, out, _ = run(capsys, "fresnel", "--n", "1.5", "--theta", "0.1:89.9:500")
    assert code == 0
    rows = csv_rows(out)
    assert len(rows) == 500
    near = min(rows, key=lambda r: abs(float(r["theta_deg"]) - 56.31))
    assert abs(float(near["r_p"])) < 2e-3
    assert "# n: 1.5" in out


def test_fresnel_single_angle_matches_module_exactly(capsys):
    code, out, _ = run(capsys, "fresnel", "--theta", "60", "--format", "json")
    assert code == 0
    (row,) = json.loads(out)
    f = fresnel_derivatives(snell(math.radians(60.0), 1.5))
    for name in ("r_p", "r_s", "t_p", "t_s", "dr_p", "dr_s", "dt_p", "dt_s"):
        assert row[name] == getattr(f, name)


def test_csv_round_trips_doubles(capsys, tmp_path):
    path = tmp_path / "f.csv"
    assert main(["fresnel", "--theta", "60", "--out", str(path)]) == 0
    (row,) = csv_rows(path.read_text())
    assert float(row["r_p"]) == fresnel_derivatives(snell(math.radians(60.0), 1.5)).r_p


@pytest.mark.parametrize(
    "argv, flag",
    [
        (["fresnel", "--theta", "0.1:89.9"], "--theta"),
        (["fresnel", "--theta", "a:b:c"], "--theta"),
        (["fresnel", "--theta", "0:45:10"], "--theta"),
        (["fresnel", "--theta", "10:20:1"], "--theta"),
        (["fresnel", "--n", "0.5"], "--n"),
        (["g2", "--dz", "0"], "--dz"),
        (["g2", "--theta", "90"], "--theta"),
        (["g2", "--w0", "-1"], "--w0"),
        (["g2", "--lambda", "0"], "--lambda"),
        (["g2", "--components", "VVXX"], "--components"),
        (["g2", "--sweep", "theta"], "--sweep"),
        (["g2", "--axis", "1:2:3"], "--axis"),
        (["g2", "--sweep", "theta", "--axis", "10:95:5"], "--axis"),
        (["g2", "--sweep", "dz", "--axis", "-1:5:5"], "--axis"),
    ],
)
def test_domain_errors_exit_2_without_output(capsys, tmp_path, argv, flag):
    path = tmp_path / "out.csv"
    code, out, err = run(capsys, *argv, "--out", str(path))
    assert code == 2
    assert not path.exists()
    assert out == ""
    assert err.count("\n") == 1 and flag in err


def test_usage_errors_exit_2(capsys):
    assert run(capsys, "bogus")[0] == 2
    assert run(capsys, "fresnel", "--format", "xml")[0] == 2
    assert run(capsys)[0] == 2


def test_help_exits_0(capsys):
    code, out, _ = run(capsys, "--help")
    assert code == 0 and "fresnel" in out
    assert "inject" not in run(capsys, "validate", "--help")[1]


def test_g2_single_point(capsys):
    code, out, _ = run(capsys, "g2", "--dy", "0.3", "--w0", "4.25", "--components", "vvvv,hvhv")
    assert code == 0
    rows = csv_rows(out)
    assert [r["component"] for r in rows] == ["VVVV", "HVHV"]
    assert float(rows[0]["real"]) == pytest.approx(0.996816245100867, rel=1e-13)
    assert rows[1]["flags"] == "sub_poissonian"
    for key in ("theta_deg", "dx_mm", "dy_mm", "dz_mm", "w0_mm", "lambda_mm", "components"):
        assert f"# {key}:" in out


def test_g2_sweep_json(capsys):
    code, out, _ = run(capsys, "g2", "--sweep", "theta", "--axis", "20:70:6", "--components", "HHVH", "--format", "json")
    assert code == 0
    rows = json.loads(out)
    assert [r["theta"] for r in rows] == [20.0, 30.0, 40.0, 50.0, 60.0, 70.0]
    assert set(rows[0]) == {"theta", "component", "real", "imag", "magnitude", "envelope", "flags"}


def test_g2_singular_point_is_flagged(capsys):
    tb = math.degrees(math.atan(1.5))
    code, out, _ = run(capsys, "g2", "--theta", repr(tb), "--dy", "0.2", "--components", "HHVH", "--format", "json")
    assert code == 0
    (row,) = json.loads(out)
    assert row["flags"] == "singular" and row["real"] is None


def test_figure_columns(capsys):
    expected = {
        "fig2": {"dy_over_dx", "component", "magnitude", "envelope"},
        "fig3a": {"theta_deg", "component", "magnitude"},
        "fig3b": {"theta_deg", "quantity", "value"},
        "fig4": {"dz_mm", "w0_over_lambda", "magnitude_vvvv"},
    }
    for name, cols in expected.items():
        code, out, _ = run(capsys, "figure", name)
        assert code == 0
        assert cols <= set(csv_rows(out)[0])


def test_fig2_ships_both_readings(capsys):
    rows = csv_rows(run(capsys, "figure", "fig2")[1])
    assert {r["reading"] for r in rows} == {"dy_over_dx", "dy_over_dz"}
    assert len(rows) == 2 * 201 * 4


def test_fig3b_small_angle_plateau(capsys):
    rows = csv_rows(run(capsys, "figure", "fig3b")[1])
    assert {"g_out_HH", "g_out_HH_numerator", "VVVV", "VVHH"} == {r["quantity"] for r in rows}
    small = [float(r["value"]) for r in rows if r["quantity"] == "VVVV" and float(r["theta_deg"]) <= 20]
    assert small and max(abs(v - 1) for v in small) <= 0.02


def test_fig4_depends_only_on_waist_over_wavelength(capsys):
    rows = csv_rows(run(capsys, "figure", "fig4")[1])
    groups = {}
    for r in rows:
        groups.setdefault((r["dz_mm"], r["w0_over_lambda"]), []).append((r["lambda_mm"], float(r["magnitude_vvvv"])))
    assert len(groups) == 12 * 30
    for pairs in groups.values():
        assert len({lam for lam, _ in pairs}) == 2
        (_, a), (_, b) = pairs
        assert b == pytest.approx(a, rel=1e-12)


def test_figure_output_is_byte_identical(tmp_path):
    for name in ("fig2", "fig3a", "fig3b", "fig4"):
        a, b = tmp_path / f"{name}a.csv", tmp_path / f"{name}b.csv"
        assert main(["figure", name, "--out", str(a)]) == 0
        assert main(["figure", name, "--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()


def test_unwritable_output_exits_3(capsys, tmp_path):
    code, _, err = run(capsys, "figure", "fig3a", "--out", str(tmp_path / "missing" / "x.csv"))
    assert code == 3 and "--out" in err
    blocker = tmp_path / "dir"
    blocker.mkdir()
    assert run(capsys, "fresnel", "--out", str(blocker))[0] == 3


def test_atomic_write_leaves_no_temp_files(tmp_path):
    assert main(["figure", "fig3a", "--out", str(tmp_path / "x.csv")]) == 0
    assert [p.name for p in tmp_path.iterdir()] == ["x.csv"]


LINE = re.compile(r"^(A\d+) (PASS|FAIL) measured=\S.* threshold=\S")


@pytest.fixture(scope="module")
def validate_report(tmp_path_factory):
    out = tmp_path_factory.mktemp("v") / "report.txt"
    cmp = out.with_name("comparison.csv")
    code = main(["validate", "--out", str(out), "--comparison", str(cmp)])
    return code, out.read_text(), cmp.read_text()


def test_validate_report_format(validate_report):
    code, text, _ = validate_report
    lines = [ln for ln in text.splitlines() if LINE.match(ln)]
    assert [LINE.match(ln).group(1) for ln in lines] == [f"A{i}" for i in range(1, 12)]
    failed = [ln.split()[0] for ln in lines if " FAIL " in ln]
    assert code == (1 if failed else 0)
    assert text.splitlines()[-1] == f"SUMMARY {11 - len(failed)}/11 checks passed"


def test_validate_clean_build_exits_0(validate_report):
    code, text, _ = validate_report
    failed = [ln for ln in text.splitlines() if " FAIL " in ln]
    assert code == 0, "failing checks:\n" + "\n".join(failed)


def test_validate_comparison_records(validate_report):
    _, _, cmp = validate_report
    rows = csv_rows(cmp)
    assert set(rows[0]) == {
        "point", "component", "closed_real", "closed_imag", "oracle_real", "oracle_imag",
        "deviation", "envelope", "flags",
    }
    assert len(rows) == 4 * 40


def test_validate_detects_injected_fault(capsys):
    code, out, _ = run(capsys, "validate", "--skip-slow", "--inject-fault", "rs-sign")
    assert code == 1
    (a2,) = [ln for ln in out.splitlines() if ln.startswith("A2 ")]
    assert " FAIL " in a2


def test_validate_json(capsys):
    code, out, _ = run(capsys, "validate", "--skip-slow", "--format", "json")
    rows = json.loads(out)
    assert [r["check"] for r in rows] == [f"A{i}" for i in range(1, 11)]
    assert code == (0 if all(r["status"] == "PASS" for r in rows) else 1)


def test_parse_range():
    r = parse_range("1:2:3", "--x")
    assert (r.start, r.stop, r.samples) == (1.0, 2.0, 3)
    assert parse_range("5", "--x", allow_single=True).samples == 1
    with pytest.raises(UsageError, match="--x"):
        parse_range("5", "--x")
    with pytest.raises(UsageError):
        parse_range("1:nan:3", "--x")
