import csv
import io
import json
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from twobody_dot import cli
from twobody_dot import equilibria as eq

CONFIGS = Path(__file__).resolve().parents[1] / "configs"
FIG4B = str(CONFIGS / "gaas_fig4b.cfg")
FIG5 = str(CONFIGS / "gaas_fig5.cfg")


def run(*argv):
    out = io.StringIO()
    code = cli.main(list(argv), out=out)
    return code, out.getvalue()


def table(text):
    return list(csv.reader(io.StringIO(text)))


def test_fmt():
    assert cli.fmt(1 / 3) == "0.333333333333"
    assert cli.fmt(3) == "3"
    assert cli.fmt(Fraction(-3, 4)) == "-3/4"


def test_range_parsers():
    assert cli.parse_range("0:1:5") == (0.0, 1.0, 5)
    np.testing.assert_allclose(cli.parse_step_range("0:1:0.25"), [0, 0.25, 0.5, 0.75, 1.0])
    assert cli.parse_list("1, 3,6") == [1.0, 3.0, 6.0]
    for bad in ("0:1", "a:b:c", "0:1:0"):
        with pytest.raises(Exception):
            cli.parse_range(bad)


def test_convert_fig4b():
    code, text = run("convert", "--config", FIG4B)
    assert code == 0
    d = json.loads(text)
    assert d["q_dia"] == pytest.approx(0.68, abs=0.01)
    assert d["B_bullet_tesla"] == pytest.approx(1.577, abs=0.001)
    assert d["B_bullet_prefactor"] == pytest.approx(0.724, abs=0.005)


def test_convert_inline_and_1mev():
    code, text = run("convert", "--hw-rho", "1", "--hw-z", "4")
    assert code == 0
    assert json.loads(text)["L_dia_over_hbar"] == pytest.approx(1.85, abs=0.01)


def test_convert_errors(capsys):
    code, _ = run("convert", "--config", "/nonexistent/file.cfg")
    assert code == 2
    assert "config error" in capsys.readouterr().err
    code, _ = run("convert")
    assert code == 2


def test_convert_g4_invariance():
    _, a = run("convert", "--config", FIG4B)
    _, b = run("convert", "--config", FIG4B, "--g4-a", "2")
    da, db = json.loads(a), json.loads(b)
    assert da["q_dia"] == db["q_dia"]
    assert da["E_S"] == db["E_S"]
    assert db["B_dia_tesla"] == pytest.approx(4 * da["B_dia_tesla"], rel=1e-11)


def test_surface_fig1_two_minima():
    code, text = run("surface", "--u", "6", "--v", "2.75", "--p", "1",
                     "--grid", "rho:0.05:1:60,z:-1:1:81")
    assert code == 0
    rows = table(text)
    assert rows[0] == ["rho", "z", "E"]
    assert len(rows) - 1 == 60 * 81
    E = np.array([float(r[2]) for r in rows[1:]]).reshape(60, 81)
    # interior local minima of the table
    mins = []
    for i in range(1, 59):
        for j in range(1, 80):
            if E[i, j] < E[i - 1:i + 2, j - 1:j + 2].flatten()[[0, 1, 2, 3, 5, 6, 7, 8]].min():
                mins.append(j)
    z = np.linspace(-1, 1, 81)
    assert len(mins) == 2
    assert z[mins[0]] == pytest.approx(-z[mins[1]])
    assert all(abs(z[j]) > 0.1 for j in mins)


def test_surface_fig2_flat_along_plane():
    code, text = run("surface", "--fig2", "--u", "6", "--vstar", "3", "--grid", "v:1:5:9,z:-0.5:0.5:11")
    assert code == 0
    rows = table(text)
    assert rows[0] == ["v", "z", "E"]
    on_plane = [float(r[2]) for r in rows[1:] if float(r[1]) == 0.0]
    assert len(on_plane) == 9
    assert max(on_plane) - min(on_plane) < 1e-12


def test_surface_errors():
    assert run("surface", "--u", "1", "--v", "1", "--p", "1", "--grid", "rho:0:1:5,z:0:1:5")[0] == 3
    assert run("surface", "--u", "1")[0] == 2
    assert run("surface", "--fig2", "--u", "1", "--vstar", "5")[0] == 3


def test_phase_diagram():
    code, text = run("phase-diagram", "--u", "0:4:5", "--p", "0:4:5", "--vstar-contours", "1,2")
    assert code == 0
    main_part, contour_part = text.split("\n\n")
    rows = table(main_part)
    assert rows[0] == ["u", "p", "E_S"]
    assert len(rows) - 1 == 25
    # minimal band energy 3/2 on p = u
    for r in rows[1:]:
        if r[0] == r[1]:
            assert float(r[2]) == pytest.approx(1.5, abs=1e-12)
    crows = table(contour_part)
    assert crows[0] == ["contour", "u", "p"]
    for name, u, p in crows[1:]:
        u, p = float(u), float(p)
        if name == "1":
            assert p == pytest.approx(u, abs=1e-12)
        elif name == "2":
            # p is printed to 12 significant digits
            assert eq.gm_value(p, u, 2.0, 1.0) == pytest.approx(1.0, abs=1e-10)
        else:
            assert name == "minimal" and p == u


def test_phase_diagram_contour_file(tmp_path):
    target = tmp_path / "c.csv"
    code, text = run("phase-diagram", "--u", "0:2:3", "--p", "0:2:3", "--contours-out", str(target))
    assert code == 0 and "\n\n" not in text
    assert target.read_text().startswith("contour,u,p\n")


def test_eadd_fig4b():
    code, text = run("eadd", "--config", FIG4B, "--B", "0:12:0.1")
    assert code == 0
    rows = table(text)
    assert rows[0] == ["B_tesla", "u", "m_opt", "M_S", "E_add_mev", "E_add_Edia"]
    ms = [int(r[2]) for r in rows[1:]]
    assert (ms[0], rows[1][3]) == (0, "0")
    assert all(b >= a for a, b in zip(ms, ms[1:]))
    assert len(set(ms)) > 3


def test_eadd_map_M_blocks():
    code, text = run("eadd", "--config", FIG5, "--B", "0:2:0.5", "--map-M", "1,3,6")
    assert code == 0
    rows = table(text)
    assert rows[0][0] == "M" and rows[0][-1] == "gM_E_add_Edia"
    assert sorted({r[0] for r in rows[1:]}) == ["1", "3", "6"]
    for r in rows[1:]:
        g = 3 / (1 + float(r[0]) / 2)
        assert float(r[-1]) == pytest.approx(g * float(r[6]), rel=1e-11)


def test_eadd_g4_scales_fields():
    _, a = run("eadd", "--config", FIG4B, "--B", "0:4:0.5")
    _, b = run("eadd", "--config", FIG4B, "--B", "0:4:0.5", "--g4-a", "2")
    ra, rb = table(a)[1:], table(b)[1:]
    for x, y in zip(ra, rb):
        assert float(y[0]) == pytest.approx(4 * float(x[0]), rel=1e-11)
        assert x[1:4] == y[1:4] and x[5] == y[5]


def test_spectrum():
    code, text = run("spectrum", "--config", FIG4B, "--B", "0:1:0.5", "--m", "0,1,2")
    assert code == 0
    rows = table(text)
    assert rows[0] == ["B_tesla", "u", "m", "M_S", "E_add_mev", "E_add_Edia"]
    assert len(rows) - 1 == 9
    assert run("spectrum", "--config", FIG4B, "--m", "-1")[0] == 3


def test_vstar_compare():
    code, text = run("vstar", "--u", "6", "--p", "1", "--M", "1", "--compare")
    assert code == 0
    d = json.loads(text)
    assert d["bisect"] == pytest.approx(3.374, abs=1e-3)
    assert abs(d["delta_closed"]) <= 1e-8
    assert abs(d["delta_series"]) <= 1e-8


def test_vstar_methods():
    code, text = run("vstar", "--u", "2", "--p", "1.3", "--M", "6", "--method", "closed")
    assert code == 0
    assert json.loads(text)["v_star"] == pytest.approx(eq.vstar(1.3, 2, 6), rel=1e-11)
    assert run("vstar", "--u", "2", "--p", "1", "--M", "3", "--method", "closed")[0] == 3


def test_modes_json():
    code, text = run("modes", "--u", "6", "--v", "4", "--p", "1")
    assert code == 0
    d = json.loads(text)
    assert d["family"] == "S" and d["stability"] == "S_plus"
    code, text = run("modes", "--u", "6", "--v", "2.75", "--p", "1")
    assert json.loads(text)["family"] == "A"


def test_series_m6():
    code, text = run("series", "--M", "6", "--terms", "8")
    assert code == 0
    rows = table(text)
    assert rows[0] == ["k", "F_a_coeff", "G_a_coeff_reversion", "G_a_coeff_pochhammer"]
    g = [r[2] for r in rows[1:]]
    # signed Catalan numbers: the inverse of y/(1-y)^2
    assert g == ["1", "-2", "5", "-14", "42", "-132", "429", "-1430"]
    assert [r[3] for r in rows[1:]] == g


def test_series_noninteger_M():
    code, text = run("series", "--M", "1.5", "--terms", "5")
    assert code == 0
    rows = table(text)[1:]
    for r in rows:
        assert float(r[2]) == pytest.approx(float(r[3]), rel=1e-11)


def test_verify_hidden_and_passing():
    assert "verify" not in cli.build_parser().format_help()
    code, text = run("verify", "--samples", "10")
    assert code == 0
    rows = table(text)
    assert rows[0] == ["check", "worst", "limit", "status"]
    assert all(r[3] == "pass" for r in rows[1:])


def test_output_is_deterministic():
    a = run("eadd", "--config", FIG4B, "--B", "0:3:0.25")[1]
    b = run("eadd", "--config", FIG4B, "--B", "0:3:0.25")[1]
    assert a == b


def test_flags_override_config():
    _, text = run("convert", "--config", FIG4B, "--hw-z", "4", "--epsilon", "13")
    d = json.loads(text)
    _, ref = run("convert", "--hw-rho", "2", "--hw-z", "4", "--epsilon", "13")
    assert d["v"] == 2.0
    assert d == json.loads(ref)
