import json

import numpy as np
import pytest

from stgalerkin.errors import ConfigInvalid, IoFailure, SingularSlabSystem, UnknownSolutionId
from stgalerkin.harness import cli
from stgalerkin.harness.config import canonical_scheme, parse_norms, read_config
from stgalerkin.harness.report import emit_report, parse_report_json, report_to_csv
from stgalerkin.harness.solutions import get_solution, list_solutions
from stgalerkin.harness.study import PreflightFailed, StudyConfig, run_study

PI = np.pi


# manufactured solutions --------------------------------------------------------

def test_registry_lists_every_solution():
    ids = [sid for sid, _ in list_solutions()]
    assert {"heat_sine", "wave_standing", "heat_poly_exact", "wave_poly_exact", "zero"} <= set(ids)
    with pytest.raises(UnknownSolutionId):
        get_solution("nope")


def test_heat_sine_forcing_closed_form():
    rng = np.random.default_rng(0)
    x, t = rng.uniform(0, 1, 20), rng.uniform(0, 2, 20)
    for nu in (1.0, 0.3):
        s = get_solution("heat_sine", nu=nu)
        assert np.allclose(s.f(x, t), (nu * PI ** 2 - 1) * np.sin(PI * x) * np.exp(-t))


def test_forcing_matches_finite_differences():
    # independent oracle: second-order central differences of u itself
    rng = np.random.default_rng(1)
    x, t, h = rng.uniform(0.1, 0.9, 20), rng.uniform(0.2, 1.0, 20), 1e-4
    for sid, kw in (("heat_sine", {}), ("wave_damped_standing", {"delta": 0.8, "c": 1.3}),
                    ("wave_poly_space", {}), ("wave_poly_exact", {"q": 3})):
        s = get_solution(sid, **kw)
        uxx = (s.u(x + h, t) - 2 * s.u(x, t) + s.u(x - h, t)) / h ** 2
        ut = (s.u(x, t + h) - s.u(x, t - h)) / (2 * h)
        utt = (s.u(x, t + h) - 2 * s.u(x, t) + s.u(x, t - h)) / h ** 2
        fd = ut - s.nu * uxx if s.equation == "heat" else utt + s.delta * ut - s.c ** 2 * uxx
        assert np.allclose(s.f(x, t), fd, atol=1e-5 * max(1.0, np.abs(fd).max())), sid


def test_standing_wave_is_homogeneous():
    s = get_solution("wave_standing", c=1.7)
    x, t = np.linspace(0, 1, 11), np.linspace(0, 3, 11)
    assert np.allclose(s.f(x, t), 0.0, atol=1e-12)


def test_every_solution_vanishes_on_the_boundary():
    t = np.linspace(0, 2, 9)
    for sid, _ in list_solutions():
        eq = "wave" if sid.startswith("wave") else "heat"
        s = get_solution(sid, equation=eq, q=2)
        assert np.allclose(s.u(0.0, t), 0.0) and np.allclose(s.u(1.0, t), 0.0), sid
        assert s.self_check() <= 1e-6


# studies -------------------------------------------------------------------------

def test_jamet_study_order():
    r = run_study(StudyConfig(scheme="HeatJamet", q=1, p=1, M=512, N=2, refine="tau", levels=4,
                              solution="heat_sine"))
    assert r.orders("LinfL2")[-1] == pytest.approx(2.0, abs=0.2)
    assert [lv.N for lv in r.levels] == [2, 4, 8, 16]


def test_walkington_study_orders():
    r = run_study(StudyConfig(scheme="WaveWalkington", q=2, p=6, M=16, N=4, refine="tau", levels=4,
                              solution="wave_standing", norms=("LinfH1semi", "LinfL2@dt")))
    assert r.orders("LinfH1semi")[-1] == pytest.approx(3.0, abs=0.25)
    assert r.orders("LinfL2@dt")[-1] == pytest.approx(2.0, abs=0.25)


def test_zero_data_gives_null_orders():
    cfg = StudyConfig(scheme="HeatJamet", q=1, p=1, M=4, N=2, refine="tau", levels=3, solution="zero",
                      norms=("LinfL2", "L2QT"))
    r = run_study(cfg)
    assert all(v == 0.0 for lv in r.levels for v in lv.errors.values())
    assert r.eoc == {"LinfL2": [None, None], "L2QT": [None, None]}
    assert json.loads(emit_report(r, "json"))["eoc"]["LinfL2"] == [None, None]


def test_preflight_fires_on_coarse_fixed_axis():
    cfg = StudyConfig(scheme="HeatJamet", q=2, p=1, M=4, N=4, refine="tau", levels=3,
                      solution="heat_sine")
    with pytest.raises(PreflightFailed, match=r"h \(spatial mesh"):
        run_study(cfg)
    cfg_h = StudyConfig(scheme="HeatJamet", q=0, p=2, M=4, N=1, refine="h", levels=3,
                        solution="heat_sine")
    with pytest.raises(PreflightFailed, match=r"tau \(time step"):
        run_study(cfg_h)
    # turning the guard off lets the contaminated study through
    assert run_study(StudyConfig(**{**cfg.to_dict(), "preflight": False})).levels


def test_study_determinism_modulo_timings():
    cfg = StudyConfig(scheme="WaveJohnson", q=1, p=2, M=8, N=2, refine="tau", levels=3,
                      solution="wave_standing", norms=("LinfL2@v",), preflight=False)
    a, b = run_study(cfg).to_dict(), run_study(cfg).to_dict()
    for d in (a, b):
        for lv in d["levels"]:
            lv.pop("seconds")
    assert json.dumps(a) == json.dumps(b)


def test_config_validation():
    with pytest.raises(ConfigInvalid):
        StudyConfig(scheme="Nope")
    with pytest.raises(ConfigInvalid):
        StudyConfig(refine="space")
    with pytest.raises(ConfigInvalid):
        StudyConfig(M=1)
    with pytest.raises(ConfigInvalid):
        StudyConfig(tau_h_ratio=2.0)
    with pytest.raises(ConfigInvalid):
        StudyConfig.from_dict({"bogus": 1})
    with pytest.raises(ConfigInvalid):
        run_study(StudyConfig(scheme="HeatJamet", solution="wave_standing"))
    with pytest.raises(ConfigInvalid):
        StudyConfig(scheme="WaveVanilla", q=1).method_spec()


def test_tau_h_ratio_resolution():
    cfg = StudyConfig(scheme="WaveJohnson", M=2, N=4, T=1.0, refine="tau", tau_h_ratio=10.0)
    assert cfg.resolution(0) == (40, 4)
    assert cfg.resolution(2) == (160, 16)


# reports -------------------------------------------------------------------------

def _small_report(levels):
    return run_study(StudyConfig(scheme="HeatJamet", q=1, p=2, M=32, N=2, refine="tau" if levels > 1 else "none",
                                 levels=levels, solution="heat_sine", norms=("LinfL2", "L2QT"),
                                 preflight=False))


def test_csv_single_level_has_empty_eoc_cells():
    rows = report_to_csv(_small_report(1)).strip().splitlines()
    assert rows[0] == "level,param,LinfL2,L2QT,eoc_LinfL2,eoc_L2QT"
    assert len(rows) == 2 and rows[1].endswith(",,")


def test_three_levels_give_two_orders_per_norm():
    r = _small_report(3)
    assert all(len(v) == 2 for v in r.eoc.values())
    rows = report_to_csv(r).strip().splitlines()
    assert len(rows) == 4 and rows[1].endswith(",,") and not rows[2].endswith(",")


def test_json_round_trip_is_exact(tmp_path):
    r = _small_report(3)
    data = emit_report(r, "json", tmp_path / "r.json")
    back = parse_report_json((tmp_path / "r.json").read_bytes())
    assert back.to_dict() == r.to_dict()
    assert emit_report(back, "json") == data


def test_emit_errors(tmp_path):
    r = _small_report(1)
    with pytest.raises(ValueError):
        emit_report(r, "xml")
    with pytest.raises(IoFailure):
        emit_report(r, "json", tmp_path / "missing" / "r.json")


# config files and CLI ------------------------------------------------------------

CONFIG = """
[method]
scheme = heat-jamet   ; alias
q = 1
p = 2
[space]
elements = 32
[time]
T = 0.5
slabs = 2
[study]
solution = heat_sine
refine = tau
levels = 2
norms = LinfL2, L2QT
preflight = false
[output]
format = csv
"""


def test_read_config(tmp_path):
    path = tmp_path / "s.ini"
    path.write_text(CONFIG)
    vals = read_config(path)
    assert vals["scheme"] == "HeatJamet" and vals["T"] == 0.5 and vals["M"] == 32
    assert vals["norms"] == ("LinfL2", "L2QT") and vals["preflight"] is False
    path.write_text("[method]\nbogus = 1\n")
    with pytest.raises(ConfigInvalid):
        read_config(path)
    path.write_text("[method]\nq = one\n")
    with pytest.raises(ConfigInvalid):
        read_config(path)
    with pytest.raises(ConfigInvalid):
        read_config(tmp_path / "absent.ini")


def test_scheme_aliases_and_norm_lists():
    assert canonical_scheme("wave_french_peterson") == "WaveFrenchPeterson"
    assert canonical_scheme("WaveJohnson") == "WaveJohnson"
    with pytest.raises(ConfigInvalid):
        canonical_scheme("leapfrog")
    assert parse_norms(" LinfL2 ,LinfL2@dt,") == ("LinfL2", "LinfL2@dt")


def test_cli_flags_override_config(tmp_path, capsys):
    path = tmp_path / "s.ini"
    path.write_text(CONFIG)
    assert cli.main(["study", "--config", str(path), "--levels", "3", "--format", "json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["config"]["levels"] == 3 and report["config"]["M"] == 32
    assert len(report["levels"]) == 3


def test_cli_solve_writes_file(tmp_path, capsys):
    out = tmp_path / "o.csv"
    code = cli.main(["solve", "--method", "heat-aziz-monk", "--q", "1", "--p", "2", "--elements", "8",
                     "--slabs", "2", "--solution", "heat_sine", "--format", "csv", "--out", str(out)])
    assert code == 0 and out.read_text().startswith("level,param,LinfL2")


def test_cli_exit_codes(tmp_path, capsys, monkeypatch):
    assert cli.main(["list-solutions"]) == 0
    assert "heat_sine" in capsys.readouterr().out
    with pytest.raises(SystemExit) as exc:
        cli.main(["study", "--q", "x"])
    assert exc.value.code == 2
    assert cli.main(["solve", "--method", "leapfrog"]) == 2
    assert cli.main(["study", "--method", "heat-jamet"]) == 2  # no refinement axis
    assert cli.main(["solve", "--config", str(tmp_path / "absent.ini")]) == 2
    assert cli.main(["solve", "--solution", "nope"]) == 2
    assert cli.main(["solve", "--method", "wave-vanilla", "--q", "2", "--p", "2", "--elements", "16",
                     "--slabs", "1", "--T", "6.25", "--solution", "wave_standing"]) == 3

    def boom(cfg):
        raise SingularSlabSystem("forced")
    monkeypatch.setattr(cli, "run_study", boom)
    assert cli.main(["solve"]) == 4


def test_cli_verify_reports_each_check(capsys, monkeypatch):
    from stgalerkin import identities
    from stgalerkin.identities import CheckResult
    monkeypatch.setattr(identities, "CHECKS", (lambda: CheckResult("a", True, "ok"),
                                               lambda: CheckResult("b", False, "off")))
    assert cli.main(["verify"]) == 1
    out = capsys.readouterr().out.splitlines()
    assert out == ["PASS  a: ok", "FAIL  b: off"]


@pytest.mark.slow
def test_cli_verify_full_suite_passes(capsys):
    assert cli.main(["verify"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 12 and all(line.startswith("PASS") for line in lines)
