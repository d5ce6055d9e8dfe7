import csv
import io
import json
from fractions import Fraction

import pytest
from click.testing import CliRunner

from univalent import catalog as cat
from univalent.cli import main
from univalent.errors import ConfigError
from univalent.verifier.checks import (grunsky_convergence_check, small_dilatation_check,
                                       zalcman_subdominance_check)
from univalent.verifier.config import config_from_dict, default_config, load_config
from univalent.verifier.report import CSV_COLUMNS, emit_report, load_report, report_to_csv, report_to_json
from univalent.verifier.scan import family_points, run_scan

SMALL_KOEBE = {"kind": "koebe_root", "m": [1, 2], "angles": 4, "t_moduli": ["1/2", "1"], "t_phases": 2}


def small(functionals, **kw):
    return config_from_dict({"functionals": functionals, "families": [SMALL_KOEBE], "order": 16, **kw})


class TestConfig:
    def test_default(self):
        cfg = default_config()
        assert [e.ident for e in cfg.functionals] == [f"zalcman:{n}" for n in range(3, 7)]
        assert len(family_points(cfg.families[0])) == 6 * 16 * 6 * 8

    def test_hash_ignores_runtime_keys(self):
        a = small(["zalcman:3"])
        b = small(["zalcman:3"], workers=4, out="/tmp/x", format="csv")
        assert a.config_hash == b.config_hash

    def test_hash_tracks_content(self):
        assert small(["zalcman:3"]).config_hash != small(["zalcman:4"]).config_hash
        assert small(["zalcman:3"]).config_hash != small(["zalcman:3"], mode="approx").config_hash

    @pytest.mark.parametrize("bad", [
        {"functionals": ["zalcman:3"], "families": []},
        {"functionals": ["zalcman:3"], "bogus": 1},
        {"functionals": ["nope:3"]},
        {"functionals": ["zalcman:3"], "families": [{"kind": "koebe_root", "angles": 5}]},
        {"functionals": ["zalcman:3"], "families": [{"kind": "koebe_root", "t_moduli": ["3/2"]}]},
        {"functionals": ["zalcman:3"], "families": [{"kind": "loewner"}]},
        {"functionals": ["zalcman:3"], "families": [{"kind": "disk"}]},
        {"functionals": ["zalcman:10"], "order": 8},
        {"functionals": ["zalcman:3"], "mode": "fuzzy"},
        {"functionals": [{"poly": [], "bound": "-1"}]},
        {"functionals": "zalcman:3"},
        [],
    ])
    def test_rejects(self, bad):
        with pytest.raises(ConfigError):
            config_from_dict(bad)

    def test_load_errors(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(tmp_path / "missing.json")
        p = tmp_path / "bad.json"
        p.write_text("{not json")
        with pytest.raises(ConfigError):
            load_config(p)

    def test_custom_poly_gets_family_bound(self):
        cfg = config_from_dict({"functionals": [{"name": "a3-a2^2", "poly": [
            {"coeff": "1", "monomial": {"a3": 1}}, {"coeff": "-1", "monomial": {"a2": 2}}]}]})
        e = cfg.functionals[0]
        assert e.bound_kind == "family-max" and e.bound_abs2 == 1


class TestScan:
    def test_empty_functionals(self):
        rep = run_scan(small([]))
        assert rep.records == [] and rep.exit_code == 0 and rep.summary["min_margin"] is None

    def test_single_check_single_row(self):
        cfg = config_from_dict({"functionals": ["zalcman:3"], "order": 8, "families": [
            {"kind": "koebe_root", "m": [1], "angles": 1, "t_moduli": ["1"], "t_phases": 1}]})
        rep = run_scan(cfg)
        rows = list(csv.reader(io.StringIO(report_to_csv(rep))))
        assert rows[0] == list(CSV_COLUMNS) and len(rows) == 2
        assert rows[1][5] == "0" and rows[1][6] == "true"

    def test_witnesses_only_at_koebe(self):
        rep = run_scan(small(["zalcman:3", "zalcman:4", "thm51:4,1", "thm52:4,2"]))
        assert rep.exit_code == 0
        for r in rep.records:
            extremal = r["params"].startswith("m=1;") and ";t=1*" in r["params"]
            assert r["witness"] == extremal
            assert (r["margin"] == "0") == extremal
            assert r["margin_decimal"] >= 0

    def test_injected_violation(self):
        rep = run_scan(small(["bieberbach:2", {"name": "bieberbach:2", "bound": "1"}]))
        assert rep.exit_code == 1
        assert rep.summary["violations"] > 0
        over = [r for r in rep.records if r["bound_kind"] == "override" and r["status"] == "violation"]
        assert over and all(Fraction(r["margin"]) < 0 for r in over)

    def test_approx_mode_agrees_with_exact(self):
        ex = run_scan(small(["zalcman:4"]))
        ap = run_scan(small(["zalcman:4"], mode="approx"))
        assert [r["witness"] for r in ex.records] == [r["witness"] for r in ap.records]
        for x, y in zip(ex.records, ap.records):
            assert abs(x["margin_decimal"] - y["margin_decimal"]) < 1e-9

    def test_approx_violation_confirmed_exactly(self):
        rep = run_scan(small([{"name": "zalcman:3", "bound": "3"}], mode="approx"))
        bad = [r for r in rep.records if r["status"] == "violation"]
        assert bad and all("exact re-evaluation" in r["note"] for r in bad)

    def test_loewner_bieberbach(self):
        cfg = config_from_dict({"functionals": ["bieberbach:3", "bieberbach:4"], "families": [
            {"kind": "loewner", "seeds": [0, 1, 2], "T": [0.5, 3.0], "pieces": 3}]})
        rep = run_scan(cfg)
        assert rep.exit_code == 0 and len(rep.records) == 12
        assert all(r["margin_decimal"] >= -cfg.witness_tol for r in rep.records)
        assert all(r["tail_radius"] > 0 for r in rep.records)

    def test_deterministic_across_workers(self):
        cfg = small(["zalcman:3", "thm52:3,1"])
        one = report_to_json(run_scan(cfg))
        many = report_to_json(run_scan(cfg.with_overrides(workers=3)))
        assert one == many

    def test_report_round_trip(self, tmp_path):
        rep = run_scan(small(["zalcman:3"]))
        paths = emit_report(rep, tmp_path, "both")
        assert sorted(p.name for p in paths) == ["report.csv", "report.json"]
        back = load_report(tmp_path / "report.json")
        assert report_to_json(back) == report_to_json(rep)
        assert report_to_csv(back) == (tmp_path / "report.csv").read_text()


class TestChecks:
    def test_zalcman_subdominance(self):
        rep = zalcman_subdominance_check(range(3, 7), range(1, 4))
        assert rep.passed
        rows = {(r["n"], r["m"]): r for r in rep.rows}
        assert rows[(3, 2)]["abs_value"] == 0
        assert rows[(4, 2)]["abs_value"] == 1
        assert rows[(5, 1)]["abs_value"] == 16 and rows[(5, 1)]["relation"] == "equal"

    def test_grunsky_convergence(self):
        maps = [("F1", cat.sigma_root_map(1, Fraction(1, 2), 40)), ("id", cat.sigma_identity(40))]
        rep = grunsky_convergence_check(maps, [1, 2, 4, 8, 16])
        assert rep.passed
        f1, ident = rep.rows
        assert all(abs(x - 0.5) < 1e-12 for x in f1["norms"])
        assert ident["norms"] == [0.0] * 5

    def test_grunsky_convergence_flags_unsettled_norms(self):
        F = cat.sigma_root_map(4, Fraction(1, 2), 130)
        rough = grunsky_convergence_check([("F4", F)], [8, 16])
        assert not rough.passed and rough.rows[0]["stabilized"] is False
        fine = grunsky_convergence_check([("F4", F)], [32, 64])
        assert fine.passed and fine.rows[0]["stabilized"] is True
        single = grunsky_convergence_check([("F4", F)], [8])
        assert single.passed and single.rows[0]["stabilized"] is None

    def test_grunsky_convergence_rejects_s_maps(self):
        with pytest.raises(TypeError):
            grunsky_convergence_check([("k", cat.koebe(0, 20))], [2])

    def test_small_dilatation(self):
        rep = small_dilatation_check(range(3, 5), seeds=range(2), times=(0.01, 0.1))
        assert rep.passed
        assert all(r["extremal_attains"] for r in rep.rows)


def _config_file(tmp_path, obj):
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps(obj))
    return str(p)


class TestCLI:
    def test_scan_pass(self, tmp_path):
        cfg = _config_file(tmp_path, {"functionals": ["zalcman:3"], "families": [SMALL_KOEBE], "order": 8})
        res = CliRunner().invoke(main, ["scan", "--config", cfg, "--out", str(tmp_path / "o"), "--figures"])
        assert res.exit_code == 0, res.output
        names = sorted(p.name for p in (tmp_path / "o").iterdir())
        assert names == ["report.csv", "report.json", "report_margins.png"]

    def test_scan_violation_exit_1(self, tmp_path):
        cfg = _config_file(tmp_path, {"functionals": [{"name": "bieberbach:2", "bound": "1"}],
                                      "families": [SMALL_KOEBE], "order": 8})
        res = CliRunner().invoke(main, ["scan", "--config", cfg, "--out", str(tmp_path / "o")])
        assert res.exit_code == 1

    def test_scan_bad_config_exit_2(self, tmp_path):
        p = tmp_path / "cfg.json"
        p.write_text("[1, 2")
        res = CliRunner().invoke(main, ["scan", "--config", str(p), "--out", str(tmp_path / "o")])
        assert res.exit_code == 2 and "error:" in res.output

    def test_report_rerender(self, tmp_path):
        rep = run_scan(small(["zalcman:3"]))
        emit_report(rep, tmp_path, "json", stem="saved")
        res = CliRunner().invoke(main, ["report", str(tmp_path / "saved.json"), "--out", str(tmp_path / "r")])
        assert res.exit_code == 0, res.output
        assert (tmp_path / "r" / "saved.csv").read_text() == report_to_csv(rep)
        assert (tmp_path / "r" / "saved_margins.png").stat().st_size > 0

    def test_zalcman(self, tmp_path):
        out = tmp_path / "z.json"
        res = CliRunner().invoke(main, ["zalcman", "--n", "3-5", "--m", "1-3", "--out", str(out)])
        assert res.exit_code == 0
        assert json.loads(out.read_text())["passed"] is True

    def test_zalcman_bad_n(self):
        assert CliRunner().invoke(main, ["zalcman", "--n", "2"]).exit_code == 2

    def test_grunsky(self, tmp_path):
        res = CliRunner().invoke(main, ["grunsky", "--m", "1,3", "--N", "2,4,8", "--out", str(tmp_path)])
        assert res.exit_code == 0, res.output
        assert (tmp_path / "grunsky.png").exists()
        rows = json.loads((tmp_path / "grunsky.json").read_text())["rows"]
        assert [r["label"] for r in rows] == ["F_{1,1/2}", "F_{3,1/2}"]

    def test_catalog(self):
        res = CliRunner().invoke(main, ["catalog", "koebe", "--order", "4"])
        assert res.exit_code == 0
        assert json.loads(res.output)["coefficients"] == {"a1": "1", "a2": "2", "a3": "3", "a4": "4", "a5": "5"}

    def test_catalog_sigma(self):
        res = CliRunner().invoke(main, ["catalog", "sigma_root_map", "--m", "1", "--t", "1", "--order", "3"])
        assert json.loads(res.output)["coefficients"]["b1"] == "-1"

    def test_catalog_domain_error(self):
        res = CliRunner().invoke(main, ["catalog", "affine_sigma", "--b1", "2"])
        assert res.exit_code == 2
