import json
import subprocess
import sys

import pytest

from galcoh import catalog
from galcoh.cli import execute
from galcoh.config import dump_config


def run(capsys, *argv):
    code = execute(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def write_entry(tmp_path, name, **params):
    e = catalog.build_named(name, **params)
    p = tmp_path / f"{name}.json"
    p.write_text(json.dumps(dump_config(e.group, e.module, e.places)))
    return str(p)


@pytest.fixture
def appendix(tmp_path):
    return write_entry(tmp_path, "appendix_a_rank6")


@pytest.fixture
def pgl3(tmp_path):
    return write_entry(tmp_path, "pgl", n=3)


def js(capsys, *argv):
    code, out, err = run(capsys, *argv, "--format", "json")
    assert code == 0, err
    return json.loads(out)


class TestQueries:
    def test_h1_local(self, capsys, appendix):
        assert js(capsys, "h1", "--config", appendix, "--local", "v")["invariants"] == [2, 2, 2]

    def test_h1_local_human(self, capsys, appendix):
        code, out, _ = run(capsys, "h1", "--config", appendix, "--local", "v")
        assert code == 0 and out.splitlines()[0].split() == ["place", "v"]

    def test_h1_global_enumerate(self, capsys, pgl3):
        d = js(capsys, "h1", "--config", pgl3, "--global", "--enumerate")
        assert d["order"] == 27 and len(d["classes"]) == 9
        assert sorted({c["period"] for c in d["classes"]}) == [1, 3]

    def test_period(self, capsys, appendix):
        assert js(capsys, "period", "--config", appendix, "--class", "(1,1,1)")["period"] == 2
        code, out, _ = run(capsys, "period", "--config", appendix, "--class", "(1,1,1)")
        assert out.split() == ["period", "2"]

    def test_power(self, capsys, appendix, pgl3):
        assert js(capsys, "power", "--config", appendix, "--d", "2", "--class", "(1,1,1)")["ab"] == [0, 0, 0]
        d = js(capsys, "power", "--config", pgl3, "--d", "2", "--class", "(1,1,1)")
        assert d["ab"] == [2, 2, 2]

    def test_local_power_and_period(self, capsys, appendix):
        d = js(capsys, "power", "--config", appendix, "--local", "v", "--d", "3", "--class", "(1,0,1)")
        assert d["class"] == [1, 0, 1]
        assert js(capsys, "period", "--config", appendix, "--local", "v", "--class", "(0,1,0)")["period"] == 2

    def test_index(self, capsys, appendix):
        d = js(capsys, "index", "--config", appendix, "--class", "(1,1,1)", "--max-degree", "16",
               "--strict-quadratic")
        assert d["period"] == 2 and d["lower"] % 4 == 0 and d["achieved"] == 4
        d = js(capsys, "index", "--config", appendix, "--local", "v", "--class", "(1,1,1)",
               "--max-degree", "16", "--strict-quadratic")
        assert d["lower_bound"] == 4 and all(x % 4 == 0 for x in d["splitting_degrees"])

    def test_split_bound(self, capsys, tmp_path):
        zi = write_entry(tmp_path, "zi_torus", j=1)
        assert js(capsys, "split-bound", "--config", zi, "--n", "2", "--local", "v")["bound_ab"] == 8
        d = js(capsys, "split-bound", "--config", zi, "--n", "2", "--global")
        assert d["guarantee_degree"] == 8 and d["sylow_cyclic"] is True

    def test_checks(self, capsys, tmp_path, pgl3):
        v4 = write_entry(tmp_path, "norm_one", group="v4")
        assert js(capsys, "check", "sha", "--config", v4)["sha_invariants"] == [2]
        assert js(capsys, "check", "sylow-cyclic", "--config", v4)["sylow_cyclic"] is False
        assert js(capsys, "check", "period2", "--config", pgl3)["period2"] is False
        assert js(capsys, "check", "per-eq-ind", "--config", pgl3)["per_eq_ind"] is True

    def test_glue(self, capsys, pgl3):
        d = js(capsys, "glue", "--config", pgl3, "--at", "p=1", "--at", "q=2")
        assert d["status"] == "glued" and d["period"] == 3
        d = js(capsys, "glue", "--config", pgl3, "--at", "p=1")
        assert d["status"] == "obstruction" and d["obstruction"] == [1]

    def test_reservoir_flag(self, capsys, pgl3):
        d = js(capsys, "h1", "--config", pgl3, "--global", "--reservoir", "0")
        assert d["places"] == ["inf", "p", "q"]


class TestVerify:
    @pytest.mark.parametrize("argv", [["appendix-a"], ["gille"], ["pgl", "--n", "4"], ["pu3"], ["period2-list"]])
    def test_reports_pass(self, capsys, argv):
        code, out, _ = run(capsys, "verify", *argv)
        assert code == 0
        assert out.rstrip().endswith("pass")
        assert "FAIL" not in out

    def test_pgl_needs_n(self, capsys):
        assert run(capsys, "verify", "pgl")[0] == 2

    def test_failure_exit_code(self, capsys, monkeypatch):
        real = catalog.verify_named

        def broken(name, **params):
            rep = real(name, **params)
            bad = catalog.FactResult("forced", "none", False, "")
            return catalog.Report(rep.name, rep.results + (bad,))

        monkeypatch.setattr(catalog, "verify_named", broken)
        code, out, _ = run(capsys, "verify", "pu3")
        assert code == 1 and "FAIL" in out


class TestCatalogAndDump:
    def test_list(self, capsys):
        assert "appendix_a_rank6" in js(capsys, "catalog", "list")["entries"]

    def test_build_human(self, capsys):
        code, out, _ = run(capsys, "catalog", "build", "pgl", "--param", "n=5")
        assert code == 0 and "pgl(5)" in out

    def test_build_errors(self, capsys):
        assert run(capsys, "catalog", "build", "nope")[0] == 2
        assert run(capsys, "catalog", "build")[0] == 2
        assert run(capsys, "catalog", "build", "pgl", "--param", "n")[0] == 2

    def test_dump_round_trip(self, capsys, tmp_path, appendix):
        code, out, _ = run(capsys, "dump", "--config", appendix, "--format", "json")
        assert code == 0
        p = tmp_path / "again.json"
        p.write_text(out)
        a = js(capsys, "h1", "--config", appendix, "--global")
        b = js(capsys, "h1", "--config", str(p), "--global")
        assert a == b
        code, out2, _ = run(capsys, "dump", "--config", str(p), "--format", "json")
        assert out2 == out


class TestDeterminism:
    def test_json_is_byte_identical(self, capsys, pgl3):
        argv = ["h1", "--config", pgl3, "--global", "--enumerate", "--format", "json"]
        first = run(capsys, *argv)[1]
        second = run(capsys, *argv)[1]
        assert first == second and first.count("\n") == 1

    def test_props_seed(self, capsys):
        d = js(capsys, "props", "--seed", "3")
        assert d["result"] == "pass"
        assert all(p["cases"] >= 1000 for p in d["properties"] if "resolution" not in p["property"])


class TestInputErrors:
    def test_missing_config(self, capsys):
        code, _, err = run(capsys, "h1", "--global")
        assert code == 2 and "--config" in err

    def test_malformed_config(self, capsys, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text(json.dumps({"group": {"table": [[0]]}, "module": {"rank": 1, "relations": [[1, 2]]}}))
        code, _, err = run(capsys, "h1", "--config", str(p), "--global")
        assert code == 2 and "module.relations[0]" in err

    def test_bad_class(self, capsys, appendix):
        assert run(capsys, "period", "--config", appendix, "--class", "(1,1)")[0] == 2
        assert run(capsys, "period", "--config", appendix, "--class", "abc")[0] == 2
        assert run(capsys, "period", "--config", appendix, "--class", "(1,1,1);(1)")[0] == 2

    def test_unknown_place(self, capsys, appendix):
        code, _, err = run(capsys, "h1", "--config", appendix, "--local", "w")
        assert code == 2 and "w" in err

    def test_bad_arguments(self, capsys):
        assert run(capsys, "bogus")[0] == 2
        assert run(capsys, "props", "--seed", "-1")[0] == 2
        assert run(capsys, "h1")[0] == 2

    def test_help(self, capsys):
        assert run(capsys, "--help")[0] == 0


def test_module_entry_point(tmp_path):
    out = subprocess.run([sys.executable, "-m", "galcoh", "verify", "gille", "--format", "json"],
                         capture_output=True, text=True, check=False)
    assert out.returncode == 0
    assert json.loads(out.stdout)["result"] == "pass"
