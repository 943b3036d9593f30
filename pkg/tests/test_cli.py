"""CLI contract: exit codes, report shapes, generator flags."""

import json

import pytest

from itealg import models
from itealg.cli import main
from itealg.logic import three


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestCheck:
    def test_valid_exits_zero(self, capsys):
        code, out, _ = run(capsys, "check", "U[s,t] = bot", "--theory", "cset")
        assert code == 0
        assert "valid" in out

    def test_invalid_exits_one_with_counterexample(self, capsys):
        code, out, _ = run(capsys, "check", "a[s,s] = s", "--theory", "cset")
        assert code == 1
        assert "a=U" in out

    def test_json_format(self, capsys):
        code, out, _ = run(capsys, "--format", "json", "check", "s*t = t*s",
                           "--theory", "agcset")
        assert code == 0
        payload = json.loads(out)
        assert payload["valid"] is True
        assert payload["counterexample"] is None

    def test_json_counterexample(self, capsys):
        code, out, _ = run(capsys, "--format", "json", "check", "a[s,s] = s",
                           "--theory", "cset")
        assert code == 1
        payload = json.loads(out)
        assert payload["counterexample"]["env"]["a"] == "U"

    def test_parse_error_exits_two(self, capsys):
        code, _, err = run(capsys, "check", "a[s", "--theory", "cset")
        assert code == 2
        assert "error" in err

    def test_theory_violation_exits_two(self, capsys):
        code, _, err = run(capsys, "check", "s*t = t*s", "--theory", "cset")
        assert code == 2

    def test_quasi_subcommand(self, capsys):
        code, _, _ = run(capsys, "check-quasi", "s*s = T, s*t = U => t = bot",
                         "--theory", "agcset")
        assert code == 0

    def test_quasi_rejects_identity(self, capsys):
        code, _, err = run(capsys, "check-quasi", "U[s,t] = bot", "--theory", "cset")
        assert code == 2

    def test_corpus_file(self, capsys, tmp_path):
        corpus = tmp_path / "laws.txt"
        corpus.write_text(
            "# conditional laws\n"
            "U[s,t] = bot\n"
            "(a&b)[s,t] = a[b[s,t],t]\n"
        )
        code, out, _ = run(capsys, "check", "--file", str(corpus), "--theory", "cset")
        assert code == 0
        assert out.count("valid") == 2

    def test_corpus_with_failure(self, capsys, tmp_path):
        corpus = tmp_path / "laws.txt"
        corpus.write_text("U[s,t] = bot\na[s,s] = s\n")
        code, out, _ = run(capsys, "check", "--file", str(corpus), "--theory", "cset")
        assert code == 1


class TestVerify:
    def test_generators(self, capsys):
        for flags in (["--basic", "4"], ["--functional", "1"], ["--self-ada", "1"]):
            code, out, _ = run(capsys, "verify", *flags, "--suite", "cset")
            assert code == 0, out

    def test_model_file(self, capsys, tmp_path):
        path = tmp_path / "m.json"
        path.write_text(json.dumps(models.basic_cset(3).to_json()))
        code, out, _ = run(capsys, "verify", str(path), "--suite", "agreeable")
        assert code == 0

    def test_json_report(self, capsys):
        code, out, _ = run(capsys, "--format", "json", "verify", "--basic", "3",
                           "--suite", "cset")
        payload = json.loads(out)
        assert payload["passed"] is True
        assert len(payload["axioms"]) == 8

    def test_failing_suite_exits_one(self, capsys):
        code, out, _ = run(capsys, "verify", "--functional", "1", "--suite", "bset")
        assert code == 1

    def test_missing_model_exits_two(self, capsys):
        code, _, err = run(capsys, "verify", "--suite", "cset")
        assert code == 2
        code, _, err = run(capsys, "verify", "nonexistent.json", "--suite", "cset")
        assert code == 2

    def test_two_models_exits_two(self, capsys):
        code, _, _ = run(capsys, "verify", "--basic", "2", "--functional", "1",
                         "--suite", "cset")
        assert code == 2

    def test_malformed_model_file(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        obj = models.basic_cset(2).to_json()
        obj["action"][2][0][0] = 1  # break the U row
        path.write_text(json.dumps(obj))
        code, _, err = run(capsys, "verify", str(path), "--suite", "cset")
        assert code == 2


class TestDecompose:
    def test_self_ada(self, capsys):
        code, out, _ = run(capsys, "--format", "json", "decompose", "--self-ada", "2",
                           "--agreeable")
        assert code == 0
        payload = json.loads(out)
        assert payload["injective"] is True
        assert payload["star_preserved"] is True
        assert len(payload["factors"]) == 2

    def test_plain(self, capsys):
        code, out, _ = run(capsys, "decompose", "--basic", "4")
        assert code == 0
        assert "1 factor" in out

    def test_bset_route(self, capsys):
        code, out, _ = run(capsys, "--format", "json", "decompose",
                           "--bset-functional", "2")
        assert code == 0
        payload = json.loads(out)
        assert len(payload["factors"]) == 2
        assert payload["star_preserved"] is True


class TestEval:
    def test_action(self, capsys):
        code, out, _ = run(capsys, "eval", "a[s,t]", "--basic", "3",
                           "--env", "a=T,s=1,t=2")
        assert code == 0
        assert "s1" in out

    def test_star(self, capsys):
        code, out, _ = run(capsys, "eval", "s*bot", "--basic", "3", "--env", "s=2")
        assert code == 0
        assert "U" in out

    def test_model_file(self, capsys, tmp_path):
        path = tmp_path / "m.json"
        path.write_text(json.dumps(models.functional_cset(1).to_json()))
        code, out, _ = run(capsys, "eval", "a[s,t]", "--model", str(path),
                           "--env", "a=T,s=1,t=0")
        assert code == 0

    def test_out_of_range_env(self, capsys):
        code, _, err = run(capsys, "eval", "a[s,t]", "--basic", "3",
                           "--env", "a=T,s=1,t=9")
        assert code == 2

    def test_unbound_exits_two(self, capsys):
        code, _, err = run(capsys, "eval", "a[s,t]", "--basic", "3", "--env", "a=T")
        assert code == 2

    def test_bad_env_value(self, capsys):
        code, _, err = run(capsys, "eval", "a[s,t]", "--basic", "3",
                           "--env", "a=T,s=zzz,t=0")
        assert code == 2


class TestClassify:
    def test_missing_file(self, capsys):
        code, _, err = run(capsys, "classify", "no_such.json", "--as", "ada")
        assert code == 2

    def test_three_as_ada(self, capsys, tmp_path):
        path = tmp_path / "t.json"
        path.write_text(json.dumps(three().to_json()))
        code, out, _ = run(capsys, "classify", str(path), "--as", "ada")
        assert code == 0

    def test_three_as_bool_fails(self, capsys, tmp_path):
        path = tmp_path / "t.json"
        path.write_text(json.dumps(three().to_json()))
        code, out, _ = run(capsys, "--format", "json", "classify", str(path),
                           "--as", "bool")
        assert code == 1
        payload = json.loads(out)
        bad = [a for a in payload["axioms"] if not a["holds"]]
        assert bad[0]["statement"] == "a|~a = T"
        assert bad[0]["witness"] == {"a": "U"}


class TestStarSearch:
    def test_size_two(self, capsys):
        code, out, _ = run(capsys, "--format", "json", "star-search", "--size", "2")
        assert code == 0
        payload = json.loads(out)
        assert payload["found"] == 1
        assert payload["candidates"] == 81
        assert payload["matches_selection_equality"] is True

    def test_guard(self, capsys):
        code, _, err = run(capsys, "star-search", "--size", "6")
        assert code == 2


class TestUsage:
    def test_no_command(self, capsys):
        assert main([]) == 2

    def test_unknown_flag(self, capsys):
        assert main(["check", "a = a", "--bogus"]) == 2

    def test_jobs_flag(self, capsys):
        code, out, _ = run(capsys, "--jobs", "4", "verify", "--functional", "2",
                           "--suite", "cset")
        assert code == 0

    def test_backend_env_flag(self, capsys, monkeypatch):
        from itealg import kernels

        monkeypatch.setenv(kernels.ENV_BACKEND, "numpy")
        code, out, _ = run(capsys, "verify", "--self-ada", "2", "--suite", "cset")
        assert code == 0

    def test_seed_accepted(self, capsys):
        code, _, _ = run(capsys, "--seed", "7", "check", "U[s,t] = bot",
                         "--theory", "cset")
        assert code == 0
