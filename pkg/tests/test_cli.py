import json

import pytest

from cogsig.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def logs(tmp_path):
    a_path = tmp_path / "a.jsonl"
    b_path = tmp_path / "b.jsonl"
    assert main(["simulate", "--profile", "A", "--seed", "41", "--repeat", "2",
                 "--user-id", "user1", "--out", str(a_path)]) == 0
    assert main(["simulate", "--profile", "B", "--seed", "42", "--repeat", "2",
                 "--user-id", "user2", "--out", str(b_path)]) == 0
    return a_path, b_path


class TestSimulate:
    def test_deterministic_output(self, tmp_path):
        p1, p2 = tmp_path / "one.jsonl", tmp_path / "two.jsonl"
        args = ["simulate", "--profile", "B", "--seed", "7", "--user-id", "u"]
        assert main(args + ["--out", str(p1)]) == 0
        assert main(args + ["--out", str(p2)]) == 0
        assert p1.read_bytes() == p2.read_bytes()

    def test_header_embeds_version_seed_and_config(self, tmp_path):
        out = tmp_path / "log.jsonl"
        main(["simulate", "--seed", "3", "--out", str(out)])
        header = json.loads(out.read_text().splitlines()[0])
        assert header["meta"]["format_version"] == "cogsig-log/1"
        assert header["meta"]["seed"] == "3"
        config = json.loads(header["meta"]["pipeline_config"])
        assert config["tick_s"] == 0.01

    def test_macrocsv_output(self, tmp_path):
        out = tmp_path / "log.csv"
        main(["simulate", "--seed", "3", "--format", "macrocsv", "--out", str(out)])
        assert out.read_text().startswith("case,x,y,dt_ms,usage")


class TestValidate:
    def test_clean_log(self, logs, capsys):
        code, out, err = run(capsys, "validate", str(logs[0]))
        assert code == 0
        assert out.startswith("OK:")

    def test_malformed_log_names_line(self, tmp_path, capsys):
        bad = tmp_path / "bad.jsonl"
        bad.write_text('{"user_id": "u"}\n{"t_ms": 5, "kind": "KeyPress"}\n')
        code, out, err = run(capsys, "validate", str(bad))
        assert code == 1
        assert "line 2" in err

    def test_non_monotone_log(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("case,x,y,dt_ms,usage\n1,1,1,10,Mouse move\n2,2,2,-5,Mouse move\n")
        code, out, err = run(capsys, "validate", str(bad))
        assert code == 1
        assert "not monotone" in err

    def test_missing_file(self, capsys):
        code, out, err = run(capsys, "validate", "/no/such/file.jsonl")
        assert code == 1
        assert "file.jsonl" in err


class TestIngest:
    def test_macrocsv_to_jsonl(self, tmp_path, capsys):
        src = tmp_path / "macro.csv"
        src.write_text("case,x,y,dt_ms,usage\n1,10,20,5,Left click down\n"
                       "2,10,20,80,Left click release\n")
        out = tmp_path / "log.jsonl"
        code, _, _ = run(capsys, "ingest", str(src), "--user-id", "u9",
                         "--out", str(out))
        assert code == 0
        header = json.loads(out.read_text().splitlines()[0])
        assert header["user_id"] == "u9"
        code, stdout, _ = run(capsys, "validate", str(out))
        assert code == 0


class TestExtractTrainEvaluateIdentify:
    def test_full_pipeline(self, logs, tmp_path, capsys):
        a_path, b_path = logs
        table_path = tmp_path / "cases.csv"
        code, _, _ = run(capsys, "extract", str(a_path), str(b_path),
                         "--out", str(table_path))
        assert code == 0
        first = table_path.read_text().splitlines()[0]
        assert first.startswith("# ")
        meta = json.loads(first[2:])
        assert meta["format_version"] == "cogsig-case-table/1"
        assert meta["config"]["tick_s"] == 0.01

        report_path = tmp_path / "report.json"
        code, out, _ = run(capsys, "evaluate", str(table_path),
                           "--method", "equal-width", "--k", "10", "--t", "0.1",
                           "--out", str(report_path))
        assert code == 0
        assert "accuracy=" in out
        report = json.loads(report_path.read_text())
        assert report["format_version"] == "cogsig-report/1"
        assert report["config"]["method"] == "equal-width"
        assert report["accuracy"] > 0.5

        model_path = tmp_path / "model.json"
        code, _, _ = run(capsys, "train", str(table_path), "--out", str(model_path))
        assert code == 0
        doc = json.loads(model_path.read_text())
        assert doc["format_version"] == "cogsig-model/1"

        session_path = tmp_path / "fresh.jsonl"
        assert main(["simulate", "--profile", "B", "--seed", "77",
                     "--user-id", "mystery", "--out", str(session_path)]) == 0
        code, out, _ = run(capsys, "identify", "--model", str(model_path),
                           "--session", str(session_path))
        assert code == 0
        label, prob = out.split()
        assert label == "user2"
        assert 0.5 < float(prob) <= 1.0

    def test_outputs_are_deterministic(self, logs, tmp_path, capsys):
        table1, table2 = tmp_path / "t1.csv", tmp_path / "t2.csv"
        for out in (table1, table2):
            assert main(["extract", str(logs[0]), str(logs[1]),
                         "--out", str(out)]) == 0
        assert table1.read_bytes() == table2.read_bytes()
        r1, r2 = tmp_path / "r1.json", tmp_path / "r2.json"
        for out in (r1, r2):
            assert main(["evaluate", str(table1), "--out", str(out)]) == 0
        assert r1.read_bytes() == r2.read_bytes()

    def test_single_user_table_fails_cleanly(self, logs, tmp_path, capsys):
        table_path = tmp_path / "solo.csv"
        assert main(["extract", str(logs[0]), "--out", str(table_path)]) == 0
        code, _, err = run(capsys, "evaluate", str(table_path))
        assert code == 1
        assert "degenerate class" in err

    def test_unknown_flag_exits_nonzero(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["evaluate", "--bogus-flag", "x"])
        assert exc.value.code == 2
