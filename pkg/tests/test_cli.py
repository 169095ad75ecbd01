import json

from axiomvote.cli import main
from axiomvote.datasets import read_dataset
from axiomvote.prefs import read_profiles


def run(*argv):
    return main(list(argv))


def test_sample_then_elect_identity(tmp_path, capsys):
    profiles = tmp_path / "p.jsonl"
    assert run("sample", "--dist", "identity", "--m", "3", "--n", "3",
               "--count", "1", "--seed", "7", "--out", str(profiles)) == 0
    assert run("elect", "--rule", "borda", "--k", "2", "--profiles", str(profiles)) == 0
    record = json.loads(capsys.readouterr().out.strip())
    assert record["committee"] == [0, 1]


def test_sample_is_deterministic(tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    for out in (a, b):
        assert run("sample", "--dist", "mixed", "--m", "5", "--n", "10",
                   "--count", "4", "--seed", "3", "--out", str(out)) == 0
    assert a.read_text() == b.read_text()


def test_evaluate_stv_dummetts_zero(tmp_path):
    profiles = tmp_path / "p.jsonl"
    report = tmp_path / "report.json"
    assert run("sample", "--dist", "mixed", "--m", "5", "--n", "15",
               "--count", "25", "--seed", "11", "--out", str(profiles)) == 0
    assert run("evaluate", "--rules", "stv", "--axioms", "dummetts", "--k", "2",
               "--profiles", str(profiles), "--report", str(report)) == 0
    data = json.loads(report.read_text())
    assert data["rates"]["stv"]["dummetts"] == 0.0


def test_evaluate_matches_library(tmp_path):
    from axiomvote.axioms import AxiomId
    from axiomvote.metrics import avr
    from axiomvote.rules import elect

    profiles_path = tmp_path / "p.jsonl"
    report_path = tmp_path / "r.json"
    assert run("sample", "--dist", "urn", "--m", "5", "--n", "12",
               "--count", "20", "--seed", "2", "--out", str(profiles_path)) == 0
    assert run("evaluate", "--rules", "cc", "--axioms", "jr,core", "--k", "2",
               "--profiles", str(profiles_path), "--report", str(report_path)) == 0
    data = json.loads(report_path.read_text())
    profiles = read_profiles(profiles_path)
    committees = [elect("cc", p, 2) for p in profiles]
    assert data["rates"]["cc"]["jr"] == avr(committees, profiles, (AxiomId.JR,))
    assert data["rates"]["cc"]["core"] == avr(committees, profiles, (AxiomId.CORE,))


def test_eval_committees_length_mismatch_is_data_error(tmp_path):
    profiles = tmp_path / "p.jsonl"
    committees = tmp_path / "c.jsonl"
    assert run("sample", "--dist", "ic", "--m", "4", "--n", "6",
               "--count", "5", "--seed", "1", "--out", str(profiles)) == 0
    assert run("elect", "--rule", "bloc", "--k", "2", "--profiles", str(profiles),
               "--out", str(committees)) == 0
    short = tmp_path / "short.jsonl"
    short.write_text("".join(committees.read_text().splitlines(True)[:2]))
    assert run("eval-committees", "--committees", str(short), "--profiles", str(profiles),
               "--k", "2") == 2
    assert run("eval-committees", "--committees", str(committees), "--profiles", str(profiles),
               "--k", "2") == 0


def test_usage_errors_exit_1(capsys):
    assert run("elect", "--nope") == 1
    assert run("not-a-command") == 1
    capsys.readouterr()


def test_data_errors_exit_2(tmp_path):
    missing = tmp_path / "missing.jsonl"
    assert run("elect", "--rule", "borda", "--k", "2", "--profiles", str(missing)) == 2
    bad = tmp_path / "bad.jsonl"
    bad.write_text("not json\n")
    assert run("elect", "--rule", "borda", "--k", "2", "--profiles", str(bad)) == 2


def test_minmax_and_audit(tmp_path, capsys):
    profiles = tmp_path / "p.jsonl"
    out = tmp_path / "mm.jsonl"
    assert run("sample", "--dist", "identity", "--m", "5", "--n", "6",
               "--count", "2", "--seed", "5", "--out", str(profiles)) == 0
    assert run("minmax", "--axioms", "all", "--k", "2", "--profiles", str(profiles),
               "--out", str(out)) == 0
    records = [json.loads(line) for line in out.read_text().splitlines()]
    assert [r["profile_index"] for r in records] == [0, 1]
    assert all(r["min_violations"] <= r["max_violations"] for r in records)
    assert records[0]["min_committee"] == [0, 1]

    report = tmp_path / "audit.jsonl"
    assert run("audit-implications", "--profiles", str(profiles), "--k", "2",
               "--report", str(report)) == 0
    assert "counterexamples" in capsys.readouterr().out


def test_distance_csv(tmp_path):
    profiles = tmp_path / "p.jsonl"
    csv = tmp_path / "d.csv"
    assert run("sample", "--dist", "ic", "--m", "5", "--n", "10",
               "--count", "15", "--seed", "9", "--out", str(profiles)) == 0
    assert run("distance", "--rules", "borda,bloc,cc", "--k", "2",
               "--profiles", str(profiles), "--out-csv", str(csv)) == 0
    lines = csv.read_text().splitlines()
    assert lines[0] == "rule,borda,bloc,cc"
    first = lines[1].split(",")
    assert first[0] == "borda" and float(first[1]) == 0.0


def test_import_soc(tmp_path):
    soc = tmp_path / "e.soc"
    out = tmp_path / "p.jsonl"
    soc.write_text("# NUMBER ALTERNATIVES: 3\n2: 2,1,3\n1: 3,2,1\n")
    assert run("import-soc", "--in", str(soc), "--out", str(out)) == 0
    (profile,) = read_profiles(out)
    assert profile.rankings == ((1, 0, 2), (1, 0, 2), (2, 1, 0))
    bad = tmp_path / "bad.soc"
    bad.write_text("1: 1,1,2\n")
    assert run("import-soc", "--in", str(bad), "--out", str(out)) == 2


def test_evaluate_threads_and_rename_flags(tmp_path):
    profiles = tmp_path / "p.jsonl"
    assert run("sample", "--dist", "stratified:0.5", "--m", "5", "--n", "12",
               "--count", "16", "--seed", "6", "--out", str(profiles)) == 0
    reports = []
    for threads in ("1", "2"):
        report = tmp_path / f"r{threads}.json"
        assert run("evaluate", "--rules", "cc,borda", "--axioms", "all", "--k", "2",
                   "--profiles", str(profiles), "--report", str(report),
                   "--threads", threads) == 0
        reports.append(report.read_text())
    assert reports[0] == reports[1]
    renamed = tmp_path / "renamed.json"
    assert run("evaluate", "--rules", "cc,borda", "--axioms", "all", "--k", "2",
               "--profiles", str(profiles), "--report", str(renamed), "--rename") == 0
    data = json.loads(renamed.read_text())
    assert set(data["means"]) == {"cc", "borda"}


def test_gen_dataset_and_anneal(tmp_path):
    data = tmp_path / "data.jsonl"
    assert run("gen-dataset", "--dist", "mixed", "--m", "4", "--n", "8", "--k", "2",
               "--count", "12", "--axioms", "all", "--seed", "3", "--out", str(data)) == 0
    examples = read_dataset(data)
    assert len(examples) == 12 and all(sum(e.label) == 2 for e in examples)

    profiles = tmp_path / "p.jsonl"
    result = tmp_path / "anneal.json"
    assert run("sample", "--dist", "mixed", "--m", "4", "--n", "8",
               "--count", "60", "--seed", "4", "--out", str(profiles)) == 0
    assert run("anneal", "--m", "4", "--k", "2", "--axioms", "root", "--steps", "10",
               "--train-count", "50", "--profiles", str(profiles),
               "--out", str(result), "--seed", "1") == 0
    record = json.loads(result.read_text())
    assert record["axiom_set"] == "root"
    assert len(record["vector"]) == 4
    assert record["eval_avr"] is not None
