import json

import numpy as np
import pytest

from app.files.results import ResultKind, load_result
from app.main import main


def _write_scores(path, ids, scores, members):
    with path.open("w") as f:
        for i, s, m in zip(ids, scores, members):
            f.write(json.dumps({"id": i, "score": float(s), "member": bool(m)}) + "\n")


@pytest.fixture
def score_files(tmp_path):
    rng = np.random.default_rng(0)
    members = rng.integers(0, 2, size=400).astype(bool)
    base = rng.normal(size=400) + 0.5 * members
    ids = [f"p{i}" for i in range(400)]
    baseline = tmp_path / "baseline.jsonl"
    mia = tmp_path / "mia.jsonl"
    _write_scores(baseline, ids, base, members)
    _write_scores(mia, ids, base + 2.0 * members, members)
    return baseline, mia, members


def test_audit_writes_a_document(tmp_path, score_files):
    baseline, mia, _ = score_files
    out = tmp_path / "result.json"
    assert main(["audit", "--baseline", str(baseline), "--mia", str(mia), "--out", str(out)]) == 0
    doc = load_result(out)
    assert doc.kind is ResultKind.AUDIT
    assert doc.audit_result.eps_tilde > 0
    assert doc.config_echo["audit_config"]["beta"] == 0.05


def test_audit_is_byte_identical_across_runs(tmp_path, score_files):
    baseline, mia, _ = score_files
    outputs = []
    for name in ("a.json", "b.json"):
        out = tmp_path / name
        argv = ["audit", "--baseline", str(baseline), "--mia", str(mia), "--no-union-bound"]
        assert main(argv + ["--out", str(out)]) == 0
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1]
    assert load_result(tmp_path / "a.json").audit_result.eps_tilde > 0


def test_audit_plots(tmp_path, score_files):
    baseline, mia, _ = score_files
    plots = tmp_path / "plots"
    argv = ["audit", "--baseline", str(baseline), "--mia", str(mia), "--plot", str(plots)]
    assert main(argv + ["--out", str(tmp_path / "r.json")]) == 0
    assert sorted(p.name for p in plots.iterdir()) == [
        "bounds_vs_recall.svg",
        "precision_recall.svg",
    ]


def test_misaligned_files_exit_one_without_output(tmp_path, score_files):
    baseline, _, members = score_files
    flipped = tmp_path / "flipped.jsonl"
    _write_scores(flipped, [f"p{i}" for i in range(400)], np.zeros(400), ~members)
    out = tmp_path / "result.json"
    code = main(["audit", "--baseline", str(baseline), "--mia", str(flipped), "--out", str(out)])
    assert code == 1
    assert not out.exists()


def test_invalid_values_exit_one(tmp_path, score_files):
    baseline, mia, _ = score_files
    assert main(["audit", "--baseline", str(baseline), "--mia", str(mia), "--beta", "2"]) == 1
    assert main(["audit", "--baseline", str(baseline)]) == 1
    assert main(["audit", "--baseline", str(tmp_path / "none.csv"), "--mia", str(mia)]) == 1


def test_o1_is_deterministic(tmp_path, score_files):
    _, mia, _ = score_files
    outputs = []
    for name in ("a.json", "b.json"):
        out = tmp_path / name
        assert main(["o1", "--scores", str(mia), "--grid", "20", "--out", str(out)]) == 0
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1]
    assert load_result(tmp_path / "a.json").o1_result.grid_size == 20


def test_simulate_is_deterministic(tmp_path):
    argv = [
        "simulate",
        "--preset", "default",
        "--m", "300",
        "--trials", "100",
        "--seed", "4",
        "--sweep", "0,2",
        "--sweep-trials", "10",
        "--relaxations", "0,1e-4,1e-3",
    ]
    outputs = []
    for name in ("a.json", "b.json"):
        out = tmp_path / name
        assert main(argv + ["--out", str(out)]) == 0
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1]
    report = load_result(tmp_path / "a.json").simulation_report
    assert report.world.m == 300
    assert [row.gamma for row in report.relaxations] == [0.0, 1e-4, 1e-3]
    assert len(report.sweep) == 2


def test_custom_world(tmp_path):
    out = tmp_path / "sim.json"
    argv = ["simulate", "--preset", "custom", "--p-data", "0.5,0.5", "--p-gen", "0.4,0.6"]
    assert main(argv + ["--m", "200", "--trials", "100", "--out", str(out)]) == 0
    assert load_result(out).simulation_report.true_c == pytest.approx(np.log(1.25))


def test_custom_world_errors(tmp_path):
    assert main(["simulate", "--preset", "custom", "--trials", "100"]) == 1
    argv = ["simulate", "--preset", "custom", "--p-data", "0.5,0.5", "--p-gen", "1,0"]
    assert main(argv + ["--trials", "100"]) == 1


def test_prints_to_stdout_without_out(capsys, score_files):
    _, mia, _ = score_files
    assert main(["o1", "--scores", str(mia)]) == 0
    assert json.loads(capsys.readouterr().out)["kind"] == "o1"


def test_undecodable_score_file_exits_one(tmp_path, score_files):
    _, mia, _ = score_files
    bad = tmp_path / "bad.jsonl"
    bad.write_bytes(b'{"id":"\xff\xfe","score":1,"member":1}\n')
    assert main(["audit", "--baseline", str(bad), "--mia", str(mia)]) == 1


def test_unwritable_out_exits_one(tmp_path, score_files):
    baseline, mia, _ = score_files
    blocker = tmp_path / "blocker"
    blocker.write_text("")
    argv = ["audit", "--baseline", str(baseline), "--mia", str(mia)]
    assert main(argv + ["--out", str(blocker / "result.json")]) == 1
    assert blocker.read_text() == ""


def test_real_nonmembers_audit(tmp_path, score_files):
    _, mia, _ = score_files
    out = tmp_path / "rn.json"
    argv = ["audit", "--real-nonmembers", "--mia", str(mia), "--plot", str(tmp_path / "plots")]
    assert main(argv + ["--out", str(out)]) == 0
    assert len(list((tmp_path / "plots").iterdir())) == 2
    result = load_result(out).audit_result
    assert result.real_nonmembers
    assert result.c_lb.value == 0.0
    assert result.c_lb.tests_performed == 0
    assert result.eps_tilde == result.c_plus_eps_lb.value > 0


def test_audit_needs_exactly_one_non_member_source(score_files):
    baseline, mia, _ = score_files
    assert main(["audit", "--mia", str(mia)]) == 1
    argv = ["audit", "--baseline", str(baseline), "--real-nonmembers", "--mia", str(mia)]
    assert main(argv) == 1


def test_aggregate_audit_documents(tmp_path):
    paths = []
    for seed in range(3):
        rng = np.random.default_rng(seed)
        members = rng.integers(0, 2, size=300).astype(bool)
        base = rng.normal(size=300) + 0.5 * members
        ids = [f"p{i}" for i in range(300)]
        baseline, mia = tmp_path / f"b{seed}.jsonl", tmp_path / f"m{seed}.jsonl"
        _write_scores(baseline, ids, base, members)
        _write_scores(mia, ids, base + 2.0 * members, members)
        out = tmp_path / f"run{seed}.json"
        argv = ["audit", "--baseline", str(baseline), "--mia", str(mia)]
        assert main(argv + ["--out", str(out)]) == 0
        paths.append(out)

    summary_path = tmp_path / "summary.json"
    assert main(["aggregate", "--results", *map(str, paths), "--out", str(summary_path)]) == 0
    doc = load_result(summary_path)
    assert doc.kind is ResultKind.AGGREGATE
    runs = [load_result(p).audit_result.eps_tilde for p in paths]
    assert doc.audit_summary.runs == 3
    assert doc.audit_summary.eps_tilde.mean == pytest.approx(np.mean(runs))
    assert doc.audit_summary.eps_tilde.std == pytest.approx(np.std(runs, ddof=1))


def test_aggregate_rejects_other_documents(tmp_path, score_files):
    _, mia, _ = score_files
    o1_doc = tmp_path / "o1.json"
    assert main(["o1", "--scores", str(mia), "--out", str(o1_doc)]) == 0
    assert main(["aggregate", "--results", str(o1_doc)]) == 1
