import json
import subprocess
import sys

import pytest

from dynmatch.cli import CSV_COLUMNS, EXIT_INPUT, EXIT_INVARIANT, EXIT_OK, WorkloadSpec, generate, main, replay
from dynmatch.graph import UpdateEvent, parse_stream
from dynmatch.oracle import max_matching_size
from dynmatch.pipelines import PipelineConfig


@pytest.fixture
def two_cfg(tmp_path):
    p = tmp_path / "two.cfg"
    p.write_text("variant=two_plus_eps\neps=0.1\nkernel=scan\n")
    return str(p)


def run_cli(*args):
    return main([str(a) for a in args])


def test_empty_stream(tmp_path):
    s = tmp_path / "empty.txt"
    s.write_text("")
    out = tmp_path / "run.csv"
    assert run_cli("--stream", s, "--out", out) == EXIT_OK
    assert out.read_text().splitlines() == [",".join(CSV_COLUMNS)]
    summary = json.loads((tmp_path / "run.summary.json").read_text())
    assert summary["updates"] == 0 and summary["schema_version"] == 1


def test_single_edge(tmp_path, two_cfg):
    s = tmp_path / "one.txt"
    s.write_text("+ 0 1\n")
    out = tmp_path / "one.csv"
    assert run_cli("--config", two_cfg, "--stream", s, "--out", out) == EXIT_OK
    summary = json.loads((tmp_path / "one.summary.json").read_text())
    assert summary["final_output_size"] == 1
    assert summary["metrics"]["output_size"]["max"] == 1


@pytest.mark.parametrize("text", ["+ 0 1\n+ 1 0\n", "- 0 1\n", "+ 0 x\n", "+ 2 2\n"])
def test_bad_stream_is_input_error(tmp_path, text):
    s = tmp_path / "bad.txt"
    s.write_text(text)
    assert run_cli("--stream", s, "--out", tmp_path / "x.csv") == EXIT_INPUT


def test_bad_config_and_flags(tmp_path):
    c = tmp_path / "bad.cfg"
    c.write_text("eps=2\n")
    s = tmp_path / "s.txt"
    s.write_text("+ 0 1\n")
    assert run_cli("--config", c, "--stream", s) == EXIT_INPUT
    assert run_cli("--config", tmp_path / "missing.cfg", "--stream", s) == EXIT_INPUT
    assert run_cli("--stream", tmp_path / "missing.txt") == EXIT_INPUT
    assert run_cli() == EXIT_INPUT
    assert run_cli("--stream", s, "--generate", "uniform-random") == EXIT_INPUT
    assert run_cli("--stream", s, "--nodes", 1) == EXIT_INPUT


def test_generate_is_byte_identical(tmp_path):
    for kind in ("uniform-random", "sliding-window", "gadget-family", "delete-matched-adversary"):
        a, b = tmp_path / "a.txt", tmp_path / "b.txt"
        for path in (a, b):
            assert run_cli("--generate", kind, "--seed", 7, "--events", 300, "--nodes", 40,
                           "--out", path) == EXIT_OK
        assert a.read_bytes() == b.read_bytes()
        assert a.read_text()


def test_gadget_generator_mu(tmp_path):
    text = generate(WorkloadSpec("gadget-family", nodes=40, events=0))
    evs = list(parse_stream(text.splitlines()))
    live = set()
    for ev in evs:
        live ^= {ev.edge}
    assert max_matching_size(40, sorted(live)) == 20


def test_replay_is_deterministic_and_checks_run():
    cfg = PipelineConfig()
    wl = WorkloadSpec("uniform-random", seed=2, nodes=50, events=600)
    text = generate(wl)
    evs = list(parse_stream(text.splitlines()))
    a = replay(cfg, 50, evs, oracle_every=10, check="full")
    b = replay(cfg, 50, evs, oracle_every=10, check="full")
    assert a.csv_text == b.csv_text and a.summary == b.summary
    assert a.exit_code == EXIT_OK
    assert all(c["violations"] == 0 and c["checked"] > 0 for c in a.summary["checks"].values())
    assert {"kernel", "matching", "approximation", "ak_degree"} <= set(a.summary["checks"])


def test_invariant_violation_exit_code(monkeypatch):
    cfg = PipelineConfig()
    # a guarantee that cannot be met forces the approximation check to fail
    monkeypatch.setattr(PipelineConfig, "guarantee", property(lambda self: 0))
    res = replay(cfg, 4, [UpdateEvent("+", 0, 1)], oracle_every=1, check="sampled")
    assert res.exit_code == EXIT_INVARIANT
    assert res.summary["first_violation"]["check"] == "approximation"


def test_module_entry_point(tmp_path):
    out = subprocess.run([sys.executable, "-m", "dynmatch", "--generate", "sliding-window", "--events", "20",
                          "--nodes", "10"], capture_output=True, text=True)
    assert out.returncode == 0 and len(out.stdout.splitlines()) == 20
