import json
import subprocess
import sys
from pathlib import Path

import pytest

from hiphop import registry
from hiphop.cli import main
from hiphop.scenario import ScenarioError, execute, parse_scenario, parse_ticks

ROOT = Path(__file__).resolve().parent.parent
SCENARIOS = sorted((ROOT / "scenarios").glob("*.jsonl"))


@pytest.mark.parametrize("path", SCENARIOS, ids=lambda p: p.stem)
def test_scenario_matches_golden(path, capsys):
    golden = ROOT / "scenarios" / "golden" / (path.stem + ".trace")
    assert main(["run", str(path), "--golden", str(golden)]) == 0
    assert "PASS" in capsys.readouterr().out


def test_every_program_has_a_scenario():
    covered = {json.loads(p.read_text().splitlines()[0])["program"] for p in SCENARIOS}
    assert covered == set(registry.program_ids())


def test_list_shows_every_program(capsys):
    assert main(["list"]) == 0
    listed = [line.split()[0] for line in capsys.readouterr().out.splitlines()]
    assert listed == list(registry.program_ids())
    assert "hopfm" in listed and "image-race" in listed


def test_negated_expectation_fails(tmp_path, capsys):
    text = (ROOT / "scenarios" / "seq-await.jsonl").read_text().splitlines()
    last = json.loads(text[-1])
    last["expect_absent"], last["expect_present"] = last.get("expect_present", []), []
    text[-1] = json.dumps(last)
    bad = tmp_path / "bad.jsonl"
    bad.write_text("\n".join(text) + "\n")
    assert main(["run", str(bad)]) == 1
    assert "FAIL" in capsys.readouterr().err


def test_golden_mismatch_prints_diff(tmp_path, capsys):
    golden = tmp_path / "g.trace"
    golden.write_text("{}\n")
    assert main(["run", str(ROOT / "scenarios" / "nothing.jsonl"), "--golden", str(golden)]) == 1
    assert "+++ actual" in capsys.readouterr().err


@pytest.mark.parametrize("text", [
    "",
    "not json\n",
    '{"program": "nothing"}\n',
    '{"program": "no-such-program"}\n{}\n',
    '{"program": "nothing"}\n{"bogus": 1}\n',
    '{"program": "nothing"}\n{"expect_present": ["O"], "expect_absent": ["O"]}\n',
    '{"program": "nothing", "seed": "x"}\n{}\n',
])
def test_bad_input_exit_code(tmp_path, text, capsys):
    f = tmp_path / "s.jsonl"
    f.write_text(text)
    assert main(["run", str(f)]) == 2
    assert "error" in capsys.readouterr().err


def test_missing_file(tmp_path):
    assert main(["run", str(tmp_path / "absent.jsonl")]) == 2
    assert main(["trace", "nothing", str(tmp_path / "absent.jsonl")]) == 2


def test_trace_of_nothing(tmp_path, capsys):
    f = tmp_path / "t.jsonl"
    f.write_text("{}\n")
    assert main(["trace", "nothing", str(f)]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 1
    assert json.loads(lines[0]) == {"reaction": 1, "outputs": {}, "terminated": True,
                                     "error": None, "issued": [], "cancelled": []}


def test_trace_skips_scenario_header(capsys):
    path = ROOT / "scenarios" / "seq-await.jsonl"
    golden = ROOT / "scenarios" / "golden" / "seq-await.trace"
    assert main(["trace", "seq-await", str(path), "--golden", str(golden)]) == 0


def test_replay_is_stable():
    sc = parse_scenario((ROOT / "scenarios" / "hopfm.jsonl").read_text())
    first = execute(sc.program_id, sc.ticks, sc.seed)
    for seed in (sc.seed, 1, 2):
        assert execute(sc.program_id, sc.ticks, seed).trace == first.trace


def test_parse_ticks_errors():
    with pytest.raises(ScenarioError):
        parse_ticks(["[]"])
    with pytest.raises(ScenarioError):
        parse_ticks(['{"inputs": [{"value": 1}]}'])
    with pytest.raises(ScenarioError):
        parse_ticks(['{"completions": [{"outcome": "success"}]}'])
    assert parse_ticks(["", "{}", "  "]) and len(parse_ticks(["{}", "{}"])) == 2


def test_unexpected_error_is_a_failure():
    out = execute("instantaneous-loop", parse_ticks(["{}"]))
    assert not out.ok and "error" in out.failures[0]
    expected = execute("instantaneous-loop",
                       parse_ticks(['{"expect_error": "InstantaneousLoopError"}']))
    assert expected.ok


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "hiphop", "list"], capture_output=True,
                         text=True, check=True)
    assert "seq-await" in out.stdout
