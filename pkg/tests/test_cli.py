import io
import json
import math

import pytest

from qcascade.cascade import VerificationReport, VerificationRow
from qcascade.cli import (EMIT_TARGETS, JobError, JobSpec, PipelineError, emit,
                          job_to_mapping, main, parse_job, report_to_mapping, run_pipeline)
from qcascade.spectral import TruthVector
from qcascade.words import EQB, MGD

XOR_JOB = '{"n": 2, "truth": "0110"}'
MGD_JOB = '{"n": 2, "truth": "0110", "mode": "mgd", "dihedral_n": 3}'


def test_parse_job_minimal_defaults():
    job = parse_job(XOR_JOB)
    assert job == JobSpec(n=2, truth=TruthVector(2, (0, 1, 1, 0)))
    assert job.mode == EQB and job.basis == "X" and job.symmetry
    assert job.emit == () and job.trace_input is None


def test_parse_job_mgd_defaults():
    job = parse_job(MGD_JOB)
    assert job.mode == MGD
    assert job.dihedral_n == 3
    assert job.modulus == 3
    assert job.levels == 2


def test_parse_job_mgd_levels_track_truth_range():
    job = parse_job('{"n": 1, "truth": [0, 2], "mode": "mgd", "dihedral_n": 5}')
    assert job.levels == 3
    assert job.modulus == 5


def test_parse_job_accepts_truth_list_and_emit_string():
    job = parse_job('{"n": 2, "truth": [0, 1, 1, 0], "emit": "word,qasm", "basis": "y"}')
    assert job.truth.values == (0, 1, 1, 0)
    assert job.emit == ("word", "qasm")
    assert job.basis == "Y"


def test_parse_job_accepts_large_n_only_when_forced():
    doc = json.dumps({"n": 11, "truth": "01" * 1024})
    with pytest.raises(JobError, match="force-large"):
        parse_job(doc)
    assert parse_job(doc, allow_large=True).n == 11


@pytest.mark.parametrize("text,needle", [
    ("{", "invalid JSON"),
    ("[1, 2]", "JSON object"),
    ('{"n": 2, "truth": "0110", "spam": 1}', "unknown field"),
    ('{"truth": "0110"}', "'n': required"),
    ('{"n": 2}', "'truth': required"),
    ('{"n": true, "truth": "01"}', "expected an integer"),
    ('{"n": 0, "truth": "0"}', "at least one input"),
    ('{"n": 2, "truth": "0110", "mode": "qft"}', "'mode'"),
    ('{"n": 2, "truth": "011"}', "expected 4 entries"),
    ('{"n": 2, "truth": "01a0"}', "digit string"),
    ('{"n": 2, "truth": [0, 1, "x", 0]}', "must be integers"),
    ('{"n": 2, "truth": {"0": 1}}', "expected a string or list"),
    ('{"n": 2, "truth": "0110", "dihedral_n": 3}', "only valid in MGD"),
    ('{"n": 1, "truth": [0, 2]}', "must be 0 or 1"),
    ('{"n": 2, "truth": "0110", "mode": "mgd"}', "'dihedral_n': required"),
    ('{"n": 2, "truth": "0110", "mode": "mgd", "dihedral_n": 4}', "odd prime"),
    ('{"n": 2, "truth": "0110", "mode": "mgd", "dihedral_n": 2}', "odd prime"),
    ('{"n": 2, "truth": "0110", "mode": "mgd", "dihedral_n": 3, "modulus": 6}', "odd"),
    ('{"n": 2, "truth": "0110", "mode": "mgd", "dihedral_n": 3, "levels": 1}', "at least 2"),
    ('{"n": 1, "truth": [0, 3], "mode": "mgd", "dihedral_n": 3, "levels": 2}', "0..1"),
    ('{"n": 2, "truth": "0110", "basis": "z"}', "'basis'"),
    ('{"n": 2, "truth": "0110", "symmetry": 1}', "true or false"),
    ('{"n": 2, "truth": "0110", "emit": 5}', "list of targets"),
    ('{"n": 2, "truth": "0110", "emit": ["png"]}', "unknown target"),
    ('{"n": 2, "truth": "0110", "trace_input": "1"}', "expected 2 bits"),
    ('{"n": 2, "truth": "0110", "trace_input": "1x"}', "expected 2 bits"),
])
def test_parse_job_diagnostics(text, needle):
    with pytest.raises(JobError, match=needle):
        parse_job(text)


def test_job_round_trips_through_mapping():
    for text in (XOR_JOB,
                 MGD_JOB,
                 '{"n": 1, "truth": [0, 2], "mode": "mgd", "dihedral_n": 5, "levels": 4}',
                 '{"n": 2, "truth": "0110", "emit": "word,json", "trace_input": "10", '
                 '"basis": "y", "symmetry": false}'):
        job = parse_job(text)
        assert parse_job(json.dumps(job_to_mapping(job))) == job


def test_run_pipeline_xor_reduces_and_passes():
    report = run_pipeline(parse_job(XOR_JOB))
    assert report.passed
    assert report.reduced is not None and report.word is report.reduced
    assert str(report.word) == "a^1/2 g[x1] a^-1/2 g[x1]"
    assert report.circuit.num_qubits == 2
    assert report.quantum is not None and report.quantum.passed
    assert report.connectivity.is_star and report.connectivity.triangle_free
    assert report.timings and all(t >= 0 for t in report.timings.values())


def test_run_pipeline_respects_no_symmetry():
    report = run_pipeline(parse_job('{"n": 2, "truth": "0110", "symmetry": false}'))
    assert report.reduced is None and report.word is report.simplified
    assert report.circuit.num_qubits == 3
    assert report.passed


def test_run_pipeline_mgd_skips_quantum_check():
    report = run_pipeline(parse_job(MGD_JOB))
    assert report.quantum is None
    assert report.classical.passed and report.passed
    assert str(report.word) == "a^-1 g[x1,x2] a^1 g[x1,x2]"
    assert report.spectrum.modulus == 3


def test_run_pipeline_constant_function_gives_empty_word():
    report = run_pipeline(parse_job('{"n": 1, "truth": "00"}'))
    assert len(report.word) == 0
    assert len(report.circuit.gates) == 0
    assert report.passed


def test_run_pipeline_basis_y():
    report = run_pipeline(parse_job('{"n": 2, "truth": "0110", "basis": "y"}'))
    assert {g.kind for g in report.circuit.gates} == {"RY", "CZ"}
    assert report.passed


def test_pipeline_error_carries_stage(monkeypatch):
    import qcascade.cli as cli

    def boom(truth):
        raise ValueError("broken transform")

    monkeypatch.setattr(cli, "spectrum_exact", boom)
    with pytest.raises(PipelineError, match="stage 'spectrum'.*broken transform") as info:
        run_pipeline(parse_job(XOR_JOB))
    assert info.value.stage == "spectrum"


def test_report_mapping_is_deterministic_and_versioned():
    report = run_pipeline(parse_job(XOR_JOB))
    doc = report_to_mapping(report)
    assert doc["schema_version"] == 1
    assert "timings" not in doc
    assert doc["passed"] is True
    assert doc["spectrum"] == {"coefficients": ["1/2", "0", "0", "-1/2"], "modulus": None}
    assert doc["words"]["final"] == "a^1/2 g[x1] a^-1/2 g[x1]"
    assert doc["words"]["target"] == "x2"
    assert doc["circuit"]["layout"] == {"x1": 0, "x2": 1}
    assert doc["circuit"]["gates"][0] == {"kind": "RX", "target": 1,
                                          "angle": "pi/2", "radians": math.pi / 2}
    # a one-edge star is centered at either endpoint
    assert doc["connectivity"] == {"edges": [[0, 1]], "is_star": True,
                                   "triangle_free": True, "centers": [0, 1]}
    assert doc["verification"]["quantum"]["passed"] is True
    assert doc == report_to_mapping(run_pipeline(parse_job(XOR_JOB)))


def test_report_mapping_marks_ancilla_target():
    doc = report_to_mapping(run_pipeline(parse_job(MGD_JOB)))
    assert doc["words"]["target"] == "ancilla"
    assert doc["verification"]["quantum"] is None
    assert doc["job"]["dihedral_n"] == 3


def test_emit_writes_requested_files(tmp_path):
    report = run_pipeline(parse_job('{"n": 2, "truth": "0110", "trace_input": "10", '
                                    '"emit": ["word", "qasm", "json", "bloch-csv"]}'))
    written = emit(report, report.job.emit, tmp_path)
    assert sorted(written) == sorted(EMIT_TARGETS)
    assert (tmp_path / "word.txt").read_text() == "a^1/2 g[x1] a^-1/2 g[x1]\n"
    qasm = (tmp_path / "circuit.qasm").read_text()
    assert qasm.startswith("OPENQASM 2.0;\n")
    assert "rx(pi/2) q[1];" in qasm
    doc = json.loads((tmp_path / "report.json").read_text())
    assert doc["schema_version"] == 1
    rows = (tmp_path / "trace.csv").read_text().splitlines()
    assert rows[0] == "step,gate,theta,phi"
    last = rows[-1].split(",")
    assert math.isclose(float(last[2]), math.pi, rel_tol=0, abs_tol=1e-9)


def test_emit_bloch_requires_trace_input(tmp_path):
    report = run_pipeline(parse_job(XOR_JOB))
    with pytest.raises(JobError, match="trace_input"):
        emit(report, ("bloch-csv",), tmp_path)


def test_emitted_files_are_byte_identical_across_runs(tmp_path):
    job_text = '{"n": 3, "truth": "01101001", "emit": ["word", "qasm", "json"]}'
    first, second = tmp_path / "a", tmp_path / "b"
    emit(run_pipeline(parse_job(job_text)), ("word", "qasm", "json"), first)
    emit(run_pipeline(parse_job(job_text)), ("word", "qasm", "json"), second)
    for name in ("word.txt", "circuit.qasm", "report.json"):
        assert (first / name).read_bytes() == (second / name).read_bytes()


def test_main_synth_inline_flags(capsys):
    assert main(["synth", "--n", "2", "--truth", "0110"]) == 0
    out = capsys.readouterr().out
    assert "result: PASS" in out
    assert "symmetry: reduced onto x2" in out
    assert "2 qubits" in out


def test_main_synth_no_symmetry(capsys):
    assert main(["synth", "--n", "2", "--truth", "0110", "--no-symmetry"]) == 0
    out = capsys.readouterr().out
    assert "reduced onto" not in out
    assert "3 qubits" in out


def test_main_synth_jobfile_and_emit(tmp_path, capsys):
    jobfile = tmp_path / "job.json"
    jobfile.write_text('{"n": 2, "truth": "0110", "mode": "mgd", "dihedral_n": 3}')
    out_dir = tmp_path / "out"
    assert main(["synth", str(jobfile), "--emit", "word,json", "--out-dir", str(out_dir)]) == 0
    out = capsys.readouterr().out
    assert "wrote word:" in out and "wrote json:" in out
    assert (out_dir / "word.txt").read_text() == "a^-1 g[x1,x2] a^1 g[x1,x2]\n"


def test_main_reads_job_from_stdin(monkeypatch, capsys):
    monkeypatch.setattr("sys.stdin", io.StringIO(XOR_JOB))
    assert main(["synth", "-"]) == 0
    assert "result: PASS" in capsys.readouterr().out


def test_main_flags_override_jobfile(tmp_path, capsys):
    jobfile = tmp_path / "job.json"
    jobfile.write_text('{"n": 2, "truth": "0110", "basis": "x"}')
    assert main(["synth", str(jobfile), "--basis", "y"]) == 0
    assert "basis=Y" in capsys.readouterr().out


def test_main_spectrum_verb(capsys):
    assert main(["spectrum", "--n", "2", "--truth", "0110",
                 "--mode", "mgd", "--dihedral-n", "3"]) == 0
    assert capsys.readouterr().out == "[-1, 0, 0, 1]\n"
    assert main(["spectrum", "--n", "2", "--truth", "0110"]) == 0
    assert capsys.readouterr().out == "[1/2, 0, 0, -1/2]\n"


def test_main_verify_verb_prints_rows(capsys):
    assert main(["verify", "--n", "2", "--truth", "0110"]) == 0
    out = capsys.readouterr().out
    assert "classical 00: expected 0" in out
    assert "quantum 11: expected 0" in out
    assert out.rstrip().endswith("result: PASS")
    assert "MISMATCH" not in out


def test_main_trace_verb(capsys):
    assert main(["trace", "--n", "2", "--truth", "0110", "--input", "10"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "step,gate,theta,phi"
    assert math.isclose(float(lines[-1].split(",")[2]), math.pi, rel_tol=0, abs_tol=1e-9)


def test_main_trace_without_input_fails(capsys):
    assert main(["trace", "--n", "2", "--truth", "0110"]) == 1
    assert "trace needs --input" in capsys.readouterr().err


def test_main_usage_errors_exit_one(capsys):
    assert main(["synth"]) == 1
    assert "give a job file" in capsys.readouterr().err
    assert main(["synth", "--n", "2", "--truth", "011"]) == 1
    assert "expected 4 entries" in capsys.readouterr().err
    assert main(["synth", "/no/such/job.json"]) == 1
    with pytest.raises(SystemExit) as info:
        main(["bogus-command"])
    assert info.value.code == 1
    capsys.readouterr()
    with pytest.raises(SystemExit) as info:
        main(["synth", "--mode", "qft", "--n", "2", "--truth", "0110"])
    assert info.value.code == 1


def test_main_bad_json_reports_position(tmp_path, capsys):
    jobfile = tmp_path / "job.json"
    jobfile.write_text('{"n": 2,\n "truth": }')
    assert main(["synth", str(jobfile)]) == 1
    assert "invalid JSON at line 2" in capsys.readouterr().err


def test_main_verification_failure_exits_two(monkeypatch, capsys):
    import qcascade.cli as cli

    failing = VerificationReport("quantum", (VerificationRow((0, 0), "0", "p=0", False),))
    monkeypatch.setattr(cli, "verify_quantum", lambda circuit, truth: failing)
    assert main(["synth", "--n", "2", "--truth", "0110"]) == 2
    assert "result: FAIL" in capsys.readouterr().out
    assert main(["verify", "--n", "2", "--truth", "0110"]) == 2
    assert "MISMATCH" in capsys.readouterr().out
