import json

import numpy as np

import tanglekit as tk
from tanglekit.cli import run


def run_cli(capsys, *argv):
    code = run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_gen_emits_state_json(capsys):
    code, out, err = run_cli(capsys, "gen", "ghz", "3")
    assert code == 0 and err == ""
    obj = json.loads(out)
    state = tk.state_from_json(obj)
    assert np.allclose(state.amplitudes, tk.generate("ghz", 3).amplitudes)


def test_gen_out_file(tmp_path, capsys):
    path = tmp_path / "x4.json"
    code, out, _ = run_cli(capsys, "gen", "x", "4", "--out", str(path))
    assert code == 0 and out == ""
    assert np.allclose(tk.load_state(path).amplitudes, tk.generate("x", 4).amplitudes)


def test_filter_subcommand(tmp_path, capsys):
    path = tmp_path / "ghz3.json"
    tk.save_state(tk.generate("ghz", 3), path)
    code, out, _ = run_cli(capsys, "filter", "F3_1", "--state", str(path))
    assert code == 0
    payload = json.loads(out)
    assert payload["degree"] == 4
    assert payload["qubits"] == 3
    assert abs(payload["modulus"] - 1.0) < 1e-12
    assert abs(payload["value"][0] - 1.0) < 1e-12 and abs(payload["value"][1]) < 1e-12


def test_filter_normalize_exponent(tmp_path, capsys):
    path = tmp_path / "ghz3.json"
    tk.save_state(tk.generate("ghz", 3), path)
    code, out, _ = run_cli(
        capsys, "filter", "F3_3", "--state", str(path), "--normalize-exponent"
    )
    payload = json.loads(out)
    assert code == 0
    assert payload["degree"] == 8
    assert abs(payload["modulus_normalized"] - payload["modulus"] ** 0.5) < 1e-12


def test_filter_from_dsl_file(tmp_path, capsys):
    fpath = tmp_path / "conc.filter"
    fpath.write_text("filter q=2 { term 1 { copy y y; } }", encoding="utf-8")
    spath = tmp_path / "bell.json"
    tk.save_state(tk.generate("bell", 2), spath)
    code, out, _ = run_cli(capsys, "filter", str(fpath), "--state", str(spath))
    payload = json.loads(out)
    assert code == 0
    assert payload["filter"] == "conc"
    assert abs(payload["modulus"] - 1.0) < 1e-12


def test_filter_unknown_exits_1(tmp_path, capsys):
    path = tmp_path / "bell.json"
    tk.save_state(tk.generate("bell", 2), path)
    code, out, err = run_cli(capsys, "filter", "F9", "--state", str(path))
    assert code == 1
    assert out == ""
    payload = json.loads(err)
    assert payload["error"] == "UnknownFilter"


def test_usage_error_exits_2(capsys):
    assert run_cli(capsys, "bogus")[0] == 2
    assert run_cli(capsys, "filter")[0] == 2


def test_balance_subcommand(tmp_path, capsys):
    path = tmp_path / "w3.json"
    tk.save_state(tk.generate("w", 3), path)
    code, out, _ = run_cli(capsys, "balance", "--state", str(path))
    payload = json.loads(out)
    assert code == 0
    assert payload["classification"] == "no-balanced-part"
    assert payload["length"] == 3


def test_balance_eps_flag(tmp_path, capsys):
    st = tk.make_state(2, [("00", 1.0), ("11", 1e-12)])
    path = tmp_path / "tiny.json"
    tk.save_state(st, path)
    _, out, _ = run_cli(capsys, "balance", "--state", str(path))
    assert json.loads(out)["length"] == 1
    _, out, _ = run_cli(capsys, "balance", "--state", str(path), "--eps", "1e-14")
    assert json.loads(out)["length"] == 2


def test_normalform_subcommand(tmp_path, capsys):
    st = tk.make_state(2, [("00", (1 / 3) ** 0.5), ("11", (2 / 3) ** 0.5)])
    path = tmp_path / "asym.json"
    tk.save_state(st, path)
    code, out, _ = run_cli(capsys, "normalform", "--state", str(path))
    payload = json.loads(out)
    assert code == 0
    back = tk.state_from_json(payload["output_state"])
    assert np.allclose(np.abs(back.amplitudes), tk.generate("bell", 2).amplitudes, atol=1e-10)


def test_normalform_domain_error(tmp_path, capsys):
    path = tmp_path / "w3.json"
    tk.save_state(tk.generate("w", 3), path)
    code, _, err = run_cli(capsys, "normalform", "--state", str(path))
    assert code == 1
    assert json.loads(err)["error"] == "NotIrreduciblyBalanced"


def test_stochastic_subcommand(tmp_path, capsys):
    path = tmp_path / "x3.json"
    tk.save_state(tk.generate("x", 3), path)
    for level in ("1", "2", "all"):
        code, out, _ = run_cli(capsys, "stochastic", "--state", str(path), "--level", level)
        payload = json.loads(out)
        assert code == 0 and payload["passed"] is True


def test_spinconc_subcommand(tmp_path, capsys):
    psi_minus = np.zeros(4, dtype=complex)
    psi_minus[1] = 1 / np.sqrt(2)
    psi_minus[2] = -1 / np.sqrt(2)
    rho = 0.8 * np.outer(psi_minus, psi_minus.conj()) + 0.2 * np.eye(4) / 4
    path = tmp_path / "werner.json"
    tk.save_density(tk.DensityMatrix(4, rho), path)
    code, out, _ = run_cli(capsys, "spinconc", "--rho", str(path), "--spin-dim", "2")
    payload = json.loads(out)
    assert code == 0
    assert abs(payload["value"] - 0.7) < 1e-10


def test_list_filters(capsys):
    code, out, _ = run_cli(capsys, "list-filters")
    payload = json.loads(out)
    assert code == 0
    names = {f["name"] for f in payload["filters"]}
    assert {"F2_1", "F3_3", "F4_3", "F5_12_1", "F6_2", "D_1"} <= names
    assert payload["aliases"]["F5_0"] == "F5_12_1"
    d1 = next(f for f in payload["filters"] if f["name"] == "D_1")
    assert d1["kind"] == "invariant"


def test_gen_output_round_trips_into_every_consumer(tmp_path, capsys):
    path = tmp_path / "ghz4.json"
    run_cli(capsys, "gen", "ghz", "4", "--out", str(path))
    assert run_cli(capsys, "filter", "F4_1", "--state", str(path))[0] == 0
    assert run_cli(capsys, "balance", "--state", str(path))[0] == 0
    assert run_cli(capsys, "normalform", "--state", str(path))[0] == 0
    assert run_cli(capsys, "stochastic", "--state", str(path), "--level", "1")[0] == 0


def test_byte_identical_output_across_runs_and_threads(tmp_path, capsys):
    path = tmp_path / "chi.json"
    tk.save_state(tk.generate("chi5", 5), path)
    outputs = set()
    for threads in ("1", "2", "4"):
        code, out, _ = run_cli(
            capsys, "filter", "F5_12_2", "--state", str(path), "--threads", threads
        )
        assert code == 0
        outputs.add(out)
    assert len(outputs) == 1


def test_threads_env_fallback(tmp_path, capsys, monkeypatch):
    path = tmp_path / "bell.json"
    tk.save_state(tk.generate("bell", 2), path)
    monkeypatch.setenv("TANGLEKIT_THREADS", "3")
    code, out, _ = run_cli(capsys, "filter", "F2_2", "--state", str(path))
    assert code == 0
    assert abs(json.loads(out)["modulus"] - 1.0) < 1e-12


def test_human_format(tmp_path, capsys):
    path = tmp_path / "bell.json"
    tk.save_state(tk.generate("bell", 2), path)
    code, out, _ = run_cli(
        capsys, "--format", "human", "filter", "F2_1", "--state", str(path)
    )
    assert code == 0
    assert "modulus: " in out


def test_is_zero_reporting(tmp_path, capsys):
    path = tmp_path / "w3.json"
    tk.save_state(tk.generate("w", 3), path)
    _, out, _ = run_cli(capsys, "filter", "F3_1", "--state", str(path))
    assert json.loads(out)["is_zero"] is True
    path2 = tmp_path / "ghz3.json"
    tk.save_state(tk.generate("ghz", 3), path2)
    _, out, _ = run_cli(capsys, "filter", "F3_1", "--state", str(path2))
    assert json.loads(out)["is_zero"] is False


def test_console_entry_point(tmp_path):
    import subprocess
    import sys

    path = tmp_path / "ghz3.json"
    gen = subprocess.run(
        [sys.executable, "-m", "tanglekit", "gen", "ghz", "3"],
        capture_output=True,
        text=True,
    )
    assert gen.returncode == 0
    path.write_text(gen.stdout, encoding="utf-8")
    res = subprocess.run(
        [sys.executable, "-m", "tanglekit", "filter", "F3_2", "--state", str(path)],
        capture_output=True,
        text=True,
    )
    assert res.returncode == 0
    assert abs(json.loads(res.stdout)["modulus"] - 1.0) < 1e-12
    bad = subprocess.run(
        [sys.executable, "-m", "tanglekit", "filter", "F9", "--state", str(path)],
        capture_output=True,
        text=True,
    )
    assert bad.returncode == 1
    usage = subprocess.run(
        [sys.executable, "-m", "tanglekit", "nonsense"],
        capture_output=True,
        text=True,
    )
    assert usage.returncode == 2
