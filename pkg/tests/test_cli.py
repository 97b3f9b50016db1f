"""End-to-end command-line tests (in-process)."""

import json

import pytest

from wsnroute import brute_force_knn, dump_graph, generate_uniform, nn_route, parse_dataset
from wsnroute.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_gen_writes_parseable_dataset(tmp_path, capsys):
    out = tmp_path / "f.txt"
    code, _, _ = run_cli(capsys, "gen", "--n", "50", "--width", "1000", "--height", "1000",
                         "--seed", "42", "--output", str(out))
    assert code == 0
    f = parse_dataset(out.read_text())
    assert len(f) == 50
    assert f.points == generate_uniform(50, 1000, 1000, 42).points


def test_gen_stdout_deterministic(capsys):
    code1, out1, _ = run_cli(capsys, "gen", "--n", "10", "--seed", "3")
    code2, out2, _ = run_cli(capsys, "gen", "--n", "10", "--seed", "3")
    assert code1 == code2 == 0
    assert out1 == out2
    assert out1.startswith("P (")


def test_nn_prints_length_then_route(tmp_path, capsys):
    data = tmp_path / "f.txt"
    run_cli(capsys, "gen", "--n", "30", "--width", "500", "--height", "500",
            "--seed", "1", "--output", str(data))
    code, out, _ = run_cli(capsys, "nn", "--input", str(data))
    assert code == 0
    lines = out.splitlines()
    assert float(lines[0]) > 0
    assert len(lines) == 31  # length line + 30 node ids
    assert lines[1] == "0"


def test_nn_run_twice_identical(tmp_path, capsys):
    data = tmp_path / "f.txt"
    run_cli(capsys, "gen", "--n", "25", "--seed", "7", "--output", str(data))
    _, out1, _ = run_cli(capsys, "nn", "--input", str(data))
    _, out2, _ = run_cli(capsys, "nn", "--input", str(data))
    assert out1 == out2


def test_nn_route_file_matches_library(tmp_path, capsys):
    data = tmp_path / "f.txt"
    route_file = tmp_path / "route.txt"
    run_cli(capsys, "gen", "--n", "20", "--width", "300", "--height", "300",
            "--seed", "2", "--output", str(data))
    code, out, _ = run_cli(capsys, "nn", "--input", str(data), "--start", "3",
                           "--output", str(route_file))
    assert code == 0
    assert len(out.splitlines()) == 1  # only the length line on stdout
    f = generate_uniform(20, 300, 300, 2)
    want = nn_route(f, 3).order
    assert [int(v) for v in route_file.read_text().split()] == want


def test_input_and_generation_flags_are_exclusive(tmp_path, capsys):
    data = tmp_path / "f.txt"
    run_cli(capsys, "gen", "--n", "5", "--seed", "1", "--output", str(data))
    with pytest.raises(SystemExit) as exc:
        main(["nn", "--input", str(data), "--n", "5"])
    assert exc.value.code == 1


def test_missing_field_source_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["nn"])
    assert exc.value.code == 1


def test_unknown_flag_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["nn", "--n", "5", "--frobnicate"])
    assert exc.value.code == 1
    assert "frobnicate" in capsys.readouterr().err


def test_malformed_dataset_is_runtime_error(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("P (1 2)\nnot a record\n")
    code, _, err = run_cli(capsys, "nn", "--input", str(bad))
    assert code == 2
    assert "line 2" in err


def test_start_out_of_range_is_runtime_error(capsys):
    code, _, err = run_cli(capsys, "nn", "--n", "5", "--start", "9")
    assert code == 2
    assert "out of range" in err


def test_knn_dump_matches_oracle(tmp_path, capsys):
    code, out, _ = run_cli(capsys, "knn", "--n", "20", "--width", "200", "--height", "200",
                           "--seed", "4", "--k", "3", "--chunk-size", "6")
    assert code == 0
    f = generate_uniform(20, 200, 200, 4)
    assert out == dump_graph(brute_force_knn(f, 3))


def test_sa_deterministic_and_not_worse_than_reported(capsys):
    args = ("sa", "--n", "30", "--width", "400", "--height", "400", "--seed", "11",
            "--sa-max-iters", "2000")
    code, out1, _ = run_cli(capsys, *args)
    _, out2, _ = run_cli(capsys, *args)
    assert code == 0
    assert out1 == out2
    assert float(out1.splitlines()[0]) > 0


def test_sa_nn_init_with_paper_budget(capsys):
    code, out, _ = run_cli(capsys, "sa", "--n", "25", "--seed", "3", "--sa-init", "nn",
                           "--paper-budget")
    assert code == 0
    assert len(out.splitlines()) == 26


def test_simulate_json_report(tmp_path, capsys):
    cfg = tmp_path / "params.cfg"
    cfg.write_text("initial_battery_j = 0.001\npacket_bits = 1000\n")
    code, out, _ = run_cli(capsys, "simulate", "--n", "10", "--width", "200", "--height", "200",
                           "--seed", "5", "--rounds", "50", "--config", str(cfg))
    assert code == 0
    doc = json.loads(out)
    assert set(doc) == {"rounds_completed", "first_death_round", "total_energy_j",
                        "deadline_violations", "per_node_residual"}
    assert doc["rounds_completed"] <= 50
    assert len(doc["per_node_residual"]) == 10


def test_simulate_rotate_policy_and_csv(capsys):
    code, out, _ = run_cli(capsys, "simulate", "--n", "6", "--width", "100", "--height", "100",
                           "--seed", "2", "--rounds", "10", "--policy", "rotate-start",
                           "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "rounds_completed,first_death_round,total_energy_j,deadline_violations"
    assert len(lines) == 2


def test_bench_csv_row_count(capsys):
    code, out, _ = run_cli(capsys, "bench", "--n", "40", "--width", "500", "--height", "500",
                           "--seeds", "1..3", "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    data = [ln for ln in lines[1:] if not ln.startswith("mean,")]
    assert len(data) == 6  # 3 seeds x 2 algorithms
    assert lines[0] == "seed,algorithm,cost,wall_time_s"


def test_bench_seed_list_syntax(capsys):
    code, out, _ = run_cli(capsys, "bench", "--n", "30", "--width", "300", "--height", "300",
                           "--seeds", "2,9", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert {r["seed"] for r in doc["runs"]} == {2, 9}
    assert "mean_ratio_sa_nn" in doc["aggregates"]
