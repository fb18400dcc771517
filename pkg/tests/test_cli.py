import json

import pytest

from src.config import Settings
from src.main import (
    EXIT_INFEASIBLE,
    EXIT_INPUT,
    EXIT_OK,
    AppConfig,
    build_parser,
    main,
    parse_weight_list,
    parse_weights,
    solve_config,
)
from src.models.instance import parse_instance, serialize_instance
from src.models.plan import Plan, parse_plan, serialize_plan

QUICK = ["--seed", "4", "--time-limit", "30"]
SEARCH = ["--max-iterations", "2000"]


@pytest.fixture(autouse=True)
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    for name in ("SEED", "TIME_LIMIT", "OUTPUT_DIR", "LOG_LEVEL"):
        monkeypatch.delenv(f"ATM_ROUTING_{name}", raising=False)
    return tmp_path


@pytest.fixture
def instance_file(workdir):
    assert main(["generate", "--n-atms", "5", "--output", "instance.json", *QUICK]) == EXIT_OK
    return workdir / "instance.json"


def test_generate_writes_a_valid_instance(capsys, instance_file):
    inst = parse_instance(instance_file.read_text())
    assert len(inst.atms) == 5
    assert "5 ATMs" in capsys.readouterr().out


def test_generate_is_seeded(workdir):
    main(["generate", "--n-atms", "3", "--output", "a.json", "--seed", "9"])
    main(["generate", "--n-atms", "3", "--output", "b.json", "--seed", "9"])
    assert (workdir / "a.json").read_text() == (workdir / "b.json").read_text()


def test_generate_with_distance_file(workdir):
    main(["generate", "--n-atms", "1", "--output", "base.json", *QUICK])
    nodes = parse_instance((workdir / "base.json").read_text()).node_ids
    rows = [",".join(nodes)] + [",".join("0" if i == j else "3.5" for j in range(len(nodes))) for i in range(len(nodes))]
    (workdir / "roads.csv").write_text("\n".join(rows) + "\n")

    code = main(["generate", "--n-atms", "1", "--distance-file", "roads.csv", "--output", "roads.json", *QUICK])
    assert code == EXIT_OK
    inst = parse_instance((workdir / "roads.json").read_text())
    assert inst.distance_km[0][1] == 3.5


def test_check_instance(instance_file, workdir, capsys):
    assert main(["check-instance", "--instance", str(instance_file)]) == EXIT_OK
    assert "✅" in capsys.readouterr().out

    doc = json.loads(instance_file.read_text())
    doc["distance_km"][0][1] = -1.0
    doc["atms"][0]["service_window"] = [600, 600]
    (workdir / "broken.json").write_text(json.dumps(doc))
    assert main(["check-instance", "--instance", "broken.json"]) == EXIT_INFEASIBLE
    out = capsys.readouterr().out
    assert out.count("❌") == 2


def test_check_instance_of_missing_file():
    assert main(["check-instance", "--instance", "nowhere.json"]) == EXIT_INPUT


def test_split_writes_a_schedule(instance_file, workdir):
    assert main(["split", "--instance", str(instance_file), "--output", "split.json"]) == EXIT_OK
    schedule = json.loads((workdir / "split.json").read_text())
    assert len(schedule["atms"]) == 5


def test_solve_then_validate(instance_file, workdir, capsys):
    code = main(["solve", "--instance", str(instance_file), "--output", "plan.json", *QUICK, *SEARCH])
    assert code == EXIT_OK
    out = capsys.readouterr().out
    assert "Total cost (VND)" in out

    assert main(["validate", "--instance", str(instance_file), "--plan", "plan.json"]) == EXIT_OK
    assert "✅ Plan satisfies every constraint" in capsys.readouterr().out


def test_validate_reports_violations(instance_file, workdir, capsys):
    (workdir / "empty.json").write_text(serialize_plan(Plan()))
    assert main(["validate", "--instance", str(instance_file), "--plan", "empty.json"]) == EXIT_INFEASIBLE
    assert "C14" in capsys.readouterr().out


def test_exact_method_on_a_tiny_instance(minimal_instance, workdir):
    (workdir / "tiny.json").write_text(serialize_instance(minimal_instance))
    code = main(["solve", "--instance", "tiny.json", "--method", "exact", "--policy", "no-split", *QUICK])
    assert code == EXIT_OK
    plan = parse_plan((workdir / "plan.json").read_text())
    assert plan.route("1", 1) == ["01", "1", "01"]


def test_exact_method_refuses_large_instances(instance_file):
    main(["generate", "--n-atms", "9", "--output", "nine.json", *QUICK])
    assert main(["solve", "--instance", "nine.json", "--method", "exact", *QUICK]) == EXIT_INPUT


def test_compare_and_report(instance_file, workdir, capsys):
    code = main(["compare", "--instance", str(instance_file), *QUICK, *SEARCH])
    assert code == EXIT_OK
    for name in ("report.json", "plan_no_split.json", "plan_split.json"):
        assert (workdir / name).exists()
    assert "Cost improvement (%)" in capsys.readouterr().out

    assert main(["report", "--report", "report.json", "--format", "structured"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["instance"].startswith("scenario-5atm")


def test_report_of_a_non_report(instance_file):
    assert main(["report", "--report", str(instance_file)]) == EXIT_INPUT


def test_pareto(instance_file, workdir, capsys):
    code = main(["pareto", "--instance", str(instance_file), "--weights-list", "1,0;0,1", *QUICK, *SEARCH])
    assert code == EXIT_OK
    front = json.loads((workdir / "pareto.json").read_text())
    assert 1 <= len(front["points"]) <= 2


def test_output_dir_flag(instance_file, workdir):
    main(["split", "--instance", str(instance_file), "--output-dir", "out"])
    assert (workdir / "out" / "split.json").exists()


def test_invalid_weights_are_an_input_error(instance_file):
    assert main(["solve", "--instance", str(instance_file), "--weights", "0,0", *QUICK]) == EXIT_INPUT


def test_invalid_environment_is_an_input_error(instance_file, monkeypatch):
    monkeypatch.setenv("ATM_ROUTING_SEED", "many")
    assert main(["check-instance", "--instance", str(instance_file)]) == EXIT_INPUT


def test_environment_supplies_the_seed(workdir, monkeypatch):
    monkeypatch.setenv("ATM_ROUTING_SEED", "9")
    main(["generate", "--n-atms", "3", "--output", "env.json"])
    main(["generate", "--n-atms", "3", "--output", "flag.json", "--seed", "9"])
    assert (workdir / "env.json").read_text() == (workdir / "flag.json").read_text()


def test_weight_parsing():
    assert parse_weights("1, 0.5") == (1.0, 0.5)
    assert parse_weight_list("1,0;0.5,0.5;") == [(1.0, 0.0), (0.5, 0.5)]
    with pytest.raises(ValueError):
        parse_weights("1")


def test_compare_twice_writes_identical_reports(instance_file, workdir):
    for out in ("first", "second"):
        assert main(["compare", "--instance", str(instance_file), "--output-dir", out, "--seed", "4", *SEARCH]) == EXIT_OK
    assert (workdir / "first" / "report.json").read_bytes() == (workdir / "second" / "report.json").read_bytes()
    assert (workdir / "first" / "plan_split.json").read_bytes() == (workdir / "second" / "plan_split.json").read_bytes()


def test_searches_run_without_a_clock_by_default():
    args = build_parser().parse_args(["compare", "--instance", "instance.json"])
    assert solve_config(args, AppConfig.resolve(args, Settings())).time_limit is None

    args = build_parser().parse_args(["compare", "--instance", "instance.json", "--time-limit", "5"])
    assert solve_config(args, AppConfig.resolve(args, Settings())).time_limit == 5.0
