import json

import pytest

from ramanujan5 import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr().out.strip().splitlines()[-1]
    return code, json.loads(out)["result"]


@pytest.fixture
def cache(tmp_path, bundle):
    d = tmp_path / "cache"
    d.mkdir()
    (d / "order.json").write_text(bundle.to_json())
    return d


def test_missing_cache_exits_4(capsys, tmp_path):
    code, res = run(capsys, "reduce-gates", "--cache-dir", str(tmp_path), "--n", "5")
    assert code == cli.EXIT_CACHE and res["error"] == "missing cache"


@pytest.mark.parametrize("argv", [
    ["count-gates", "--p", "7"],
    ["count-gates", "--p", "12"],
    ["reduce-gates", "--n", "14"],
    ["reduce-gates", "--p", "3", "--n", "9"],
    ["reduce-gates", "--n", "33"],
])
def test_invalid_config_exits_2(capsys, cache, argv):
    code, res = run(capsys, *argv, "--cache-dir", str(cache))
    assert code == cli.EXIT_CONFIG and res["error"] == "config"


def test_config_file_and_overrides(capsys, tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"p": 5}))
    code, res = run(capsys, "--config", str(cfg), "count-gates")
    assert code == 0 and res["formula"] == 297782760 and res["e"] == 2
    code, res = run(capsys, "--config", str(cfg), "count-gates", "--p", "11")
    assert res["formula"] == 3961830
    cfg.write_text(json.dumps({"prime": 5}))
    code, _ = run(capsys, "--config", str(cfg), "count-gates")
    assert code == cli.EXIT_CONFIG


def test_count_gates_inert_reports_corrected_count(capsys):
    code, res = run(capsys, "count-gates", "--p", "3")
    assert code == 0 and res["formula"] == 765672 and res["distinct_labels"] == 560712


def test_reduce_gates_is_byte_identical(capsys, cache, tmp_path):
    outs = []
    for i in range(2):
        out = tmp_path / f"r{i}.json"
        code, res = run(capsys, "reduce-gates", "--cache-dir", str(cache), "--n", "5", "--worked",
                        "--out", str(out))
        assert code == 0 and res["reduced"] == 1
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_find_gates_without_candidates(capsys, cache, tmp_path):
    code, res = run(capsys, "find-gates", "--cache-dir", str(cache))
    assert code == cli.EXIT_CONFIG
    empty = tmp_path / "cands.json"
    empty.write_text("[]")
    code, res = run(capsys, "find-gates", "--cache-dir", str(cache), "--p", "3", "--bound", "10",
                    "--candidates", str(empty))
    assert code == 0 and res["gates"] == 0


def test_explore_inert_star(capsys, cache):
    code, res = run(capsys, "explore", "--cache-dir", str(cache), "--p", "3", "--n", "5")
    assert code == 0 and res["complete"] is False and res["violations"] == []


@pytest.mark.parametrize("toy", cli.TOYS)
def test_build_toy_and_validate(capsys, tmp_path, toy):
    code, res = run(capsys, "build-toy", "--toy", toy, "--cache-dir", str(tmp_path))
    assert code == 0 and res["matches_oracle"]
    first = (tmp_path / f"toy_{toy}.jsonl").read_bytes()
    run(capsys, "build-toy", "--toy", toy, "--cache-dir", str(tmp_path))
    assert (tmp_path / f"toy_{toy}.jsonl").read_bytes() == first
    code, res = run(capsys, "validate", "--toy", toy)
    assert code == 0 and res["ok"]


def test_build_order_uses_cache(capsys, cache):
    code, res = run(capsys, "build-order", "--cache-dir", str(cache))
    assert code == 0 and "cached" in res


@pytest.mark.slow
def test_verify_order_reports_iota_failure(capsys, cache):
    code, res = run(capsys, "verify-order", "--cache-dir", str(cache))
    assert code == cli.EXIT_MATH
    assert res["check"] == "verify-order" and "iota_stable" in res["detail"]
