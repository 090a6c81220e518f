import csv
import json
from fractions import Fraction

import numpy as np
import pytest

from securenc.channel import CodeParams
from securenc.sim import (ConfigError, ExperimentConfig, build_config, default_adversary, emit,
                          make_strategy, matrix_hex, parse_q, read_config_file, run, summary_path,
                          trial_seed, write_summary)
from securenc.linalg import Matrix


def _cfg(scenario, tmp_path, trials=20, **kw):
    values = {"scenario": scenario, "trials": trials, **kw}
    return build_config(values, tmp_path)


def test_trial_seed_is_a_fixed_rule():
    expected = int(np.random.SeedSequence([7, 3]).generate_state(1, np.uint64)[0])
    assert trial_seed(7, 3) == expected
    assert trial_seed(7, 3) != trial_seed(7, 4) != trial_seed(8, 3)


def test_mixed_adversary_alternates():
    p = CodeParams(3, 1, 1, 16, 9)
    rng = np.random.default_rng(0)
    assert make_strategy("mixed", 0, p, rng).kind == "random_jam"
    assert make_strategy("mixed", 1, p, rng).kind == "cut_attack"
    assert make_strategy("none", 0, p, rng).kind == "none"


@pytest.mark.parametrize("text,q", [("2^4", 16), ("2^16", 2 ** 16), ("8", 8), ("0x100", 256)])
def test_parse_q(text, q):
    assert parse_q(text) == q


def test_parse_q_sqrt_and_errors():
    assert parse_q("sqrt", 17) == 2 ** 4
    for bad in ("12", "2^x", "1", "sqrt"):
        with pytest.raises(ConfigError):
            parse_q(bad)


def test_config_file_and_overrides(tmp_path):
    f = tmp_path / "exp.cfg"
    f.write_text("# secret bit at q=2^8\nscenario = secret_bit_error\nq = 2^8\ntrials=50\n\nseed = 9  # fixed\n")
    values = read_config_file(f)
    assert values == {"scenario": "secret_bit_error", "q": "2^8", "trials": "50", "seed": "9"}
    values["trials"] = 7
    cfg = build_config(values, tmp_path)
    assert (cfg.params.q, cfg.trials, cfg.seed, cfg.params.n) == (256, 7, 9, 9)
    assert cfg.adversary == "mixed"
    assert cfg.output_path == tmp_path / "secret_bit_error.csv"


def test_bad_config_lines(tmp_path):
    f = tmp_path / "bad.cfg"
    f.write_text("scenario secret_bit_error\n")
    with pytest.raises(ConfigError):
        read_config_file(f)
    with pytest.raises(ConfigError):
        build_config({"scenario": "lemma1", "colour": "red"}, tmp_path)
    with pytest.raises(ConfigError):
        build_config({"scenario": "lemma1", "trials": "many"}, tmp_path)
    with pytest.raises(ConfigError):
        build_config({"C": 3}, tmp_path)


def test_explicit_modulus(tmp_path):
    cfg = _cfg("ec_layer_error", tmp_path, q="2^8", modulus="11d", n=12)
    assert cfg.params.field.modulus == 0x11D
    assert run(cfg).summary["modulus"] == "0x11d"
    with pytest.raises(ConfigError):
        _cfg("ec_layer_error", tmp_path, q="2^8", modulus="zz")


@pytest.mark.parametrize("values", [
    {"scenario": "nope"},
    {"scenario": "secret_bit_error", "ZI": 1, "ZO": 2},
    {"scenario": "secret_bit_error", "n": 6},
    {"scenario": "full_scheme_error", "n": 601},
    {"scenario": "legacy_attack", "C": 4, "ZI": 1, "ZO": 1, "q": "2^16"},
    {"scenario": "legacy_attack", "C": 3, "ZI": 0, "ZO": 2, "q": "2^16"},
    {"scenario": "legacy_attack", "q": "2^3"},
    {"scenario": "secret_bit_error", "adversary": "mimic"},
    {"scenario": "secrecy_audit", "q": "2^4", "C": 3},
    {"scenario": "lemma1", "mu": 3},
    {"scenario": "lemma1", "trials": 0},
    {"scenario": "lemma1", "format": "xml"},
])
def test_infeasible_configurations_are_config_errors(values, tmp_path):
    with pytest.raises(ConfigError):
        run(build_config(values, tmp_path))


def test_default_adversaries():
    assert default_adversary("secret_bit_error") == "mixed"
    assert default_adversary("legacy_attack") == "mimic"
    assert default_adversary("lemma1") == "none"


def test_secret_bit_summary_q256(tmp_path):
    res = run(_cfg("secret_bit_error", tmp_path, q="2^8", trials=200))
    s = res.summary
    assert s["bound_exact"] == str(Fraction(2, 2 ** 24))
    assert s["errors_bit0"] == 0 and s["invariant_violations"] == 0
    assert s["trials_bit0"] + s["trials_bit1"] == 200
    assert s["pass"] is True
    assert res.columns == ["trial", "seed", "sent_bit", "decoded_bit", "mu", "delta", "outcome"]
    assert {r["outcome"] for r in res.records} == {"ok"}


def test_lemma1_census_scenario(tmp_path):
    s = run(_cfg("lemma1", tmp_path, q="2", C=3, ZI=1)).summary
    assert s["method"] == "census" and s["samples"] == 4096
    assert s["empirical_exact"] == str(Fraction(7, 8) * Fraction(63, 64))
    assert s["pass"]


def test_lemma1_monte_carlo_scenario(tmp_path):
    s = run(_cfg("lemma1", tmp_path, q="2^8", C=3, ZI=1, trials=2000, mu=1)).summary
    assert s["method"] == "monte_carlo" and s["pass"]


def test_audit_scenario(tmp_path):
    res = run(_cfg("secrecy_audit", tmp_path, q="2", C=3, ZI=1, ZO=0))
    assert res.summary["pass"] and res.summary["wiretaps"] == 8
    assert len(res.records) == 8 and all(r["violations"] == 0 for r in res.records)


def test_legacy_attack_scenario(tmp_path):
    s = run(_cfg("legacy_attack", tmp_path, q="2^16", trials=100)).summary
    assert s["mode"] == "eavesdrop"
    assert s["attack_success_rate"] >= 0.99 and s["misled"] + s["ambiguous"] >= 99
    honest = run(_cfg("legacy_attack", tmp_path, q="2^16", trials=100, adversary="none")).summary
    assert honest["honest_success_rate"] >= 0.99


def test_rate_sweep(tmp_path):
    res = run(_cfg("rate_sweep", tmp_path, q="2^4", n=600))
    assert res.summary["net_rate_exact"] == "31/200"
    assert len(res.records) == 14 and res.summary["pass"]


def test_ec_and_full_scenarios(tmp_path):
    ec = run(_cfg("ec_layer_error", tmp_path, q="2^16", trials=30)).summary
    assert ec["wrong"] == 0 and ec["alpha"] == 7
    full = run(_cfg("full_scheme_error", tmp_path, q="2^4", n=600, trials=5, adversary="none")).summary
    assert full["net_rate_exact"] == "31/200" and full["wrong"] == 0


def test_emit_formats(tmp_path):
    cols = ["trial", "outcome"]
    recs = [{"trial": 0, "outcome": "ok"}, {"trial": 1, "outcome": "failure"}]
    p = emit(recs, cols, tmp_path / "a" / "r.csv")
    assert p.read_text() == "trial,outcome\n0,ok\n1,failure\n"
    with open(p) as fh:
        assert list(csv.DictReader(fh)) == [{"trial": "0", "outcome": "ok"}, {"trial": "1", "outcome": "failure"}]
    assert emit([], cols, tmp_path / "empty.csv").read_text() == "trial,outcome\n"
    j = emit(recs, cols, tmp_path / "r.jsonl", "jsonl")
    assert [json.loads(line) for line in j.read_text().splitlines()] == recs
    with pytest.raises(ValueError):
        emit(recs, cols, tmp_path / "r.x", "xml")


def test_summary_files(tmp_path):
    assert summary_path(tmp_path / "run.csv") == tmp_path / "run.summary.json"
    p = write_summary({"b": 1, "a": 2}, tmp_path / "s.json")
    assert p.read_text() == '{\n  "a": 2,\n  "b": 1\n}\n'


def test_matrix_hex():
    from securenc.fields import gf2m
    F = gf2m(8)
    assert matrix_hex(Matrix(F, [[0x1F, 0], [1, 0xAB]])) == "1f,0;1,ab"


def test_runs_are_deterministic(tmp_path):
    for scenario, kw in [("secret_bit_error", {}), ("legacy_attack", {"q": "2^16"}),
                         ("ec_layer_error", {"q": "2^8"})]:
        a = run(_cfg(scenario, tmp_path, **kw))
        b = run(_cfg(scenario, tmp_path, **kw))
        assert a.records == b.records and a.summary == b.summary
        c = run(_cfg(scenario, tmp_path, seed=1, **kw))
        assert c.records != a.records


def test_experiment_config_defaults():
    cfg = ExperimentConfig("full_scheme_error", CodeParams(3, 1, 1, 16, 600))
    assert cfg.adversary == "random_jam" and cfg.trials == 1000 and cfg.seed == 0
