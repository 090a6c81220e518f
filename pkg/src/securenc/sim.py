"""Seeded experiment campaigns over the coding schemes.

``run(config)`` executes one scenario and returns a summary plus one record
per trial.  Trial i draws everything from ``default_rng(trial_seed(seed, i))``
so any single trial can be replayed on its own, and the output depends only
on the configuration.
"""

from __future__ import annotations

import csv
import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable

import numpy as np

from .channel import CodeParams, cut_attack_strategy, no_adversary, random_jam_strategy, transmit
from .error_control import DecodeFailure, ec_decode, ec_encode, ec_hash, failure_bound, hash_length
from .fields import extension
from .full_scheme import FullCodeLayout, LayoutError, full_decode, full_encode, rate_report
from .full_scheme import error_bound as full_error_bound
from .legacy import (AMBIGUOUS, AttackInfeasible, legacy_decode, legacy_encode, mimic_mode,
                     mimic_strategy, pad_to_channel, sample_hash_pair)
from .linalg import Matrix, hstack, random_matrix, rank
from .rank_codes import build_codebook
from .secrecy import secrecy_audit
from .secret_bit import (bit_decision, bit_encode, full_rank_probability, lemma1_outcomes,
                         residual_rank)

SCENARIOS = ("secret_bit_error", "full_scheme_error", "ec_layer_error", "secrecy_audit",
             "lemma1", "legacy_attack", "rate_sweep")
ADVERSARIES = ("none", "random_jam", "cut_attack", "mixed", "mimic")
ASYMPTOTIC = "asymptotic, constant unknown"
# exhaustive scenarios refuse to enumerate more than this many objects
ENUMERATION_LIMIT = 2_000_000
SWEEP_POINTS = 13


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    scenario: str
    params: CodeParams
    trials: int = 1000
    seed: int = 0
    adversary: str | None = None
    output_path: Path | None = None
    fmt: str = "csv"
    bit: int | None = None
    mu: int = 0
    delta: int = 0

    def __post_init__(self):
        if self.adversary is None:
            self.adversary = default_adversary(self.scenario)

    def validate(self) -> None:
        if self.scenario not in SCENARIOS:
            raise ConfigError(f"unknown scenario {self.scenario!r}; choose from {', '.join(SCENARIOS)}")
        if self.adversary not in ADVERSARIES:
            raise ConfigError(f"unknown adversary {self.adversary!r}; choose from {', '.join(ADVERSARIES)}")
        if self.trials < 1:
            raise ConfigError(f"trials must be positive, got {self.trials}")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError(f"seed must fit in 64 unsigned bits, got {self.seed}")
        if self.fmt not in ("csv", "jsonl"):
            raise ConfigError(f"format must be csv or jsonl, got {self.fmt!r}")
        if self.bit not in (None, 0, 1):
            raise ConfigError(f"bit must be 0 or 1, got {self.bit!r}")
        if self.adversary == "mimic" and self.scenario != "legacy_attack":
            raise ConfigError("the mimic adversary only applies to legacy_attack")
        if self.scenario == "legacy_attack" and self.adversary not in ("none", "mimic"):
            raise ConfigError("legacy_attack supports adversary none or mimic")
        check = _FEASIBILITY.get(self.scenario)
        if check:
            check(self)


def default_adversary(scenario: str) -> str:
    return {"secret_bit_error": "mixed", "full_scheme_error": "random_jam",
            "ec_layer_error": "random_jam", "legacy_attack": "mimic"}.get(scenario, "none")


def default_length(scenario: str, C: int, Z_I: int, Z_O: int, q: int) -> int:
    """Packet length used when the configuration leaves n unset."""
    if scenario == "secret_bit_error":
        return C * (1 + C - Z_I)
    if scenario in ("full_scheme_error", "rate_sweep"):
        return FullCodeLayout.smallest(C, Z_I, Z_O, q).params.n
    if scenario == "ec_layer_error":
        return 32
    if scenario == "secrecy_audit":
        return 2 * C
    if scenario == "legacy_attack":
        return C * C
    return C


# -- feasibility predicates ------------------------------------------------------

def _need(cond: bool, message: str):
    if not cond:
        raise ConfigError(message)


def _check_secret_bit(cfg):
    p = cfg.params
    _need(p.secret_bit_feasible, f"secret bit needs C > Z_I + Z_O, got C={p.C}, Z_I+Z_O={p.Z_I + p.Z_O}")
    width = p.C * (1 + p.C - p.Z_I)
    _need(p.n >= width, f"secret bit needs n >= C(1 + C - Z_I) = {width}, got n={p.n}")


def _check_full(cfg):
    try:
        FullCodeLayout(cfg.params)
    except LayoutError as exc:
        raise ConfigError(str(exc)) from None


def _check_ec(cfg):
    p = cfg.params
    _need(p.C > p.Z_O, f"error control needs C > Z_O, got C={p.C}, Z_O={p.Z_O}")
    _need(p.n > p.C - p.Z_O, f"error control needs n > C - Z_O = {p.C - p.Z_O}, got n={p.n}")


def _check_audit(cfg):
    p = cfg.params
    _need(p.Z_I < p.C, f"secrecy needs Z_I < C, got Z_I={p.Z_I}, C={p.C}")
    _need(p.n % p.C == 0 and p.n // p.C >= 2, f"secrecy audit needs n = C(1 + n') with n' >= 1, got n={p.n}")
    n_prime = p.n // p.C - 1
    Q = p.q ** p.C
    count = p.q ** (p.Z_I * p.C) * Q ** (p.C * n_prime)
    _need(count <= ENUMERATION_LIMIT,
          f"secrecy audit would enumerate {count} cases, limit {ENUMERATION_LIMIT}")


def _check_lemma1(cfg):
    p = cfg.params
    Cp = p.C - p.Z_I
    _need(Cp >= 1, f"lemma1 needs C > Z_I, got C={p.C}, Z_I={p.Z_I}")
    _need(0 <= cfg.mu <= Cp and 0 <= cfg.delta <= Cp, f"lemma1 needs 0 <= mu, delta <= C - Z_I = {Cp}")


def _check_legacy(cfg):
    p = cfg.params
    _need(p.C - p.Z_O >= 2, f"legacy scheme needs C - Z_O >= 2, got {p.C - p.Z_O}")
    _need(p.q > p.C * p.C, f"legacy hash needs q > C^2 = {p.C * p.C}, got q={p.q}")
    _need(p.n == p.C * p.C, f"legacy scheme sends C^2 = {p.C * p.C} symbols per packet, got n={p.n}")
    if cfg.adversary == "mimic":
        try:
            mimic_mode(p)
        except AttackInfeasible as exc:
            raise ConfigError(f"mimic attack infeasible: {exc}") from None


_FEASIBILITY: dict[str, Callable] = {
    "secret_bit_error": _check_secret_bit,
    "full_scheme_error": _check_full,
    "rate_sweep": _check_full,
    "ec_layer_error": _check_ec,
    "secrecy_audit": _check_audit,
    "lemma1": _check_lemma1,
    "legacy_attack": _check_legacy,
}


# -- helpers -----------------------------------------------------------------------

def trial_seed(seed: int, trial: int) -> int:
    """Fixed splitting rule: 64 bits of SeedSequence([seed, trial])."""
    return int(np.random.SeedSequence([seed, trial]).generate_state(1, np.uint64)[0])


def trial_rngs(seed: int, trials: int):
    for i in range(trials):
        s = trial_seed(seed, i)
        yield i, s, np.random.default_rng(s)


def make_strategy(name: str, trial: int, params: CodeParams, rng: np.random.Generator):
    if name == "mixed":
        name = "random_jam" if trial % 2 == 0 else "cut_attack"
    if name == "none":
        return no_adversary()
    if name == "random_jam":
        return random_jam_strategy(params)
    return cut_attack_strategy(params, rng)


def pad_columns(X: Matrix, n: int) -> Matrix:
    if X.ncols == n:
        return X
    return hstack(X, Matrix.zeros(X.field, X.nrows, n - X.ncols))


def matrix_hex(M: Matrix) -> str:
    """Rows separated by ';', entries by ','; each entry in bare hex."""
    to_hex = M.field.to_hex
    return ";".join(",".join(to_hex(v) for v in row) for row in M.rows)


def three_sigma_band(p: float, trials: int) -> float:
    return p + 3 * math.sqrt(p * (1 - p) / trials)


def _bound_fields(bound: float | Fraction, label: str, exact: str | None = None) -> dict:
    out = {"bound": float(min(bound, 1)), "bound_label": label}
    if exact is not None:
        out["bound_exact"] = exact
    return out


@dataclass
class RunResult:
    config: ExperimentConfig
    columns: list[str]
    records: list[dict]
    summary: dict = field(default_factory=dict)


# -- scenarios -----------------------------------------------------------------------

def _secret_bit(cfg: ExperimentConfig) -> RunResult:
    p = cfg.params
    ext = extension(p.field, p.C)
    cb = build_codebook(p.C, p.Z_I, ext)
    records = []
    sent = {0: 0, 1: 0}
    errors = {0: 0, 1: 0}
    failures = invariant_violations = 0
    for i, s, rng in trial_rngs(cfg.seed, cfg.trials):
        bit = cfg.bit if cfg.bit is not None else int(rng.integers(2))
        cw = bit_encode(bit, cb, rng)
        strategy = make_strategy(cfg.adversary, i, p, rng)
        Y, _, _ = transmit(pad_columns(cw.X, p.n), p, strategy, rng)
        sent[bit] += 1
        try:
            dec = bit_decision(Y, cb)
        except DecodeFailure as exc:
            failures += 1
            errors[bit] += 1
            records.append(dict(trial=i, seed=s, sent_bit=bit, decoded_bit="", mu="", delta="",
                                outcome=f"failure:{exc.reason}"))
            continue
        mu, delta = dec.reduction.mu, dec.reduction.delta
        eps = residual_rank(dec, cw.x, cb)
        if mu > p.Z_O or delta > p.Z_O or eps > p.Z_O - max(mu, delta):
            invariant_violations += 1
        ok = dec.bit == bit
        errors[bit] += not ok
        records.append(dict(trial=i, seed=s, sent_bit=bit, decoded_bit=dec.bit, mu=mu, delta=delta,
                            outcome="ok" if ok else "error"))
    bound = Fraction(cb.redundancy, ext.order)
    rate1 = errors[1] / sent[1] if sent[1] else 0.0
    band = three_sigma_band(float(bound), max(sent[1], 1))
    summary = {
        "trials": cfg.trials, "trials_bit0": sent[0], "trials_bit1": sent[1],
        "errors_bit0": errors[0], "errors_bit1": errors[1], "failures": failures,
        "empirical": (errors[0] + errors[1]) / cfg.trials, "empirical_bit1": rate1,
        "invariant_violations": invariant_violations,
        **_bound_fields(bound, "exact upper bound for bit 1; bit 0 is never wrong", str(bound)),
        "band": band,
        "pass": errors[0] == 0 and rate1 <= band and invariant_violations == 0,
    }
    cols = ["trial", "seed", "sent_bit", "decoded_bit", "mu", "delta", "outcome"]
    return RunResult(cfg, cols, records, summary)


def _full_scheme(cfg: ExperimentConfig) -> RunResult:
    layout = FullCodeLayout(cfg.params)
    p = layout.params
    layout.bit_codebook, layout.message_codebook  # build once, outside the trial loop
    records = []
    counts = {"ok": 0, "wrong": 0, "failure": 0}
    for i, s, rng in trial_rngs(cfg.seed, cfg.trials):
        S = random_matrix(layout.R, layout.n_prime, layout.ext, rng)
        X = full_encode(S, layout, rng)
        Y, _, _ = transmit(X, p, make_strategy(cfg.adversary, i, p, rng), rng)
        try:
            outcome = "ok" if full_decode(Y, layout) == S else "wrong"
            stage = ""
        except DecodeFailure as exc:
            outcome, stage = "failure", f"{exc.stage}:{exc.reason}"
        counts[outcome] += 1
        records.append(dict(trial=i, seed=s, outcome=outcome, stage=stage))
    rates = rate_report(layout)
    empirical = (counts["wrong"] + counts["failure"]) / cfg.trials
    bound = full_error_bound(layout)
    summary = {
        "trials": cfg.trials, **counts, "empirical": empirical,
        **_bound_fields(bound, ASYMPTOTIC),
        "k": layout.k, "n_prime": layout.n_prime,
        **{name: float(v) for name, v in rates.items()},
        **{f"{name}_exact": str(v) for name, v in rates.items()},
        "pass": counts["wrong"] == 0 and empirical <= min(bound, 1.0),
    }
    return RunResult(cfg, ["trial", "seed", "outcome", "stage"], records, summary)


def _ec_layer(cfg: ExperimentConfig) -> RunResult:
    p = cfg.params
    F = p.field
    b = p.C - p.Z_O
    records = []
    counts = {"ok": 0, "wrong": 0, "failure": 0}
    for i, s, rng in trial_rngs(cfg.seed, cfg.trials):
        M = random_matrix(b, p.n - b, F, rng)
        secret = ec_hash(M, p, rng)
        Y, _, _ = transmit(ec_encode(M, p), p, make_strategy(cfg.adversary, i, p, rng), rng)
        reason = ""
        try:
            outcome = "ok" if ec_decode(Y, secret, p) == M else "wrong"
        except DecodeFailure as exc:
            outcome, reason = "failure", exc.reason
        counts[outcome] += 1
        records.append(dict(trial=i, seed=s, outcome=outcome, reason=reason))
    bound = failure_bound(p.n, p)
    empirical = counts["failure"] / cfg.trials
    summary = {
        "trials": cfg.trials, **counts, "empirical": empirical, "alpha": hash_length(p),
        **_bound_fields(bound, "upper bound n^alpha/q"),
        "band": three_sigma_band(min(bound, 1.0), cfg.trials),
        "pass": counts["wrong"] == 0 and empirical <= three_sigma_band(min(bound, 1.0), cfg.trials),
    }
    return RunResult(cfg, ["trial", "seed", "outcome", "reason"], records, summary)


def _audit(cfg: ExperimentConfig) -> RunResult:
    p = cfg.params
    cb = build_codebook(p.C, p.Z_I, extension(p.field, p.C))
    report = secrecy_audit(cb, p)
    records = [dict(trial=i, wiretap=matrix_hex(B), violations=v)
               for i, (B, v) in enumerate(report.per_wiretap)]
    summary = {
        "wiretaps": report.wiretaps, "messages": report.messages, "keys": report.keys,
        "violation_count": report.violation_count, "empirical": report.violation_count,
        **_bound_fields(0, "exact: no wiretap view may depend on the message", "0"),
        "pass": report.secure,
    }
    return RunResult(cfg, ["trial", "wiretap", "violations"], records, summary)


def _lemma1(cfg: ExperimentConfig) -> RunResult:
    p = cfg.params
    ext = extension(p.field, p.C)
    Cp = p.C - p.Z_I
    expected = full_rank_probability(Cp - cfg.mu, Cp - cfg.delta, ext.order)
    bound = 1 - Fraction(Cp, ext.order)
    records = []
    hits = 0
    if ext.order ** (Cp * Cp) <= 65536:
        method = "census"
        for i, ok in enumerate(lemma1_outcomes(Cp, cfg.mu, cfg.delta, ext)):
            hits += ok
            records.append(dict(trial=i, seed="", full_rank=int(ok)))
        total = len(records)
        measured = Fraction(hits, total)
        passed = measured == expected and measured >= bound
    else:
        method = "monte_carlo"
        J = Matrix(ext, [[int(i == j) for j in range(Cp)] for i in range(Cp - cfg.mu)], Cp)
        K = Matrix(ext, [[int(i == j) for j in range(Cp - cfg.delta)] for i in range(Cp)], Cp - cfg.delta)
        full = min(J.nrows, K.ncols)
        for i, s, rng in trial_rngs(cfg.seed, cfg.trials):
            ok = rank(J @ random_matrix(Cp, Cp, ext, rng) @ K) == full
            hits += ok
            records.append(dict(trial=i, seed=s, full_rank=int(ok)))
        total = cfg.trials
        measured = Fraction(hits, total)
        pe = float(expected)
        sigma = math.sqrt(pe * (1 - pe) / total)
        passed = abs(float(measured) - pe) <= 3 * sigma + 1 / total
    summary = {
        "method": method, "samples": total, "full_rank": hits,
        "empirical": float(measured), "empirical_exact": str(measured),
        "expected": float(expected), "expected_exact": str(expected),
        "bound": float(bound), "bound_exact": str(bound), "bound_label": "exact lower bound 1 - C'/Q",
        "pass": passed,
    }
    return RunResult(cfg, ["trial", "seed", "full_rank"], records, summary)


def _legacy(cfg: ExperimentConfig) -> RunResult:
    p = cfg.params
    pair = sample_hash_pair(p, np.random.default_rng(np.random.SeedSequence([cfg.seed])))
    bit_default = 0 if cfg.adversary == "mimic" else None
    records = []
    counts = {"correct": 0, "misled": 0, "ambiguous": 0}
    for i, s, rng in trial_rngs(cfg.seed, cfg.trials):
        bit = cfg.bit if cfg.bit is not None else bit_default
        if bit is None:
            bit = int(rng.integers(2))
        strategy = mimic_strategy(p, pair) if cfg.adversary == "mimic" else no_adversary()
        X = pad_to_channel(legacy_encode(bit, pair, rng), p)
        Y, _, _ = transmit(X, p, strategy, rng)
        out = legacy_decode(Y, pair)
        outcome = "ambiguous" if out == AMBIGUOUS else ("correct" if out == bit else "misled")
        counts[outcome] += 1
        records.append(dict(trial=i, seed=s, sent_bit=bit, decoded=out, outcome=outcome))
    success = counts["correct"] / cfg.trials
    summary = {"trials": cfg.trials, **counts, "honest_success_rate": success,
               "attack_success_rate": 1 - success}
    if cfg.adversary == "mimic":
        summary["mode"] = mimic_mode(p)
        summary["pass"] = summary["attack_success_rate"] >= 0.99
    else:
        summary["pass"] = success >= 0.99
    return RunResult(cfg, ["trial", "seed", "sent_bit", "decoded", "outcome"], records, summary)


def _rate_sweep(cfg: ExperimentConfig) -> RunResult:
    p = cfg.params
    base = FullCodeLayout(p)
    records = []
    # the configured layout first, then payload widths 1, 2, 4, ..., 4096
    for n_prime in itertools.chain([base.n_prime], (2 ** j for j in range(SWEEP_POINTS))):
        layout = FullCodeLayout.smallest(p.C, p.Z_I, p.Z_O, p.q, n_prime)
        r = rate_report(layout)
        records.append(dict(n=layout.params.n, n_prime=n_prime, k=layout.k,
                            gross_rate=str(r["gross_rate"]), net_rate=float(r["net_rate"]),
                            net_rate_exact=str(r["net_rate"]), rate_loss=float(r["rate_loss"])))
    head, sweep = records[0], sorted(records[1:], key=lambda r: r["n"])
    losses = [r["rate_loss"] for r in sweep]
    summary = {
        "n": head["n"], "net_rate": head["net_rate"], "net_rate_exact": head["net_rate_exact"],
        "gross_rate": head["gross_rate"], "rate_loss": head["rate_loss"],
        "pass": all(a > b for a, b in zip(losses, losses[1:])),
    }
    return RunResult(cfg, list(records[0]), [head] + sweep, summary)


_RUNNERS = {
    "secret_bit_error": _secret_bit,
    "full_scheme_error": _full_scheme,
    "ec_layer_error": _ec_layer,
    "secrecy_audit": _audit,
    "lemma1": _lemma1,
    "legacy_attack": _legacy,
    "rate_sweep": _rate_sweep,
}


def run(config: ExperimentConfig) -> RunResult:
    config.validate()
    result = _RUNNERS[config.scenario](config)
    p = config.params
    result.summary = {
        "scenario": config.scenario, "C": p.C, "Z_I": p.Z_I, "Z_O": p.Z_O, "q": p.q, "n": p.n,
        "modulus": f"{p.field.modulus:#x}", "seed": config.seed, "adversary": config.adversary,
        **result.summary,
    }
    return result


# -- output ---------------------------------------------------------------------------

def emit(records: list[dict], columns: list[str], path: Path, fmt: str = "csv") -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        if fmt == "csv":
            writer = csv.DictWriter(fh, fieldnames=columns, lineterminator="\n")
            writer.writeheader()
            writer.writerows(records)
        elif fmt == "jsonl":
            for rec in records:
                fh.write(json.dumps({c: rec[c] for c in columns}) + "\n")
        else:
            raise ValueError(f"unknown format {fmt!r}")
    return path


def summary_path(out: Path) -> Path:
    out = Path(out)
    return out.with_name(out.stem + ".summary.json")


def write_summary(summary: dict, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    return path


# -- configuration files ------------------------------------------------------------------

def parse_q(text: str, n: int | None = None) -> int:
    """Accept ``2^m``, a plain power of two, or ``sqrt`` (2^floor(sqrt(n)))."""
    text = text.strip()
    if text == "sqrt":
        if n is None:
            raise ConfigError("q = sqrt needs n")
        return 2 ** math.isqrt(n)
    try:
        if text.startswith("2^"):
            q = 2 ** int(text[2:])
        else:
            q = int(text, 0)
    except ValueError:
        raise ConfigError(f"cannot read field size {text!r}; write it as 2^m") from None
    if q < 2 or q & (q - 1):
        raise ConfigError(f"field size must be a power of two, got {q}")
    return q


def read_config_file(path: Path) -> dict[str, str]:
    """Flat ``key = value`` lines; '#' starts a comment."""
    out = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        out[key.strip()] = value.strip()
    return out


CONFIG_KEYS = ("scenario", "C", "ZI", "ZO", "q", "n", "trials", "seed", "adversary", "out",
               "format", "bit", "mu", "delta", "modulus")


def build_config(values: dict[str, str | int | None], default_dir: Path) -> ExperimentConfig:
    """Turn merged file/CLI values (strings or ints) into a validated-ready config."""
    unknown = set(values) - set(CONFIG_KEYS)
    if unknown:
        raise ConfigError(f"unknown configuration keys: {', '.join(sorted(unknown))}")

    def get_int(key, default=None):
        v = values.get(key)
        if v is None or v == "":
            return default
        try:
            return int(v, 0) if isinstance(v, str) else int(v)
        except ValueError:
            raise ConfigError(f"{key} must be an integer, got {v!r}") from None

    scenario = values.get("scenario")
    if not scenario:
        raise ConfigError("scenario is required")
    C, Z_I, Z_O = get_int("C", 3), get_int("ZI", 1), get_int("ZO", 1)
    q_text = str(values.get("q") or "2^4")
    n = get_int("n")
    if q_text.strip() == "sqrt" and n is None:
        raise ConfigError("q = sqrt needs an explicit n")
    q = parse_q(q_text, n)
    modulus = values.get("modulus")
    if modulus not in (None, ""):
        try:
            modulus = int(str(modulus), 16)
        except ValueError:
            raise ConfigError(f"modulus must be hex, got {modulus!r}") from None
    else:
        modulus = None
    try:
        if n is None:
            n = default_length(scenario, C, Z_I, Z_O, q)
        params = CodeParams(C, Z_I, Z_O, q, n, modulus)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    fmt = str(values.get("format") or "csv")
    out = values.get("out")
    out = Path(out) if out else Path(default_dir) / f"{scenario}.{fmt}"
    cfg = ExperimentConfig(
        scenario=str(scenario), params=params, trials=get_int("trials", 1000),
        seed=get_int("seed", 0), adversary=values.get("adversary") or None, output_path=out,
        fmt=fmt, bit=get_int("bit"), mu=get_int("mu", 0), delta=get_int("delta", 0))
    return cfg
