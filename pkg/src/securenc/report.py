"""Figures for experiment results, rendered to files with the Agg backend."""

from __future__ import annotations

from collections import Counter
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

STYLE = {
    "figure.figsize": (7.0, 3.2),
    "font.size": 9,
    "axes.titlesize": 9,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "savefig.dpi": 120,
}


def _outcome_bars(ax, records, key="outcome"):
    counts = Counter(str(r[key]) for r in records)
    labels = sorted(counts)
    ax.bar(labels, [counts[k] for k in labels], color="0.45")
    ax.set_ylabel("trials")
    for i, k in enumerate(labels):
        ax.annotate(str(counts[k]), (i, counts[k]), ha="center", va="bottom", fontsize=8)


def _rate_panel(ax, summary, rate_key="empirical"):
    emp, bound = summary[rate_key], summary["bound"]
    ax.bar(["empirical", "bound"], [emp, bound], color=["0.3", "0.7"])
    ax.set_yscale("symlog", linthresh=1e-6)
    ax.set_title(summary.get("bound_label", ""))


def _secret_bit(fig, result):
    a1, a2 = fig.subplots(1, 2)
    s = result.summary
    _rate_panel(a1, s, "empirical_bit1")
    if "band" in s:
        a1.axhline(s["band"], ls="--", lw=0.8, color="k")
    a1.set_ylabel("bit-1 error rate")
    pairs = Counter((r["mu"], r["delta"]) for r in result.records if r["mu"] != "")
    labels = sorted(pairs)
    a2.bar([f"{m},{d}" for m, d in labels], [pairs[k] for k in labels], color="0.45")
    a2.set_xlabel("(mu, delta)")
    a2.set_ylabel("trials")


def _failure_rate(fig, result):
    a1, a2 = fig.subplots(1, 2)
    _outcome_bars(a1, result.records)
    _rate_panel(a2, result.summary)
    a2.set_ylabel("failure rate")


def _audit(fig, result):
    ax = fig.subplots()
    ax.stem(range(len(result.records)), [r["violations"] for r in result.records])
    ax.set_xlabel("wiretap index")
    ax.set_ylabel("message-dependent views")


def _lemma1(fig, result):
    ax = fig.subplots()
    s = result.summary
    ax.bar(["measured", "exact", "lower bound"], [s["empirical"], s["expected"], s["bound"]],
           color=["0.3", "0.5", "0.75"])
    ax.set_ylim(min(s["bound"], s["empirical"]) * 0.95, 1.0)
    ax.set_ylabel("P[full rank]")
    ax.set_title(s["method"])


def _legacy(fig, result):
    ax = fig.subplots()
    _outcome_bars(ax, result.records)
    ax.set_title(f"adversary: {result.summary['adversary']}")


def _rate_sweep(fig, result):
    ax = fig.subplots()
    rows = result.records[1:]
    ns = [r["n"] for r in rows]
    ax.plot(ns, [r["net_rate"] for r in rows], marker="o", ms=3, label="net rate")
    ax.plot(ns, [r["rate_loss"] for r in rows], marker="s", ms=3, label="rate loss")
    ax.axhline(float(result.summary["gross_rate"]), ls="--", lw=0.8, color="k", label="C - Z_O - Z_I")
    ax.set_xscale("log")
    ax.set_xlabel("packet length n")
    ax.legend(frameon=False)


_PLOTTERS = {
    "secret_bit_error": _secret_bit,
    "full_scheme_error": _failure_rate,
    "ec_layer_error": _failure_rate,
    "secrecy_audit": _audit,
    "lemma1": _lemma1,
    "legacy_attack": _legacy,
    "rate_sweep": _rate_sweep,
}


def render(result, path: Path) -> Path:
    """Draw the scenario's figure into ``path`` (PNG, no timestamp metadata)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with plt.rc_context(STYLE):
        fig = plt.figure()
        _PLOTTERS[result.config.scenario](fig, result)
        p = result.summary
        fig.suptitle(f"{p['scenario']}  C={p['C']} Z_I={p['Z_I']} Z_O={p['Z_O']} q={p['q']} n={p['n']}")
        fig.tight_layout()
        fig.savefig(path, metadata={"Software": None})
        plt.close(fig)
    return path
