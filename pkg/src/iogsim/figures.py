"""Report figures rendered to files next to the delimited output."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .evaluation.benchmark import BenchmarkReport, ReportTable

_POLICY_ORDER = ("silent", "random", "aint_only", "literal", "prograsp")
_POLICY_LABEL = {
    "silent": "Silent",
    "random": "Random",
    "aint_only": "A-int only",
    "literal": "Literal",
    "prograsp": "Pragmatic",
}


def _default_round(table: ReportTable) -> int:
    rounds = [key[3] for key in table.rows if key[3] > 0]
    return max(rounds) if rounds else 0


def render_accuracy_figure(table: ReportTable, path: str, tau: float = 0.9) -> None:
    """Grouped bars: accuracy at tau per policy, one group per split."""
    budget = _default_round(table)
    splits = sorted({key[0] for key in table.rows})
    policies = [p for p in _POLICY_ORDER if any(key[1] == p for key in table.rows)]

    fig, ax = plt.subplots(figsize=(7.0, 4.0))
    width = 0.8 / max(len(policies), 1)
    for pi, policy in enumerate(policies):
        values = []
        for split in splits:
            row = None
            for key, candidate in table.rows.items():
                if key[0] == split and key[1] == policy and key[3] in (budget, 0):
                    row = candidate
            values.append(row.acc.get(tau, float("nan")) if row and row.acc else float("nan"))
        offsets = [si + (pi - (len(policies) - 1) / 2) * width for si in range(len(splits))]
        ax.bar(offsets, values, width=width, label=_POLICY_LABEL.get(policy, policy))
    ax.set_xticks(range(len(splits)))
    ax.set_xticklabels(splits)
    ax.set_ylabel(f"Acc@{tau:g}")
    ax.set_ylim(0, 1)
    ax.legend(fontsize=8)
    ax.set_title(f"Target identification accuracy (T={budget})")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_efficiency_figure(table: ReportTable, path: str) -> None:
    """Average interactions under early stopping, per policy and split."""
    budget = _default_round(table)
    splits = sorted({key[0] for key in table.rows})
    policies = [p for p in _POLICY_ORDER
                if p != "silent" and any(key[1] == p for key in table.rows)]

    fig, ax = plt.subplots(figsize=(7.0, 4.0))
    width = 0.8 / max(len(policies), 1)
    for pi, policy in enumerate(policies):
        values = []
        for split in splits:
            row = table.rows.get((split, policy,
                                  {"literal": 0.0, "aint_only": 1.0}.get(policy,
                                   0.9 if policy == "prograsp" else None), budget))
            values.append(row.avg_interactions if row and row.avg_interactions else float("nan"))
        offsets = [si + (pi - (len(policies) - 1) / 2) * width for si in range(len(splits))]
        ax.bar(offsets, values, width=width, label=_POLICY_LABEL.get(policy, policy))
    ax.set_xticks(range(len(splits)))
    ax.set_xticklabels(splits)
    ax.set_ylabel("Avg. interactions")
    ax.set_ylim(1, budget if budget > 1 else 3)
    ax.legend(fontsize=8)
    ax.set_title("Communicative efficiency (early stop at IoU 0.5)")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_sweep_figure(sweep_rows: list[dict], path: str, tau: float = 0.9) -> None:
    """Accuracy versus rationality, one line per round budget, with the
    per-budget oracle upper bound as a dashed guide."""
    budgets = sorted({row["T"] for row in sweep_rows})
    fig, ax = plt.subplots(figsize=(6.5, 4.2))
    for budget in budgets:
        rows = sorted((r for r in sweep_rows if r["T"] == budget), key=lambda r: r["lambda"])
        xs = [r["lambda"] for r in rows]
        ys = [r[f"acc_{tau:g}"] for r in rows]
        line, = ax.plot(xs, ys, marker="o", label=f"T={budget}")
        bounds = [r["upper_bound"] for r in rows]
        ax.plot(xs, bounds, linestyle="--", linewidth=0.9, alpha=0.5, color=line.get_color())
    ax.set_xlabel("rationality (answer-interpreter weight)")
    ax.set_ylabel(f"Acc@{tau:g}")
    ax.set_ylim(0, 1)
    ax.legend(fontsize=8)
    ax.set_title("Rationality and round-budget sweep (dashed: oracle bound)")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_report_figures(report: BenchmarkReport, out_prefix: str) -> list[str]:
    """Render the standard report figures; returns the written paths."""
    paths = []
    acc_path = f"{out_prefix}_accuracy.png"
    render_accuracy_figure(report.table, acc_path)
    paths.append(acc_path)
    eff_path = f"{out_prefix}_efficiency.png"
    render_efficiency_figure(report.table, eff_path)
    paths.append(eff_path)
    return paths
