"""CSV tables and PNG figures: closed forms against the optimizer, construction convergence."""
from __future__ import annotations

import csv
from fractions import Fraction
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from . import blowup  # noqa: E402
from .rational import fmt  # noqa: E402
from .weighted_graph import BlowupSpec, part_sizes  # noqa: E402

_PNG_META = {"Software": None}


def _grid(steps: int) -> list[Fraction]:
    return [Fraction(k, steps) for k in range(steps + 1)]


def heavy_rows(steps: int) -> list[dict]:
    rows = []
    for a in _grid(steps)[1:]:
        sol = blowup.optimize_dF(blowup.heavy_family(a), [0, a, 1], t_cap=3)
        rows.append({"a": a, "closed_form": blowup.closed_form_heavy(a)[0], "optimizer": sol.density,
                     "t": sol.t})
    return rows


def matching_rows(steps: int, orders=(2, 3, 4, 5)) -> list[dict]:
    rows = []
    for r in orders:
        for a in _grid(steps):
            sol = blowup.optimize_dF(blowup.matching_family(r, a), [0, a, 1], t_cap=r)
            rows.append({"r": r, "a": a, "closed_form": blowup.closed_form_matching(r, a),
                         "optimizer": sol.density, "t": sol.t})
    return rows


def blowup_density(spec: BlowupSpec, n: int) -> Fraction:
    """Scaled weight of the n-vertex blow-up, from part sizes alone."""
    sizes = part_sizes(spec.x, n)
    acc = sum((w * sizes[i] * sizes[j] for (i, j), w in spec.f.items()), Fraction(0))
    return 2 * acc / (n * n)


def convergence_rows(max_mult: int) -> list[dict]:
    cases = [("rho512", {}, 19), ("rho614", {}, 23), ("rho411", {}, 7),
             ("bipartite_p6", {"p": 10}, 2), ("tripartite_p6", {"p": 12}, 3)]
    rows = []
    for name, params, period in cases:
        spec = blowup.named_spec(name, **params)
        for n in range(max(spec.t, 3), period * max_mult + 1):
            rows.append({"construction": name, "n": n, "density": blowup_density(spec, n),
                         "limit": spec.limit_density()})
    return rows


def _write_csv(path: Path, rows: list[dict]) -> None:
    with path.open("w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        for row in rows:
            w.writerow({k: (fmt(v) if isinstance(v, Fraction) else v)
                        for k, v in row.items()})


def _save(fig, path: Path) -> None:
    fig.savefig(path, dpi=110, metadata=_PNG_META)
    plt.close(fig)


def write_report(out: Path, quick: bool = False) -> list[Path]:
    out.mkdir(parents=True, exist_ok=True)
    steps = 4 if quick else 10
    written = []

    heavy = heavy_rows(steps)
    p = out / "heavy.csv"
    _write_csv(p, heavy)
    written.append(p)
    fig, ax = plt.subplots(figsize=(5, 3.5))
    xs = [k / 200 for k in range(1, 201)]
    ax.plot(xs, [2 / (4 - a) for a in xs], label="closed form 2/(4-a)")
    ax.plot([float(r["a"]) for r in heavy], [float(r["optimizer"]) for r in heavy], "o", label="optimizer")
    ax.set_xlabel("a")
    ax.set_ylabel("d(F)")
    ax.legend()
    fig.tight_layout()
    p = out / "heavy.png"
    _save(fig, p)
    written.append(p)

    match = matching_rows(steps)
    p = out / "matching.csv"
    _write_csv(p, match)
    written.append(p)
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for r in sorted({row["r"] for row in match}):
        pts = [row for row in match if row["r"] == r]
        fine = [Fraction(k, 100) for k in range(101)]
        line, = ax.plot([float(a) for a in fine],
                        [float(blowup.closed_form_matching(r, a)) for a in fine], label=f"r={r}")
        ax.plot([float(row["a"]) for row in pts], [float(row["optimizer"]) for row in pts], "o",
                color=line.get_color(), markersize=3)
    ax.set_xlabel("a")
    ax.set_ylabel("d(F)")
    ax.legend(fontsize=7)
    fig.tight_layout()
    p = out / "matching.png"
    _save(fig, p)
    written.append(p)

    conv = convergence_rows(2 if quick else 5)
    p = out / "convergence.csv"
    _write_csv(p, conv)
    written.append(p)
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for name in dict.fromkeys(row["construction"] for row in conv):
        pts = [row for row in conv if row["construction"] == name]
        line, = ax.plot([row["n"] for row in pts], [float(row["density"]) for row in pts], lw=0.8,
                        label=name)
        ax.axhline(float(pts[0]["limit"]), color=line.get_color(), ls=":", lw=0.8)
    ax.set_xscale("log")
    ax.set_xlabel("n")
    ax.set_ylabel("scaled weight")
    ax.legend(fontsize=7)
    fig.tight_layout()
    p = out / "convergence.png"
    _save(fig, p)
    written.append(p)
    return written
