#!/usr/bin/env python3
"""Render the TSV series emitted by `iqrip analyze --emit-plot-data`.

Given the report path passed to analyze as --out, this reads
<report>.hrep.tsv and <report>.trajectories.tsv and writes two PNGs next to
them: the per-window repetition-entropy curves (one line per sample, with the
loop-detection threshold drawn in) and the per-token loop trajectories
(probability, rank, and step entropy against appearance index).

Example:
    iqrip analyze --samples runs.jsonl --model model.json \
        --emit-plot-data --out report.json
    python3 tools/plot_analysis.py report.json
"""

import argparse
import collections
import csv
import pathlib
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def read_tsv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh, delimiter="\t"))


def plot_hrep(rows, threshold, out_path):
    by_sample = collections.defaultdict(list)
    for row in rows:
        by_sample[int(row["sample"])].append(
            (int(row["window_start"]), float(row["h_rep"]))
        )

    fig, ax = plt.subplots(figsize=(8, 4.5))
    for sample, points in sorted(by_sample.items()):
        points.sort()
        ax.plot(
            [p[0] for p in points],
            [p[1] for p in points],
            linewidth=1.0,
            alpha=0.8,
            label=f"sample {sample}" if len(by_sample) <= 8 else None,
        )
    ax.axhline(threshold, color="crimson", linestyle="--", linewidth=1.0,
               label="loop threshold")
    ax.set_xlabel("window start (token position)")
    ax.set_ylabel("window repetition entropy (nats)")
    ax.set_title("Sliding-window repetition entropy")
    if len(by_sample) <= 8:
        ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def plot_trajectories(rows, out_path):
    by_word = collections.defaultdict(list)
    for row in rows:
        key = row["word"] or f"token {row['word_id']}"
        by_word[key].append(
            (int(row["appearance"]), float(row["prob"]), int(row["rank"]),
             float(row["entropy"]))
        )

    fig, axes = plt.subplots(3, 1, figsize=(8, 9), sharex=True)
    for word, points in sorted(by_word.items()):
        points.sort()
        xs = [p[0] for p in points]
        axes[0].plot(xs, [p[1] for p in points], linewidth=1.0, label=word)
        axes[1].plot(xs, [p[2] for p in points], linewidth=1.0)
        axes[2].plot(xs, [p[3] for p in points], linewidth=1.0)
    axes[0].set_ylabel("token probability")
    axes[1].set_ylabel("rank")
    axes[1].set_yscale("log")
    axes[2].set_ylabel("step entropy (nats)")
    axes[2].set_xlabel("appearance index inside detected loops")
    axes[0].set_title("Loop-token trajectories")
    if len(by_word) <= 12:
        axes[0].legend(fontsize=8, ncol=2)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("report", help="report path given to analyze as --out")
    parser.add_argument("--threshold", type=float, default=2.0,
                        help="loop-detection entropy threshold to draw")
    args = parser.parse_args()

    base = pathlib.Path(args.report)
    hrep_path = base.with_name(base.name + ".hrep.tsv")
    traj_path = base.with_name(base.name + ".trajectories.tsv")
    if not hrep_path.exists():
        sys.exit(f"{hrep_path} not found; run analyze with --emit-plot-data")

    plot_hrep(read_tsv(hrep_path), args.threshold,
              base.with_name(base.name + ".hrep.png"))
    written = [base.with_name(base.name + ".hrep.png")]

    traj_rows = read_tsv(traj_path) if traj_path.exists() else []
    if traj_rows:
        plot_trajectories(traj_rows, base.with_name(base.name + ".trajectories.png"))
        written.append(base.with_name(base.name + ".trajectories.png"))

    for path in written:
        print(path)


if __name__ == "__main__":
    main()
