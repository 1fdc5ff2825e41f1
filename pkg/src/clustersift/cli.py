"""Command line interface.

Three subcommands: ``select`` finds minimal variable subsets for a CSV
dataset, ``simulate`` runs the Monte Carlo studies on the built-in designs
(or the consistency probe), and ``plot`` renders figures from a select
report. Exit codes: 0 on success, 2 on usage or input validation problems,
3 when the algorithm itself reports failure (threshold unreachable or
enumeration over budget).
"""

from __future__ import annotations

import os
import sys
from pathlib import Path

import click
import numpy as np

from . import __version__
from .convergence import consistency_probe
from .exceptions import (
    ClusterSiftError,
    ThresholdUnreachableError,
    TooManySubsetsError,
)
from .kmeans import KMeansPartition
from .matrixio import read_matrix_csv
from .objective import STRATEGIES, SubsetEvaluator, exact_threshold
from .report import (
    RunManifest,
    build_select_report,
    file_sha256,
    render_selection_table,
    selection_entry,
    write_report,
    write_solutions_csv,
)
from .search import MODES, SearchConfig, run_search
from .simulate import DESIGNS, monte_carlo
from . import plotting

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_ALGORITHM = 3

THREADS_ENV = "CLUSTERSIFT_THREADS"


def _resolve_threads(threads: int | None) -> int:
    if threads is not None:
        return max(1, int(threads))
    env = os.environ.get(THREADS_ENV, "").strip()
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise click.UsageError(
                f"{THREADS_ENV} must be an integer, got {env!r}"
            ) from None
    return 1


def _parse_thresholds(texts) -> list[str]:
    for t in texts:
        try:
            exact_threshold(t)
        except (ValueError, TypeError, ZeroDivisionError):
            raise click.UsageError(
                f"threshold {t!r} is not a number in (0, 1]"
            ) from None
    return list(texts)


def _fail_validation(exc) -> None:
    click.echo(f"error: {exc}", err=True)
    sys.exit(EXIT_VALIDATION)


@click.group()
@click.version_option(version=__version__, prog_name="clustersift")
def main():
    """Variable selection for k-means partitions by blinding."""


@main.command()
@click.argument("input_csv", type=click.Path(exists=True, dir_okay=False))
@click.option("--output", "-o", required=True, type=click.Path(dir_okay=False),
              help="JSON report path; a .csv solutions table lands beside it.")
@click.option("--k", default=3, show_default=True, type=click.IntRange(min=1),
              help="Number of clusters.")
@click.option("--threshold", "-t", "thresholds", multiple=True,
              default=("0.9", "0.95", "1.0"), show_default=True,
              help="Efficiency threshold(s) in (0, 1]; repeatable.")
@click.option("--strategy", default="mean", show_default=True,
              type=click.Choice(tuple(STRATEGIES)),
              help="Blinding rule: marginal mean/median or conditional.")
@click.option("--r", "r", default=None, type=click.IntRange(min=1),
              help="Neighbor count; required for conditional strategies.")
@click.option("--mode", default="exhaustive", show_default=True,
              type=click.Choice(MODES))
@click.option("--permutations", default=100, show_default=True,
              type=click.IntRange(min=1),
              help="Forward-backward restarts (first is the identity order).")
@click.option("--max-subset-size", default=None, type=click.IntRange(min=1),
              help="Cap on the subset cardinality to consider.")
@click.option("--restarts", default=10, show_default=True,
              type=click.IntRange(min=1), help="K-means restarts.")
@click.option("--seed", default=0, show_default=True,
              type=click.IntRange(min=0))
@click.option("--has-header", is_flag=True,
              help="Treat the first CSV line as column names.")
@click.option("--threads", default=None, type=click.IntRange(min=1),
              help=f"Worker threads (default: ${THREADS_ENV} or 1); never "
                   "changes results.")
def select(input_csv, output, k, thresholds, strategy, r, mode, permutations,
           max_subset_size, restarts, seed, has_header, threads):
    """Find minimal variable subsets for a k-means partition of INPUT_CSV."""
    threads = _resolve_threads(threads)
    thresholds = _parse_thresholds(thresholds)
    if strategy.startswith("cond-") and r is None:
        raise click.UsageError(f"--strategy {strategy} requires --r")
    try:
        data, _ = read_matrix_csv(input_csv, has_header=has_header)
    except ClusterSiftError as exc:
        _fail_validation(exc)
    try:
        partition = KMeansPartition(
            n_clusters=k, n_restarts=restarts, random_state=seed,
        ).fit(data)
        evaluator = SubsetEvaluator(
            data, partition, partition.labels_, strategy, r,
        )
    except ClusterSiftError as exc:
        _fail_validation(exc)

    selections = []
    unreachable = 0
    for text in thresholds:
        config = SearchConfig(
            threshold=text, strategy=strategy, r=r, mode=mode,
            permutations=permutations, seed=seed,
            max_subset_size=max_subset_size,
        )
        try:
            result = run_search(data, partition, partition.labels_, config,
                                evaluator=evaluator, threads=threads)
            selections.append(selection_entry(text, result))
        except ThresholdUnreachableError:
            selections.append(selection_entry(text, None))
            unreachable += 1
        except TooManySubsetsError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_ALGORITHM)

    manifest = RunManifest(
        command="select",
        seed=seed,
        input_sha256=file_sha256(input_csv),
        parameters={
            "input": os.path.basename(input_csv),
            "k": k,
            "thresholds": list(thresholds),
            "strategy": strategy,
            "r": r,
            "mode": mode,
            "permutations": permutations,
            "max_subset_size": max_subset_size,
            "restarts": restarts,
            "has_header": bool(has_header),
        },
    )
    doc = build_select_report(manifest, partition, selections)
    write_report(output, doc)
    write_solutions_csv(Path(output).with_suffix(".csv"), selections)
    click.echo(render_selection_table(doc))
    if unreachable:
        click.echo(f"{unreachable} threshold(s) unreachable", err=True)
        sys.exit(EXIT_ALGORITHM)


@main.command()
@click.option("--design", required=True,
              type=click.Choice(DESIGNS + ("probe",)))
@click.option("--output", "-o", required=True, type=click.Path(dir_okay=False),
              help="JSON results path; a .csv table lands beside it.")
@click.option("--reps", default=500, show_default=True,
              type=click.IntRange(min=1))
@click.option("--n", default=100, show_default=True, type=click.IntRange(min=2),
              help="Sample size per replication (case1/case2).")
@click.option("--sigma", default=0.2, show_default=True, type=float,
              help="Scale of the case1 noise coordinate.")
@click.option("--scale-as-variance", is_flag=True,
              help="Read mixture scales as variances instead of sds.")
@click.option("--k", default=None, type=click.IntRange(min=1),
              help="Clusters per replication [default: 3, tsv05: 4].")
@click.option("--threshold", "-t", "thresholds", multiple=True,
              default=("0.9", "0.95", "1.0"), show_default=True)
@click.option("--strategy", default="mean", show_default=True,
              type=click.Choice(tuple(STRATEGIES)))
@click.option("--r", "r", default=None, type=click.IntRange(min=1))
@click.option("--dims", default=3, show_default=True, type=click.IntRange(min=1),
              help="Signal columns for tsv05.")
@click.option("--extra-noise-dims", default=0, show_default=True,
              type=click.IntRange(min=0), help="Noise columns for tsv05.")
@click.option("--restarts", default=10, show_default=True,
              type=click.IntRange(min=1))
@click.option("--seed", default=0, show_default=True, type=click.IntRange(min=0))
@click.option("--n-grid", multiple=True, type=int,
              help="Sample sizes for --design probe [default: 50 100 400].")
@click.option("--d", default=2, show_default=True, type=click.IntRange(min=1),
              help="Subset cardinality tracked by the probe.")
@click.option("--threads", default=None, type=click.IntRange(min=1))
def simulate(design, output, reps, n, sigma, scale_as_variance, k, thresholds,
             strategy, r, dims, extra_noise_dims, restarts, seed, n_grid, d,
             threads):
    """Monte Carlo studies on the built-in designs, or the consistency probe."""
    threads = _resolve_threads(threads)
    thresholds = _parse_thresholds(thresholds)
    if strategy.startswith("cond-") and r is None:
        raise click.UsageError(f"--strategy {strategy} requires --r")
    base_params = {
        "reps": reps, "strategy": strategy, "r": r, "sigma": sigma,
        "scale_as_variance": bool(scale_as_variance), "restarts": restarts,
    }
    try:
        if design == "probe":
            grid = tuple(n_grid) if n_grid else (50, 100, 400)
            probe = consistency_probe(
                design="case1", n_grid=grid, reps=reps, strategy=strategy,
                d=d, k=k or 3, sigma=sigma,
                scale_as_variance=scale_as_variance, seed=seed,
                restarts=restarts, threads=threads,
            )
            manifest = RunManifest(
                "simulate", seed,
                parameters={**base_params, "design": "probe",
                            "n_grid": list(grid), "d": d, "k": k or 3},
            )
            doc = {
                "schema_version": 1,
                "manifest": manifest.to_dict(),
                "probe": {
                    "n_grid": list(probe.n_grid),
                    "successes": list(probe.successes),
                    "errors": list(probe.errors),
                    "fractions": list(probe.fractions),
                    "reference": [list(t) for t in probe.reference],
                },
            }
            rows = [["n", "successes", "errors", "fraction"]]
            rows += [[str(nn), str(s), str(e), f"{f:.6f}"]
                     for nn, s, e, f in zip(probe.n_grid, probe.successes,
                                            probe.errors, probe.fractions)]
            for nn, f in zip(probe.n_grid, probe.fractions):
                click.echo(f"n={nn}: hit fraction {f:.4f}")
        else:
            k_eff = k if k is not None else (4 if design == "tsv05" else 3)
            result = monte_carlo(
                design, reps, k=k_eff, thresholds=thresholds,
                strategy=strategy, r=r, seed=seed, n=n, sigma=sigma,
                scale_as_variance=scale_as_variance, dims=dims,
                extra_noise_dims=extra_noise_dims, restarts=restarts,
                threads=threads,
            )
            manifest = RunManifest(
                "simulate", seed,
                parameters={**base_params, "design": design, "k": k_eff,
                            "n": n, "thresholds": list(thresholds),
                            "dims": dims,
                            "extra_noise_dims": extra_noise_dims},
            )
            doc = {
                "schema_version": 1,
                "manifest": manifest.to_dict(),
                "monte_carlo": {
                    "p": result.p,
                    "errors": result.errors,
                    "thresholds": [str(t) for t in thresholds],
                    "cardinality_counts": result.cardinality_counts.tolist(),
                    "proportions": [[round(float(x), 10) for x in row]
                                    for row in result.proportions],
                },
            }
            rows = [["threshold"] + [f"d={j + 1}" for j in range(result.p)]]
            for text, row in zip(thresholds, result.proportions):
                rows.append([text] + [f"{x:.6f}" for x in row])
                shares = "  ".join(
                    f"d={j + 1}: {x:.3f}" for j, x in enumerate(row)
                )
                click.echo(f"threshold {text}:  {shares}")
    except ClusterSiftError as exc:
        _fail_validation(exc)
    write_report(output, doc)
    with open(Path(output).with_suffix(".csv"), "w", newline="") as fh:
        for row in rows:
            fh.write(",".join(row) + "\n")


@main.command()
@click.option("--report", "report_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="JSON report produced by the select command.")
@click.option("--input", "input_csv", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="The CSV the report was computed from.")
@click.option("--output-dir", default=".", show_default=True,
              type=click.Path(file_okay=False))
@click.option("--format", "fmt", default="svg", show_default=True,
              type=click.Choice(("svg", "png")))
def plot(report_path, input_csv, output_dir, fmt):
    """Render figures for a select report: scatter matrix plus one view per
    threshold showing which rows a blinded dataset reallocates."""
    import json

    doc = json.loads(Path(report_path).read_text())
    manifest = doc.get("manifest", {})
    params = manifest.get("parameters", {})
    if manifest.get("command") != "select":
        raise click.UsageError("plot needs a report from the select command")
    digest = file_sha256(input_csv)
    if manifest.get("input_sha256") not in (None, digest):
        _fail_validation(
            f"{input_csv} does not match the report's input digest"
        )
    try:
        data, _ = read_matrix_csv(input_csv,
                                  has_header=bool(params.get("has_header")))
        centers = np.asarray(doc["kmeans"]["centers"], dtype=np.float64)
        partition = KMeansPartition.from_centers(centers)
        labels = partition.predict(data)
        evaluator = SubsetEvaluator(
            data, partition, labels, params.get("strategy", "mean"),
            params.get("r"),
        )
    except ClusterSiftError as exc:
        _fail_validation(exc)

    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    stem = Path(report_path).stem
    written = []

    fig = plotting.scatter_matrix_figure(data, labels)
    path = out / f"{stem}_scatter_matrix.{fmt}"
    plotting.save(fig, path)
    written.append(path)

    for idx, sel in enumerate(doc["selections"]):
        if not sel["solutions"]:
            fig = plotting.unreachable_figure(sel["threshold"])
        else:
            best = sel["solutions"][0]
            blinded = evaluator.blind(best["indices"])
            mismatched = partition.predict(blinded) != labels
            fig = plotting.solution_figure(
                data, labels, mismatched, best["indices"], sel["threshold"],
                best["efficiency_numerator"] / best["efficiency_denominator"],
            )
        path = out / f"{stem}_threshold_{idx}.{fmt}"
        plotting.save(fig, path)
        written.append(path)
    for path in written:
        click.echo(f"wrote {path}")
