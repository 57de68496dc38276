"""Command line entry point: ``cpcredible <subcommand> ...``.

Every run writes a JSON manifest next to its main output (``<output>.manifest.json``
unless ``--manifest`` is given); CSV and SVG outputs name it in a leading comment.
Exit status: 0 on success, 1 on invalid input, 2 on usage errors, 3 when the
exact solver ran out of budget (the best region found is still written).
"""

import argparse
from contextlib import contextmanager
import hashlib
import json
import os
import sys
import time

from . import __version__
from ._validation import ValidationError, alpha_grid, check_alpha
from .alternatives import bonferroni_region, joined_hdr, marginal_profile
from .analysis import (FeatureWindow, compare_models, convergence_study,
                       greedy_vs_exact, importance, rows_to_csv, sensitivity)
from .estimators import ChangepointPosterior, CredibleRegions
from .exact import brute_force
from .ilp import export_ilp
from .plot import render_svg
from .posterior import sample_posterior
from .regions import RegionFamily, read_regions, regions_to_csv
from .samples import ParseError, format_samples, read_samples
from .simulate import format_series, format_spec, read_series, read_spec, replica_spec, returns_spec, simulate

EXIT_INVALID = 1
EXIT_BUDGET = 3
THREADS_ENV = "CPCREDIBLE_THREADS"


class Run:
    """Collects what a manifest must record while a subcommand executes."""

    def __init__(self, args):
        self.args = args
        self.output = getattr(args, "output", None)
        self.path = args.manifest or (f"{self.output}.manifest.json" if self.output else None)
        self.name = os.path.basename(self.path) if self.path else None
        self.inputs, self.outputs, self.timing, self.seeds = {}, [], {}, {}

    @contextmanager
    def stage(self, name):
        start = time.perf_counter()
        yield
        self.timing[name] = round(time.perf_counter() - start, 6)

    def read(self, path):
        with open(path, "rb") as fh:
            self.inputs[path] = hashlib.sha256(fh.read()).hexdigest()
        return path

    def write(self, path, text):
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        self.outputs.append(path)

    def finish(self):
        if not self.path:
            return
        config = {k: v for k, v in vars(self.args).items() if k != "func"}
        manifest = {"tool": "cpcredible", "version": __version__, "command": self.args.command,
                    "config": config, "seeds": self.seeds, "inputs": self.inputs,
                    "outputs": self.outputs, "timing_seconds": self.timing}
        with open(self.path, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(manifest, fh, indent=2, sort_keys=True, default=str)
            fh.write("\n")


def _levels(args):
    if args.alpha is not None:
        return [check_alpha(args.alpha)]
    return alpha_grid(args.alpha_grid + 1)


def _posterior(args):
    return ChangepointPosterior(model=args.model, prior=args.prior, p=args.p, k=args.k,
                                noise_variance=args.noise_variance, prior_mean=args.prior_mean,
                                prior_variance=args.prior_variance, shape=args.shape, scale=args.scale)


def _emit(run, text):
    if run.output:
        run.write(run.output, text)
    else:
        sys.stdout.write(text)


def _csv(run, text, extra=None):
    head = f"# manifest={run.name}\n" if run.name else ""
    if extra:
        head += "".join(f"# {line}\n" for line in extra)
    return head + text


# -- subcommands ----------------------------------------------------------
def cmd_simulate(args, run):
    if args.config:
        spec = read_spec(run.read(args.config))
    elif args.preset == "replica":
        spec = replica_spec(seed=args.seed)
    else:
        spec = returns_spec(seed=args.seed)
    run.seeds["simulate"] = spec.seed
    with run.stage("simulate"):
        y = simulate(spec)
    _emit(run, _csv(run, format_series(y), format_spec(spec).strip().split("\n")))
    if args.spec_out:
        run.write(args.spec_out, format_spec(spec))


def cmd_sample(args, run):
    y = read_series(run.read(args.series))
    run.seeds["sample"] = args.seed
    with run.stage("build_cache"):
        est = _posterior(args).fit(y)
    with run.stage("sample"):
        samples = est.sample(args.m, seed=args.seed, n_jobs=args.threads)
    _emit(run, format_samples(samples))


def cmd_regions(args, run):
    samples = read_samples(run.read(args.samples))
    levels = _levels(args)
    with run.stage("solve"):
        if args.method == "brute":
            regions = [brute_force(samples, a) for a in levels]
        else:
            est = CredibleRegions(method=args.method, alphas=levels, max_nodes=args.max_nodes,
                                  time_limit=args.time_limit).fit(samples)
            regions = est.regions_.regions
    _emit(run, _csv(run, regions_to_csv(regions)))
    if args.svg:
        series = read_series(run.read(args.series)) if args.series else None
        run.write(args.svg, render_svg(regions, series, None if series is not None else samples.n, run.name))
    if args.method == "exact" and not all(r.optimal for r in regions):
        return EXIT_BUDGET
    return 0


def cmd_hdr(args, run):
    samples = read_samples(run.read(args.samples))
    if args.empirical:
        weights, label = None, "weights=empirical-frequency"
    else:
        if not args.series:
            raise ValidationError("hdr needs --series (model weights) or --empirical")
        est = _posterior(args).fit(read_series(run.read(args.series)))
        weights, label = est.log_posterior, "weights=model-posterior"
    with run.stage("hdr"):
        regions = [joined_hdr(samples, weights, a) for a in _levels(args)]
    _emit(run, _csv(run, regions_to_csv(regions), [label]))


def cmd_marginal(args, run):
    samples = read_samples(run.read(args.samples))
    _emit(run, _csv(run, marginal_profile(samples).to_csv()))


def cmd_bonferroni(args, run):
    samples = read_samples(run.read(args.samples))
    profile = marginal_profile(samples)
    regions = [bonferroni_region(profile, a, samples) for a in _levels(args)]
    _emit(run, _csv(run, regions_to_csv(regions)))


def cmd_importance(args, run):
    regions = read_regions(run.read(args.regions))
    family = RegionFamily([r.alpha for r in regions], regions)
    windows = [FeatureWindow.parse(w) for w in args.window]
    samples = read_samples(run.read(args.samples)) if args.samples else None
    rows = []
    for w in windows:
        row = {"label": w.label, "importance": importance(family, w)}
        if samples is not None:
            w.check(samples.n)
            row["sensitivity"] = sensitivity(samples, w)
        rows.append(row)
    _emit(run, _csv(run, rows_to_csv(rows)))


def cmd_converge(args, run):
    est = _posterior(args).fit(read_series(run.read(args.series)))
    m_list = [int(v) for v in args.m_list.split(",")]
    run.seeds["converge"] = args.seed
    with run.stage("study"):
        rows, summary = convergence_study(est.segment_model_, est.prior_, args.alpha, m_list, args.reps,
                                          seed=args.seed, method=args.method, cache=est.cache_,
                                          max_nodes=args.max_nodes)
    _emit(run, _csv(run, rows_to_csv(rows)))
    sys.stderr.write(rows_to_csv(summary))


def cmd_compare(args, run):
    y = read_series(run.read(args.series))
    run.seeds["compare"] = args.seed
    if args.mode == "models":
        ks = [int(k) for k in args.k_list.split(",")]
        samples = {}
        with run.stage("sample"):
            for k in ks:
                est = ChangepointPosterior(model=args.model, prior="fixed_k", k=k,
                                           noise_variance=args.noise_variance, prior_mean=args.prior_mean,
                                           prior_variance=args.prior_variance, shape=args.shape,
                                           scale=args.scale).fit(y)
                samples[f"k={k}"] = est.sample(args.m, seed=args.seed)
        sizes = compare_models(samples, args.alpha)
        rows = [{"model": name, "alpha": check_alpha(args.alpha), "size": s} for name, s in sizes.items()]
        _emit(run, _csv(run, rows_to_csv(rows)))
        return 0
    est = _posterior(args).fit(y)

    def make(rep):
        return sample_posterior(est.cache_, args.m, seed=args.seed * 1_000_003 + rep)

    with run.stage("study"):
        rows, failures = greedy_vs_exact(make, alpha_grid(args.alpha_grid + 1), args.reps,
                                         max_nodes=args.max_nodes)
    _emit(run, _csv(run, rows_to_csv(rows), [f"failures_per_rep={','.join(map(str, failures))}"]))
    return EXIT_BUDGET if not all(r["optimal"] for r in rows) else 0


def cmd_plot(args, run):
    regions = read_regions(run.read(args.regions))
    series = read_series(run.read(args.series)) if args.series else None
    _emit(run, render_svg(regions, series, args.n, run.name))


def cmd_export_ilp(args, run):
    samples = read_samples(run.read(args.samples))
    if not args.output:
        raise ValidationError("export-ilp needs --output")
    export_ilp(samples, args.alpha, args.output)
    run.outputs.append(args.output)


# -- argument parsing -----------------------------------------------------
def _model_flags(p):
    p.add_argument("--model", choices=["mean", "variance"], default="mean")
    p.add_argument("--prior", choices=["geometric", "fixed-k"], default="geometric")
    p.add_argument("--p", type=float, default=3 / 550, help="geometric sojourn success probability")
    p.add_argument("--k", type=int, default=1, help="number of changepoints for --prior fixed-k")
    p.add_argument("--noise-variance", type=float, default=1.0)
    p.add_argument("--prior-mean", type=float, default=0.0)
    p.add_argument("--prior-variance", type=float, default=25.0)
    p.add_argument("--shape", type=float, default=1.0, help="inverse-gamma shape (variance model)")
    p.add_argument("--scale", type=float, default=1e-4, help="inverse-gamma scale (variance model)")


def _level_flags(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--alpha", type=float, help="single level in [0, 1]")
    g.add_argument("--alpha-grid", type=int, default=29, help="K levels 1/(K+1) .. K/(K+1) (default 29)")


def build_parser():
    parser = argparse.ArgumentParser(prog="cpcredible", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help):
        p = sub.add_parser(name, help=help, description=help)
        p.add_argument("-o", "--output", help="output file (default: stdout)")
        p.add_argument("--manifest", help="manifest path (default: <output>.manifest.json)")
        p.set_defaults(func=func)
        return p

    p = add("simulate", cmd_simulate, "simulate a piecewise-constant Gaussian series")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--config", help="flat key-value simulation config (n, seed, model, changepoints, params)")
    src.add_argument("--preset", choices=["replica", "returns"], default="replica")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--spec-out", help="also write the resolved simulation config")

    p = add("sample", cmd_sample, "draw exact posterior changepoint samples")
    p.add_argument("--series", required=True)
    _model_flags(p)
    p.add_argument("--m", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=int(os.environ.get(THREADS_ENV, "1")))

    p = add("regions", cmd_regions, "smallest simultaneous credible regions")
    p.add_argument("--samples", required=True)
    _level_flags(p)
    p.add_argument("--method", choices=["greedy", "exact", "brute"], default="greedy")
    p.add_argument("--max-nodes", type=int, default=2_000_000)
    p.add_argument("--time-limit", type=float)
    p.add_argument("--svg", help="also render the regions to this SVG file")
    p.add_argument("--series", help="series CSV drawn above the regions in --svg")

    p = add("hdr", cmd_hdr, "approximate joined highest density regions")
    p.add_argument("--samples", required=True)
    p.add_argument("--series", help="series CSV used to weight samples by the model posterior")
    p.add_argument("--empirical", action="store_true", help="weight samples by their frequency instead")
    _level_flags(p)
    _model_flags(p)

    p = add("marginal", cmd_marginal, "marginal inclusion frequencies")
    p.add_argument("--samples", required=True)

    p = add("bonferroni", cmd_bonferroni, "Bonferroni credible regions")
    p.add_argument("--samples", required=True)
    _level_flags(p)

    p = add("importance", cmd_importance, "importance (and sensitivity) of feature windows")
    p.add_argument("--regions", required=True)
    p.add_argument("--samples", help="samples file for sensitivities")
    p.add_argument("--window", action="append", required=True, help="label=lo..hi[,lo..hi]")

    p = add("converge", cmd_converge, "region sizes against sample size")
    p.add_argument("--series", required=True)
    _model_flags(p)
    p.add_argument("--alpha", type=float, default=0.3)
    p.add_argument("--m-list", default="10,100,1000,10000")
    p.add_argument("--reps", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--method", choices=["greedy", "exact"], default="greedy")
    p.add_argument("--max-nodes", type=int, default=200_000)

    p = add("compare", cmd_compare, "greedy-versus-exact accuracy, or fixed-k model comparison")
    p.add_argument("--mode", choices=["accuracy", "models"], default="accuracy")
    p.add_argument("--series", required=True)
    _model_flags(p)
    p.add_argument("--m", type=int, default=500)
    p.add_argument("--reps", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--alpha-grid", type=int, default=29)
    p.add_argument("--alpha", type=float, default=0.05, help="level for --mode models")
    p.add_argument("--k-list", default="3,5", help="fixed-k models for --mode models")
    p.add_argument("--max-nodes", type=int, default=200_000)

    p = add("plot", cmd_plot, "render a region CSV as SVG")
    p.add_argument("--regions", required=True)
    p.add_argument("--series")
    p.add_argument("--n", type=int, help="universe size when no series is given")

    p = add("export-ilp", cmd_export_ilp, "write the integer program in LP format")
    p.add_argument("--samples", required=True)
    p.add_argument("--alpha", type=float, required=True)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    run = Run(args)
    try:
        status = args.func(args, run) or 0
    except (ValidationError, ParseError, OSError) as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_INVALID
    run.finish()
    if status == EXIT_BUDGET:
        sys.stderr.write("error: BudgetExhausted: exact solver stopped before proving optimality\n")
    return status


if __name__ == "__main__":
    sys.exit(main())
