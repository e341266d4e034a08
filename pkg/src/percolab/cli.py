"""Command-line interface: graph generation, percolation, exploration,
limit-process simulation, growth dynamics, and experiment sweeps."""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import dynamics, exploration, generators, limits, percolation, tinygiant
from .degrees import DegreeSequence, PowerLawSpec, power_law_weights, quantile_degrees
from .experiment import ExperimentConfig, run as run_experiment
from .graphs import components, read_edge_list, write_edge_list


def _rng(seed):
    return np.random.default_rng(seed)


def _emit(payload) -> None:
    json.dump(payload, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def _degrees_from_args(args) -> DegreeSequence:
    if args.regular is not None:
        n = args.n
        if (n * args.regular) % 2:
            n += 1
        return DegreeSequence(np.full(n, args.regular))
    spec = PowerLawSpec(tau=args.tau, cf=args.cf)
    return quantile_degrees(args.n, spec)


def _cmd_gen(args) -> int:
    rng = _rng(args.seed)
    if args.model == "cm":
        g = generators.configuration_model(_degrees_from_args(args), rng)
    elif args.model in ("nr", "nrmulti", "cl", "grg"):
        w = power_law_weights(args.n, PowerLawSpec(tau=args.tau, cf=args.cf))
        builder = {"nr": generators.nr_graph, "nrmulti": generators.nr_multigraph,
                   "cl": generators.chung_lu, "grg": generators.grg}[args.model]
        g = builder(w, rng)
    elif args.model == "pa":
        spec = generators.PASpec(m=args.m, delta=args.delta, a=args.a)
        g, _ = generators.preferential_attachment(args.n, spec, rng)
    elif args.model == "ua":
        g, _ = generators.uniform_attachment(args.n, args.m, rng)
    else:
        raise ValueError(f"unknown model {args.model!r}")
    write_edge_list(g, args.out)
    _emit({"model": args.model, "n": g.n, "edges": g.edge_count,
           "seed": args.seed, "out": args.out})
    return 0


def _cmd_perc(args) -> int:
    g = read_edge_list(args.infile)
    rng = _rng(args.seed)
    if args.pi is not None:
        pi = args.pi
    else:
        if args.window == "single":
            if args.tau is None:
                raise SystemExit("--window single requires --tau")
            pi = percolation.pi_window_single_edge(g.n, args.tau, args.lam)
        else:
            deg = g.degrees()
            d = DegreeSequence(deg[deg >= 1])
            if args.window == "fin3":
                pi = percolation.pi_window_finite_third(d, args.lam)
            elif args.window == "heavy":
                if args.tau is None:
                    raise SystemExit("--window heavy requires --tau")
                pi = percolation.pi_window_heavy(d, args.lam, args.tau)
            elif args.window == "tau23":
                pi = percolation.pi_window_tau23(d, args.lam)
            else:
                raise SystemExit("choose --pi or --window")
    gp = percolation.percolate(g, pi, rng)
    write_edge_list(gp, args.out)
    _emit({"pi_used": pi, "n": g.n, "seed": args.seed})
    return 0


def _cmd_explore(args) -> int:
    d = _degrees_from_args(args)
    trace, graph = exploration.explore_cm(d, _rng(args.seed))
    exploration.write_trace_csv(trace, args.out)
    sizes, surplus, edges = exploration.component_stats_from_trace(trace)
    _emit({
        "n": d.n,
        "steps": trace.steps,
        "components": int(trace.n_components),
        "largest": int(sizes.max()) if len(sizes) else 0,
        "total_edges": int(edges.sum()),
        "out": args.out,
    })
    return 0


def _write_path_csv(path_obj, out) -> None:
    with open(out, "w") as fh:
        fh.write("t,value\n")
        for t, v in zip(path_obj.times, path_obj.values):
            fh.write(f"{t:.10g},{v:.10g}\n")


def _cmd_limit(args) -> int:
    rng = _rng(args.seed)
    summary = {"process": args.process, "seed": args.seed}
    if args.process == "tinygiant":
        mu = args.mu if args.mu is not None else tinygiant.mean_weight(args.tau, args.cf)
        lc = tinygiant.lambda_c(args.tau, args.cf, mu)
        lam = args.lam if args.lam is not None else 2.0 * lc
        z, a_used = tinygiant.zeta_limit(lam, args.tau, args.cf, mu)
        g = tinygiant.tiny_giant_graph(lam, args.tau, args.cf, mu, args.V, rng)
        dec = components(g)
        summary.update({
            "lambda_c": lc, "lambda": lam, "mu": mu, "zeta": z, "zeta_a": a_used,
            "V": args.V, "edges": g.edge_count,
            "largest_component": dec.max_size,
        })
        if args.out:
            write_edge_list(g, args.out)
            summary["out"] = args.out
        _emit(summary)
        return 0

    if args.process == "bm":
        p = limits.simulate_bm_parabolic(args.mu, args.kappa, args.lam, args.T, args.dt, rng)
        scale = 1.0 / args.mu
    elif args.process == "levy34":
        theta = limits.power_law_thetas(args.K, args.tau, args.cf)
        p = limits.simulate_thinned_levy(theta, args.mu, args.nu, args.lam, args.T, args.dt, rng)
        scale = 1.0
    elif args.process == "levy23":
        theta = limits.power_law_thetas(args.K, args.tau, args.cf)
        p = limits.simulate_tau23_process(theta, args.mu, args.lam, args.T, args.dt, rng)
        scale = theta.norm2_sq() / (args.lam * args.mu ** 2)
    else:
        raise SystemExit(f"unknown process {args.process!r}")

    refl = limits.reflect(p)
    tol = args.tol if args.tol is not None else limits.default_excursion_tol(args.dt, 1.0)
    excs = limits.excursions(p, tol)
    marked = limits.poisson_marks(refl, excs, scale, rng)
    if args.out:
        _write_path_csv(p, args.out)
        summary["out"] = args.out
    if args.plot:
        from . import report
        summary["figure"] = report.path_figure(p, args.plot, marks=marked)
    summary.update({
        "T": p.T, "dt": p.dt,
        "excursion_lengths": marked.lengths[:10].tolist(),
        "marks": marked.marks[:10].tolist(),
        "mark_intensity_scale": scale,
    })
    _emit(summary)
    return 0


def _cmd_dyn(args) -> int:
    if args.model != "ua":
        raise SystemExit("only the uniform attachment model is supported")
    rng = _rng(args.seed)
    if args.checkpoints == "log":
        ckpts = dynamics.log_checkpoints(args.nmax)
    else:
        ckpts = np.array(sorted({int(x) for x in args.checkpoints.split(",")}), dtype=np.int64)
    track = dynamics.track_growth(args.nmax, args.m, args.pi, ckpts, rng)
    with open(args.out, "w") as fh:
        fh.write("n,s2,s3,cmax,c1\n")
        for i, n in enumerate(track.ns):
            fh.write(f"{n},{track.s2[i]:.10g},{track.s3[i]:.10g},{track.cmax[i]},{track.c1[i]}\n")
    summary = {"model": "ua", "m": args.m, "pi": args.pi, "nmax": args.nmax,
               "seed": args.seed, "out": args.out,
               "s2_final": float(track.s2[-1]), "cmax_final": int(track.cmax[-1])}
    if args.pi < percolation.ua_pi_c() and args.m == 2:
        summary["s2_limit"] = dynamics.s2_infinity(args.pi)
    if args.plot:
        from . import report
        summary["figure"] = report.trajectory_figure(
            track.ns, [track.s2, track.cmax], ["s2", "cmax"], args.plot)
    _emit(summary)
    return 0


def _cmd_run(args) -> int:
    config = ExperimentConfig.from_json(args.config)
    summary = run_experiment(config, args.out_dir, figures=not args.no_figures)
    _emit({"out_dir": args.out_dir,
           "assertions": summary["assertions"],
           "exponent": summary.get("exponent"),
           "regime": summary.get("regime", {}).get("label")})
    if args.do_assert and not summary["assertions"]["ok"]:
        return 2
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="percolab",
                                     description="Percolation laboratory for random graphs")
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", help="generate a random graph to an edge-list file")
    p_gen.add_argument("model", choices=["cm", "nr", "nrmulti", "cl", "grg", "pa", "ua"])
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--tau", type=float, default=3.5)
    p_gen.add_argument("--cf", type=float, default=1.0)
    p_gen.add_argument("--regular", type=int, default=None,
                       help="use a constant degree instead of the power-law quantiles (cm only)")
    p_gen.add_argument("--m", type=int, default=2)
    p_gen.add_argument("--delta", type=float, default=0.0)
    p_gen.add_argument("--a", type=float, default=1.0)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out", required=True)
    p_gen.set_defaults(func=_cmd_gen)

    p_perc = sub.add_parser("perc", help="percolate an edge-list file")
    p_perc.add_argument("--in", dest="infile", required=True)
    p_perc.add_argument("--out", required=True)
    p_perc.add_argument("--pi", type=float, default=None)
    p_perc.add_argument("--window", choices=["fin3", "heavy", "tau23", "single"], default=None)
    p_perc.add_argument("--lambda", dest="lam", type=float, default=0.0)
    p_perc.add_argument("--tau", type=float, default=None)
    p_perc.add_argument("--seed", type=int, default=0)
    p_perc.set_defaults(func=_cmd_perc)

    p_exp = sub.add_parser("explore", help="explore a half-edge pairing, writing the trace CSV")
    p_exp.add_argument("--n", type=int, required=True)
    p_exp.add_argument("--tau", type=float, default=3.5)
    p_exp.add_argument("--cf", type=float, default=1.0)
    p_exp.add_argument("--regular", type=int, default=None)
    p_exp.add_argument("--seed", type=int, default=0)
    p_exp.add_argument("--out", required=True)
    p_exp.set_defaults(func=_cmd_explore)

    p_lim = sub.add_parser("limit", help="simulate a scaling-limit process")
    p_lim.add_argument("process", choices=["bm", "levy34", "levy23", "tinygiant"])
    p_lim.add_argument("--mu", type=float, default=None)
    p_lim.add_argument("--kappa", type=float, default=1.0)
    p_lim.add_argument("--nu", type=float, default=2.0)
    p_lim.add_argument("--lambda", dest="lam", type=float, default=None)
    p_lim.add_argument("--tau", type=float, default=2.5)
    p_lim.add_argument("--cf", type=float, default=1.0)
    p_lim.add_argument("--K", type=int, default=1000)
    p_lim.add_argument("--V", type=int, default=50)
    p_lim.add_argument("--T", type=float, default=10.0)
    p_lim.add_argument("--dt", type=float, default=0.01)
    p_lim.add_argument("--tol", type=float, default=None)
    p_lim.add_argument("--seed", type=int, default=0)
    p_lim.add_argument("--out", default=None, help="CSV path output")
    p_lim.add_argument("--plot", default=None, help="SVG figure output")
    p_lim.set_defaults(func=_cmd_limit)

    p_dyn = sub.add_parser("dyn", help="percolated growth dynamics with susceptibility tracking")
    p_dyn.add_argument("--model", default="ua")
    p_dyn.add_argument("--m", type=int, default=2)
    p_dyn.add_argument("--pi", type=float, required=True)
    p_dyn.add_argument("--nmax", type=int, required=True)
    p_dyn.add_argument("--checkpoints", default="log")
    p_dyn.add_argument("--seed", type=int, default=0)
    p_dyn.add_argument("--out", required=True)
    p_dyn.add_argument("--plot", default=None)
    p_dyn.set_defaults(func=_cmd_dyn)

    p_run = sub.add_parser("run", help="run an experiment sweep from a JSON config")
    p_run.add_argument("--config", required=True)
    p_run.add_argument("--out-dir", required=True)
    p_run.add_argument("--assert", dest="do_assert", action="store_true",
                       help="exit 2 when the config's assertions fail")
    p_run.add_argument("--no-figures", action="store_true")
    p_run.set_defaults(func=_cmd_run)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    # bm needs a concrete mu/lam default
    if getattr(args, "command", None) == "limit" and args.process == "bm":
        if args.mu is None:
            args.mu = 1.0
        if args.lam is None:
            args.lam = 0.0
    if getattr(args, "command", None) == "limit" and args.process in ("levy34", "levy23"):
        if args.mu is None:
            args.mu = 1.0
        if args.lam is None:
            args.lam = 1.0
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
