"""Command-line front end: ``deform-gsp {learn,spectrum,simulate,experiment,logreturns}``.

Every command prints exactly one JSON line on stdout.  Exit codes: 0 on
success, 1 on a computational error, 2 on a usage error.
"""

import argparse
import csv
import hashlib
import json
import sys
from pathlib import Path

import numpy as np

from . import graph_core as gc
from .dynamics import simulate, trajectory_array
from .errors import DeformGSPError, InvalidParams, NonpositivePrice, UnknownPreset
from .laplacian_ops import combinatorial_laplacian, deformed_laplacian, signed_laplacian, signless_laplacian
from .learner import (
    LearnConfig,
    dynamic_experiment,
    evaluate_grid,
    gamma_sweep,
    learn,
    r_grid,
)
from .pep import pep_spectrum, structure_report
from .spectral import eig_sym, nmse

PRESETS = ("gamma-sweep", "dynamic-nmse", "nmse-vs-r", "nmse-vs-sparsity")


# ----------------------------------------------------------------------------
# I/O helpers
# ----------------------------------------------------------------------------

def _fmt(x):
    x = float(x)
    return repr(x) if np.isfinite(x) else ("nan" if np.isnan(x) else repr(x))


def write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        if header:
            w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])


def write_matrix(path, m):
    write_csv(path, None, [[float(v) for v in row] for row in np.atleast_2d(m)])


def read_matrix(path):
    try:
        m = np.loadtxt(path, delimiter=",", ndmin=2, encoding="utf-8")
    except ValueError as exc:
        raise InvalidParams(f"cannot parse numeric CSV {path}: {exc}") from None
    return m


def sha256(path):
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def emit(obj):
    sys.stdout.write(json.dumps(obj, sort_keys=True, allow_nan=False) + "\n")


def load_graph(source, mode, n_nodes=None):
    """Edge-list path, or the name of a bundled graph (``karate``)."""
    if str(source).lower() == "karate" and not Path(source).exists():
        return gc.karate()
    n = n_nodes or gc.infer_n_nodes(source)
    if n < 1:
        raise InvalidParams(f"edge list {source} has no edges; pass --n-nodes")
    return gc.load_edge_list(source, n, mode)


def write_manifest(out, command, config, inputs, seed, outputs):
    manifest = {
        "command": command,
        "config": config,
        "inputs": {Path(p).name: sha256(p) for p in inputs},
        "seed": seed,
        "outputs": sorted(outputs),
    }
    (Path(out) / "manifest.json").write_text(json.dumps(manifest, sort_keys=True, indent=2) + "\n",
                                             encoding="utf-8")


# ----------------------------------------------------------------------------
# Commands
# ----------------------------------------------------------------------------

def _config_from(args):
    return LearnConfig(gamma=args.gamma, K=args.K, r_min=args.r_min, r_max=args.r_max,
                       step=args.step, grid_mode=args.grid)


def cmd_learn(args):
    X = read_matrix(args.signals)
    g = load_graph(args.graph, args.mode, args.n_nodes or X.shape[0])
    cfg = _config_from(args)
    res = learn(g, X, cfg)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "result.json").write_text(res.to_json() + "\n", encoding="utf-8")
    write_csv(out / "trace.csv", ["r", "f", "psd"],
              [(r, f, int(p)) for r, f, p in res.objective_trace])
    write_matrix(out / "reconstruction.csv", res.reconstruction)
    write_manifest(out, "learn", cfg.to_dict(), [args.signals] + (
        [args.graph] if Path(args.graph).exists() else []), args.seed,
        ["result.json", "trace.csv", "reconstruction.csv"])
    emit({"r_star": res.r_star, "f_min": res.f_min,
          "nmse": nmse(X, res.reconstruction, "frobenius")})
    return 0


def cmd_spectrum(args):
    g = load_graph(args.graph, args.mode, args.n_nodes)
    if args.pep:
        spectrum = pep_spectrum(g)
        rep = structure_report(g)
        obj = json.loads(spectrum.to_json())
        obj["structure"] = rep.to_dict()
        obj["max_finite_modulus"] = rep.max_finite_modulus
    else:
        basis = eig_sym(deformed_laplacian(g, args.r))
        obj = {"r": args.r, "eigenvalues": basis.eigenvalues.tolist()}
        if args.out:
            out = Path(args.out)
            out.mkdir(parents=True, exist_ok=True)
            write_matrix(out / "eigenvectors.csv", basis.eigenvectors)
            write_csv(out / "eigenvalues.csv", ["index", "eigenvalue"],
                      [(k, float(v)) for k, v in enumerate(basis.eigenvalues)])
    emit(obj)
    return 0


def _parse_vector(text):
    p = Path(text)
    if p.exists():
        return read_matrix(p).ravel()
    try:
        return np.array([float(v) for v in text.split(",")])
    except ValueError:
        raise InvalidParams(f"cannot parse initial state {text!r}") from None


def cmd_simulate(args):
    phi0 = _parse_vector(args.phi0)
    g = load_graph(args.graph, "nonneg", args.n_nodes or len(phi0))
    states = simulate(g, args.r, phi0, args.dt, args.steps, args.method, args.eta)
    traj = trajectory_array(states)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    write_csv(out, ["t"] + [f"phi_{i}" for i in range(g.n_nodes)],
              [[float(v) for v in row] for row in traj])
    emit({"steps": args.steps, "final_time": float(traj[-1, 0]),
          "final": traj[-1, 1:].tolist(), "output": str(out)})
    return 0


def log_returns(prices):
    """``X[i, j] = log P[i, j+1] - log P[i, j]``; rejects nonpositive prices."""
    prices = np.asarray(prices, dtype=float)
    if prices.ndim != 2 or prices.shape[1] < 2:
        raise InvalidParams("price matrix needs at least two columns")
    bad = np.argwhere(~(prices > 0))
    if len(bad):
        i, j = bad[0]
        raise NonpositivePrice(f"nonpositive price {prices[i, j]} at row {i}, column {j}")
    return np.diff(np.log(prices), axis=1)


def cmd_logreturns(args):
    X = log_returns(read_matrix(args.prices))
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    write_matrix(out, X)
    emit({"rows": int(X.shape[0]), "cols": int(X.shape[1]), "output": str(out)})
    return 0


# ----------------------------------------------------------------------------
# Experiment presets
# ----------------------------------------------------------------------------

def _smooth_signal_gen(basis, k):
    u = basis.eigenvectors[:, :k]
    return lambda rng: u @ rng.standard_normal((k, 1))


def _preset_gamma_sweep(args, out, streams):
    gammas = [round(0.1 * i, 10) for i in range(11)]
    cfg = LearnConfig(gamma=1.0, K=args.K, step=args.step)
    rows = []
    kinds = args.kinds.split(",")
    for kind, ss in zip(kinds, streams.spawn(len(kinds))):
        gseed = int(ss.generate_state(1)[0])
        if kind == "bipartite":
            g = gc.bipartite(args.n // 2, args.n - args.n // 2, 0.15, n_components=2, seed=gseed)
            op = signless_laplacian(g)
        elif kind == "clustered":
            sizes = [len(c) for c in np.array_split(np.arange(args.n), 3)]
            g = gc.clustered(sizes, 0.5, 0.02, seed=gseed)
            op = combinatorial_laplacian(g)
        elif kind == "signed":
            g = gc.signed_balanced((args.n // 2, args.n - args.n // 2), 0.5, 0.1, seed=gseed)
            op = signed_laplacian(g)
        else:
            raise InvalidParams(f"unknown graph kind {kind!r}")
        table = gamma_sweep(g, _smooth_signal_gen(eig_sym(op), args.K), gammas, args.trials,
                            cfg, seed=int(ss.generate_state(2)[1]))
        rows += [(kind, gam, r) for gam, r in table]
    write_csv(out / "gamma_sweep.csv", ["graph", "gamma", "mean_r_star"], rows)
    return ["gamma_sweep.csv"], {"K": args.K, "step": args.step, "trials": args.trials,
                                 "n": args.n, "kinds": kinds}


def _preset_dynamic(args, out, streams):
    s_graph, s_sig = streams.spawn(2)
    seq = gc.dynamic_sequence(args.n, args.length, seed=int(s_graph.generate_state(1)[0]))
    X = np.random.default_rng(s_sig).standard_normal((args.n, args.M))
    cfg = LearnConfig(gamma=1.0, K=args.K, step=args.step)
    rows = dynamic_experiment(seq, X, cfg)
    write_csv(out / "dynamic_nmse.csv",
              ["t", "nmse_deformed", "nmse_r1", "nmse_rminus1", "mean_r_star"], rows)
    return ["dynamic_nmse.csv"], {"K": args.K, "step": args.step, "n": args.n,
                                  "length": args.length, "M": args.M}


def _load_or_make(args, streams, make_graph, make_signals):
    inputs = []
    s_graph, s_sig = streams.spawn(2)
    if args.signals:
        X = read_matrix(args.signals)
        inputs.append(args.signals)
    else:
        X = None
    if args.graph:
        g = load_graph(args.graph, args.mode, X.shape[0] if X is not None else args.n_nodes)
        if Path(args.graph).exists():
            inputs.append(args.graph)
    else:
        g = make_graph(int(s_graph.generate_state(1)[0]))
    if X is None:
        X = make_signals(g, np.random.default_rng(s_sig))
    return g, X, inputs


def _mixed_signals(r0, k, m):
    def make(g, rng):
        u = eig_sym(deformed_laplacian(g, r0)).eigenvectors
        coef = rng.standard_normal((k, m)) * (1.0 / np.arange(1, k + 1))[:, None]
        return u[:, :k] @ coef + 0.05 * rng.standard_normal((g.n_nodes, m))
    return make


def _preset_nmse_vs_r(args, out, streams):
    g, X, inputs = _load_or_make(args, streams, lambda s: gc.mixed(args.n, seed=s),
                                 _mixed_signals(args.r0, args.K, args.M))
    cfg = LearnConfig(gamma=1.0, K=args.K, step=args.step)
    rows = []
    for gp in evaluate_grid(g, r_grid(cfg), cfg.psd_tol):
        res = learn(g, X, cfg, grid_points=[gp]) if gp.psd else None
        err = nmse(X, res.reconstruction, "frobenius") if res else float("nan")
        rows.append((gp.r, int(gp.psd), err))
    write_csv(out / "nmse_vs_r.csv", ["r", "psd", "nmse"], rows)
    return ["nmse_vs_r.csv"], {"K": args.K, "step": args.step, "n": args.n, "r0": args.r0,
                               "M": args.M}, inputs


def _preset_nmse_vs_sparsity(args, out, streams):
    g, X, inputs = _load_or_make(args, streams, lambda s: gc.mixed(args.n, seed=s),
                                 _mixed_signals(args.r0, max(1, args.n // 2), args.M))
    gammas = [float(v) for v in args.gammas.split(",")]
    base = LearnConfig(gamma=1.0, K=1, step=args.step)
    points = evaluate_grid(g, r_grid(base), base.psd_tol)
    k_max = min(args.k_max or g.n_nodes, g.n_nodes)
    rows = []
    for gam in gammas:
        for k in range(1, k_max + 1):
            res = learn(g, X, LearnConfig(gamma=gam, K=k, step=args.step), grid_points=points)
            rows.append((gam, k, res.r_star, nmse(X, res.reconstruction, "frobenius")))
    write_csv(out / "nmse_vs_sparsity.csv", ["gamma", "K", "r_star", "nmse"], rows)
    return ["nmse_vs_sparsity.csv"], {"gammas": gammas, "k_max": k_max, "step": args.step,
                                      "n": args.n, "M": args.M}, inputs


def cmd_experiment(args):
    if args.preset not in PRESETS:
        raise UnknownPreset(f"unknown preset {args.preset!r}; choose from {', '.join(PRESETS)}")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    streams = np.random.SeedSequence(args.seed)
    inputs = []
    if args.preset == "gamma-sweep":
        outputs, config = _preset_gamma_sweep(args, out, streams)
    elif args.preset == "dynamic-nmse":
        outputs, config = _preset_dynamic(args, out, streams)
    elif args.preset == "nmse-vs-r":
        outputs, config, inputs = _preset_nmse_vs_r(args, out, streams)
    else:
        outputs, config, inputs = _preset_nmse_vs_sparsity(args, out, streams)
    write_manifest(out, f"experiment {args.preset}", config, inputs, args.seed, outputs)
    emit({"preset": args.preset, "seed": args.seed,
          "outputs": [str(out / o) for o in outputs + ["manifest.json"]]})
    return 0


# ----------------------------------------------------------------------------
# Parser
# ----------------------------------------------------------------------------

def _unit_interval(text):
    v = float(text)
    if not 0.0 <= v <= 1.0:
        raise argparse.ArgumentTypeError("gamma must lie in [0,1]")
    return v


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _nonneg_int(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be a nonnegative integer")
    return v


def _step(text):
    v = float(text)
    if not 0.0 < v < 1.0:
        raise argparse.ArgumentTypeError("step must lie in (0,1)")
    return v


def build_parser():
    p = argparse.ArgumentParser(prog="deform-gsp", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def graph_opts(sp, required=True):
        sp.add_argument("--graph", required=required,
                        help="edge-list CSV (i,j,w) or 'karate'")
        sp.add_argument("--mode", choices=["nonneg", "signed"], default="nonneg")
        sp.add_argument("--n-nodes", type=_positive_int, default=None)

    sp = sub.add_parser("learn", help="learn r* and sparse representations")
    graph_opts(sp)
    sp.add_argument("--signals", required=True, help="N x M CSV, one column per signal")
    sp.add_argument("--gamma", type=_unit_interval, required=True)
    sp.add_argument("--K", type=_positive_int, required=True)
    sp.add_argument("--r-min", type=float, default=-1.0)
    sp.add_argument("--r-max", type=float, default=1.0)
    sp.add_argument("--step", type=_step, default=0.01)
    sp.add_argument("--grid", choices=["uniform", "accelerating"], default="uniform")
    sp.add_argument("--out", default="learn_out")
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_learn)

    sp = sub.add_parser("spectrum", help="eigendecomposition at r, or the PEP spectrum")
    graph_opts(sp)
    group = sp.add_mutually_exclusive_group(required=True)
    group.add_argument("--r", type=float)
    group.add_argument("--pep", action="store_true")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("simulate", help="integrate dphi/dt = -L_DF(r) phi")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--n-nodes", type=_positive_int, default=None)
    sp.add_argument("--r", type=float, required=True)
    sp.add_argument("--phi0", required=True, help="comma-separated values or a CSV file")
    sp.add_argument("--dt", type=float, required=True)
    sp.add_argument("--steps", type=_nonneg_int, required=True)
    sp.add_argument("--method", choices=["euler", "exact"], default="exact")
    sp.add_argument("--eta", type=float, default=1.0)
    sp.add_argument("--out", default="trajectory.csv")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("experiment", help="regenerate the table behind a study")
    sp.add_argument("preset", help=", ".join(PRESETS))
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", default="experiment_out")
    sp.add_argument("--n", type=_positive_int, default=30)
    sp.add_argument("--K", type=_positive_int, default=3)
    sp.add_argument("--M", type=_positive_int, default=20)
    sp.add_argument("--step", type=_step, default=0.05)
    sp.add_argument("--trials", type=_positive_int, default=10)
    sp.add_argument("--length", type=_positive_int, default=40)
    sp.add_argument("--kinds", default="bipartite,clustered,signed")
    sp.add_argument("--r0", type=float, default=0.1)
    sp.add_argument("--gammas", default="0.4,1.0")
    sp.add_argument("--k-max", type=_positive_int, default=None)
    sp.add_argument("--graph", default=None)
    sp.add_argument("--signals", default=None)
    sp.add_argument("--mode", choices=["nonneg", "signed"], default="nonneg")
    sp.add_argument("--n-nodes", type=_positive_int, default=None)
    sp.set_defaults(func=cmd_experiment)

    sp = sub.add_parser("logreturns", help="log-return matrix from a positive price matrix")
    sp.add_argument("--prices", required=True)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_logreturns)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DeformGSPError as exc:
        sys.stderr.write(f"deform-gsp: error: {exc}\n")
        return 1
    except (OSError, np.linalg.LinAlgError) as exc:
        sys.stderr.write(f"deform-gsp: error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
