"""Command-line interface.

Subcommands::

    usable-info simulate  --scenario sim1 --n 1000 --seed 7 --out data.csv
    usable-info estimate  --data data.csv --x-cols var0 --y-cols var1 \
                          --family linear_gaussian --out est.json
    usable-info tree      --sim-config sim.json --family linear_gaussian \
                          --out tree.json
    usable-info sweep     --scenario sim1 --sizes 10,100,1000 --seeds 0,1 \
                          --families linear_gaussian,cpc --out sweep.csv
    usable-info baselines --rhos 0.5,0.9 --n 2048 --seeds 0,1 --out bench.csv
    usable-info auc       --scores scores.csv --truth truth.csv --out auc.json

Every subcommand accepts ``--config FILE`` with a JSON object whose keys
mirror the flags; explicit flags override file values.  The default seed
comes from the ``USABLE_INFO_SEED`` environment variable when neither a
flag nor a config supplies one.

Outputs embed their generating configuration: JSON results carry a full
run record (command, config, seed, duration, version); CSVs start with a
``# config: <json>`` comment.  Exit codes: 0 success, 2 usage error,
3 data error, 4 numerical failure (an estimator or fit did not converge).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
import warnings
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import __version__
from .baselines import BatchSpec, Critic, cpc_estimate, fit_critic, gaussian_oracle_critic, nwj_estimate
from .data import Dataset, read_dataset_csv, write_dataset_csv
from .errors import DataError, NumericalError
from .estimation import PacConfig, empirical_information
from .families import FamilyConfig, FitMode, FitWarning, VariableSpec
from .structure import Arborescence, edge_weights, max_arborescence, wrong_edges_ratio
from .synth import SimulationConfig, simulate

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NUMERICAL = 4


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed usage
        return int(exc.code) if exc.code else EXIT_OK
    if not hasattr(args, "func"):
        parser.print_help()
        return EXIT_USAGE
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            result = args.func(args)
        fit_warnings = [w for w in caught if issubclass(w.category, FitWarning)]
        for w in caught:
            if not issubclass(w.category, FitWarning):
                print(f"warning: {w.message}", file=sys.stderr)
        if fit_warnings:
            print(f"numerical failure: {fit_warnings[0].message}", file=sys.stderr)
            return EXIT_NUMERICAL
        return result
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


# --------------------------------------------------------------------- #
# Shared plumbing
# --------------------------------------------------------------------- #


def _load_config(path) -> dict:
    if path is None:
        return {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            cfg = json.load(fh)
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: invalid JSON config ({exc})") from None
    if not isinstance(cfg, dict):
        raise DataError(f"{path}: config must be a JSON object")
    return cfg


def _setting(args, cfg: dict, name: str, default=None):
    value = getattr(args, name.replace("-", "_"), None)
    if value is not None:
        return value
    return cfg.get(name, default)


def _resolve_seed(args, cfg: dict) -> int:
    seed = _setting(args, cfg, "seed")
    if seed is None:
        env = os.environ.get("USABLE_INFO_SEED")
        if env is not None:
            seed = env
    if seed is None:
        raise ValueError(
            "seed required: pass --seed, put \"seed\" in the config file, "
            "or set USABLE_INFO_SEED"
        )
    return int(seed)


def _int_list(text: str) -> list[int]:
    return [int(tok) for tok in str(text).split(",") if tok != ""]


def _float_list(text: str) -> list[float]:
    return [float(tok) for tok in str(text).split(",") if tok != ""]


def _str_list(text: str) -> list[str]:
    return [tok.strip() for tok in str(text).split(",") if tok.strip()]


def _emit_json(path, command: str, config: dict, seed, t0: float, results: dict):
    record = {
        "command": command,
        "config": config,
        "seed": seed,
        "duration_s": time.time() - t0,
        "version": __version__,
        "results": results,
    }
    text = json.dumps(record, indent=2, sort_keys=True)
    if path is None:
        print(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")


def _write_rows_csv(path, config: dict, header: list[str], rows: list) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("# config: " + json.dumps(config, sort_keys=True) + "\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_cell(v) for v in row) + "\n")


def _cell(value) -> str:
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _family_from_settings(kind: str, order, clip_b, norm_radius,
                          max_iters, step_size, tolerance) -> FamilyConfig:
    fit = None
    if max_iters is not None or step_size is not None or tolerance is not None:
        fit = FitMode.gradient(
            max_iters=int(max_iters) if max_iters is not None else 5000,
            step_size=float(step_size) if step_size is not None else None,
            tolerance=float(tolerance) if tolerance is not None else 1e-8,
        )
    return FamilyConfig(
        kind=kind,
        order=int(order) if order is not None else None,
        fit=fit,
        clip_b=float(clip_b) if clip_b is not None else None,
        norm_radius=float(norm_radius) if norm_radius is not None else None,
    )


def _parse_family_token(token: str):
    """'linear_gaussian' / 'polynomial_gaussian:3' / baseline 'cpc' or 'nwj'."""
    if token in ("cpc", "nwj"):
        return ("baseline", token)
    kind, _, order = token.partition(":")
    return ("family", _family_from_settings(
        kind, order or None, None, None, None, None, None))


# --------------------------------------------------------------------- #
# simulate
# --------------------------------------------------------------------- #


def _cmd_simulate(args) -> int:
    t0 = time.time()
    cfg = _load_config(args.config)
    seed = _resolve_seed(args, cfg)
    sim = SimulationConfig(
        scenario=_setting(args, cfg, "scenario") or _missing("scenario"),
        n=int(_setting(args, cfg, "n") or _missing("n")),
        seed=seed,
        m=_maybe_int(_setting(args, cfg, "m")),
        d=int(_setting(args, cfg, "d", 10)),
        rho=_maybe_float(_setting(args, cfg, "rho")),
        var_y=float(_setting(args, cfg, "var_y", 1.0)),
        parents=_parse_parents(_setting(args, cfg, "parents")),
        noise_var=float(_setting(args, cfg, "noise_var", 1.0)),
        exponential_mean_mode=bool(_setting(args, cfg, "exponential_mean_mode", False)),
    )
    dataset, truth = simulate(sim)
    effective = _sim_config_dict(sim)
    write_dataset_csv(dataset, args.out, config=effective)
    if args.truth_out:
        _emit_json(args.truth_out, "simulate", effective, seed, t0,
                   {"truth": truth.tree.to_dict(), "scenario": sim.scenario})
    return EXIT_OK


def _missing(name: str):
    raise ValueError(f"missing required setting: {name}")


def _maybe_int(v):
    return None if v is None else int(v)


def _maybe_float(v):
    return None if v is None else float(v)


def _parse_parents(v):
    if v is None:
        return None
    if isinstance(v, str):
        v = json.loads(v)
    return {int(c): int(p) for c, p in v.items()}


def _sim_config_dict(sim: SimulationConfig) -> dict:
    out = {
        "scenario": sim.scenario,
        "n": sim.n,
        "seed": sim.seed,
        "m": sim.node_count(),
        "d": sim.d,
    }
    if sim.scenario == "gaussian_pair":
        out.update(rho=sim.rho, var_y=sim.var_y)
    if sim.scenario == "custom_tree":
        out.update(parents={str(k): v for k, v in sim.parents.items()},
                   noise_var=sim.noise_var)
    if sim.scenario in ("sim2", "sim3", "sim5", "sim6"):
        out["exponential_mean_mode"] = sim.exponential_mean_mode
    return out


# --------------------------------------------------------------------- #
# estimate
# --------------------------------------------------------------------- #


def _select_columns(dataset: Dataset, tokens: list[str], role: str):
    """Resolve column tokens to one array plus a variable spec.

    A token is either ``var<i>`` (the whole variable) or ``var<i>_<k>``
    (one real coordinate).  A categorical variable must be selected alone.
    """
    import re

    pieces = []
    categorical = None
    for token in tokens:
        match = re.fullmatch(r"var(\d+)(?:_(\d+))?", token)
        if not match:
            raise ValueError(f"{role}: bad column token {token!r}")
        vid = int(match.group(1))
        if vid >= dataset.m:
            raise ValueError(f"{role}: no variable var{vid}")
        spec = dataset.specs[vid]
        coord = match.group(2)
        if spec.kind == "categorical":
            if coord not in (None, "0"):
                raise ValueError(f"{role}: var{vid} is categorical; select it whole")
            categorical = dataset.variables[vid]
        else:
            arr = dataset.variables[vid]
            if coord is None:
                pieces.append(arr)
            else:
                k = int(coord)
                if k >= spec.dim:
                    raise ValueError(f"{role}: var{vid} has no coordinate {k}")
                pieces.append(arr[:, [k]])
    if categorical is not None:
        if pieces or len(tokens) != 1:
            raise ValueError(f"{role}: a categorical variable must be selected alone")
        card = int(categorical.max()) + 1
        return categorical, VariableSpec.categorical(max(card, 2))
    if not pieces:
        raise ValueError(f"{role}: no columns selected")
    block = np.hstack(pieces)
    return block, VariableSpec.real(block.shape[1])


def _cmd_estimate(args) -> int:
    t0 = time.time()
    cfg = _load_config(args.config)
    data_path = _setting(args, cfg, "data") or _missing("data")
    dataset = read_dataset_csv(data_path)
    x_tokens = _str_list(_setting(args, cfg, "x_cols") or _missing("x-cols"))
    y_tokens = _str_list(_setting(args, cfg, "y_cols") or _missing("y-cols"))
    xs, x_spec = _select_columns(dataset, x_tokens, "x-cols")
    ys, y_spec = _select_columns(dataset, y_tokens, "y-cols")

    kind = _setting(args, cfg, "family") or _missing("family")
    family = _family_from_settings(
        kind, _setting(args, cfg, "order"), _setting(args, cfg, "clip_b"),
        _setting(args, cfg, "norm_radius"), _setting(args, cfg, "max_iters"),
        _setting(args, cfg, "step_size"), _setting(args, cfg, "tolerance"),
    )
    from dataclasses import replace
    family = replace(family, x_spec=x_spec, y_spec=y_spec)

    pac = None
    if args.pac or cfg.get("pac"):
        pac = PacConfig(
            delta=float(_setting(args, cfg, "delta") or _missing("delta")),
            b=float(_setting(args, cfg, "pac_b") or _missing("pac-b")),
            rademacher_bound=_maybe_float(_setting(args, cfg, "rademacher")),
            k_x=_maybe_float(_setting(args, cfg, "kx")),
            k_y=_maybe_float(_setting(args, cfg, "ky")),
        )
    estimate = empirical_information(family, xs, ys, pac=pac,
                                     clamp=bool(_setting(args, cfg, "clamp", False)))
    effective = {
        "data": str(data_path), "x_cols": x_tokens, "y_cols": y_tokens,
        "family": kind, "order": family.order, "clip_b": family.clip_b,
        "norm_radius": family.norm_radius, "clamp": bool(_setting(args, cfg, "clamp", False)),
        "pac": None if pac is None else {
            "delta": pac.delta, "b": pac.b, "rademacher_bound": pac.rademacher_bound,
            "k_x": pac.k_x, "k_y": pac.k_y,
        },
    }
    _emit_json(args.out, "estimate", effective, None, t0, estimate.to_dict())
    return EXIT_OK


# --------------------------------------------------------------------- #
# tree
# --------------------------------------------------------------------- #


def _cmd_tree(args) -> int:
    t0 = time.time()
    cfg = _load_config(args.config)
    truth = None
    seed = None
    if args.sim_config:
        sim_cfg = _load_config(args.sim_config)
        sim_args = argparse.Namespace(seed=args.seed)
        seed = _resolve_seed(sim_args, sim_cfg)
        sim = SimulationConfig(
            scenario=sim_cfg.get("scenario") or _missing("scenario"),
            n=int(sim_cfg.get("n") or _missing("n")),
            seed=seed,
            m=_maybe_int(sim_cfg.get("m")),
            d=int(sim_cfg.get("d", 10)),
            rho=_maybe_float(sim_cfg.get("rho")),
            var_y=float(sim_cfg.get("var_y", 1.0)),
            parents=_parse_parents(sim_cfg.get("parents")),
            noise_var=float(sim_cfg.get("noise_var", 1.0)),
            exponential_mean_mode=bool(sim_cfg.get("exponential_mean_mode", False)),
        )
        dataset, ground = simulate(sim)
        truth = ground.tree
        source = {"sim_config": _sim_config_dict(sim)}
    elif args.data:
        dataset = read_dataset_csv(args.data)
        source = {"data": str(args.data)}
    else:
        raise ValueError("tree needs --data or --sim-config")

    if args.truth:
        with open(args.truth, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
        node = payload.get("results", payload)
        node = node.get("truth", node)
        truth = Arborescence.from_dict(node)

    kind = _setting(args, cfg, "family") or _missing("family")
    family = _family_from_settings(
        kind, _setting(args, cfg, "order"), _setting(args, cfg, "clip_b"),
        _setting(args, cfg, "norm_radius"), _setting(args, cfg, "max_iters"),
        _setting(args, cfg, "step_size"), _setting(args, cfg, "tolerance"),
    )
    weights = edge_weights(dataset.variables, family)
    tree = max_arborescence(weights)
    results = {"tree": tree.to_dict()}
    if truth is not None:
        mode = "directed" if args.directed else "undirected"
        results["wrong_edges_ratio"] = wrong_edges_ratio(tree, truth, mode=mode)
        results["ratio_mode"] = mode
    effective = {**source, "family": kind, "order": family.order,
                 "clip_b": family.clip_b, "norm_radius": family.norm_radius}
    _emit_json(args.out, "tree", effective, seed, t0, results)
    return EXIT_OK


# --------------------------------------------------------------------- #
# sweep
# --------------------------------------------------------------------- #


def _sweep_task(task: tuple) -> tuple:
    scenario, family_token, n, seed, m, d = task
    sim = SimulationConfig(scenario=scenario, n=n, seed=seed, m=m, d=d)
    dataset, truth = simulate(sim)
    role, payload = _parse_family_token(family_token)
    if role == "family":
        weights = edge_weights(dataset.variables, payload)
    else:
        weights = _baseline_edge_weights(dataset.variables, payload, seed)
    tree = max_arborescence(weights)
    ratio = wrong_edges_ratio(tree, truth.tree, mode="undirected")
    return (scenario, family_token, n, seed, ratio, tree.total_weight)


def _baseline_edge_weights(variables, method: str, seed: int,
                           batch_size: int = 8, iterations: int = 200,
                           step_size: float = 0.05):
    from .structure import EdgeWeightMatrix

    m = len(variables)
    w = np.zeros((m, m))
    for i in range(m):
        for j in range(m):
            if i == j:
                continue
            pair_seed = int(np.random.SeedSequence((seed, i, j)).generate_state(1)[0])
            xs, ys = variables[i], variables[j]
            spec = BatchSpec(batch_size=batch_size, iterations=iterations,
                             step_size=step_size, seed=pair_seed)
            critic = fit_critic("bilinear", method, xs, ys, spec=spec)
            if method == "cpc":
                w[i, j] = _mean_batch_cpc(critic, xs, ys, batch_size)
            else:
                rng = np.random.default_rng(pair_seed)
                perm = rng.permutation(ys.shape[0])
                w[i, j] = nwj_estimate(critic, xs, ys, xs, ys[perm])
    return EdgeWeightMatrix(w)


def _mean_batch_cpc(critic: Critic, xs, ys, batch_size: int) -> float:
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.ndim == 1:
        xs = xs.reshape(-1, 1)
    if ys.ndim == 1:
        ys = ys.reshape(-1, 1)
    n_batches = xs.shape[0] // batch_size
    if n_batches == 0:
        raise ValueError("not enough samples for one batch")
    vals = [
        cpc_estimate(critic, xs[k * batch_size:(k + 1) * batch_size],
                     ys[k * batch_size:(k + 1) * batch_size])
        for k in range(n_batches)
    ]
    return float(np.mean(vals))


DEFAULT_SWEEP_SIZES = "10,30,100,300,1000,5000"


def _cmd_sweep(args) -> int:
    cfg = _load_config(args.config)
    scenario = _setting(args, cfg, "scenario") or _missing("scenario")
    sizes = _int_list(_setting(args, cfg, "sizes", DEFAULT_SWEEP_SIZES))
    seeds = _int_list(_setting(args, cfg, "seeds") or _missing("seeds"))
    families = _str_list(_setting(args, cfg, "families") or _missing("families"))
    m = _maybe_int(_setting(args, cfg, "m"))
    d = int(_setting(args, cfg, "d", 10))
    jobs = int(_setting(args, cfg, "jobs", 1))
    for token in families:
        _parse_family_token(token)  # validate early

    tasks = [(scenario, fam, n, seed, m, d)
             for fam in families for n in sizes for seed in seeds]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_sweep_task, tasks))
    else:
        rows = [_sweep_task(t) for t in tasks]
    rows.sort(key=lambda r: (r[0], r[1], r[2], r[3]))
    effective = {"scenario": scenario, "sizes": sizes, "seeds": seeds,
                 "families": families, "m": m, "d": d}
    _write_rows_csv(args.out, effective,
                    ["scenario", "family", "n", "seed", "wrong_edges_ratio",
                     "total_weight"],
                    rows)
    return EXIT_OK


# --------------------------------------------------------------------- #
# baselines
# --------------------------------------------------------------------- #


def _cmd_baselines(args) -> int:
    cfg = _load_config(args.config)
    rhos = _float_list(_setting(args, cfg, "rhos") or _missing("rhos"))
    seeds = _int_list(_setting(args, cfg, "seeds") or _missing("seeds"))
    n = int(_setting(args, cfg, "n", 2048))
    batch_size = int(_setting(args, cfg, "batch_size", 8))
    iterations = int(_setting(args, cfg, "iterations", 300))
    step_size = float(_setting(args, cfg, "step_size", 0.05))

    rows = []
    for rho in rhos:
        true_info = -0.5 * math.log(1.0 - rho * rho)
        for seed in seeds:
            rng = np.random.default_rng(seed)
            x = rng.standard_normal(n)
            y = rho * x + math.sqrt(1.0 - rho * rho) * rng.standard_normal(n)
            half = n // 2
            spec = BatchSpec(batch_size=batch_size, iterations=iterations,
                             step_size=step_size, seed=seed)
            cpc_critic = fit_critic("bilinear", "cpc", x[:half], y[:half], spec=spec)
            cpc_val = _mean_batch_cpc(cpc_critic, x[half:], y[half:], batch_size)
            nwj_critic = fit_critic("bilinear", "nwj", x[:half], y[:half], spec=spec)
            perm = rng.permutation(n - half)
            nwj_val = nwj_estimate(nwj_critic, x[half:], y[half:],
                                   x[half:], y[half:][perm])
            oracle = gaussian_oracle_critic(rho)
            oracle_val = nwj_estimate(oracle, x[half:], y[half:],
                                      x[half:], y[half:][perm])
            rows.append((rho, seed, n, batch_size, "cpc", cpc_val, true_info))
            rows.append((rho, seed, n, batch_size, "nwj", nwj_val, true_info))
            rows.append((rho, seed, n, batch_size, "nwj_oracle", oracle_val,
                         true_info))
    rows.sort(key=lambda r: (r[0], r[1], r[4]))
    effective = {"rhos": rhos, "seeds": seeds, "n": n, "batch_size": batch_size,
                 "iterations": iterations, "step_size": step_size}
    _write_rows_csv(args.out, effective,
                    ["rho", "seed", "n", "batch_size", "estimator", "value",
                     "true_information"],
                    rows)
    return EXIT_OK


# --------------------------------------------------------------------- #
# auc
# --------------------------------------------------------------------- #


def _read_pair_csv(path, value_column: str) -> dict[tuple[int, int], float]:
    import csv as _csv

    out = {}
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = None
        header = None
        for line_no, line in enumerate(fh, start=1):
            if line.startswith("#") or not line.strip():
                continue
            cells = next(_csv.reader([line]))
            if header is None:
                header = [c.strip() for c in cells]
                for col in ("i", "j", value_column):
                    if col not in header:
                        raise DataError(f"{path}:{line_no}: missing column "
                                        f"{col!r}")
                reader = {name: pos for pos, name in enumerate(header)}
                continue
            try:
                i = int(cells[reader["i"]])
                j = int(cells[reader["j"]])
                val = float(cells[reader[value_column]])
            except (ValueError, IndexError) as exc:
                raise DataError(f"{path}:{line_no}: {exc}") from None
            if i == j:
                raise DataError(f"{path}:{line_no}: self-pair ({i},{j})")
            if (i, j) in out:
                raise DataError(f"{path}:{line_no}: duplicate pair ({i},{j})")
            out[(i, j)] = val
    if not out:
        raise DataError(f"{path}: no pair rows")
    return out


def ranked_auc(scores: np.ndarray, labels: np.ndarray) -> float:
    """ROC AUC from the rank statistic, ties averaged."""
    from scipy.stats import rankdata

    labels = np.asarray(labels)
    n_pos = int(labels.sum())
    n_neg = labels.shape[0] - n_pos
    if n_pos == 0 or n_neg == 0:
        raise DataError("truth labels must contain both classes")
    ranks = rankdata(scores)
    return float((ranks[labels == 1].sum() - n_pos * (n_pos + 1) / 2.0)
                 / (n_pos * n_neg))


def _cmd_auc(args) -> int:
    t0 = time.time()
    scores = _read_pair_csv(args.scores, "score")
    truth = _read_pair_csv(args.truth, "edge")
    nodes = {i for i, _ in truth} | {j for _, j in truth}
    expected = {(i, j) for i in nodes for j in nodes if i != j}
    if set(truth) != expected:
        raise DataError("truth must label every ordered pair of its nodes")
    missing = expected - set(scores)
    if missing:
        raise DataError(f"scores missing {len(missing)} ordered pairs "
                        f"(e.g. {sorted(missing)[0]})")
    labels = []
    vals = []
    for pair in sorted(expected):
        lab = truth[pair]
        if lab not in (0.0, 1.0):
            raise DataError(f"truth for pair {pair} must be 0 or 1")
        labels.append(int(lab))
        vals.append(scores[pair])
    auc = ranked_auc(np.asarray(vals), np.asarray(labels))
    _emit_json(args.out, "auc",
               {"scores": str(args.scores), "truth": str(args.truth)},
               None, t0, {"auc": auc, "pairs": len(vals),
                          "positives": int(sum(labels))})
    return EXIT_OK


# --------------------------------------------------------------------- #
# Parser
# --------------------------------------------------------------------- #


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="usable-info",
        description="Predictive information estimation and tree structure "
                    "learning.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command")

    def common(p):
        p.add_argument("--config", help="JSON config file; flags override")

    p = sub.add_parser("simulate", help="generate a synthetic dataset")
    common(p)
    p.add_argument("--scenario")
    p.add_argument("--m", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--rho", type=float)
    p.add_argument("--var-y", type=float, dest="var_y")
    p.add_argument("--noise-var", type=float, dest="noise_var")
    p.add_argument("--parents", help="JSON child->parent map for custom_tree")
    p.add_argument("--exp-mean-mode", action="store_true", default=None,
                   dest="exponential_mean_mode")
    p.add_argument("--out", required=True, help="dataset CSV path")
    p.add_argument("--truth-out", help="ground-truth JSON path")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("estimate", help="estimate information between columns")
    common(p)
    p.add_argument("--data")
    p.add_argument("--x-cols", dest="x_cols")
    p.add_argument("--y-cols", dest="y_cols")
    _family_flags(p)
    p.add_argument("--clamp", action="store_true", default=None)
    p.add_argument("--pac", action="store_true", default=None)
    p.add_argument("--delta", type=float)
    p.add_argument("--pac-b", type=float, dest="pac_b")
    p.add_argument("--kx", type=float)
    p.add_argument("--ky", type=float)
    p.add_argument("--rademacher", type=float)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_estimate)

    p = sub.add_parser("tree", help="learn a maximum-weight directed tree")
    common(p)
    p.add_argument("--data")
    p.add_argument("--sim-config", dest="sim_config")
    p.add_argument("--seed", type=int)
    p.add_argument("--truth", help="ground-truth JSON for scoring")
    p.add_argument("--directed", action="store_true")
    _family_flags(p)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_tree)

    p = sub.add_parser("sweep", help="sample-size sweep over seeds and families")
    common(p)
    p.add_argument("--scenario")
    p.add_argument("--sizes")
    p.add_argument("--seeds")
    p.add_argument("--families")
    p.add_argument("--m", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--jobs", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("baselines", help="benchmark CPC/NWJ on Gaussian pairs")
    common(p)
    p.add_argument("--rhos")
    p.add_argument("--seeds")
    p.add_argument("--n", type=int)
    p.add_argument("--batch-size", type=int, dest="batch_size")
    p.add_argument("--iterations", type=int)
    p.add_argument("--step-size", type=float, dest="step_size")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_baselines)

    p = sub.add_parser("auc", help="rank AUC of edge scores against truth")
    common(p)
    p.add_argument("--scores", required=True)
    p.add_argument("--truth", required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_auc)

    return parser


def _family_flags(p) -> None:
    p.add_argument("--family")
    p.add_argument("--order", type=int)
    p.add_argument("--clip-b", type=float, dest="clip_b")
    p.add_argument("--norm-radius", type=float, dest="norm_radius")
    p.add_argument("--max-iters", type=int, dest="max_iters")
    p.add_argument("--step-size", type=float, dest="step_size")
    p.add_argument("--tolerance", type=float)


if __name__ == "__main__":
    sys.exit(main())
