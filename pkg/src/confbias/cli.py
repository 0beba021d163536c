"""Command-line front end.

Every command writes CSV (or JSON where noted) to stdout or ``--out``.
Stochastic commands require ``--seed``. Exit status: 0 on success, 1 when
a verification fails, 2 on invalid input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import models as M
from .core import (
    MODEL_TYPES,
    ConfbiasError,
    ConstraintViolation,
    Divergent,
    ScenarioConfig,
    model_from_dict,
    model_to_dict,
    scenario_from_json,
)
from .montecarlo import McPlan, influence_replicates, run_mc, summarize
from .sequential import (
    fmt,
    loglog_slope,
    polarization_paths,
    primacy_variance_path,
    run_trajectory,
    trajectory_csv,
)
from .rng import Stream
from .taxonomy import classify, severity_order

PARAMS = ("beta", "gamma", "a", "b", "g")
Z_PASS = 3.0


class UsageError(Exception):
    pass


# --------------------------------------------------------------------------
# helpers
# --------------------------------------------------------------------------


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) if isinstance(v, (float, int, np.floating, np.integer))
                    and not isinstance(v, bool) else _cell(v) for v in row])
    return buf.getvalue()


def _cell(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    return v


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _model_from_args(args, beta=None):
    params = {k: getattr(args, k) for k in PARAMS if getattr(args, k, None) is not None}
    if beta is not None:
        params["beta"] = beta
    cls = MODEL_TYPES[args.model]
    wanted = set(cls.__dataclass_fields__)
    missing = sorted(wanted - set(params))
    if missing:
        raise ConstraintViolation(missing[0], f"--{missing[0]} is required for {args.model}")
    return model_from_dict({"variant": args.model, **{k: params[k] for k in wanted}})


def parse_model_spec(text: str):
    """``variant:key=value,key=value`` -> model, e.g. ``exponential:beta=0.5``."""
    variant, _, rest = text.partition(":")
    d = {"variant": variant.strip()}
    for item in filter(None, rest.split(",")):
        key, sep, value = item.partition("=")
        if not sep:
            raise ConstraintViolation(key.strip(), f"expected key=value in {text!r}")
        try:
            d[key.strip()] = float(value)
        except ValueError:
            raise ConstraintViolation(key.strip(), f"not a number: {value!r}") from None
    return model_from_dict(d)


def _float_list(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _seed(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return v


def _add_model_flags(p, required=True, multi_beta=False):
    p.add_argument("--model", choices=sorted(MODEL_TYPES), required=required)
    if multi_beta:
        p.add_argument("--beta", type=_float_list, help="one value or a comma-separated list")
    else:
        p.add_argument("--beta", type=float)
    p.add_argument("--gamma", type=float)
    p.add_argument("--a", type=float)
    p.add_argument("--b", type=float)
    p.add_argument("--g", type=float)


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------


def _asymptotic_row(model, sigma):
    s = M.asymptotic_summary(model, sigma)
    return [model.variant, json.dumps(model_to_dict(model), sort_keys=True), sigma,
            s.lam, s.subj_var_coeff, s.true_var_coeff, s.diverges]


ASYMPTOTICS_HEADER = ("variant", "model", "sigma", "lambda", "subj_var_coeff",
                      "true_var_coeff", "diverges")


def cmd_asymptotics(args) -> int:
    if args.scenario:
        config, model = scenario_from_json(Path(args.scenario).read_text())
        sigma = args.sigma if args.sigma is not None else config.sigma
    else:
        if not args.model:
            raise UsageError("--model or --scenario is required")
        model = _model_from_args(args)
        sigma = args.sigma if args.sigma is not None else 1.0
    row = _asymptotic_row(model, sigma)
    if args.format == "json":
        doc = dict(zip(ASYMPTOTICS_HEADER, row))
        doc["model"] = model_to_dict(model)
        for k in ("lambda", "subj_var_coeff", "true_var_coeff"):
            if math.isnan(doc[k]):
                doc[k] = None
        _emit(json.dumps(doc) + "\n", args.out)
    else:
        _emit(_csv(ASYMPTOTICS_HEADER, [row]), args.out)
    return 0


def _scenario_from_args(args, defaults=None):
    defaults = defaults or {}
    if getattr(args, "scenario", None):
        config, model = scenario_from_json(Path(args.scenario).read_text())
        if args.seed is not None:
            config = ScenarioConfig(config.mu, config.sigma, config.prior_mean,
                                    config.prior_var, config.n_obs, args.seed)
        return config, model
    vals = {}
    for key in ("mu", "sigma", "prior_mean", "prior_var", "n_obs", "seed"):
        v = getattr(args, key, None)
        vals[key] = v if v is not None else defaults.get(key)
        if vals[key] is None:
            raise ConstraintViolation(key, f"--{key.replace('_', '-')} is required")
    model = _model_from_args(args) if args.model else defaults["model"]
    return ScenarioConfig(**vals), model


def cmd_simulate(args) -> int:
    config, model = _scenario_from_args(args)
    _emit(trajectory_csv(run_trajectory(config, model, xi=args.xi)), args.out)
    return 0


MC_HEADER = ("variant", "beta", "sigma", "n", "R", "seed", "predicted_lambda", "mc_mean",
             "mc_se", "z_mean", "predicted_n_var", "mc_n_var", "mc_n_var_se", "z_var",
             "subjective_n_var", "pass")


def mc_verify_rows(models, sigma, n, R, seed, workers=1):
    rows = []
    for model in models:
        predicted = M.asymptotic_mean(model, sigma)
        norm = 1.0 if model.variant == "beta-odds" else sigma**2
        pred_var = M.true_variance_coeff(model, sigma) * norm
        subj = M.subjective_variance_coeff(model, sigma) * norm
        res = run_mc(McPlan(R, n, seed, model, sigma, workers=workers))
        z_mean = (res.mean - predicted) / res.se if res.se > 0 else math.inf
        z_var = (n * res.var - pred_var) / (n * res.var_se) if res.var_se > 0 else math.inf
        ok = abs(z_mean) <= Z_PASS and abs(z_var) <= Z_PASS
        rows.append([model.variant, getattr(model, "beta", math.nan), sigma, n, R, seed,
                     predicted, res.mean, res.se, z_mean, pred_var, n * res.var,
                     n * res.var_se, z_var, subj, ok])
    return rows


def cmd_mc_verify(args) -> int:
    betas = args.beta if args.beta else [None]
    models = []
    for b in betas:
        m = _model_from_args(args, beta=b)
        if M.asymptotic_summary(m, args.sigma).diverges:
            raise ConstraintViolation("model", f"{m.variant} has no finite bias to verify")
        models.append(m)
    rows = mc_verify_rows(models, args.sigma, args.n, args.R, args.seed, args.threads)
    _emit(_csv(MC_HEADER, rows), args.out)
    return 0 if all(r[-1] for r in rows) else 1


def cmd_influence(args) -> int:
    model = _model_from_args(args)
    sigma = args.sigma
    lam = M.asymptotic_bias(model, sigma)
    lo = args.x_min if args.x_min is not None else lam - 3 * sigma
    hi = args.x_max if args.x_max is not None else lam + 6 * sigma
    xs = np.linspace(lo, hi, args.points)
    inf = M.influence(model, xs, sigma)
    if not args.empirical:
        _emit(_csv(("x", "influence"), zip(xs, inf)), args.out)
        return 0
    if args.seed is None:
        raise ConstraintViolation("seed", "--seed is required with --empirical")
    reps = influence_replicates(model, xs, sigma, args.n, args.seed, args.R, workers=args.threads)
    stats = [summarize(reps[:, j]) for j in range(len(xs))]
    rows = [(x, f, s.mean, s.se) for x, f, s in zip(xs, inf, stats)]
    _emit(_csv(("x", "influence", "empirical_mean", "empirical_se"), rows), args.out)
    return 0


FIG1 = dict(mu=140.0, sigma=10.0, prior_mean=120.0, prior_var=25.0, n_obs=2000, beta=0.2)


def figure1_csv(seed, n_obs=FIG1["n_obs"], beta=FIG1["beta"], mu=FIG1["mu"],
                sigma=FIG1["sigma"], prior_mean=FIG1["prior_mean"],
                prior_var=FIG1["prior_var"]) -> str:
    config = ScenarioConfig(mu, sigma, prior_mean, prior_var, n_obs, seed)
    return trajectory_csv(run_trajectory(config, model_from_dict(
        {"variant": "exponential", "beta": beta})))


def figure2_csv(beta=1.0, sigma=1.0, points=601) -> str:
    exp_model = model_from_dict({"variant": "exponential", "beta": beta})
    lg_model = model_from_dict({"variant": "log-gamma", "beta": beta})
    lam = M.asymptotic_bias(exp_model, sigma)
    xs = np.linspace(lam - 3 * sigma, lam + 6 * sigma, points)
    rows = zip(xs, M.influence(exp_model, xs, sigma), M.influence(lg_model, xs, sigma))
    return _csv(("x", "influence_exponential", "influence_loggamma"), rows)


def figure3_csv(beta_min=0.05, beta_max=5.0, points=100) -> str:
    rows = []
    for b in np.geomspace(beta_min, beta_max, points):
        m = model_from_dict({"variant": "sweet-spot", "beta": float(b)})
        rows.append((b, M.subjective_variance_coeff(m), M.true_variance_coeff(m)))
    return _csv(("beta", "subjective_var_coeff", "true_var_coeff"), rows)


def cmd_figure(args) -> int:
    if args.number == 1:
        if args.seed is None:
            raise ConstraintViolation("seed", "--seed is required for figure 1")
        kw = {k: getattr(args, k) for k in ("n_obs", "beta", "mu", "sigma", "prior_mean",
                                             "prior_var") if getattr(args, k) is not None}
        text = figure1_csv(args.seed, **kw)
    elif args.number == 2:
        kw = {k: getattr(args, k) for k in ("beta", "sigma") if getattr(args, k) is not None}
        text = figure2_csv(points=args.points or 601, **kw)
    else:
        text = figure3_csv(points=args.points or 100)
    _emit(text, args.out)
    return 0


DEFAULT_CLASSIFY = (
    "exponential:beta=1", "relative-exponential:beta=0.5", "sweet-spot:beta=1",
    "constant-variance:beta=1,gamma=2", "log-gamma:beta=1", "beta-odds:a=3,b=3,g=1",
)


def cmd_classify(args) -> int:
    models = [parse_model_spec(s) for s in (args.spec or DEFAULT_CLASSIFY)]
    docs = []
    for m in severity_order(models):
        docs.append({"model": model_to_dict(m), **classify(m, args.sigma).to_dict()})
    _emit(json.dumps(docs, indent=2) + "\n", args.out)
    return 0


def primacy_table(xi, sigma, n, seed, prior_var=None):
    v = primacy_variance_path(xi, sigma, n, prior_var)
    # posterior mean follows the same weights; observations from N(0, sigma^2)
    x = Stream(seed, 0).normal(n, 0.0, sigma)
    v_prev = np.concatenate(([sigma**2 if prior_var is None else prior_var], v[:-1]))
    gain = (1.0 / v - 1.0 / v_prev) * v  # weight of the new observation
    mean = np.empty(n)
    m = 0.0
    for t in range(n):
        m += gain[t] * (x[t] - m)
        mean[t] = m
    idx = np.unique(np.geomspace(max(n // 100, 1), n, 200).astype(int)) - 1
    slope = loglog_slope(idx + 1, v[idx])
    return x, mean, v, slope


def cmd_primacy(args) -> int:
    x, mean, v, slope = primacy_table(args.xi, args.sigma, args.n, args.seed, args.prior_var)
    rows = zip(range(1, args.n + 1), x, mean, v)
    _emit(_csv(("n", "observation", "post_mean", "post_var"), rows), args.out)
    sys.stderr.write(f"fitted_slope,{fmt(slope)}\nexpected_slope,{fmt(-1 / (args.xi + 1))}\n")
    return 0


def cmd_polarize(args) -> int:
    specs = args.agent or ["exponential:beta=0.5", "exponential:beta=-0.5"]
    agents = [parse_model_spec(s) for s in specs]
    for m in agents:
        if M.asymptotic_summary(m, args.sigma).diverges:
            raise ConstraintViolation("agent", f"{m.variant} has no finite bias")
    schedule = np.unique(np.geomspace(1, args.n_max, args.points).astype(int))
    sched, means, probs = polarization_paths(agents, args.L, args.mu, args.sigma, schedule,
                                             args.seed, args.prior_mean, args.prior_var)
    k = len(agents)
    header = ["n"] + [f"p_agent{j + 1}" for j in range(k)] + [f"mean_agent{j + 1}" for j in range(k)]
    rows = [[n] + [probs[j][i] for j in range(k)] + [means[j][i] for j in range(k)]
            for i, n in enumerate(sched)]
    _emit(_csv(header, rows), args.out)
    return 0


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="confbias", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("asymptotics", help="bias and variance coefficients of one model")
    _add_model_flags(a, required=False)
    a.add_argument("--sigma", type=float)
    a.add_argument("--scenario")
    a.add_argument("--format", choices=("csv", "json"), default="csv")
    a.add_argument("--out")
    a.set_defaults(func=cmd_asymptotics)

    s = sub.add_parser("simulate", help="sequential belief trajectory")
    _add_model_flags(s, required=False)
    s.add_argument("--scenario")
    s.add_argument("--mu", type=float)
    s.add_argument("--sigma", type=float)
    s.add_argument("--prior-mean", type=float)
    s.add_argument("--prior-var", type=float)
    s.add_argument("--n-obs", type=int)
    s.add_argument("--seed", type=_seed)
    s.add_argument("--xi", type=float, help="compose with primacy weighting")
    s.add_argument("--out")
    s.set_defaults(func=cmd_simulate)

    mc = sub.add_parser("mc-verify", help="Monte Carlo check of bias and true variance")
    _add_model_flags(mc, multi_beta=True)
    mc.add_argument("--sigma", type=float, default=1.0)
    mc.add_argument("--n", type=int, default=100_000)
    mc.add_argument("--R", type=int, default=200)
    mc.add_argument("--seed", type=_seed, required=True)
    mc.add_argument("--threads", type=int, default=1)
    mc.add_argument("--out")
    mc.set_defaults(func=cmd_mc_verify)

    i = sub.add_parser("influence", help="influence function on a grid")
    _add_model_flags(i)
    i.add_argument("--sigma", type=float, default=1.0)
    i.add_argument("--x-min", type=float)
    i.add_argument("--x-max", type=float)
    i.add_argument("--points", type=int, default=601)
    i.add_argument("--empirical", action="store_true")
    i.add_argument("--n", type=int, default=10_000)
    i.add_argument("--R", type=int, default=100)
    i.add_argument("--seed", type=_seed)
    i.add_argument("--threads", type=int, default=1)
    i.add_argument("--out")
    i.set_defaults(func=cmd_influence)

    f = sub.add_parser("figure", help="data behind figures 1-3")
    f.add_argument("number", type=int, choices=(1, 2, 3))
    f.add_argument("--seed", type=_seed)
    f.add_argument("--beta", type=float)
    f.add_argument("--sigma", type=float)
    f.add_argument("--mu", type=float)
    f.add_argument("--prior-mean", type=float)
    f.add_argument("--prior-var", type=float)
    f.add_argument("--n-obs", type=int)
    f.add_argument("--points", type=int)
    f.add_argument("--out")
    f.set_defaults(func=cmd_figure)

    c = sub.add_parser("classify", help="four-property classification (JSON)")
    c.add_argument("--spec", action="append",
                   help="model as variant:key=value,...; repeatable")
    c.add_argument("--sigma", type=float, default=1.0)
    c.add_argument("--out")
    c.set_defaults(func=cmd_classify)

    pr = sub.add_parser("primacy", help="posterior variance under primacy weighting")
    pr.add_argument("--xi", type=float, required=True)
    pr.add_argument("--sigma", type=float, default=1.0)
    pr.add_argument("--n", type=int, default=100_000)
    pr.add_argument("--prior-var", type=float)
    pr.add_argument("--seed", type=_seed, required=True)
    pr.add_argument("--out")
    pr.set_defaults(func=cmd_primacy)

    po = sub.add_parser("polarize", help="polarization probabilities of biased agents")
    po.add_argument("--agent", action="append", help="model as variant:key=value,...")
    po.add_argument("--L", type=float, default=0.0)
    po.add_argument("--mu", type=float, default=0.0)
    po.add_argument("--sigma", type=float, default=1.0)
    po.add_argument("--n-max", type=int, default=100_000)
    po.add_argument("--points", type=int, default=60)
    po.add_argument("--prior-mean", type=float, default=0.0)
    po.add_argument("--prior-var", type=float, default=1.0)
    po.add_argument("--seed", type=_seed, required=True)
    po.add_argument("--out")
    po.set_defaults(func=cmd_polarize)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfbiasError, UsageError, ValueError, OSError) as exc:
        if isinstance(exc, Divergent):
            msg = f"divergent model: {exc}"
        elif isinstance(exc, ConstraintViolation):
            msg = f"invalid {exc.field}: {exc.reason}"
        else:
            msg = str(exc)
        print(f"confbias {args.command}: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
