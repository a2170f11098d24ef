"""Sweep orchestration: per-beta Monte Carlo rows and machine-readable output.

Beta values anchor to integer sample counts n = floor(beta * n_star); betas
mapping to an n that already produced a row are dropped, and each row
reports the realized n. All rows of one sweep share the same trial streams
(common random numbers), so posteriors are nested across rows and reruns of
an identical config are byte-identical.
"""

from __future__ import annotations

import json
import sys
import time
from dataclasses import dataclass

from ._validation import check_positive_int, check_seed
from .channels import BalancedSet, BgtChannel, SbgChannel
from .infotheory import n_star, output_entropy, prior_entropy
from .montecarlo import run_trials
from .priors import DEFAULT_ENUMERATION_BUDGET

CSV_HEADER = (
    "beta,n,mmse,mmse_se,kl_ratio,kl_ratio_se,"
    "pred_ent_ratio,pred_ent_ratio_se,frac_point,wall_ms"
)

MODELS = ("bgt", "sbg-halfspace", "sbg-symmetric", "sbg-custom")


def parse_beta_grid(text: str) -> tuple[float, ...]:
    """Parse 'start:stop:step' or an explicit comma list; all betas > 0."""
    text = text.strip()
    if ":" in text:
        try:
            start, stop, step = (float(v) for v in text.split(":"))
        except ValueError as exc:
            raise ValueError(f"bad beta range {text!r}; expected start:stop:step") from exc
        if step <= 0:
            raise ValueError(f"beta step must be positive, got {step}")
        if start <= 0:
            raise ValueError(f"beta start must be positive, got {start}")
        betas = []
        value = start
        while value <= stop + 1e-12:
            betas.append(round(value, 12))
            value += step
    else:
        betas = [float(v) for v in text.split(",") if v.strip()]
    if not betas or any(b <= 0 for b in betas):
        raise ValueError("beta values must be positive")
    return tuple(betas)


@dataclass(frozen=True)
class SweepConfig:
    model: str = "bgt"
    n_dims: int = 20
    k: int = 3
    q: float = 0.5
    region_spec: str = ""
    betas: tuple[float, ...] = (0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0)
    trials: int = 200
    seed: int = 0
    budget: int = DEFAULT_ENUMERATION_BUDGET
    mc_draws: int = 128
    out: str = ""
    fmt: str = "csv"
    timing: bool = False

    def validate(self) -> "SweepConfig":
        if self.model not in MODELS:
            raise ValueError(f"model must be one of {MODELS}, got {self.model!r}")
        check_positive_int(self.n_dims, "n_dims")
        check_positive_int(self.k, "k")
        check_positive_int(self.trials, "trials")
        check_positive_int(self.mc_draws, "mc_draws")
        check_positive_int(self.budget, "budget")
        check_seed(self.seed)
        if self.fmt not in ("csv", "json-lines"):
            raise ValueError(f"format must be csv or json-lines, got {self.fmt!r}")
        if not self.betas or any(b <= 0 for b in self.betas):
            raise ValueError("beta values must be positive")
        if self.model == "sbg-custom" and not self.region_spec:
            raise ValueError("sbg-custom requires a region spec such as '-0.67449:0.67449'")
        return self

    def channel(self):
        if self.model == "bgt":
            return BgtChannel(self.n_dims, self.k, self.q)
        if self.model == "sbg-halfspace":
            return SbgChannel(self.n_dims, self.k, BalancedSet.half_space())
        if self.model == "sbg-symmetric":
            return SbgChannel(self.n_dims, self.k, BalancedSet.symmetric())
        return SbgChannel(self.n_dims, self.k, BalancedSet.parse(self.region_spec))


@dataclass(frozen=True)
class SweepRow:
    beta: float
    n: int
    mmse: float
    mmse_se: float
    kl_ratio: float
    kl_ratio_se: float
    pred_ent_ratio: float
    pred_ent_ratio_se: float
    frac_point: float
    wall_ms: int

    def csv_line(self) -> str:
        # repr floats: lossless, and byte-for-byte the values JSON-lines carries
        return (
            f"{self.beta!r},{self.n},{self.mmse!r},{self.mmse_se!r},"
            f"{self.kl_ratio!r},{self.kl_ratio_se!r},"
            f"{self.pred_ent_ratio!r},{self.pred_ent_ratio_se!r},"
            f"{self.frac_point!r},{self.wall_ms}"
        )

    def json_line(self) -> str:
        return json.dumps(
            {
                "beta": self.beta,
                "n": self.n,
                "mmse": self.mmse,
                "mmse_se": self.mmse_se,
                "kl_ratio": self.kl_ratio,
                "kl_ratio_se": self.kl_ratio_se,
                "pred_ent_ratio": self.pred_ent_ratio,
                "pred_ent_ratio_se": self.pred_ent_ratio_se,
                "frac_point": self.frac_point,
                "wall_ms": self.wall_ms,
            }
        )


def run_sweep(config: SweepConfig, log=None) -> list[SweepRow]:
    """One row per beta (first beta wins when two map to the same n).

    Measured wall time goes to the log stream; the wall_ms column is zero
    unless `timing` is set, keeping default output byte-stable across runs.
    """
    config = config.validate()
    channel = config.channel()
    prior = channel.prior()
    prior.require_within_budget(config.budget)
    if prior.degenerate:
        raise ValueError("prior has a single atom; sweep ratios are undefined")
    ns = n_star(prior, channel)
    if ns < 1:
        raise ValueError("n_star < 1; increase n_dims or k")
    log_m = prior_entropy(prior)
    h_y = output_entropy(channel)

    plan: list[tuple[float, int]] = []
    seen: set[int] = set()
    for beta in config.betas:
        n = int(beta * ns)
        if n in seen:
            continue
        seen.add(n)
        plan.append((beta, n))

    started = time.perf_counter()
    table = run_trials(
        prior,
        channel,
        [n for _, n in plan],
        config.trials,
        config.seed,
        pred_anchors=[n for _, n in plan],
        mc_draws=config.mc_draws,
        budget=config.budget,
    )
    elapsed_ms = int(round((time.perf_counter() - started) * 1000.0))
    if log is not None:
        print(
            f"sweep: {len(plan)} rows x {config.trials} trials in {elapsed_ms} ms",
            file=log,
        )

    rows = []
    for beta, n in plan:
        if n == 0:
            mmse, mmse_se = 1.0 - prior.k / prior.n_dims, 0.0
        else:
            mmse, mmse_se = table.mmse(n)
        kl, kl_se = table.kl(n)
        pred, pred_se = table.predictive_entropy(n)
        rows.append(
            SweepRow(
                beta=beta,
                n=n,
                mmse=mmse,
                mmse_se=mmse_se,
                kl_ratio=kl / log_m,
                kl_ratio_se=kl_se / log_m,
                pred_ent_ratio=pred / h_y,
                pred_ent_ratio_se=pred_se / h_y,
                frac_point=table.point_mass_fraction(n),
                wall_ms=elapsed_ms if config.timing else 0,
            )
        )
    return rows


def render_rows(rows, fmt: str) -> str:
    if fmt == "csv":
        return "\n".join([CSV_HEADER] + [row.csv_line() for row in rows]) + "\n"
    if fmt == "json-lines":
        return "\n".join(row.json_line() for row in rows) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def write_rows(rows, fmt: str, out: str) -> None:
    text = render_rows(rows, fmt)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
