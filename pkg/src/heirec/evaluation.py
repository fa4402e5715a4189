"""Offline population simulation: split, per-user score change, aggregation.

Every test user runs through the full recommendation pipeline; the report
summarizes the before/after score distributions with threshold
proportions, quantiles, and fixed-bin histograms, and is byte-stable for
a fixed (population, seed, config).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .config import PipelineConfig
from .corpus import FoodIndex
from .hei import DEFAULT_STANDARDS, ScoringStandard, score_user
from .ingest import UserRecord
from .recommender import recommend_for_user

HISTOGRAM_EDGES: tuple[float, ...] = tuple(float(e) for e in range(0, 105, 5))

# Full-scale protocol results, carried in reports for side-by-side reading;
# they are reference fields, not desk-scale expectations.
REFERENCE_TARGETS = {
    "mean_delta": 6.45,
    "sd_delta": 4.02,
    "p_before": 0.4512,
    "p_after": 0.6126,
    "quantiles_before": {"q25": 38.49, "q50": 48.32, "q75": 58.07},
    "quantiles_after": {"q25": 44.84, "q50": 54.77, "q75": 64.66},
}


@dataclass(frozen=True)
class UserOutcome:
    seqn: int
    h_base: float
    h_rec: float
    delta: float
    n_steps: int


@dataclass
class EvaluationReport:
    n_total: int
    n_train: int
    n_test: int
    mean_delta: float
    sd_delta: float
    tau: float
    p_before: float
    p_after: float
    quantiles: dict[str, dict[str, float]]   # before/after/delta -> q25/q50/q75
    histogram: dict[str, list]               # bin_edges, before, after
    config: dict
    seed: int
    reference_targets: dict = field(default_factory=lambda: dict(REFERENCE_TARGETS))

    def as_dict(self) -> dict:
        return {
            "n_total": self.n_total,
            "n_train": self.n_train,
            "n_test": self.n_test,
            "mean_delta": self.mean_delta,
            "sd_delta": self.sd_delta,
            "tau": self.tau,
            "p_before": self.p_before,
            "p_after": self.p_after,
            "quantiles": self.quantiles,
            "histogram": self.histogram,
            "config": self.config,
            "seed": self.seed,
            "reference_targets": self.reference_targets,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, indent=2) + "\n"


def split_population(users: Sequence[UserRecord], ratio: float,
                     seed: int) -> tuple[list[UserRecord], list[UserRecord]]:
    """Deterministic shuffle-split over seqn-sorted input; floor(ratio*n) train."""
    if not 0.0 < ratio < 1.0:
        raise ValueError(f"ratio must be in (0, 1), got {ratio}")
    users = sorted(users, key=lambda u: u.seqn)
    n = len(users)
    if n < 2:
        raise ValueError("need at least 2 users to split")
    perm = np.random.default_rng(seed).permutation(n)
    n_train = math.floor(ratio * n)
    train_idx = set(int(i) for i in perm[:n_train])
    train = [u for i, u in enumerate(users) if i in train_idx]
    test = [u for i, u in enumerate(users) if i not in train_idx]
    return train, test


def simulate_user(user: UserRecord, index: FoodIndex, cfg: PipelineConfig,
                  standards: Sequence[ScoringStandard] = DEFAULT_STANDARDS,
                  ) -> tuple[float, float, float]:
    """(baseline total, post-plan total, delta) for one user."""
    try:
        h_base = score_user(user, standards).total
        result = recommend_for_user(user, index, cfg, standards)
        h_rec = result.plan.final_hei.total
        return h_base, h_rec, h_rec - h_base
    except Exception as exc:
        raise RuntimeError(f"simulation failed for seqn {user.seqn}: {exc}") from exc


def proportion_above(scores: Sequence[float], tau: float) -> float:
    """Fraction of scores strictly above tau."""
    scores = list(scores)
    if not scores:
        raise ValueError("proportion_above requires a non-empty score list")
    return sum(1 for s in scores if s > tau) / len(scores)


def quantiles(scores: Sequence[float],
              probs: Sequence[float] = (0.25, 0.5, 0.75)) -> list[float]:
    """Linear-interpolation quantiles at the given probabilities."""
    scores = list(scores)
    if not scores:
        raise ValueError("quantiles requires a non-empty score list")
    return [float(v) for v in np.quantile(np.asarray(scores, dtype=float),
                                          probs, method="linear")]


def _quantile_block(values: Sequence[float]) -> dict[str, float]:
    q25, q50, q75 = quantiles(values)
    return {"q25": q25, "q50": q50, "q75": q75}


def evaluate_population(users: Sequence[UserRecord], index: FoodIndex,
                        cfg: PipelineConfig, seed: int,
                        standards: Sequence[ScoringStandard] = DEFAULT_STANDARDS,
                        ratio: float | None = None,
                        ) -> tuple[EvaluationReport, list[UserOutcome]]:
    """Split, simulate every test user in seqn order, and aggregate."""
    ratio = cfg.split_ratio if ratio is None else ratio
    train, test = split_population(users, ratio, seed)
    outcomes: list[UserOutcome] = []
    for user in test:
        try:
            h_base = score_user(user, standards).total
            result = recommend_for_user(user, index, cfg, standards)
        except Exception as exc:
            raise RuntimeError(f"simulation failed for seqn {user.seqn}: {exc}") from exc
        h_rec = result.plan.final_hei.total
        outcomes.append(UserOutcome(user.seqn, h_base, h_rec, h_rec - h_base,
                                    n_steps=len(result.plan.steps)))
    before = [o.h_base for o in outcomes]
    after = [o.h_rec for o in outcomes]
    deltas = [o.delta for o in outcomes]

    edges = np.asarray(HISTOGRAM_EDGES)
    hist_before, _ = np.histogram(np.asarray(before), bins=edges)
    hist_after, _ = np.histogram(np.asarray(after), bins=edges)

    report = EvaluationReport(
        n_total=len(users),
        n_train=len(train),
        n_test=len(test),
        mean_delta=float(np.mean(deltas)),
        sd_delta=float(np.std(deltas, ddof=1)) if len(deltas) > 1 else 0.0,
        tau=cfg.tau,
        p_before=proportion_above(before, cfg.tau),
        p_after=proportion_above(after, cfg.tau),
        quantiles={
            "before": _quantile_block(before),
            "after": _quantile_block(after),
            "delta": _quantile_block(deltas),
        },
        histogram={
            "bin_edges": [float(e) for e in HISTOGRAM_EDGES],
            "before": [int(c) for c in hist_before],
            "after": [int(c) for c in hist_after],
        },
        config=cfg.as_dict(),
        seed=seed,
    )
    return report, outcomes


def run_evaluation(users: Sequence[UserRecord], index: FoodIndex,
                   cfg: PipelineConfig, seed: int,
                   standards: Sequence[ScoringStandard] = DEFAULT_STANDARDS,
                   ratio: float | None = None) -> EvaluationReport:
    report, _ = evaluate_population(users, index, cfg, seed, standards, ratio)
    return report
