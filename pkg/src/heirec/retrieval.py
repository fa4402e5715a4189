"""Query construction, cosine top-k search, and diversity re-ranking."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corpus import DEFAULT_DIM, SCHEME_HASH_V1, FoodIndex, embed_text
from .hei import ADEQUACY, MODERATION, RATIO, HeiScore, STANDARD_BY_ID
from .ingest import UserRecord

DEFICIT_FRACTION = 0.5
FALLBACK_QUERY_TEXT = "balanced diet variety"


@dataclass(frozen=True)
class QueryContext:
    seqn: int
    query_text: str
    vector: np.ndarray
    deficit_components: tuple[str, ...]


@dataclass(frozen=True, slots=True)
class ScoredFood:
    food_code: int
    similarity: float


def deficit_components(hei: HeiScore) -> tuple[str, ...]:
    """Components scoring under half their maximum, worst fraction first."""
    scored = []
    for cid, comp in hei.components.items():
        frac = comp.points / comp.max_points
        if frac < DEFICIT_FRACTION:
            scored.append((frac, cid))
    scored.sort()
    return tuple(cid for _, cid in scored)


def build_query(user: UserRecord, hei: HeiScore,
                scheme: str = SCHEME_HASH_V1, dim: int = DEFAULT_DIM) -> QueryContext:
    """Render the profile's needs into the fixed query template and embed it."""
    deficits = deficit_components(hei)
    phrases = []
    for cid in deficits:
        standard = STANDARD_BY_ID[cid]
        name = standard.display.lower()
        if standard.kind in (ADEQUACY, RATIO):
            phrases.append(f"needs more {name}")
        elif standard.kind == MODERATION:
            phrases.append(f"needs less {name}")
    if user.flag_diabetes:
        phrases.append("low added sugar")
    if user.flag_cvd:
        phrases.append("low sodium")
    text = "; ".join(phrases) if phrases else FALLBACK_QUERY_TEXT
    return QueryContext(
        seqn=user.seqn,
        query_text=text,
        vector=embed_text(text, dim, scheme),
        deficit_components=deficits,
    )


def search(index: FoodIndex, q: np.ndarray, k: int) -> list[ScoredFood]:
    """Exact top-k by dot product (cosine over unit vectors); ties by food_code."""
    n = len(index)
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, {n}], got {k}")
    sims = index.dense64 @ np.asarray(q, dtype=np.float64)
    codes = np.array([it.food_code for it in index.items])
    order = np.lexsort((codes, -sims))[:k]
    return [ScoredFood(int(codes[i]), float(sims[i])) for i in order]


def mmr_rerank(candidates: list[ScoredFood], index: FoodIndex, q: np.ndarray,
               lam: float, k: int) -> list[ScoredFood]:
    """Greedy maximal-marginal-relevance selection.

    Each step maximizes lam*sim(q, d) - (1-lam)*max_s sim(d, s) over the
    unselected candidates; the first pick is the top-similarity item and
    ties break toward the lower food code.
    """
    if k > len(candidates):
        raise ValueError(f"k={k} exceeds candidate count {len(candidates)}")
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda must be in [0, 1], got {lam}")
    if k <= 0 or not candidates:
        return []
    rows = [index.row_of(c.food_code) for c in candidates]
    mat = index.dense64[rows]
    pairwise = mat @ mat.T
    rel = np.array([c.similarity for c in candidates])
    codes = [c.food_code for c in candidates]

    first = min(range(len(candidates)), key=lambda i: (-rel[i], codes[i]))
    selected = [first]
    max_sim = pairwise[:, first].copy()
    remaining = [i for i in range(len(candidates)) if i != first]
    while len(selected) < k and remaining:
        best = min(
            remaining,
            key=lambda i: (-(lam * rel[i] - (1.0 - lam) * max_sim[i]), codes[i]),
        )
        selected.append(best)
        remaining.remove(best)
        np.maximum(max_sim, pairwise[:, best], out=max_sim)
    return [candidates[i] for i in selected]


def filter_exclusions(candidates: list[ScoredFood], index: FoodIndex,
                      exclusions: frozenset[str]) -> list[ScoredFood]:
    """Drop candidates whose tags intersect the user's exclusion set."""
    if not exclusions:
        return list(candidates)
    return [c for c in candidates if not (index.item(c.food_code).tags & exclusions)]
