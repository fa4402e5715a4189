"""Runtime configuration for the retrieval/ranking/explanation pipeline.

All knobs live in one JSON document so batch runs can echo the exact
settings into their reports.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, asdict
from pathlib import Path


@dataclass(frozen=True)
class LlmConfig:
    base_url: str = "https://api.openai.com/v1"
    model: str = "gpt-4o-mini"
    temperature: float = 0.2
    timeout_s: float = 15.0
    max_retries: int = 2
    max_inflight: int = 4
    enabled: bool = False
    api_key_env: str = "HEI_LLM_API_KEY"


@dataclass(frozen=True)
class PipelineConfig:
    # embedding / index
    dim: int = 384
    scheme: str = "hash-v1"
    # retrieval
    k_retrieve: int = 50
    k_mmr: int = 25
    mmr_lambda: float = 0.7
    # ranking utility
    alpha: float = 1.0
    beta: float = 2.0
    portions: tuple[float, ...] = (0.5, 1.0, 1.5)
    eps: float = 0.0
    energy_frac: float = 0.15
    m_max: int = 3
    sugar_g_max: float = 10.0
    sodium_mg_max: float = 500.0
    # evaluation
    tau: float = 50.0
    split_ratio: float = 0.8
    llm: LlmConfig = field(default_factory=LlmConfig)

    def as_dict(self) -> dict:
        d = asdict(self)
        d["portions"] = list(self.portions)
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "PipelineConfig":
        data = dict(data)
        llm = LlmConfig(**data.pop("llm", {}))
        if "portions" in data:
            data["portions"] = tuple(float(p) for p in data["portions"])
        return cls(llm=llm, **data)

    @classmethod
    def from_file(cls, path: str | Path) -> "PipelineConfig":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))
