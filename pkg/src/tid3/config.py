"""Learner configuration."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping

from .intervals import RELATIONS, Relation
from .policy import DETERMINISTIC, LEXICOGRAPHIC, TIE_BREAKS, WITNESS_POLICIES


@dataclass(frozen=True)
class StoppingConfig:
    min_instances: int = 1
    max_depth: int | None = None
    min_gain: float = 0.0

    def __post_init__(self) -> None:
        if self.min_instances < 1:
            raise ValueError("min_instances must be >= 1")
        if self.max_depth is not None and self.max_depth < 0:
            raise ValueError("max_depth must be >= 0")
        if self.min_gain < 0:
            raise ValueError("min_gain must be >= 0")


@dataclass(frozen=True)
class LearnerConfig:
    relations: tuple[Relation, ...] = RELATIONS
    tie_break: str = DETERMINISTIC
    witness_policy: str = LEXICOGRAPHIC
    seed: int = 0
    stopping: StoppingConfig = field(default_factory=StoppingConfig)
    extend_domain: bool = True

    def __post_init__(self) -> None:
        rels = set(self.relations)
        if not rels:
            raise ValueError("relation set must be nonempty")
        # canonical order, no duplicates
        object.__setattr__(self, "relations", tuple(r for r in RELATIONS if r in rels))
        if self.tie_break not in TIE_BREAKS:
            raise ValueError(f"tie_break must be one of {TIE_BREAKS}")
        if self.witness_policy not in WITNESS_POLICIES:
            raise ValueError(f"witness_policy must be one of {WITNESS_POLICIES}")

    @classmethod
    def with_relations(cls, tags: Iterable[str], **kw: Any) -> "LearnerConfig":
        return cls(relations=tuple(Relation.parse(t) for t in tags), **kw)

    def to_dict(self) -> dict[str, Any]:
        return {
            "relations": [r.value for r in self.relations],
            "tie_break": self.tie_break,
            "witness_policy": self.witness_policy,
            "seed": self.seed,
            "extend_domain": self.extend_domain,
            "stopping": {
                "min_instances": self.stopping.min_instances,
                "max_depth": self.stopping.max_depth,
                "min_gain": self.stopping.min_gain,
            },
        }

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "LearnerConfig":
        st = d.get("stopping", {})
        return cls(
            relations=tuple(Relation.parse(t) for t in d["relations"]),
            tie_break=d.get("tie_break", DETERMINISTIC),
            witness_policy=d.get("witness_policy", LEXICOGRAPHIC),
            seed=int(d.get("seed", 0)),
            extend_domain=bool(d.get("extend_domain", True)),
            stopping=StoppingConfig(
                min_instances=int(st.get("min_instances", 1)),
                max_depth=st.get("max_depth"),
                min_gain=float(st.get("min_gain", 0.0)),
            ),
        )
