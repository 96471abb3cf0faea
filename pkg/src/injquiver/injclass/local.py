"""Vertexwise injectivity criterion: injective modules and split source maps."""
from __future__ import annotations

from dataclasses import dataclass

from ..certificate import Certificate, Failure, to_jsonable
from ..quiver import Classification, classify_source_injective
from ..rep.local import assemble_source, local_sources
from ..ring.hom import module_classify, split_epi_witness

INJECTIVE = "injective"
NOT_INJECTIVE = "not_injective"
LOCAL_PASS_UNKNOWN = "local_pass_quiver_unknown"


@dataclass(frozen=True)
class VertexCheck:
    vertex: object
    module_injective: bool
    split: Certificate | Failure

    @property
    def passed(self) -> bool:
        return self.module_injective and bool(self.split)

    def to_json(self) -> dict:
        return {
            "vertex": to_jsonable(self.vertex),
            "module_injective": self.module_injective,
            "source_map_split": self.split.to_json(),
        }


@dataclass(frozen=True)
class InjectivityVerdict:
    overall: str
    classification: Classification
    checks: tuple = ()
    failure: dict | None = None

    @property
    def is_injective(self) -> bool:
        return self.overall == INJECTIVE

    @property
    def local_pass(self) -> bool:
        return self.overall != NOT_INJECTIVE

    def to_json(self) -> dict:
        return {
            "overall": self.overall,
            "classification": self.classification.to_json(),
            "failure": to_jsonable(self.failure),
            "vertices": [c.to_json() for c in self.checks],
        }


def local_checks(X) -> tuple[list[VertexCheck], dict | None]:
    """Run both local conditions everywhere; return the checks and the first failure."""
    checks, failure = [], None
    for loc in local_sources(X):
        inj = module_classify(loc.module).is_injective
        f, _, _ = assemble_source(loc)
        split = split_epi_witness(f)
        checks.append(VertexCheck(loc.label, inj, split))
        if failure is None:
            if not inj:
                failure = {"vertex": loc.label, "condition": "vertex module not injective",
                           "module": loc.module}
            elif not split:
                failure = {"vertex": loc.label, "condition": f"source map {split.reason}",
                           "map": f}
    return checks, failure


def local_injectivity_test(X) -> InjectivityVerdict:
    """Injective / NotInjective(first failure) / LocalPassButQuiverUnknown."""
    cls = classify_source_injective(X.quiver)
    checks, failure = local_checks(X)
    if failure is not None:
        return InjectivityVerdict(NOT_INJECTIVE, cls, tuple(checks), failure)
    overall = INJECTIVE if cls.is_yes else LOCAL_PASS_UNKNOWN
    return InjectivityVerdict(overall, cls, tuple(checks))
