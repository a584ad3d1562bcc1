"""
Command Implementations

One cmd_* function per subcommand. Each takes a loaded instance (and its
label) plus the subcommand's parameters and returns a Report; rendering and
exit codes are the CLI's business. Words are reported 1-based.
"""

import math
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Union

from backend.infra.config import Config
from backend.lattice.corevec import RationalCovector, RationalVector
from backend.lattice.looijenga import pi_xi, polyhedral_type_check, stabilizer_trivial
from backend.lattice.reports import CoverageSample, Dominant
from backend.lattice.roots import builtin_list, coxeter_matrix, validate_root_system
from backend.lattice.weyl import growth_series, make_dominant, orbit, tile_check, verify_relations
from src.core.instance import instance_digest, to_action, to_cone, to_root_system
from src.core.schema import (
    ActiveFacetEntry,
    BuiltinEntry,
    BuiltinListResult,
    CoxeterResult,
    DominantResult,
    GrowthResult,
    InstanceFile,
    OrbitResult,
    OverlapEntry,
    PiXiReportResult,
    PolyhedralCheckResult,
    RelationCheckResult,
    RelationsResult,
    Report,
    SampleEntry,
    TilingResult,
    ValidationResult,
)


def _word(word: Optional[Sequence[int]]) -> Optional[List[int]]:
    return None if word is None else [i + 1 for i in word]


def _order(value) -> Union[int, str]:
    return "inf" if value == math.inf else int(value)


def _rationals(values: Iterable[Fraction]) -> List[str]:
    return [str(v) for v in values]


def _sample(sample: CoverageSample) -> SampleEntry:
    return SampleEntry(point=str(sample.point), word=_word(sample.word))


def _seed(seed: Optional[int]) -> int:
    return Config.get("DEFAULT_SEED") if seed is None else seed


def _report(command: str, instance: InstanceFile, label: str, result, seed: Optional[int] = None) -> Report:
    return Report(command=command, instance=label, digest=instance_digest(instance), seed=_seed(seed), result=result)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_validate(instance: InstanceFile, label: str) -> Report:
    report = validate_root_system(to_root_system(instance))
    return _report("validate", instance, label, ValidationResult(
        valid=report.valid,
        axiom=report.axiom,
        axiom_name=report.axiom_name,
        indices=[i + 1 for i in report.indices],
        values=_rationals(report.values),
        message=report.message,
    ))


def cmd_coxeter(instance: InstanceFile, label: str) -> Report:
    cox = coxeter_matrix(to_root_system(instance))
    return _report("coxeter", instance, label,
                   CoxeterResult(matrix=[[_order(m) for m in row] for row in cox.entries]))


def cmd_relations(instance: InstanceFile, label: str, power_bound: Optional[int] = None) -> Report:
    report = verify_relations(to_root_system(instance), power_bound)
    return _report("relations", instance, label, RelationsResult(
        power_bound=report.power_bound,
        passed=report.passed,
        involution_failures=[i + 1 for i in report.involution_failures],
        checks=[RelationCheckResult(pair=[c.i + 1, c.j + 1], expected=_order(c.expected), order=c.order,
                                    passed=c.passed) for c in report.checks],
    ))


def cmd_growth(instance: InstanceFile, label: str, depth: int) -> Report:
    counts = growth_series(to_root_system(instance), depth)
    return _report("growth", instance, label, GrowthResult(depth=depth, counts=counts, total=1 + sum(counts)))


def cmd_orbit(instance: InstanceFile, label: str, point: str, depth: int) -> Report:
    x = RationalVector.parse(point)
    images = orbit(to_root_system(instance), x, depth)
    return _report("orbit", instance, label, OrbitResult(point=str(x), depth=depth, size=len(images),
                                                         points=[str(p) for p in images]))


def cmd_dominant(instance: InstanceFile, label: str, point: str, cap: Optional[int] = None,
                 xi: Optional[str] = None) -> Report:
    outcome = make_dominant(to_root_system(instance), RationalVector.parse(point),
                            xi=RationalCovector.parse(xi) if xi else None, step_cap=cap)
    if isinstance(outcome, Dominant):
        result = DominantResult(status="dominant", point=str(outcome.point), word=_word(outcome.word),
                                steps=len(outcome.word))
    else:
        result = DominantResult(status="undecided", point=str(outcome.point), word=None, steps=outcome.steps)
    return _report("dominant", instance, label, result)


def cmd_tile(instance: InstanceFile, label: str, cone: str, depth: int, samples: Optional[int] = None,
             seed: Optional[int] = None, jobs: Optional[int] = None) -> Report:
    seed = _seed(seed)
    report = tile_check(to_root_system(instance), to_cone(instance, cone), depth, samples, seed, jobs)
    return _report("tile", instance, label, TilingResult(
        cone=cone,
        depth=depth,
        translate_count=report.translate_count,
        overlap_count=len(report.overlap_witnesses),
        covered=report.covered_count,
        samples=len(report.coverage),
        overlap_witnesses=[OverlapEntry(word1=_word(w.word1), word2=_word(w.word2),
                                        full_dimensional=w.full_dimensional) for w in report.overlap_witnesses],
        uncovered=[_sample(s) for s in report.coverage if not s.covered],
        coverage=[_sample(s) for s in report.coverage],
    ), seed=seed)


def cmd_pixi(instance: InstanceFile, label: str, action: str, xi: str, depth: int,
             samples: Optional[int] = None, seed: Optional[int] = None,
             sample_depth: Optional[int] = None) -> Report:
    group = to_action(instance, action)
    functional = RationalCovector.parse(xi)
    result = pi_xi(group, functional, depth)
    cone = result.cone
    check = None
    if samples:
        sampled = polyhedral_type_check(group, cone, depth, samples, _seed(seed),
                                        depth if sample_depth is None else sample_depth)
        check = PolyhedralCheckResult(depth=depth, samples=samples, passed=sampled.passed,
                                      failures=[_sample(s) for s in sampled.failures])
    return _report("pixi", instance, label, PiXiReportResult(
        action=action,
        xi=str(functional),
        depth=depth,
        stabilized=result.stabilized,
        stabilizer_trivial=stabilizer_trivial(group, functional, depth),
        dimension=cone.dimension,
        rays=[str(r) for r in cone.rays],
        facets=[str(f) for f in cone.facets],
        active_words=[ActiveFacetEntry(normal=",".join(str(x) for x in a.normal), word=_word(a.word))
                      for a in result.active_words],
        preservation_violations=len(group.preservation_violations()),
        polyhedral_check=check,
    ), seed=seed)


def cmd_builtin_list() -> Report:
    return Report(command="builtin", seed=_seed(None), result=BuiltinListResult(
        builtins=[BuiltinEntry(name=name, section=section, provenance=provenance)
                  for name, section, provenance in builtin_list()]))
