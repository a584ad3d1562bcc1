from typing import Dict, List, Optional, Union
from pydantic import BaseModel, Field, StrictInt, model_validator


# ---------------------------------------------------------------------------
# Instance file
# ---------------------------------------------------------------------------

class RootEntry(BaseModel):
    E: List[StrictInt] = Field(..., description="Divisor class E as integer coordinates")
    ell: List[StrictInt] = Field(..., description="Curve class ell as integer coordinates of a covector")
    label: str = Field(default="", description="Free-form root label")


class ConeEntry(BaseModel):
    rays: Optional[List[List[StrictInt]]] = Field(None, description="Ray generators")
    facets: Optional[List[List[StrictInt]]] = Field(None, description="Inequalities f(x) >= 0")

    @model_validator(mode="after")
    def _one_representation(self):
        if (self.rays is None) == (self.facets is None):
            raise ValueError("A cone needs exactly one of 'rays' or 'facets'")
        return self


class ActionEntry(BaseModel):
    generators: List[List[List[StrictInt]]] = Field(..., description="Integer matrices acting on column vectors")
    cone: str = Field(..., description="Name of the cone the group acts on")
    labels: Optional[List[str]] = Field(None, description="One label per generator")


class InstanceFile(BaseModel):
    rank: StrictInt = Field(..., ge=1, description="Ambient rank n of V = Q^n")
    name: str = Field(default="", description="Instance name")
    kind_tag: Optional[str] = Field(None, description="'sm', 'big' or a custom tag")
    roots: List[RootEntry] = Field(default_factory=list)
    cones: Dict[str, ConeEntry] = Field(default_factory=dict)
    actions: Dict[str, ActionEntry] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _check_lengths(self):
        n = self.rank
        for index, root in enumerate(self.roots):
            if len(root.E) != n or len(root.ell) != n:
                raise ValueError(f"roots[{index}]: E and ell must have length {n}")
        for name, cone in self.cones.items():
            for vector in (cone.rays or []) + (cone.facets or []):
                if len(vector) != n:
                    raise ValueError(f"cones.{name}: every vector must have length {n}")
        for name, action in self.actions.items():
            for matrix in action.generators:
                if len(matrix) != n or any(len(row) != n for row in matrix):
                    raise ValueError(f"actions.{name}: generators must be {n}x{n}")
            if action.labels is not None and len(action.labels) != len(action.generators):
                raise ValueError(f"actions.{name}: one label per generator expected")
        return self


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

class ValidationResult(BaseModel):
    valid: bool
    axiom: Optional[int] = None
    axiom_name: Optional[str] = None
    indices: List[int] = Field(default_factory=list, description="1-based witness root indices")
    values: List[str] = Field(default_factory=list, description="Witness pairing values")
    message: str = ""


class CoxeterResult(BaseModel):
    matrix: List[List[Union[int, str]]] = Field(..., description="Pairwise orders; 'inf' for no relation")


class RelationCheckResult(BaseModel):
    pair: List[int]
    expected: Union[int, str]
    order: Optional[int] = None
    passed: bool


class RelationsResult(BaseModel):
    power_bound: int
    passed: bool
    involution_failures: List[int] = Field(default_factory=list)
    checks: List[RelationCheckResult] = Field(default_factory=list)


class GrowthResult(BaseModel):
    depth: int
    counts: List[int]
    total: int = Field(..., description="Elements in the ball, identity included")


class OrbitResult(BaseModel):
    point: str
    depth: int
    size: int
    points: List[str]


class DominantResult(BaseModel):
    status: str = Field(..., description="'dominant' or 'undecided'")
    point: str
    word: Optional[List[int]] = Field(None, description="1-based word replaying the point to the input")
    steps: int


class OverlapEntry(BaseModel):
    word1: List[int]
    word2: List[int]
    full_dimensional: bool


class SampleEntry(BaseModel):
    point: str
    word: Optional[List[int]] = None


class TilingResult(BaseModel):
    cone: str
    depth: int
    translate_count: int
    overlap_count: int
    covered: int
    samples: int
    overlap_witnesses: List[OverlapEntry] = Field(default_factory=list)
    uncovered: List[SampleEntry] = Field(default_factory=list)
    coverage: List[SampleEntry] = Field(default_factory=list)


class ActiveFacetEntry(BaseModel):
    normal: str
    word: Optional[List[int]] = None


class PolyhedralCheckResult(BaseModel):
    depth: int
    samples: int
    passed: bool
    failures: List[SampleEntry] = Field(default_factory=list)


class PiXiReportResult(BaseModel):
    action: str
    xi: str
    depth: int
    stabilized: bool
    stabilizer_trivial: bool
    dimension: int
    rays: List[str]
    facets: List[str]
    active_words: List[ActiveFacetEntry] = Field(default_factory=list)
    preservation_violations: int = 0
    polyhedral_check: Optional[PolyhedralCheckResult] = None


class BuiltinEntry(BaseModel):
    name: str
    section: str
    provenance: str


class BuiltinListResult(BaseModel):
    builtins: List[BuiltinEntry]


ResultModel = Union[
    ValidationResult, CoxeterResult, RelationsResult, GrowthResult, OrbitResult,
    DominantResult, TilingResult, PiXiReportResult, BuiltinListResult,
]


class Report(BaseModel):
    command: str = Field(..., description="Subcommand that produced the report")
    instance: Optional[str] = Field(None, description="Builtin name or instance file path")
    digest: Optional[str] = Field(None, description="SHA-256 of the normalized instance")
    seed: Optional[int] = Field(None, description="PRNG seed, DEFAULT_SEED when none was given")
    result: ResultModel
