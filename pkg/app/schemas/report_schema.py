from typing import Any, Dict, List, Optional
from pydantic import BaseModel, Field


class OrbitRepresentative(BaseModel):
    state: Any = Field(..., description="Least state of the orbit in serialization order.")
    size: int


class SizeCount(BaseModel):
    size: int
    count: int


class OrbitReport(BaseModel):
    """Partition of a finite state space into orbits of a cyclic action."""

    system: str
    action: str
    domain_size: int
    orbit_count: int
    orbit_sizes: List[int] = Field(..., description="Orbit sizes, ascending, with multiplicity.")
    size_counts: List[SizeCount]
    order: int = Field(..., description="Least common multiple of the orbit sizes.")
    representatives: Optional[List[OrbitRepresentative]] = None
    runtime_seconds: Optional[float] = None


class Counterexample(BaseModel):
    reason: str
    state: Any = None
    image: Any = None
    image_of_successor: Any = None
    shifted_image: Any = None


class ResonanceReport(BaseModel):
    system: str
    map: str
    frequency: int
    holds: bool
    commutes: bool
    domain_size: int
    image_size: int
    image_order: int = Field(..., description="Order of the target action on f(X).")
    image_orbit_sizes: List[int]
    codomain_size: Optional[int] = None
    codomain_order: Optional[int] = None
    surjective: Optional[bool] = None
    counterexample: Optional[Counterexample] = None
    orbit_pairs: Optional[List[List[int]]] = Field(
        None, description="[orbit size, image orbit size, count] over the orbits of X."
    )
    runtime_seconds: Optional[float] = None


class DivisibilityViolation(BaseModel):
    state: Any
    orbit_size: int


class DivisibilityReport(BaseModel):
    system: str
    predicate: str
    modulus: int
    holds: bool
    checked_states: int
    checked_orbits: int
    violation_count: int
    violations: List[DivisibilityViolation]
    runtime_seconds: Optional[float] = None


class SuiteCase(BaseModel):
    parameters: Dict[str, Any]
    passed: bool
    expected: Any = None
    observed: Any = None
    detail: Optional[str] = None
    runtime_seconds: Optional[float] = None


class SuiteReport(BaseModel):
    suite: str
    passed: bool
    case_count: int
    failures: int
    cases: List[SuiteCase]
    runtime_seconds: Optional[float] = None
