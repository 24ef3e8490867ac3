from typing import List, Optional
from pydantic import BaseModel, Field, PositiveInt, model_validator

from app.schemas.enums import ActionName, DomainKind, OutputFormat, ResonanceMap, SuiteName


_ACTIONS = {
    DomainKind.BOX: {ActionName.ROWMOTION, ActionName.PROMOTION, ActionName.GYRATION},
    DomainKind.INC: {ActionName.KPRO},
    DomainKind.FPL: {ActionName.GYRATION},
}

_DEFAULT_ACTION = {
    DomainKind.BOX: ActionName.ROWMOTION,
    DomainKind.INC: ActionName.KPRO,
    DomainKind.FPL: ActionName.GYRATION,
}


class SystemSpec(BaseModel):
    """A state space plus the cyclic action on it, rebuildable from plain data."""

    kind: DomainKind
    dims: Optional[List[int]] = Field(None, description="Chain-product dimensions for kind=box.")
    shape: Optional[List[int]] = Field(None, description="Partition row lengths for kind=inc.")
    q: Optional[int] = Field(None, ge=1, description="Label bound for kind=inc.")
    n: Optional[int] = Field(None, ge=1, description="Grid order for kind=fpl.")
    action: Optional[ActionName] = None
    direction: Optional[List[int]] = Field(None, description="Promotion direction, entries +1/-1.")

    @model_validator(mode="after")
    def check_kind(self) -> "SystemSpec":
        if self.action is None:
            self.action = _DEFAULT_ACTION[self.kind]
        if self.action not in _ACTIONS[self.kind]:
            raise ValueError(f"action {self.action.value} is not defined on kind {self.kind.value}")

        if self.kind == DomainKind.BOX:
            if not self.dims or any(d < 1 for d in self.dims):
                raise ValueError("kind=box needs positive dims")
            if self.action == ActionName.PROMOTION:
                if self.direction is None:
                    if len(self.dims) != 3:
                        raise ValueError("promotion needs an explicit direction outside three dimensions")
                    self.direction = [1, 1, -1]
                if len(self.direction) != len(self.dims) or any(x not in (1, -1) for x in self.direction):
                    raise ValueError("direction must have one +1/-1 entry per dimension")
            elif self.direction is not None:
                raise ValueError("direction only applies to promotion")
        elif self.kind == DomainKind.INC:
            if not self.shape or self.q is None:
                raise ValueError("kind=inc needs shape and q")
            if any(p < 1 for p in self.shape) or any(
                self.shape[i] < self.shape[i + 1] for i in range(len(self.shape) - 1)
            ):
                raise ValueError(f"shape must be a partition, got {self.shape}")
        elif self.n is None:
            raise ValueError("kind=fpl needs n")
        return self

    @property
    def name(self) -> str:
        if self.kind == DomainKind.BOX:
            label = f"J({'x'.join(map(str, self.dims))})"
        elif self.kind == DomainKind.INC:
            label = f"Inc^{self.q}({','.join(map(str, self.shape))})"
        else:
            label = f"FPL_{self.n}"
        action = self.action.value
        if self.direction is not None:
            action += "(" + ",".join(f"{x:+d}" for x in self.direction) + ")"
        return f"{action} on {label}"


class RunConfig(BaseModel):
    """One CLI invocation, validated before any work starts."""

    command: str = Field(..., pattern="^(orbits|resonance|verify)$")
    system: Optional[SystemSpec] = None
    resonance_map: Optional[ResonanceMap] = None
    frequency: Optional[PositiveInt] = None
    suite: Optional[SuiteName] = None
    max_size: Optional[PositiveInt] = None
    output_format: OutputFormat = OutputFormat.JSON
    histogram: bool = False
    workers: PositiveInt = 1
    cap: Optional[PositiveInt] = None
    timings: bool = False
    by_orbit: bool = False
    representatives: bool = True

    @model_validator(mode="after")
    def check_command(self) -> "RunConfig":
        if self.command in ("orbits", "resonance") and self.system is None:
            raise ValueError(f"{self.command} needs exactly one of --box, --inc or --fpl")
        if self.command == "verify" and self.suite is None:
            raise ValueError("verify needs --suite")
        return self
