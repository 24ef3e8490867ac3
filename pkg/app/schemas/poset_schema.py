from typing import List, Optional
from pydantic import BaseModel, Field, field_validator, model_validator


class ChainProductSpec(BaseModel):
    """Dimensions (n_1, ..., n_k) of a product of chains."""

    dims: List[int] = Field(..., description="Chain lengths, each at least 1.")

    @field_validator("dims")
    @classmethod
    def check_dims(cls, dims: List[int]) -> List[int]:
        if not dims:
            raise ValueError("dims must not be empty")
        if any(d <= 0 for d in dims):
            raise ValueError(f"every dim must be positive, got {dims}")
        return dims


class PosetPayload(BaseModel):
    """JSON form of a poset: either chain-product dims or an explicit cover list."""

    dims: Optional[List[int]] = Field(None, description="Chain-product dimensions.")
    elements: Optional[int] = Field(None, description="Element count for a general poset.")
    covers: Optional[List[List[int]]] = Field(None, description="Cover pairs [lower, upper].")

    @model_validator(mode="after")
    def check_form(self) -> "PosetPayload":
        if self.dims is None and self.elements is None:
            raise ValueError("either dims or elements is required")
        if self.dims is not None and self.elements is not None:
            raise ValueError("dims and elements are mutually exclusive")
        return self


class IdealPayload(BaseModel):
    members: List[int] = Field(..., description="Sorted element indices of the ideal.")


class ProjectionPayload(BaseModel):
    n: int = Field(..., description="Target dimension.")
    coords: List[List[int]] = Field(..., description="Integer vector per element index.")


class ToggleWordPayload(BaseModel):
    word: List[int] = Field(..., description="Element indices, left factor applied last.")
