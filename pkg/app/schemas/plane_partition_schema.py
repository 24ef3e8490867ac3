from typing import List
from pydantic import BaseModel, Field, model_validator


class PlanePartitionPayload(BaseModel):
    """Plane partition in an a x b x c box as its a x b matrix of stack heights."""

    dims: List[int] = Field(..., min_length=3, max_length=3, description="Box dimensions [a, b, c].")
    heights: List[List[int]] = Field(..., description="a rows of b heights in [0, c].")

    @model_validator(mode="after")
    def check_heights(self) -> "PlanePartitionPayload":
        a, b, c = self.dims
        if min(self.dims) < 1:
            raise ValueError(f"box dimensions must be positive, got {self.dims}")
        if len(self.heights) != a or any(len(row) != b for row in self.heights):
            raise ValueError(f"heights must be a {a}x{b} matrix")
        if any(not 0 <= h <= c for row in self.heights for h in row):
            raise ValueError(f"heights must lie in [0, {c}]")
        return self


class XMaxPayload(BaseModel):
    dims: List[int] = Field(..., min_length=3, max_length=3)
    bits: List[int] = Field(..., description="Length a+b+c-1 vector over {0, 1}.")
