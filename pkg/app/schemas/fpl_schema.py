from typing import List
from pydantic import BaseModel, Field, field_validator


class FplPayload(BaseModel):
    """FPL as its internal edges; dot (r, c) is vertex r*n + c."""

    n: int = Field(..., ge=1)
    edges: List[List[int]] = Field(..., description="Sorted [u, v] vertex pairs with u < v.")


class LinkPatternPayload(BaseModel):
    n: int = Field(..., ge=1)
    pairs: List[List[int]] = Field(..., description="Sorted [i, j] pairs with i < j, labels 1..2n.")

    @field_validator("pairs")
    @classmethod
    def check_pairs(cls, pairs: List[List[int]]) -> List[List[int]]:
        if any(len(pair) != 2 for pair in pairs):
            raise ValueError("every pair must have two labels")
        return pairs
