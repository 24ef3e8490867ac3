from typing import List
from pydantic import BaseModel, Field, field_validator


class TableauPayload(BaseModel):
    """JSON form of an increasing tableau; the shape is read off the row lengths."""

    rows: List[List[int]] = Field(..., description="Rows top to bottom, weakly decreasing in length.")
    q: int = Field(..., ge=1, description="Upper bound on the entries.")

    @field_validator("rows")
    @classmethod
    def check_rows(cls, rows: List[List[int]]) -> List[List[int]]:
        if any(not row for row in rows):
            raise ValueError("rows must be nonempty")
        return rows


class ShapeSpec(BaseModel):
    """Rectangle `a x b` or an explicit partition."""

    parts: List[int] = Field(..., description="Row lengths.")

    @field_validator("parts")
    @classmethod
    def check_parts(cls, parts: List[int]) -> List[int]:
        if not parts or any(p <= 0 for p in parts):
            raise ValueError(f"row lengths must be positive, got {parts}")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ValueError(f"row lengths must weakly decrease, got {parts}")
        return parts
