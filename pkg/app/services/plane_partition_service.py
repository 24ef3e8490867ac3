from dataclasses import dataclass
from functools import lru_cache
from typing import List, Tuple, Union

import numpy as np
from sympy import Rational

from app.handlers.exception import InvalidSpecError, InvalidTableauError
from app.schemas.enums import PsiAxis
from app.schemas.plane_partition_schema import PlanePartitionPayload
from app.services.poset_service import Ideal, Poset, PosetService
from app.services.tableau_service import IncreasingTableau, TableauService

Box = Tuple[int, int, int]


@lru_cache(maxsize=64)
def box_poset(dims: Box) -> Poset:
    return PosetService.make_chain_product(list(dims))


def _check_box(dims) -> Box:
    dims = tuple(int(d) for d in dims)
    if len(dims) != 3 or min(dims) < 1:
        raise InvalidSpecError(f"a box needs three positive dimensions, got {list(dims)}", dims=list(dims))
    return dims


def _cube(ideal: Ideal, dims: Box) -> np.ndarray:
    """Boolean a x b x c array; cube[i, j, k] is bit i + a*j + a*b*k."""
    a, b, c = dims
    size = a * b * c
    flat = np.array([(ideal >> e) & 1 for e in range(size)], dtype=bool)
    return flat.reshape((a, b, c), order="F")


def _ideal_from_cube(cube: np.ndarray) -> Ideal:
    ideal = 0
    for e in np.flatnonzero(cube.reshape(-1, order="F")).tolist():
        ideal |= 1 << e
    return ideal


@dataclass(frozen=True)
class PlanePartition:
    """Stack heights over the a x b face; (i, j, k) is a cube iff heights[i][j] > k."""

    dims: Box
    heights: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        a, b, c = self.dims
        h = np.asarray(self.heights, dtype=np.int64)
        if h.shape != (a, b):
            raise InvalidSpecError(f"heights must be a {a}x{b} matrix", shape=list(h.shape))
        if h.size and (h.min() < 0 or h.max() > c):
            raise InvalidSpecError(f"heights must lie in [0, {c}]")
        if (np.diff(h, axis=0) > 0).any() or (np.diff(h, axis=1) > 0).any():
            raise InvalidSpecError("heights must weakly decrease along rows and columns")

    @classmethod
    def from_ideal(cls, ideal: Ideal, dims) -> "PlanePartition":
        dims = _check_box(dims)
        heights = _cube(ideal, dims).sum(axis=2)
        return cls(dims, tuple(tuple(int(x) for x in row) for row in heights))

    def to_ideal(self) -> Ideal:
        c = self.dims[2]
        h = np.asarray(self.heights, dtype=np.int64)
        cube = h[:, :, None] > np.arange(c)[None, None, :]
        return _ideal_from_cube(cube)

    @property
    def volume(self) -> int:
        return sum(sum(row) for row in self.heights)

    def to_payload(self) -> PlanePartitionPayload:
        return PlanePartitionPayload(dims=list(self.dims), heights=[list(row) for row in self.heights])

    @classmethod
    def from_payload(cls, payload: PlanePartitionPayload) -> "PlanePartition":
        return cls(tuple(payload.dims), tuple(tuple(row) for row in payload.heights))


class PlanePartitionService:

    # face projected onto, and the promotion direction each projection intertwines with KPro
    _SUMMED_AXIS = {PsiAxis.AB: 2, PsiAxis.AC: 1, PsiAxis.BC: 0}
    _DIRECTIONS = {
        PsiAxis.AB: (1, 1, -1),
        PsiAxis.AC: (1, -1, 1),
        PsiAxis.BC: (-1, 1, 1),
    }

    @staticmethod
    def _axis(axis: Union[int, PsiAxis]) -> PsiAxis:
        try:
            return PsiAxis(int(axis))
        except ValueError:
            raise InvalidSpecError(f"projection axis must be 1, 2 or 3, got {axis}", axis=axis)

    @staticmethod
    def label_bound(dims) -> int:
        a, b, c = _check_box(dims)
        return a + b + c - 1

    @staticmethod
    def tableau_shape(dims, axis: Union[int, PsiAxis]) -> Tuple[int, int]:
        a, b, c = _check_box(dims)
        axis = PlanePartitionService._axis(axis)
        return {PsiAxis.AB: (a, b), PsiAxis.AC: (a, c), PsiAxis.BC: (b, c)}[axis]

    @staticmethod
    def intertwining_direction(axis: Union[int, PsiAxis]) -> Tuple[int, int, int]:
        """Direction v with psi(Pro_{id,v}(I), axis) = KPro(psi(I, axis))."""
        return PlanePartitionService._DIRECTIONS[PlanePartitionService._axis(axis)]

    @staticmethod
    def psi(ideal: Ideal, dims, axis: Union[int, PsiAxis] = PsiAxis.AB) -> IncreasingTableau:
        """
        Project the stacks onto a face, rotate by 180 degrees, and add rank + 1
        to every box. The result lies in Inc^{a+b+c-1} of that face.
        """
        dims = _check_box(dims)
        axis = PlanePartitionService._axis(axis)
        counts = _cube(ideal, dims).sum(axis=PlanePartitionService._SUMMED_AXIS[axis])
        rotated = counts[::-1, ::-1]
        rows, cols = rotated.shape
        filled = rotated + np.add.outer(np.arange(rows), np.arange(cols)) + 1
        return IncreasingTableau(
            [cols] * rows,
            PlanePartitionService.label_bound(dims),
            filled.reshape(-1).tolist(),
            validate=False,
        )

    @staticmethod
    def psi_inverse(t: IncreasingTableau, dims, axis: Union[int, PsiAxis] = PsiAxis.AB) -> Ideal:
        dims = _check_box(dims)
        axis = PlanePartitionService._axis(axis)
        rows, cols = PlanePartitionService.tableau_shape(dims, axis)
        q = PlanePartitionService.label_bound(dims)
        if t.shape != (cols,) * rows or t.q != q:
            raise InvalidTableauError(
                f"expected a {rows}x{cols} tableau with q={q}",
                shape=list(t.shape), q=t.q,
            )
        filled = np.asarray(t.entries, dtype=np.int64).reshape(rows, cols)
        rotated = filled - np.add.outer(np.arange(rows), np.arange(cols)) - 1
        counts = rotated[::-1, ::-1]
        summed = PlanePartitionService._SUMMED_AXIS[axis]
        depth = dims[summed]
        if counts.min() < 0 or counts.max() > depth:
            raise InvalidTableauError(f"tableau does not fit the box {list(dims)}", dims=list(dims))

        # the summed coordinate of the ideal is downward closed, so counts fix the cube
        levels = np.arange(depth)
        if summed == 2:
            cube = counts[:, :, None] > levels[None, None, :]
        elif summed == 1:
            cube = counts[:, None, :] > levels[None, :, None]
        else:
            cube = counts[None, :, :] > levels[:, None, None]
        ideal = _ideal_from_cube(cube)
        if not PosetService.is_ideal(box_poset(dims), ideal):
            raise InvalidTableauError("tableau is not the image of a plane partition", dims=list(dims))
        return ideal

    @staticmethod
    def x_max(ideal: Ideal, dims) -> Tuple[int, ...]:
        """Reverse of the binary content of psi(I, 2)."""
        return tuple(reversed(TableauService.content(PlanePartitionService.psi(ideal, dims, PsiAxis.AC))))

    @staticmethod
    def boundary_path_matrix(ideal: Ideal, dims) -> np.ndarray:
        """
        One row per height layer k = 0..c-1: the boundary word of
        {(i, j) : h(i, j) > k} in a x b, with 1 marking steps along a, shifted
        right by k. The result is c x (a+b+c-1) with a ones per row, a*c in
        all, and its column maxima give x_max.
        """
        a, b, c = dims = _check_box(dims)
        heights = np.asarray(PlanePartition.from_ideal(ideal, dims).heights, dtype=np.int64)
        matrix = np.zeros((c, a + b + c - 1), dtype=np.int8)
        for k in range(c):
            row_lengths = (heights > k).sum(axis=1)
            matrix[k, k + np.arange(a) + b - row_lengths] = 1
        return matrix

    @staticmethod
    def boundary_path_condition_holds(matrix: np.ndarray) -> bool:
        """If rows k and k+1 agree in their first m partial sums, entry (k+1, m) is not 1."""
        sums = np.cumsum(matrix, axis=1)
        for k in range(matrix.shape[0] - 1):
            for m in range(matrix.shape[1]):
                before_upper = sums[k, m - 1] if m else 0
                before_lower = sums[k + 1, m - 1] if m else 0
                if before_upper == before_lower and matrix[k + 1, m] == 1:
                    return False
        return True

    @staticmethod
    def forced_zero_column(dims) -> bool:
        """
        True when the c x (a+b+c-1) boundary path matrix has more columns than
        its a*c ones, so some column is all zero and x_max has a zero.
        """
        a, b, c = _check_box(dims)
        return a + b + c - 1 > a * c

    @staticmethod
    def macmahon_count(a: int, b: int, c: int) -> int:
        """Plane partitions in an a x b x c box."""
        total = Rational(1)
        for i in range(1, a + 1):
            for j in range(1, b + 1):
                for k in range(1, c + 1):
                    total *= Rational(i + j + k - 1, i + j + k - 2)
        return int(total)

    @staticmethod
    def enumerate_plane_partitions(dims) -> List[Ideal]:
        return PosetService.enumerate_ideals(box_poset(_check_box(dims)))
