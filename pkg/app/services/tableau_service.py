from functools import lru_cache
from typing import Iterator, List, Optional, Sequence, Set, Tuple, Union

from pydantic import ValidationError

from app.handlers.exception import InvalidTableauError, LabelRangeError, ShapeError
from app.schemas.tableau_schema import ShapeSpec, TableauPayload
from app.utils.logger import log

Shape = Tuple[int, ...]
BinaryContent = Tuple[int, ...]


@lru_cache(maxsize=128)
def _cells(shape: Shape) -> Tuple[Tuple[int, int], ...]:
    return tuple((r, c) for r, length in enumerate(shape) for c in range(length))


@lru_cache(maxsize=128)
def _neighbors(shape: Shape) -> Tuple[Tuple[int, ...], ...]:
    """Flat indices of the 4-adjacent boxes of every box."""
    position = {cell: k for k, cell in enumerate(_cells(shape))}
    result = []
    for r, c in _cells(shape):
        around = [(r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1)]
        result.append(tuple(position[x] for x in around if x in position))
    return tuple(result)


@lru_cache(maxsize=128)
def _slack(shape: Shape) -> Tuple[int, ...]:
    """Longest south-east chain starting at each box; bounds entries from above."""
    return tuple(
        max(r2 - r + c2 - c for r2, c2 in _cells(shape) if r2 >= r and c2 >= c)
        for r, c in _cells(shape)
    )


class IncreasingTableau:
    """
    Filling of a partition shape, strictly increasing along rows and columns,
    with entries in [1, q]. Entries are kept flat in row-major order.
    """

    __slots__ = ("shape", "q", "entries")

    def __init__(self, shape: Sequence[int], q: int, entries: Sequence[int], validate: bool = True):
        self.shape: Shape = tuple(shape)
        self.q: int = q
        self.entries: Tuple[int, ...] = tuple(entries)
        if validate:
            self._validate()

    def _validate(self) -> None:
        if not self.shape or any(p <= 0 for p in self.shape):
            raise ShapeError(f"row lengths must be positive, got {list(self.shape)}")
        if any(self.shape[i] < self.shape[i + 1] for i in range(len(self.shape) - 1)):
            raise ShapeError(f"row lengths must weakly decrease, got {list(self.shape)}")
        if len(self.entries) != sum(self.shape):
            raise InvalidTableauError(f"{len(self.entries)} entries for a shape of size {sum(self.shape)}")
        if self.q < 1:
            raise LabelRangeError(f"label bound must be positive, got {self.q}")
        for value in self.entries:
            if not 1 <= value <= self.q:
                raise LabelRangeError(f"entry {value} outside [1, {self.q}]", q=self.q)
        position = {cell: k for k, cell in enumerate(_cells(self.shape))}
        for (r, c), k in position.items():
            right = position.get((r, c + 1))
            down = position.get((r + 1, c))
            if right is not None and self.entries[right] <= self.entries[k]:
                raise InvalidTableauError(f"row {r + 1} does not strictly increase at column {c + 1}")
            if down is not None and self.entries[down] <= self.entries[k]:
                raise InvalidTableauError(f"column {c + 1} does not strictly increase at row {r + 1}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], q: int) -> "IncreasingTableau":
        if not rows or any(len(row) == 0 for row in rows):
            raise ShapeError("tableau rows must be nonempty")
        return cls([len(row) for row in rows], q, [x for row in rows for x in row])

    @property
    def rows(self) -> List[List[int]]:
        out, start = [], 0
        for length in self.shape:
            out.append(list(self.entries[start:start + length]))
            start += length
        return out

    @property
    def is_rectangular(self) -> bool:
        return len(set(self.shape)) == 1

    @property
    def key(self) -> Union[bytes, Tuple[int, ...]]:
        """Compact hashable form; also the serialization order used for representatives."""
        return bytes(self.entries) if self.q < 256 else self.entries

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, IncreasingTableau)
            and self.shape == other.shape
            and self.q == other.q
            and self.entries == other.entries
        )

    def __hash__(self) -> int:
        return hash((self.shape, self.q, self.entries))

    def __lt__(self, other: "IncreasingTableau") -> bool:
        return (self.shape, self.q, self.entries) < (other.shape, other.q, other.entries)

    def __repr__(self) -> str:
        return f"IncreasingTableau({self.rows}, q={self.q})"

    def to_payload(self) -> TableauPayload:
        return TableauPayload(rows=self.rows, q=self.q)

    @classmethod
    def from_payload(cls, payload: TableauPayload) -> "IncreasingTableau":
        return cls.from_rows(payload.rows, payload.q)


class TableauService:

    @staticmethod
    def _bender_knuth_flat(shape: Shape, entries: List[int], i: int) -> None:
        neighbors = _neighbors(shape)
        flips = []
        for k, value in enumerate(entries):
            if value == i:
                if all(entries[j] != i + 1 for j in neighbors[k]):
                    flips.append((k, i + 1))
            elif value == i + 1:
                if all(entries[j] != i for j in neighbors[k]):
                    flips.append((k, i))
        for k, value in flips:
            entries[k] = value

    @staticmethod
    def k_bender_knuth(t: IncreasingTableau, i: int) -> IncreasingTableau:
        """
        KBK_i: every box labelled i or i+1 that forms a component of its own
        in the set of such boxes swaps its label; longer ribbons stay put.
        """
        if not 1 <= i < t.q:
            raise LabelRangeError(f"KBK_{i} needs 1 <= i < q = {t.q}", i=i, q=t.q)
        entries = list(t.entries)
        TableauService._bender_knuth_flat(t.shape, entries, i)
        return IncreasingTableau(t.shape, t.q, entries, validate=False)

    @staticmethod
    def k_promotion(t: IncreasingTableau) -> IncreasingTableau:
        """KPro = KBK_{q-1} ... KBK_1, with KBK_1 applied first."""
        entries = list(t.entries)
        for i in range(1, t.q):
            TableauService._bender_knuth_flat(t.shape, entries, i)
        return IncreasingTableau(t.shape, t.q, entries, validate=False)

    @staticmethod
    def content(t: IncreasingTableau) -> BinaryContent:
        present = set(t.entries)
        return tuple(1 if i in present else 0 for i in range(1, t.q + 1))

    @staticmethod
    def has_full_content(t: IncreasingTableau) -> bool:
        return len(set(t.entries)) == t.q

    @staticmethod
    def label_count(t: IncreasingTableau, i: int) -> int:
        return sum(1 for x in t.entries if x == i)

    @staticmethod
    def transpose(t: IncreasingTableau) -> IncreasingTableau:
        rows = t.rows
        cols = [[rows[r][c] for r in range(len(rows)) if c < len(rows[r])] for c in range(t.shape[0])]
        return IncreasingTableau.from_rows(cols, t.q)

    @staticmethod
    def _row_descents(t: IncreasingTableau) -> Set[int]:
        """Labels i < q with some i in a strictly higher row than some i+1."""
        top: dict = {}
        bottom: dict = {}
        for (r, _), value in zip(_cells(t.shape), t.entries):
            top[value] = min(top.get(value, r), r)
            bottom[value] = max(bottom.get(value, r), r)
        return {i for i in range(1, t.q) if i in top and i + 1 in bottom and top[i] < bottom[i + 1]}

    @staticmethod
    def _require_rectangle(t: IncreasingTableau) -> None:
        if not t.is_rectangular:
            raise ShapeError("descents are defined for rectangular shapes only", shape=list(t.shape))

    @staticmethod
    def descent_set(t: IncreasingTableau) -> Set[int]:
        """Row descents below q; q is a descent iff q-1 is one of KPro(t)."""
        TableauService._require_rectangle(t)
        descents = TableauService._row_descents(t)
        if t.q >= 2 and t.q - 1 in TableauService._row_descents(TableauService.k_promotion(t)):
            descents.add(t.q)
        return descents

    @staticmethod
    def transpose_descent_set(t: IncreasingTableau) -> Set[int]:
        TableauService._require_rectangle(t)
        return TableauService.descent_set(TableauService.transpose(t))

    @staticmethod
    def non_descents(t: IncreasingTableau) -> Set[int]:
        return set(range(1, t.q + 1)) - TableauService.descent_set(t)

    @staticmethod
    def non_transpose_descents(t: IncreasingTableau) -> Set[int]:
        return set(range(1, t.q + 1)) - TableauService.transpose_descent_set(t)

    @staticmethod
    def minimal_tableau(a: int, b: int, q: int) -> IncreasingTableau:
        """Boxwise-minimal filling: entry i+j-1 at (i, j), 1-based."""
        if a < 1 or b < 1:
            raise ShapeError(f"rectangle {a}x{b} is empty")
        if q <= a + b - 1:
            raise LabelRangeError(f"minimal tableau of {a}x{b} needs q > {a + b - 1}, got {q}", q=q)
        return IncreasingTableau([b] * a, q, [r + c + 1 for r in range(a) for c in range(b)], validate=False)

    @staticmethod
    def rectangle(a: int, b: int) -> Shape:
        try:
            return tuple(ShapeSpec(parts=[b] * a).parts)
        except ValidationError:
            raise ShapeError(f"rectangle {a}x{b} is empty")

    @staticmethod
    def partitions_in_box(a: int, b: int) -> Iterator[Shape]:
        """Nonempty partitions with at most a rows and parts at most b."""

        def extend(prefix: List[int], bound: int) -> Iterator[Shape]:
            if prefix:
                yield tuple(prefix)
            if len(prefix) == a:
                return
            for part in range(1, bound + 1):
                yield from extend(prefix + [part], part)

        yield from extend([], b)

    @staticmethod
    def enumerate_increasing(shape: Sequence[int], q: int) -> Iterator[IncreasingTableau]:
        """
        Inc^q(shape) by row-major backtracking; entries are bounded below by the
        left and upper neighbours and above by the room left for the boxes
        south-east of them. Output is in increasing row-major lexicographic order.
        """
        try:
            shape = tuple(ShapeSpec(parts=list(shape)).parts)
        except ValidationError as e:
            raise ShapeError(f"invalid shape: {e.errors()[0]['msg']}", shape=list(shape))
        cells = _cells(shape)
        slack = _slack(shape)
        index = {cell: k for k, cell in enumerate(cells)}
        left = [index.get((r, c - 1)) for r, c in cells]
        up = [index.get((r - 1, c)) for r, c in cells]
        entries = [0] * len(cells)

        def fill(k: int) -> Iterator[IncreasingTableau]:
            if k == len(cells):
                yield IncreasingTableau(shape, q, entries, validate=False)
                return
            low = 1
            if left[k] is not None:
                low = entries[left[k]] + 1
            if up[k] is not None:
                low = max(low, entries[up[k]] + 1)
            for value in range(low, q - slack[k] + 1):
                entries[k] = value
                yield from fill(k + 1)

        try:
            yield from fill(0)
        except Exception as e:
            log.error(f"Unexpected error in enumerate_increasing: {str(e)}")
            raise

    @staticmethod
    def count_increasing(shape: Sequence[int], q: int) -> int:
        return sum(1 for _ in TableauService.enumerate_increasing(shape, q))

    @staticmethod
    def descent_pair_counts(t: IncreasingTableau) -> Optional[int]:
        """Smallest #i + #(i+1) over labels that are both descents and transpose descents."""
        both = TableauService.descent_set(t) & TableauService.transpose_descent_set(t)
        counts = [
            TableauService.label_count(t, i) + TableauService.label_count(t, i + 1)
            for i in both if i < t.q
        ]
        return min(counts) if counts else None
