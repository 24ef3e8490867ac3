from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

from sympy import Integer, factorial

from app.configuration.config import settings
from app.handlers.exception import InvalidConfigurationError, InvalidSpecError, ResourceLimitError
from app.schemas.enums import SquareColor
from app.schemas.fpl_schema import FplPayload, LinkPatternPayload
from app.utils.logger import log

LinkPattern = Tuple[Tuple[int, int], ...]


@dataclass(frozen=True)
class GridLayout:
    """
    Edge numbering of the n x n grid. Horizontal edge (r, c)-(r, c+1) is bit
    r*(n-1) + c; vertical edge (r, c)-(r+1, c) is bit n*(n-1) + r*n + c.
    """

    n: int
    edge_ends: Tuple[Tuple[int, int], ...]
    # external labels attached to each dot, clockwise from the upper left
    external: Tuple[Tuple[int, ...], ...]
    # (top|bottom, left|right) edge masks of the interior squares, by colour
    square_pairs: Tuple[Tuple[Tuple[int, int], ...], Tuple[Tuple[int, int], ...]]

    def horizontal(self, r: int, c: int) -> int:
        return r * (self.n - 1) + c

    def vertical(self, r: int, c: int) -> int:
        return self.n * (self.n - 1) + r * self.n + c

    @property
    def edge_count(self) -> int:
        return len(self.edge_ends)

    def internal_degree(self, dot: int) -> int:
        return 2 - len(self.external[dot])


@lru_cache(maxsize=16)
def grid_layout(n: int) -> GridLayout:
    if n < 1:
        raise InvalidSpecError(f"FPL order must be positive, got {n}", n=n)
    ends: List[Tuple[int, int]] = []
    for r in range(n):
        for c in range(n - 1):
            ends.append((r * n + c, r * n + c + 1))
    for r in range(n - 1):
        for c in range(n):
            ends.append((r * n + c, (r + 1) * n + c))

    # perimeter sides in clockwise order, corners visited once per side
    perimeter = (
        [(0, c) for c in range(n)]
        + [(r, n - 1) for r in range(n)]
        + [(n - 1, c) for c in range(n - 1, -1, -1)]
        + [(r, 0) for r in range(n - 1, -1, -1)]
    )
    external: List[List[int]] = [[] for _ in range(n * n)]
    for label, (r, c) in enumerate(perimeter[::2], start=1):
        external[r * n + c].append(label)

    def horizontal(r: int, c: int) -> int:
        return 1 << (r * (n - 1) + c)

    def vertical(r: int, c: int) -> int:
        return 1 << (n * (n - 1) + r * n + c)

    pairs: Tuple[List[Tuple[int, int]], List[Tuple[int, int]]] = ([], [])
    for r in range(n - 1):
        for c in range(n - 1):
            pairs[(r + c) % 2].append((
                horizontal(r, c) | horizontal(r + 1, c),
                vertical(r, c) | vertical(r, c + 1),
            ))
    return GridLayout(n, tuple(ends), tuple(tuple(x) for x in external), (tuple(pairs[0]), tuple(pairs[1])))


@dataclass(frozen=True, order=True)
class FplConfig:
    """Fully-packed loop configuration: internal edge bitmask over grid_layout(n)."""

    n: int
    edges: int

    @property
    def key(self) -> int:
        return self.edges

    def edge_list(self) -> List[Tuple[int, int]]:
        ends = grid_layout(self.n).edge_ends
        return sorted(ends[e] for e in range(len(ends)) if (self.edges >> e) & 1)

    def to_payload(self) -> FplPayload:
        return FplPayload(n=self.n, edges=[list(e) for e in self.edge_list()])


class FplService:

    @staticmethod
    def _check_order(n: int) -> GridLayout:
        if n > settings.FPL_MAX_N:
            raise ResourceLimitError(f"FPL order {n} exceeds the cap {settings.FPL_MAX_N}", cap=settings.FPL_MAX_N)
        return grid_layout(n)

    @staticmethod
    def external_edges(n: int) -> Dict[int, Tuple[int, int]]:
        """Label -> dot (row, column) of each external edge."""
        layout = grid_layout(n)
        return {
            label: divmod(dot, n)
            for dot, labels in enumerate(layout.external)
            for label in labels
        }

    @staticmethod
    def is_valid(config: FplConfig) -> bool:
        layout = grid_layout(config.n)
        if config.edges < 0 or config.edges >> layout.edge_count:
            return False
        degree = [0] * (config.n * config.n)
        for e, (u, v) in enumerate(layout.edge_ends):
            if (config.edges >> e) & 1:
                degree[u] += 1
                degree[v] += 1
        return all(degree[d] == layout.internal_degree(d) for d in range(len(degree)))

    @staticmethod
    def from_payload(payload: FplPayload) -> FplConfig:
        layout = grid_layout(payload.n)
        index = {ends: e for e, ends in enumerate(layout.edge_ends)}
        mask = 0
        for pair in payload.edges:
            ends = tuple(sorted(pair))
            if ends not in index:
                raise InvalidConfigurationError(f"{list(pair)} is not a grid edge", n=payload.n)
            mask |= 1 << index[ends]
        config = FplConfig(payload.n, mask)
        if not FplService.is_valid(config):
            raise InvalidConfigurationError("every dot needs degree two counting external edges", n=payload.n)
        return config

    @staticmethod
    def _search(n: int, column_major: bool) -> List[FplConfig]:
        """
        Depth-first search over dots, each deciding the edge to its successor
        in the scan order and the edge it opens towards the next line.
        Output is sorted by edge mask whatever the scan order.
        """
        layout = FplService._check_order(n)
        found: List[int] = []

        def place(step: int, mask: int) -> None:
            if step == n * n:
                found.append(mask)
                return
            r, c = divmod(step, n)
            if column_major:
                r, c = c, r
            dot = r * n + c
            have = 0
            if c > 0 and (mask >> layout.horizontal(r, c - 1)) & 1:
                have += 1
            if r > 0 and (mask >> layout.vertical(r - 1, c)) & 1:
                have += 1
            missing = layout.internal_degree(dot) - have
            right_options = (0, 1) if c < n - 1 else (0,)
            down_options = (0, 1) if r < n - 1 else (0,)
            for right in right_options:
                for down in down_options:
                    if right + down != missing:
                        continue
                    nxt = mask
                    if right:
                        nxt |= 1 << layout.horizontal(r, c)
                    if down:
                        nxt |= 1 << layout.vertical(r, c)
                    place(step + 1, nxt)

        try:
            place(0, 0)
        except Exception as e:
            log.error(f"Unexpected error in enumerate_fpl: {str(e)}")
            raise
        return [FplConfig(n, mask) for mask in sorted(found)]

    @staticmethod
    def enumerate_fpl(n: int) -> List[FplConfig]:
        """All of FPL_n, dots scanned in row-major order."""
        return FplService._search(n, column_major=False)

    @staticmethod
    def enumerate_fpl_columnwise(n: int) -> List[FplConfig]:
        return FplService._search(n, column_major=True)

    @staticmethod
    def half_gyration(config: FplConfig, colour: Union[SquareColor, int]) -> FplConfig:
        """Swap the edge pair of every square of one colour whose edges are exactly two parallel sides."""
        layout = grid_layout(config.n)
        edges = config.edges
        for top_bottom, left_right in layout.square_pairs[int(colour)]:
            both = top_bottom | left_right
            present = edges & both
            if present == top_bottom or present == left_right:
                edges ^= both
        return FplConfig(config.n, edges)

    @staticmethod
    def gyration_fpl(config: FplConfig) -> FplConfig:
        """Squares of the upper-left square's colour first, then the others."""
        return FplService.half_gyration(FplService.half_gyration(config, SquareColor.EVEN), SquareColor.ODD)

    @staticmethod
    def link_pattern(config: FplConfig) -> LinkPattern:
        n = config.n
        layout = grid_layout(n)
        ports: List[List[Tuple[str, int]]] = [[("ext", label) for label in labels] for labels in layout.external]
        for e, (u, v) in enumerate(layout.edge_ends):
            if (config.edges >> e) & 1:
                ports[u].append(("dot", v))
                ports[v].append(("dot", u))

        dot_of = {label: dot for dot, labels in enumerate(layout.external) for label in labels}
        pairs: Dict[int, int] = {}
        for start in range(1, 2 * n + 1):
            if start in pairs:
                continue
            dot, came = dot_of[start], ("ext", start)
            for _ in range(n * n + 1):
                if len(ports[dot]) != 2:
                    raise InvalidConfigurationError(f"dot {divmod(dot, n)} does not have degree two", n=n)
                port = ports[dot][1] if ports[dot][0] == came else ports[dot][0]
                if port[0] == "ext":
                    pairs[start], pairs[port[1]] = port[1], start
                    break
                came, dot = ("dot", dot), port[1]
            else:
                raise InvalidConfigurationError(f"path from external edge {start} does not terminate", n=n)
        return tuple(sorted((i, j) for i, j in pairs.items() if i < j))

    @staticmethod
    def rotate_link_pattern(pattern: Sequence[Sequence[int]], shift: int, n: Optional[int] = None) -> LinkPattern:
        """Relabel i -> i + shift modulo 2n."""
        n = n or len(pattern)
        size = 2 * n

        def move(i: int) -> int:
            return (i - 1 + shift) % size + 1

        return tuple(sorted(tuple(sorted((move(i), move(j)))) for i, j in pattern))

    @staticmethod
    def is_noncrossing(pattern: Sequence[Sequence[int]]) -> bool:
        arcs = [tuple(sorted(p)) for p in pattern]
        for a, b in arcs:
            for c, d in arcs:
                if a < c < b < d:
                    return False
        return True

    @staticmethod
    def enumerate_link_patterns(n: int) -> List[LinkPattern]:
        """Noncrossing perfect matchings of 1..2n, sorted."""

        def matchings(points: Tuple[int, ...]) -> Iterator[List[Tuple[int, int]]]:
            if not points:
                yield []
                return
            first = points[0]
            for k in range(1, len(points), 2):
                for inside in matchings(points[1:k]):
                    for outside in matchings(points[k + 1:]):
                        yield [(first, points[k])] + inside + outside

        return sorted(tuple(sorted(m)) for m in matchings(tuple(range(1, 2 * n + 1))))

    @staticmethod
    def normalize_pattern(pattern: Sequence[Sequence[int]]) -> LinkPattern:
        return tuple(sorted(tuple(sorted((int(i), int(j)))) for i, j in pattern))

    @staticmethod
    def pattern_to_payload(n: int, pattern: LinkPattern) -> LinkPatternPayload:
        return LinkPatternPayload(n=n, pairs=[list(p) for p in pattern])

    @staticmethod
    def configurations_with_pattern(n: int, pattern: Sequence[Sequence[int]]) -> List[FplConfig]:
        target = FplService.normalize_pattern(pattern)
        return [a for a in FplService.enumerate_fpl(n) if FplService.link_pattern(a) == target]

    @staticmethod
    def gyration_orbit(config: FplConfig, limit: Optional[int] = None) -> List[FplConfig]:
        """
        The gyration orbit of one configuration, walked without enumerating
        FPL_n, so single orbits beyond FPL_MAX_N stay reachable.
        """
        limit = limit or settings.STATE_CAP
        cycle = [config]
        current = FplService.gyration_fpl(config)
        while current != config:
            if len(cycle) >= limit:
                raise ResourceLimitError(f"gyration orbit longer than {limit}", cap=limit)
            cycle.append(current)
            current = FplService.gyration_fpl(current)
        return cycle

    @staticmethod
    def asm_count(n: int) -> int:
        """|FPL_n|, the number of n x n alternating sign matrices."""
        total = Integer(1)
        for k in range(n):
            total *= factorial(3 * k + 1) / factorial(n + k)
        return int(total)
