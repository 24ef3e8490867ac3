from functools import cached_property
from itertools import islice
from typing import Dict, Hashable, Iterable, List, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np
from pydantic import ValidationError

from app.configuration.config import settings
from app.handlers.exception import (
    ElementIndexError,
    InvalidExtensionError,
    InvalidIdealError,
    InvalidPosetError,
    InvalidSpecError,
    ResourceLimitError,
)
from app.schemas.poset_schema import ChainProductSpec, IdealPayload, PosetPayload
from app.utils.logger import log


# Order ideals are dense bitsets over element indices.
Ideal = int
ToggleWord = Tuple[int, ...]


class Poset:
    """
    Finite ranked poset given by its cover relation.

    Elements are addressed by index; `elements` keeps the caller's opaque ids
    (tuples for chain products). Instances are immutable after construction.
    """

    def __init__(
        self,
        elements: Sequence[Hashable],
        covers: Iterable[Tuple[int, int]],
        rank: Sequence[int],
        dims: Optional[Sequence[int]] = None,
        validate: bool = True,
    ):
        self._elements: Tuple[Hashable, ...] = tuple(elements)
        self._covers: Tuple[Tuple[int, int], ...] = tuple((int(lo), int(hi)) for lo, hi in covers)
        self._rank: Tuple[int, ...] = tuple(int(r) for r in rank)
        self._dims: Optional[Tuple[int, ...]] = tuple(dims) if dims is not None else None

        n = len(self._elements)
        if len(self._rank) != n:
            raise InvalidPosetError(f"rank has {len(self._rank)} entries for {n} elements")
        if validate:
            self._validate()

        lower = [0] * n
        upper = [0] * n
        for lo, hi in self._covers:
            lower[hi] |= 1 << lo
            upper[lo] |= 1 << hi
        self.lower_covers: Tuple[int, ...] = tuple(lower)
        self.upper_covers: Tuple[int, ...] = tuple(upper)

        below = [0] * n
        for e in nx.topological_sort(self.graph):
            mask = 1 << e
            for d in self._iter_bits(lower[e]):
                mask |= below[d]
            below[e] = mask
        self.below: Tuple[int, ...] = tuple(below)
        self.full: Ideal = (1 << n) - 1

    def _validate(self) -> None:
        n = len(self._elements)
        seen = set()
        for lo, hi in self._covers:
            if not (0 <= lo < n and 0 <= hi < n):
                raise InvalidPosetError(f"cover ({lo}, {hi}) references a missing element", elements=n)
            if (lo, hi) in seen:
                raise InvalidPosetError(f"duplicate cover ({lo}, {hi})")
            seen.add((lo, hi))
            if self._rank[hi] != self._rank[lo] + 1:
                raise InvalidPosetError(
                    f"cover ({lo}, {hi}) breaks the rank function: {self._rank[lo]} -> {self._rank[hi]}"
                )

        graph = self.graph
        if not nx.is_directed_acyclic_graph(graph):
            raise InvalidPosetError("cover relation contains a cycle")
        if nx.transitive_reduction(graph).number_of_edges() != graph.number_of_edges():
            raise InvalidPosetError("cover relation is not transitively reduced")

    @staticmethod
    def _iter_bits(mask: int) -> Iterable[int]:
        while mask:
            low = mask & -mask
            yield low.bit_length() - 1
            mask ^= low

    @cached_property
    def graph(self) -> nx.DiGraph:
        """Hasse diagram, edges pointing upward."""
        graph = nx.DiGraph()
        graph.add_nodes_from(range(len(self._elements)))
        graph.add_edges_from(self._covers)
        return graph

    @cached_property
    def index(self) -> Dict[Hashable, int]:
        return {element: i for i, element in enumerate(self._elements)}

    @property
    def size(self) -> int:
        return len(self._elements)

    @property
    def elements(self) -> Tuple[Hashable, ...]:
        return self._elements

    @property
    def covers(self) -> Tuple[Tuple[int, int], ...]:
        return self._covers

    @property
    def rank(self) -> Tuple[int, ...]:
        return self._rank

    @property
    def dims(self) -> Optional[Tuple[int, ...]]:
        return self._dims

    def index_of(self, element: Hashable) -> int:
        try:
            return self.index[element]
        except KeyError:
            raise ElementIndexError(f"{element!r} is not an element of the poset")

    def check_index(self, e: int) -> int:
        if not 0 <= e < len(self._elements):
            raise ElementIndexError(f"element index {e} out of range [0, {len(self._elements)})")
        return e

    def __repr__(self) -> str:
        if self._dims is not None:
            return f"Poset(dims={list(self._dims)})"
        return f"Poset(elements={self.size}, covers={len(self._covers)})"


class PosetService:

    @staticmethod
    def make_chain_product(spec: Union[ChainProductSpec, Sequence[int]]) -> Poset:
        """Build n_1 x ... x n_k with componentwise order and colexicographic indexing."""
        if not isinstance(spec, ChainProductSpec):
            try:
                spec = ChainProductSpec(dims=list(spec))
            except ValidationError as e:
                raise InvalidSpecError(f"invalid chain-product spec: {e.errors()[0]['msg']}", dims=list(spec))

        dims = tuple(spec.dims)
        total = int(np.prod(dims))
        # order="F": first coordinate varies fastest, i.e. colex on tuples
        coords = np.array(np.unravel_index(np.arange(total), dims, order="F")).T
        elements = [tuple(int(x) for x in row) for row in coords]
        strides = [int(np.prod(dims[:t])) for t in range(len(dims))]

        covers = []
        for idx, x in enumerate(elements):
            for t, stride in enumerate(strides):
                if x[t] + 1 < dims[t]:
                    covers.append((idx, idx + stride))
        rank = [sum(x) for x in elements]
        return Poset(elements, covers, rank, dims=dims, validate=False)

    @staticmethod
    def from_covers(n: int, covers: Iterable[Sequence[int]], elements: Optional[Sequence[Hashable]] = None) -> Poset:
        """General poset on range(n); ranks are derived from the covers and must be consistent."""
        covers = [tuple(c) for c in covers]
        graph = nx.DiGraph()
        graph.add_nodes_from(range(n))
        for lo, hi in covers:
            if not (0 <= lo < n and 0 <= hi < n):
                raise InvalidPosetError(f"cover ({lo}, {hi}) references a missing element", elements=n)
        graph.add_edges_from(covers)
        if not nx.is_directed_acyclic_graph(graph):
            raise InvalidPosetError("cover relation contains a cycle")

        rank: Dict[int, int] = {}
        for component in nx.weakly_connected_components(graph):
            start = min(component)
            rank[start] = 0
            # edge_bfs reports every edge as its real orientation u -> v
            for u, v, _ in nx.edge_bfs(graph, start, orientation="ignore"):
                if u in rank and v in rank:
                    if rank[v] != rank[u] + 1:
                        raise InvalidPosetError("poset is not ranked", element=v)
                elif u in rank:
                    rank[v] = rank[u] + 1
                else:
                    rank[u] = rank[v] - 1
            low = min(rank[v] for v in component)
            for v in component:
                rank[v] -= low
        return Poset(elements if elements is not None else list(range(n)), covers, [rank[i] for i in range(n)])

    @staticmethod
    def antichain(k: int) -> Poset:
        return PosetService.from_covers(k, [])

    @staticmethod
    def boolean_lattice(k: int) -> Poset:
        """Subsets of a k-set, realized as the chain product 2 x ... x 2."""
        return PosetService.make_chain_product([2] * k)

    @staticmethod
    def is_ideal(p: Poset, ideal: Ideal) -> bool:
        if ideal < 0 or ideal > p.full:
            return False
        for e in Poset._iter_bits(ideal):
            if p.lower_covers[e] & ~ideal:
                return False
        return True

    @staticmethod
    def make_ideal(p: Poset, members: Iterable[int]) -> Ideal:
        members = list(members)
        ideal = 0
        for e in members:
            ideal |= 1 << p.check_index(e)
        if settings.VALIDATE_IDEALS and not PosetService.is_ideal(p, ideal):
            raise InvalidIdealError("subset is not downward closed", members=sorted(set(members)))
        return ideal

    @staticmethod
    def principal_ideal(p: Poset, e: int) -> Ideal:
        return p.below[p.check_index(e)]

    @staticmethod
    def ideal_elements(p: Poset, ideal: Ideal) -> List[int]:
        return list(Poset._iter_bits(ideal))

    @staticmethod
    def enumerate_ideals(p: Poset, cap: Optional[int] = None) -> List[Ideal]:
        """
        Every order ideal exactly once: breadth-first closure from the empty ideal,
        one level per cardinality, each level sorted by bitset value.
        """
        cap = cap or settings.STATE_CAP
        try:
            level = [0]
            ideals: List[Ideal] = [0]
            n = p.size
            lower = p.lower_covers
            while level:
                following = set()
                for ideal in level:
                    for e in range(n):
                        bit = 1 << e
                        if not ideal & bit and lower[e] & ideal == lower[e]:
                            following.add(ideal | bit)
                level = sorted(following)
                ideals.extend(level)
                if len(ideals) > cap:
                    raise ResourceLimitError(
                        f"{p!r} has more than {cap} order ideals",
                        cap=cap,
                    )
            return ideals
        except ResourceLimitError:
            raise
        except Exception as e:
            log.error(f"Unexpected error in enumerate_ideals: {str(e)}")
            raise

    @staticmethod
    def toggle(p: Poset, ideal: Ideal, e: int) -> Ideal:
        bit = 1 << p.check_index(e)
        if ideal & bit:
            if ideal & p.upper_covers[e]:
                return ideal
            return ideal ^ bit
        if ideal & p.lower_covers[e] == p.lower_covers[e]:
            return ideal | bit
        return ideal

    @staticmethod
    def rowmotion(p: Poset, ideal: Ideal) -> Ideal:
        """Ideal generated by the minimal elements of the complement."""
        result = 0
        lower = p.lower_covers
        for e in range(p.size):
            if not (ideal >> e) & 1 and ideal & lower[e] == lower[e]:
                result |= p.below[e]
        return result

    @staticmethod
    def default_linear_extension(p: Poset) -> List[int]:
        """Rank ascending, index descending; its reversal toggles rank-descending, index-ascending."""
        return sorted(range(p.size), key=lambda e: (p.rank[e], -e))

    @staticmethod
    def is_linear_extension(p: Poset, ext: Sequence[int]) -> bool:
        if sorted(ext) != list(range(p.size)):
            return False
        position = {e: i for i, e in enumerate(ext)}
        return all(position[lo] < position[hi] for lo, hi in p.covers)

    @staticmethod
    def linear_extensions(p: Poset, limit: Optional[int] = None) -> List[List[int]]:
        limit = limit or settings.LINEAR_EXTENSION_CAP
        extensions = list(islice(nx.all_topological_sorts(p.graph), limit + 1))
        if len(extensions) > limit:
            raise ResourceLimitError(f"{p!r} has more than {limit} linear extensions", cap=limit)
        return extensions

    @staticmethod
    def rowmotion_via_toggles(p: Poset, ideal: Ideal, ext: Optional[Sequence[int]] = None) -> Ideal:
        """Toggle the elements in the reverse order of a linear extension."""
        if ext is None:
            ext = PosetService.default_linear_extension(p)
        elif not PosetService.is_linear_extension(p, ext):
            raise InvalidExtensionError("not a linear extension", ext=list(ext))
        for e in reversed(ext):
            ideal = PosetService.toggle(p, ideal, e)
        return ideal

    @staticmethod
    def apply_word(p: Poset, ideal: Ideal, word: Sequence[int]) -> Ideal:
        """Evaluate a toggle product; the rightmost factor acts first."""
        for e in word:
            p.check_index(e)
        for e in reversed(word):
            ideal = PosetService.toggle(p, ideal, e)
        return ideal

    @staticmethod
    def to_payload(p: Poset) -> PosetPayload:
        if p.dims is not None:
            return PosetPayload(dims=list(p.dims))
        return PosetPayload(elements=p.size, covers=[list(c) for c in sorted(p.covers)])

    @staticmethod
    def from_payload(payload: PosetPayload) -> Poset:
        if payload.dims is not None:
            return PosetService.make_chain_product(payload.dims)
        return PosetService.from_covers(payload.elements, payload.covers or [])

    @staticmethod
    def ideal_to_payload(p: Poset, ideal: Ideal) -> IdealPayload:
        return IdealPayload(members=PosetService.ideal_elements(p, ideal))
