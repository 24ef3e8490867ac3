from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Sequence, Tuple

import numpy as np

from app.handlers.exception import (
    ContractViolationError,
    DimensionMismatchError,
    InvalidPosetError,
    InvalidProjectionError,
    InvalidSweepError,
)
from app.schemas.poset_schema import ProjectionPayload
from app.services.poset_service import Ideal, Poset, PosetService, ToggleWord


@dataclass(frozen=True)
class LatticeProjection:
    """Order, rank and cover preserving map from element indices into Z^n."""

    n: int
    coords: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        if any(len(c) != self.n for c in self.coords):
            raise DimensionMismatchError(f"every coordinate vector must have length {self.n}")

    def check(self, p: Poset) -> "LatticeProjection":
        if len(self.coords) != p.size:
            raise InvalidProjectionError(f"projection covers {len(self.coords)} of {p.size} elements")
        coords = np.asarray(self.coords, dtype=np.int64).reshape(p.size, self.n)
        shifts = {int(coords[e].sum()) - p.rank[e] for e in range(p.size)}
        if len(shifts) > 1:
            raise InvalidProjectionError("projection is not rank preserving", shifts=sorted(shifts))
        for lo, hi in p.covers:
            step = coords[hi] - coords[lo]
            if step.min() < 0 or step.sum() != 1:
                raise InvalidProjectionError(
                    f"cover ({lo}, {hi}) is not sent to a unit step",
                    step=step.tolist(),
                )
        return self

    def to_payload(self) -> ProjectionPayload:
        return ProjectionPayload(n=self.n, coords=[list(c) for c in self.coords])


@dataclass(frozen=True)
class Direction:
    v: Tuple[int, ...]

    def __post_init__(self):
        if not self.v or any(x not in (1, -1) for x in self.v):
            raise InvalidProjectionError(f"direction entries must be +1 or -1, got {list(self.v)}")

    @property
    def n(self) -> int:
        return len(self.v)

    def __neg__(self) -> "Direction":
        return Direction(tuple(-x for x in self.v))


@dataclass(frozen=True)
class SweepOrder:
    """σ(a), σ(a+1), ..., σ(b) in product notation; the last entry is toggled first."""

    order: Tuple[int, ...]

    @classmethod
    def identity(cls, support: Tuple[int, int]) -> "SweepOrder":
        a, b = support
        return cls(tuple(range(a, b + 1)))

    @classmethod
    def gyration(cls, support: Tuple[int, int], lowest_parity: int) -> "SweepOrder":
        """Odd levels ascending, then even levels ascending; parity counted from the lowest level."""
        a, b = support

        def parity(i: int) -> int:
            return (lowest_parity + i - a) % 2

        odd = [i for i in range(a, b + 1) if parity(i) == 1]
        even = [i for i in range(a, b + 1) if parity(i) == 0]
        return cls(tuple(odd + even))

    def reverse(self) -> "SweepOrder":
        return SweepOrder(tuple(reversed(self.order)))

    def check(self, support: Tuple[int, int]) -> "SweepOrder":
        a, b = support
        if sorted(self.order) != list(range(a, b + 1)):
            raise InvalidSweepError(
                f"sweep must permute the support [{a}, {b}]",
                sweep=list(self.order),
            )
        return self


def _as_direction(v) -> Direction:
    return v if isinstance(v, Direction) else Direction(tuple(v))


@lru_cache(maxsize=256)
def _hyperplanes(p: Poset, proj: LatticeProjection, v: Direction) -> Tuple[Tuple[int, int], Dict[int, Tuple[int, ...]]]:
    if proj.n != v.n:
        raise DimensionMismatchError(f"direction has dimension {v.n}, projection {proj.n}")
    proj.check(p)
    values = np.asarray(proj.coords, dtype=np.int64).reshape(p.size, proj.n) @ np.asarray(v.v, dtype=np.int64)
    levels: Dict[int, List[int]] = {}
    for e, value in enumerate(values.tolist()):
        levels.setdefault(value, []).append(e)

    for lo, hi in p.covers:
        if values[lo] == values[hi]:
            raise ContractViolationError(f"cover ({lo}, {hi}) lies on hyperplane {int(values[lo])}")
    support = (int(values.min()), int(values.max()))
    return support, {i: tuple(members) for i, members in levels.items()}


class LatticeToggleService:

    @staticmethod
    def identity_projection(p: Poset) -> LatticeProjection:
        """π(x) = x for a chain product."""
        if p.dims is None:
            raise InvalidProjectionError("identity projection needs a chain-product poset")
        return LatticeProjection(len(p.dims), tuple(tuple(x) for x in p.elements)).check(p)

    @staticmethod
    def rank_projection(p: Poset) -> LatticeProjection:
        """π(x) = (rk(x), 0)."""
        if any(p.rank[hi] != p.rank[lo] + 1 for lo, hi in p.covers):
            raise InvalidPosetError("rank projection needs a ranked poset")
        return LatticeProjection(2, tuple((r, 0) for r in p.rank)).check(p)

    @staticmethod
    def support(p: Poset, proj: LatticeProjection, v) -> Tuple[int, int]:
        return _hyperplanes(p, proj, _as_direction(v))[0]

    @staticmethod
    def hyperplanes(p: Poset, proj: LatticeProjection, v) -> Dict[int, Tuple[int, ...]]:
        """Nonempty level sets of <π(x), v>."""
        return dict(_hyperplanes(p, proj, _as_direction(v))[1])

    @staticmethod
    def inverse_direction(v) -> Direction:
        """Pro_{π,-v} is the inverse of Pro_{π,v}."""
        return -_as_direction(v)

    @staticmethod
    def rowmotion_direction(proj: LatticeProjection) -> Direction:
        """The all-ones direction, for which promotion is rowmotion."""
        return Direction((1,) * proj.n)

    @staticmethod
    def hyperplane_toggle(p: Poset, proj: LatticeProjection, v, i: int, ideal: Ideal) -> Ideal:
        # members of one hyperplane share no cover, so sequential toggles are simultaneous
        for e in _hyperplanes(p, proj, _as_direction(v))[1].get(i, ()):
            ideal = PosetService.toggle(p, ideal, e)
        return ideal

    @staticmethod
    def promotion(p: Poset, proj: LatticeProjection, v, ideal: Ideal) -> Ideal:
        """Pro_{π,v}: hyperplane toggles from the top of the support down."""
        v = _as_direction(v)
        a, b = LatticeToggleService.support(p, proj, v)
        for i in range(b, a - 1, -1):
            ideal = LatticeToggleService.hyperplane_toggle(p, proj, v, i, ideal)
        return ideal

    @staticmethod
    def promotion_sigma(p: Poset, proj: LatticeProjection, v, sweep: SweepOrder, ideal: Ideal) -> Ideal:
        v = _as_direction(v)
        sweep.check(LatticeToggleService.support(p, proj, v))
        for i in reversed(sweep.order):
            ideal = LatticeToggleService.hyperplane_toggle(p, proj, v, i, ideal)
        return ideal

    @staticmethod
    def rank_parity(p: Poset, e: int) -> int:
        """Parity of the rank after shifting the minimum rank to 0."""
        return (p.rank[e] - min(p.rank)) % 2

    @staticmethod
    def gyration(p: Poset, ideal: Ideal) -> Ideal:
        """Toggle every even-rank element, then every odd-rank element."""
        if any(p.rank[hi] != p.rank[lo] + 1 for lo, hi in p.covers):
            raise InvalidPosetError("gyration needs a ranked poset")
        for parity in (0, 1):
            for e in range(p.size):
                if LatticeToggleService.rank_parity(p, e) == parity:
                    ideal = PosetService.toggle(p, ideal, e)
        return ideal

    @staticmethod
    def gyration_sweep(p: Poset, proj: LatticeProjection, v) -> SweepOrder:
        """
        Odd-rank hyperplanes ascending, then even-rank hyperplanes ascending.

        In product notation the even block sits on the right, so it is toggled
        first and the sweep equals gyration.
        """
        support, levels = _hyperplanes(p, proj, _as_direction(v))
        return SweepOrder.gyration(support, LatticeToggleService.rank_parity(p, levels[support[0]][0]))

    @staticmethod
    def hyperplane_word(p: Poset, proj: LatticeProjection, v, i: int) -> ToggleWord:
        return tuple(_hyperplanes(p, proj, _as_direction(v))[1].get(i, ()))

    @staticmethod
    def normalizing_moves(sweep: SweepOrder, target: SweepOrder) -> List[int]:
        """
        Hyperplane indices s_1, ..., s_m with
        g_{s_m} ... g_{s_1} P g_{s_1} ... g_{s_m} = Q,
        where P and Q are the products of `sweep` and `target`.

        A product of generators of a path, with non-adjacent generators
        commuting, is determined by which of i, i+1 stands to the left.
        Encode that as a height function f; moving the leftmost factor to the
        right end (a conjugation) raises a local minimum of f by 2, and
        moving the rightmost factor to the left end lowers a local maximum.
        """
        a = min(sweep.order)

        def heights(order: Tuple[int, ...]) -> List[int]:
            position = {s: k for k, s in enumerate(order)}
            f = [0]
            for i in range(a, a + len(order) - 1):
                f.append(f[-1] + (1 if position[i] < position[i + 1] else -1))
            return f

        current, goal = heights(sweep.order), heights(target.order)
        moves: List[int] = []
        while current != goal:
            low = [k for k in range(len(current)) if current[k] < goal[k]]
            if low:
                k = min(low, key=lambda j: (current[j], j))
                current[k] += 2
            else:
                high = [k for k in range(len(current)) if current[k] > goal[k]]
                k = max(high, key=lambda j: (current[j], -j))
                current[k] -= 2
            moves.append(a + k)
        return moves

    @staticmethod
    def conjugator(
        p: Poset,
        proj: LatticeProjection,
        v,
        sweep_v: SweepOrder,
        w,
        sweep_w: SweepOrder,
    ) -> ToggleWord:
        """
        Toggle word D with D^-1 . Pro_{π,v}^σ . D = Pro_{π,w}^τ (D acts first).

        Both products are conjugated to the gyration sweep of their own
        hyperplane family; the two certificates are glued through Gyr.
        """
        v, w = _as_direction(v), _as_direction(w)
        sweep_v.check(LatticeToggleService.support(p, proj, v))
        sweep_w.check(LatticeToggleService.support(p, proj, w))
        if v == w and sweep_v == sweep_w:
            return ()

        def certificate(direction: Direction, sweep: SweepOrder) -> List[int]:
            moves = LatticeToggleService.normalizing_moves(
                sweep, LatticeToggleService.gyration_sweep(p, proj, direction)
            )
            word: List[int] = []
            for s in moves:
                word.extend(LatticeToggleService.hyperplane_word(p, proj, direction, s))
            return word

        # Gyr = W_v^-1 Pro_v W_v = W_w^-1 Pro_w W_w, so D = W_v W_w^-1
        w_v = certificate(v, sweep_v)
        w_w = certificate(w, sweep_w)
        return LatticeToggleService.reduce_word(w_v + list(reversed(w_w)))

    @staticmethod
    def invert_word(word: Sequence[int]) -> ToggleWord:
        """Toggles are involutions, so the inverse is the reversal."""
        return tuple(reversed(word))

    @staticmethod
    def reduce_word(word: Sequence[int]) -> ToggleWord:
        stack: List[int] = []
        for e in word:
            if stack and stack[-1] == e:
                stack.pop()
            else:
                stack.append(e)
        return tuple(stack)

    @staticmethod
    def conjugate(p: Poset, word: Sequence[int], action, ideal: Ideal) -> Ideal:
        """Evaluate D^-1(action(D(ideal)))."""
        moved = PosetService.apply_word(p, ideal, word)
        return PosetService.apply_word(p, action(moved), LatticeToggleService.invert_word(word))
