from functools import lru_cache, partial
from typing import Callable, Dict, Iterator, Optional, Tuple

from pydantic import ValidationError

from app.configuration.config import settings
from app.handlers.exception import InvalidSpecError, ResonanceLabError, UnknownSystemError
from app.schemas.enums import ActionName, DomainKind, ResonanceMap
from app.schemas.run_schema import SystemSpec
from app.services.dynamics_service import Action, ResonanceSpec
from app.services.fpl_service import FplService
from app.services.lattice_toggle_service import LatticeToggleService
from app.services.plane_partition_service import PlanePartition, PlanePartitionService
from app.services.poset_service import Ideal, Poset, PosetService
from app.services.tableau_service import TableauService
from app.utils.logger import log


def rotate_left(word: Tuple[int, ...]) -> Tuple[int, ...]:
    return word[1:] + word[:1]


def rotate_right(word: Tuple[int, ...]) -> Tuple[int, ...]:
    return word[-1:] + word[:-1]


def binary_words(length: int) -> Iterator[Tuple[int, ...]]:
    for value in range(1 << length):
        yield tuple((value >> (length - 1 - i)) & 1 for i in range(length))


# Sweeps the colour of the upper-left square first; link patterns then move
# one label down (i -> i-1).
WIELAND_SHIFT = -1


@lru_cache(maxsize=32)
def _box(dims: Tuple[int, ...]) -> Poset:
    return PosetService.make_chain_product(list(dims))


@lru_cache(maxsize=32)
def _box_ideals(dims: Tuple[int, ...]) -> Tuple[Ideal, ...]:
    return tuple(sorted(PosetService.enumerate_ideals(_box(dims))))


def _encode_ideal(dims: Tuple[int, ...], ideal: Ideal):
    if len(dims) == 3:
        return [list(row) for row in PlanePartition.from_ideal(ideal, dims).heights]
    return PosetService.ideal_to_payload(_box(dims), ideal).members


class SystemRegistry:
    """Binds a SystemSpec to its Action, and resonance map names to ResonanceSpecs."""

    @staticmethod
    def parse(data: dict) -> SystemSpec:
        try:
            return SystemSpec(**data)
        except ValidationError as e:
            raise InvalidSpecError(f"invalid system: {e.errors()[0]['msg']}", system=data)

    @staticmethod
    def box_successor(spec: SystemSpec) -> Callable[[Ideal], Ideal]:
        p = _box(tuple(spec.dims))
        if spec.action == ActionName.ROWMOTION:
            return partial(PosetService.rowmotion, p)
        if spec.action == ActionName.GYRATION:
            return partial(LatticeToggleService.gyration, p)
        proj = LatticeToggleService.identity_projection(p)
        return partial(LatticeToggleService.promotion, p, proj, tuple(spec.direction))

    @staticmethod
    def build_action(spec: SystemSpec) -> Action:
        try:
            if spec.kind == DomainKind.BOX:
                dims = tuple(spec.dims)
                return Action(
                    name=spec.action.value,
                    domain=_box_ideals(dims),
                    successor=SystemRegistry.box_successor(spec),
                    encode=partial(_encode_ideal, dims),
                    contains=partial(PosetService.is_ideal, _box(dims)) if settings.VALIDATE_IDEALS else None,
                    spec=spec,
                    system=spec.name,
                )
            if spec.kind == DomainKind.INC:
                shape, q = tuple(spec.shape), spec.q
                return Action(
                    name=spec.action.value,
                    domain=partial(TableauService.enumerate_increasing, shape, q),
                    successor=TableauService.k_promotion,
                    key=lambda t: t.key,
                    encode=lambda t: t.rows,
                    spec=spec,
                    system=spec.name,
                )
            configs = FplService.enumerate_fpl(spec.n)
            return Action(
                name=spec.action.value,
                domain=configs,
                successor=FplService.gyration_fpl,
                key=lambda a: a.key,
                encode=lambda a: a.to_payload().edges,
                contains=FplService.is_valid if settings.VALIDATE_IDEALS else None,
                spec=spec,
                system=spec.name,
            )
        except ResonanceLabError:
            raise
        except Exception as e:
            log.error(f"Unexpected error in build_action: {str(e)}")
            raise

    @staticmethod
    def default_map(spec: SystemSpec) -> ResonanceMap:
        return {
            DomainKind.BOX: ResonanceMap.XMAX,
            DomainKind.INC: ResonanceMap.CONTENT,
            DomainKind.FPL: ResonanceMap.LINK_PATTERN,
        }[spec.kind]

    @staticmethod
    def resonance_system(spec: SystemSpec, resonance_map: ResonanceMap) -> SystemSpec:
        """The action a map is paired with; X_max is read under Pro_{id,(1,-1,1)}."""
        if resonance_map == ResonanceMap.XMAX:
            if spec.kind != DomainKind.BOX or len(spec.dims) != 3:
                raise UnknownSystemError("map xmax needs a three-dimensional box", map=resonance_map.value)
            return SystemSpec(kind=DomainKind.BOX, dims=spec.dims, action=ActionName.PROMOTION, direction=[1, -1, 1])
        if resonance_map == ResonanceMap.CONTENT and spec.kind != DomainKind.INC:
            raise UnknownSystemError("map content needs increasing tableaux", map=resonance_map.value)
        if resonance_map == ResonanceMap.LINK_PATTERN and spec.kind != DomainKind.FPL:
            raise UnknownSystemError("map link-pattern needs fully-packed loops", map=resonance_map.value)
        return spec

    @staticmethod
    def build_resonance(spec: SystemSpec, resonance_map: ResonanceMap, frequency: Optional[int] = None) -> ResonanceSpec:
        if resonance_map == ResonanceMap.CONTENT:
            q = spec.q
            return ResonanceSpec(
                name="content",
                projection=TableauService.content,
                target_action=rotate_left,
                frequency=frequency or q,
                codomain=partial(binary_words, q),
            )
        if resonance_map == ResonanceMap.XMAX:
            dims = tuple(spec.dims)
            length = PlanePartitionService.label_bound(dims)
            return ResonanceSpec(
                name="xmax",
                projection=partial(_x_max, dims),
                target_action=rotate_right,
                frequency=frequency or length,
                codomain=partial(binary_words, length),
            )
        n = spec.n
        return ResonanceSpec(
            name="link-pattern",
            projection=FplService.link_pattern,
            target_action=partial(FplService.rotate_link_pattern, shift=WIELAND_SHIFT, n=n),
            frequency=frequency or 2 * n,
            codomain=partial(FplService.enumerate_link_patterns, n),
            encode_target=lambda lp: FplService.pattern_to_payload(n, lp).pairs,
        )

    @staticmethod
    def resonance_maps() -> Dict[str, str]:
        return {
            ResonanceMap.CONTENT.value: "binary content of increasing tableaux, left rotation",
            ResonanceMap.XMAX.value: "X_max of plane partitions under Pro(1,-1,1), right rotation",
            ResonanceMap.LINK_PATTERN.value: "link pattern of fully-packed loops, rotation by one",
        }


def _x_max(dims: Tuple[int, int, int], ideal: Ideal) -> Tuple[int, ...]:
    return PlanePartitionService.x_max(ideal, dims)


@lru_cache(maxsize=32)
def cached_action(spec_json: str) -> Action:
    """Per-process Action cache keyed by the spec's JSON form."""
    return SystemRegistry.build_action(SystemSpec.model_validate_json(spec_json))
