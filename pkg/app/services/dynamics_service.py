import sys
import time
from collections import Counter
from concurrent.futures import Executor, ProcessPoolExecutor, ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import reduce
from itertools import islice
from typing import Any, Callable, Dict, Hashable, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
from sympy import ilcm
from tqdm import tqdm

from app.configuration.config import settings
from app.handlers.exception import ContractViolationError, InvalidSpecError, ResourceLimitError
from app.performance.metrics import metrics
from app.schemas.report_schema import (
    Counterexample,
    DivisibilityReport,
    DivisibilityViolation,
    OrbitReport,
    OrbitRepresentative,
    ResonanceReport,
    SizeCount,
)
from app.schemas.run_schema import SystemSpec
from app.utils.logger import log

State = Any
# (least key, orbit size, encoded least state)
ShardOrbit = Tuple[Hashable, int, Any]


def _identity(x):
    return x


@dataclass(frozen=True)
class Action:
    """
    Finite state space with a bijective successor. `domain` is either a
    sequence or a zero-argument callable returning a fresh iterator, so large
    spaces can be streamed. `key` gives the hashable, ordered form used for
    visited sets and representative choice.
    """

    name: str
    domain: Union[Sequence[State], Callable[[], Iterable[State]]]
    successor: Callable[[State], State]
    key: Callable[[State], Hashable] = _identity
    encode: Callable[[State], Any] = _identity
    contains: Optional[Callable[[State], bool]] = None
    spec: Optional[SystemSpec] = None
    system: str = ""

    def states(self) -> Iterator[State]:
        return iter(self.domain()) if callable(self.domain) else iter(self.domain)


@dataclass(frozen=True)
class ResonanceSpec:
    """Projection f, target action c and claimed frequency ω."""

    name: str
    projection: Callable[[State], Hashable]
    target_action: Callable[[Hashable], Hashable]
    frequency: int
    codomain: Optional[Callable[[], Iterable[Hashable]]] = None
    encode_target: Callable[[Hashable], Any] = field(default=lambda y: list(y) if isinstance(y, tuple) else y)

    def __post_init__(self):
        if self.frequency < 1:
            raise InvalidSpecError(f"frequency must be positive, got {self.frequency}")


def _lcm(sizes: Iterable[int]) -> int:
    return int(reduce(ilcm, sizes, 1))


def _progress(iterable: Iterable, total: Optional[int], desc: str) -> Iterable:
    return tqdm(iterable, total=total, desc=desc, file=sys.stderr, disable=not settings.SHOW_PROGRESS, leave=False)


class DynamicsService:

    @staticmethod
    def domain_size(action: Action, cap: Optional[int] = None) -> int:
        cap = cap or settings.STATE_CAP
        if not callable(action.domain):
            size = len(action.domain)
        else:
            size = sum(1 for _ in islice(action.states(), cap + 1))
        if size > cap:
            raise ResourceLimitError(f"{action.system or action.name} has more than {cap} states", cap=cap)
        return size

    @staticmethod
    def orbit(action: Action, x: State, limit: Optional[int] = None) -> List[State]:
        """The cycle of x, x first, without repeats."""
        limit = limit or settings.STATE_CAP
        start = action.key(x)
        cycle = [x]
        seen = {start}
        current = action.successor(x)
        while True:
            if action.contains is not None and not action.contains(current):
                raise ContractViolationError(
                    f"{action.name} leaves its domain",
                    state=action.encode(cycle[-1]),
                )
            k = action.key(current)
            if k == start:
                return cycle
            if k in seen:
                raise ContractViolationError(
                    f"{action.name} is not injective: the orbit of a state never returns to it",
                    state=action.encode(x),
                )
            if len(cycle) >= limit:
                raise ResourceLimitError(f"orbit longer than {limit} states", cap=limit)
            seen.add(k)
            cycle.append(current)
            current = action.successor(current)

    @staticmethod
    def iter_orbits(action: Action) -> Iterator[List[State]]:
        """Orbits in order of their first state in the domain."""
        visited = set()
        for state in action.states():
            if action.key(state) in visited:
                continue
            cycle = DynamicsService.orbit(action, state)
            visited.update(action.key(s) for s in cycle)
            yield cycle

    @staticmethod
    def trace_shard(action: Action, start: int, stop: int, limit: int) -> List[ShardOrbit]:
        """
        Orbits whose least state lies in positions [start, stop) of the domain.

        Each shard only remembers its own states, so every orbit is reported
        by exactly one shard whatever the shard boundaries are.
        """
        own: Dict[Hashable, State] = {}
        for state in islice(action.states(), start, stop):
            own[action.key(state)] = state

        done = set()
        found: List[ShardOrbit] = []
        steps = 0
        for seed_key, seed in own.items():
            if seed_key in done:
                continue
            least_key, least = seed_key, seed
            current, current_key = seed, seed_key
            size = 0
            while True:
                if current_key in own:
                    done.add(current_key)
                size += 1
                nxt = action.successor(current)
                if action.contains is not None and not action.contains(nxt):
                    raise ContractViolationError(f"{action.name} leaves its domain", state=action.encode(current))
                next_key = action.key(nxt)
                if next_key == seed_key:
                    break
                if size >= limit:
                    raise ContractViolationError(
                        f"{action.name} is not a bijection: an orbit does not close within {limit} steps",
                        state=action.encode(seed),
                    )
                if next_key < least_key:
                    least_key, least = next_key, nxt
                current, current_key = nxt, next_key
            steps += size
            if least_key in own:
                found.append((least_key, size, action.encode(least)))
        metrics.states_visited.labels(action=action.name).inc(steps)
        return found

    @staticmethod
    def shard_bounds(size: int, workers: int) -> List[Tuple[int, int]]:
        if workers <= 1 or size == 0:
            return [(0, size)]
        shards = min(size, workers * settings.SHARDS_PER_WORKER)
        edges = np.linspace(0, size, shards + 1).astype(int).tolist()
        return [(lo, hi) for lo, hi in zip(edges, edges[1:]) if hi > lo]

    @staticmethod
    def _executor(action: Action, workers: int) -> Executor:
        if action.spec is not None:
            return ProcessPoolExecutor(max_workers=workers)
        return ThreadPoolExecutor(max_workers=workers)

    @staticmethod
    def _run_shards(action: Action, bounds: List[Tuple[int, int]], workers: int, limit: int) -> List[ShardOrbit]:
        if len(bounds) == 1:
            lo, hi = bounds[0]
            return DynamicsService.trace_shard(action, lo, hi, limit)

        # imported here: the task module imports the registry, which imports this module
        from app.tasks.orbit_task import compute_orbit_shard, decode_shard_result, encode_shard_request

        found: List[ShardOrbit] = []
        with DynamicsService._executor(action, workers) as pool:
            if action.spec is not None:
                requests = [encode_shard_request(action.spec, lo, hi, limit) for lo, hi in bounds]
                results = pool.map(compute_orbit_shard, requests)
                results = (decode_shard_result(r) for r in results)
            else:
                results = pool.map(lambda b: DynamicsService.trace_shard(action, b[0], b[1], limit), bounds)
            for shard in _progress(results, len(bounds), f"orbits of {action.name}"):
                found.extend(shard)
        return found

    @staticmethod
    def orbit_structure(
        action: Action,
        workers: Optional[int] = None,
        cap: Optional[int] = None,
        representatives: bool = True,
        timings: bool = False,
    ) -> OrbitReport:
        """
        Exact orbit partition of the domain. Representatives are the least
        state of each orbit by key; the report does not depend on `workers`.
        """
        workers = workers or settings.DEFAULT_WORKERS
        started = time.perf_counter()
        try:
            size = DynamicsService.domain_size(action, cap)
            bounds = DynamicsService.shard_bounds(size, workers)
            found = DynamicsService._run_shards(action, bounds, workers, max(size, 1))
        except (ContractViolationError, ResourceLimitError):
            raise
        except Exception as e:
            log.error(f"Unexpected error in orbit_structure: {str(e)}")
            raise

        found.sort(key=lambda orbit: orbit[0])
        sizes = sorted(orbit[1] for orbit in found)
        if sum(sizes) != size:
            raise ContractViolationError(
                f"{action.name} orbits cover {sum(sizes)} of {size} states",
                covered=sum(sizes), domain_size=size,
            )
        elapsed = time.perf_counter() - started
        metrics.orbits_found.labels(action=action.name).inc(len(sizes))
        metrics.orbit_analysis_duration.labels(action=action.name).observe(elapsed)
        log.performance(
            f"Orbit structure of {action.system or action.name}",
            duration=round(elapsed, 6), endpoint="orbit_structure", workers=workers, states=size,
        )
        counts = Counter(sizes)
        return OrbitReport(
            system=action.system or action.name,
            action=action.name,
            domain_size=size,
            orbit_count=len(sizes),
            orbit_sizes=sizes,
            size_counts=[SizeCount(size=s, count=counts[s]) for s in sorted(counts)],
            order=_lcm(sizes),
            representatives=(
                [OrbitRepresentative(state=rep, size=s) for _, s, rep in found] if representatives else None
            ),
            runtime_seconds=round(elapsed, 6) if timings else None,
        )

    @staticmethod
    def _target_orbit_size(spec: ResonanceSpec, y: Hashable) -> int:
        limit = settings.CODOMAIN_ENUMERATION_LIMIT
        current, size = spec.target_action(y), 1
        while current != y:
            current, size = spec.target_action(current), size + 1
            if size > limit:
                raise ContractViolationError(f"target action of {spec.name} does not return within {limit} steps")
        return size

    @staticmethod
    def _target_orbit_sizes(spec: ResonanceSpec, points: Iterable[Hashable]) -> Tuple[Dict[Hashable, int], List[int]]:
        """Orbit size of every point, and one size per orbit."""
        size_of: Dict[Hashable, int] = {}
        per_orbit: List[int] = []
        for y in points:
            if y in size_of:
                continue
            size = DynamicsService._target_orbit_size(spec, y)
            per_orbit.append(size)
            current = y
            for _ in range(size):
                size_of[current] = size
                current = spec.target_action(current)
        return size_of, sorted(per_orbit)

    @staticmethod
    def verify_resonance(
        action: Action,
        spec: ResonanceSpec,
        by_orbit: bool = False,
        timings: bool = False,
    ) -> ResonanceReport:
        """
        Checks c(f(x)) = f(g(x)) on every state, that c^ω fixes f(X) and is
        not the identity there, and, when the target set is small enough to
        enumerate, that c^ω fixes all of it. Failure is reported, not raised.
        """
        started = time.perf_counter()
        omega = spec.frequency
        witness: Dict[Hashable, State] = {}
        counterexample: Optional[Counterexample] = None
        domain_size = 0
        try:
            for x in _progress(action.states(), None, f"resonance of {action.name}"):
                domain_size += 1
                if domain_size > settings.STATE_CAP:
                    raise ResourceLimitError(f"more than {settings.STATE_CAP} states", cap=settings.STATE_CAP)
                y = spec.projection(x)
                witness.setdefault(y, x)
                if counterexample is None:
                    shifted = spec.target_action(y)
                    forward = spec.projection(action.successor(x))
                    if shifted != forward:
                        counterexample = Counterexample(
                            reason="projection does not intertwine the two actions",
                            state=action.encode(x),
                            image=spec.encode_target(y),
                            image_of_successor=spec.encode_target(forward),
                            shifted_image=spec.encode_target(shifted),
                        )
            commutes = counterexample is None

            size_of, image_orbit_sizes = DynamicsService._target_orbit_sizes(spec, sorted(witness))
            image_order = _lcm(image_orbit_sizes)
            if counterexample is None:
                for y in sorted(witness):
                    if omega % size_of[y]:
                        counterexample = Counterexample(
                            reason=f"target action has an orbit of size {size_of[y]} not dividing {omega}",
                            state=action.encode(witness[y]),
                            image=spec.encode_target(y),
                        )
                        break
            if counterexample is None and image_order == 1:
                counterexample = Counterexample(reason="target action is trivial on the image")

            codomain_size = codomain_order = surjective = None
            if spec.codomain is not None:
                limit = settings.CODOMAIN_ENUMERATION_LIMIT
                codomain = list(islice(spec.codomain(), limit + 1))
                if len(codomain) <= limit:
                    codomain_sizes, codomain_orbits = DynamicsService._target_orbit_sizes(spec, codomain)
                    codomain_size = len(codomain)
                    codomain_order = _lcm(codomain_orbits)
                    surjective = len(witness) == codomain_size and all(y in codomain_sizes for y in witness)
                    if counterexample is None and omega % codomain_order:
                        bad = next(y for y in codomain if omega % codomain_sizes[y])
                        counterexample = Counterexample(
                            reason=f"target action has order {codomain_order} on the target set",
                            image=spec.encode_target(bad),
                        )

            orbit_pairs = None
            if by_orbit:
                pairs = Counter(
                    (len(cycle), size_of.get(spec.projection(cycle[0]), 0))
                    for cycle in DynamicsService.iter_orbits(action)
                )
                orbit_pairs = [[s, t, pairs[(s, t)]] for s, t in sorted(pairs)]
        except (ContractViolationError, ResourceLimitError):
            raise
        except Exception as e:
            log.error(f"Unexpected error in verify_resonance: {str(e)}")
            raise

        holds = counterexample is None
        elapsed = time.perf_counter() - started
        outcome = "holds" if holds else "fails"
        metrics.resonance_checks.labels(outcome=outcome).inc()
        log.audit(
            f"Resonance of {action.system or action.name} under {spec.name} at frequency {omega}: {outcome}",
            action="verify_resonance", outcome=outcome,
        )
        log.performance("Resonance check", duration=round(elapsed, 6), endpoint="verify_resonance", states=domain_size)
        return ResonanceReport(
            system=action.system or action.name,
            map=spec.name,
            frequency=omega,
            holds=holds,
            commutes=commutes,
            domain_size=domain_size,
            image_size=len(witness),
            image_order=image_order,
            image_orbit_sizes=image_orbit_sizes,
            codomain_size=codomain_size,
            codomain_order=codomain_order,
            surjective=surjective,
            counterexample=counterexample,
            orbit_pairs=orbit_pairs,
            runtime_seconds=round(elapsed, 6) if timings else None,
        )

    @staticmethod
    def divisibility_check(
        action: Action,
        predicate: Callable[[State], bool],
        modulus: int,
        predicate_name: str = "custom",
        max_examples: int = 20,
        timings: bool = False,
    ) -> DivisibilityReport:
        """Every state satisfying `predicate` must lie in an orbit whose size is a multiple of `modulus`."""
        if modulus < 1:
            raise InvalidSpecError(f"modulus must be positive, got {modulus}")
        started = time.perf_counter()
        checked_states = checked_orbits = violation_count = 0
        violations: List[DivisibilityViolation] = []
        for cycle in DynamicsService.iter_orbits(action):
            matching = [s for s in cycle if predicate(s)]
            if not matching:
                continue
            checked_orbits += 1
            checked_states += len(matching)
            if len(cycle) % modulus:
                violation_count += len(matching)
                for s in matching[: max(0, max_examples - len(violations))]:
                    violations.append(DivisibilityViolation(state=action.encode(s), orbit_size=len(cycle)))
        elapsed = time.perf_counter() - started
        log.audit(
            f"Divisibility by {modulus} on {action.system or action.name} ({predicate_name}): "
            f"{violation_count} violations",
            action="divisibility_check", outcome="holds" if not violation_count else "fails",
        )
        return DivisibilityReport(
            system=action.system or action.name,
            predicate=predicate_name,
            modulus=modulus,
            holds=violation_count == 0,
            checked_states=checked_states,
            checked_orbits=checked_orbits,
            violation_count=violation_count,
            violations=violations,
            runtime_seconds=round(elapsed, 6) if timings else None,
        )
