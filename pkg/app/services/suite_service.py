import time
from itertools import product
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from sympy import isprime

from app.handlers.exception import InvalidSpecError, ResonanceLabError, UnknownSystemError
from app.performance.metrics import metrics
from app.repository.system_registry import SystemRegistry, rotate_left, WIELAND_SHIFT
from app.schemas.enums import ActionName, DomainKind, PsiAxis, SuiteName
from app.schemas.report_schema import SuiteCase, SuiteReport
from app.schemas.run_schema import SystemSpec
from app.services.dynamics_service import DynamicsService
from app.services.fpl_service import FplService
from app.services.lattice_toggle_service import Direction, LatticeToggleService, SweepOrder
from app.services.plane_partition_service import PlanePartitionService, box_poset
from app.services.poset_service import PosetService
from app.services.tableau_service import TableauService
from app.utils.logger import log

Box = Tuple[int, ...]

DEFAULT_MAX = {
    SuiteName.BROUWER_SCHRIJVER: 6,
    SuiteName.HEIGHT2: 5,
    SuiteName.KPRO_ORDERS: 5,
    SuiteName.CONJECTURE_HEIGHT3: 4,
    SuiteName.CFDF_IMPROVED: 3,
    SuiteName.CFDF_ORIGINAL: 3,
    SuiteName.TRIFOLD: 3,
    SuiteName.INTERTWINING: 3,
    SuiteName.EQUIVARIANCE: 3,
    SuiteName.WIELAND: 5,
    SuiteName.CONTENT_CYCLING: 3,
    SuiteName.DESCENT_CYCLING: 4,
    SuiteName.CONJUGATOR: 3,
    SuiteName.KPRO_DIVISIBILITY: 3,
}

BOX_SUITES = {
    SuiteName.CFDF_IMPROVED,
    SuiteName.CFDF_ORIGINAL,
    SuiteName.TRIFOLD,
    SuiteName.INTERTWINING,
    SuiteName.EQUIVARIANCE,
    SuiteName.CONJUGATOR,
}


class SuiteContext:
    """Parameters shared by every case of one suite run."""

    def __init__(self, max_size: int, boxes: Optional[List[Box]], workers: int):
        self.max_size = max_size
        self.boxes = boxes
        self.workers = workers

    def order(self, spec: SystemSpec) -> int:
        report = DynamicsService.orbit_structure(
            SystemRegistry.build_action(spec), workers=self.workers, representatives=False
        )
        return report.order

    def orbit_sizes(self, spec: SystemSpec) -> List[int]:
        report = DynamicsService.orbit_structure(
            SystemRegistry.build_action(spec), workers=self.workers, representatives=False
        )
        return report.orbit_sizes


def _row(dims: Sequence[int]) -> SystemSpec:
    return SystemSpec(kind=DomainKind.BOX, dims=list(dims), action=ActionName.ROWMOTION)


def _kpro(shape: Sequence[int], q: int) -> SystemSpec:
    return SystemSpec(kind=DomainKind.INC, shape=list(shape), q=q, action=ActionName.KPRO)


def _order_case(parameters: Dict, expected: int, observed: int) -> SuiteCase:
    return SuiteCase(parameters=parameters, passed=expected == observed, expected=expected, observed=observed)


def _boxes_3d(ctx: SuiteContext, extra: Sequence[Box] = ()) -> List[Box]:
    if ctx.boxes:
        return ctx.boxes
    m = ctx.max_size
    return [b for b in product(range(1, m + 1), repeat=3)] + [tuple(b) for b in extra]


def _moves_under_rotation(labels, q: int) -> bool:
    return 0 < len(labels) < q


def kpro_divisibility_premise(t) -> bool:
    """
    True when a statistic equivariant under KPro has a word of prime length q
    that rotation moves: partial content, or a descent set (or transpose
    descent set) that is neither empty nor everything. A constant word gives
    no divisibility; Inc^2(1x2) has empty descents, full transpose descents
    and a fixed point.
    """
    return (
        not TableauService.has_full_content(t)
        or _moves_under_rotation(TableauService.descent_set(t), t.q)
        or _moves_under_rotation(TableauService.transpose_descent_set(t), t.q)
    )


class SuiteService:
    """Exhaustive checks of the orbit-size, resonance and bijection statements."""

    @staticmethod
    def brouwer_schrijver(ctx: SuiteContext) -> Iterator[SuiteCase]:
        """Row on J(a x b) has order a + b."""
        for a in range(1, ctx.max_size + 1):
            for b in range(a, ctx.max_size + 1):
                yield _order_case({"a": a, "b": b}, a + b, ctx.order(_row([a, b])))

    @staticmethod
    def height2(ctx: SuiteContext) -> Iterator[SuiteCase]:
        """Row on J(a x b x 2) has order a + b + 1."""
        for a in range(1, ctx.max_size + 1):
            for b in range(a, ctx.max_size + 1):
                yield _order_case({"a": a, "b": b, "c": 2}, a + b + 1, ctx.order(_row([a, b, 2])))

    @staticmethod
    def conjecture_height3(ctx: SuiteContext) -> Iterator[SuiteCase]:
        """Row on J(a x b x 3) has order a + b + 2."""
        for a in range(1, ctx.max_size + 1):
            for b in range(a, ctx.max_size + 1):
                yield _order_case({"a": a, "b": b, "c": 3}, a + b + 2, ctx.order(_row([a, b, 3])))

    @staticmethod
    def kpro_orders(ctx: SuiteContext) -> Iterator[SuiteCase]:
        m = ctx.max_size
        for a in range(1, m + 1):
            for b in range(a, m + 1):
                for q in (a + b, a + b + 1):
                    yield _order_case({"a": a, "b": b, "q": q}, q, ctx.order(_kpro([b] * a, q)))
        # single rows need q > a: Inc^a(1 x a) is one fixed tableau
        for a in range(1, 10):
            for q in range(a + 1, 11):
                yield _order_case({"a": 1, "b": a, "q": q}, q, ctx.order(_kpro([a], q)))

    @staticmethod
    def _divisible_row_orbits(ctx: SuiteContext, hypothesis: Callable[[int, int, int], bool]) -> Iterator[SuiteCase]:
        boxes = ctx.boxes or [
            (a, b, c)
            for a in range(1, ctx.max_size + 1)
            for b in range(a, ctx.max_size + 1)
            for c in range(1, ctx.max_size + 2)
        ]
        for a, b, c in boxes:
            q = a + b + c - 1
            if not (isprime(q) and hypothesis(a, b, c)):
                continue
            report = DynamicsService.divisibility_check(
                SystemRegistry.build_action(_row([a, b, c])), lambda _: True, q, predicate_name="all"
            )
            yield SuiteCase(
                parameters={"a": a, "b": b, "c": c, "q": q},
                passed=report.holds,
                expected=0,
                observed=report.violation_count,
                detail=f"{report.checked_orbits} orbits, every size a multiple of {q}" if report.holds else None,
            )

    @staticmethod
    def cfdf_improved(ctx: SuiteContext) -> Iterator[SuiteCase]:
        """Prime q = a+b+c-1 and c > (2ab-2)/3 - a - b + 2: Row orbit sizes are multiples of q."""
        yield from SuiteService._divisible_row_orbits(ctx, lambda a, b, c: 3 * c > 2 * a * b - 2 - 3 * a - 3 * b + 6)

    @staticmethod
    def cfdf_original(ctx: SuiteContext) -> Iterator[SuiteCase]:
        """
        The c > ab - a - b + 1 bound, equivalently ab < a+b+c-1: an a x b
        tableau then has fewer boxes than labels, so its content is never
        full. Followed by the X_max form of the argument: under Pro(1,-1,1) a plane partition whose X_max has a zero
        lies in an orbit of size divisible by prime a+b+c-1.
        """
        yield from SuiteService._divisible_row_orbits(ctx, lambda a, b, c: c > a * b - a - b + 1)
        for a, b, c in _boxes_3d(ctx):
            q = a + b + c - 1
            if not isprime(q):
                continue
            dims = (a, b, c)
            spec = SystemSpec(kind=DomainKind.BOX, dims=list(dims), action=ActionName.PROMOTION, direction=[1, -1, 1])
            report = DynamicsService.divisibility_check(
                SystemRegistry.build_action(spec),
                lambda ideal: 0 in PlanePartitionService.x_max(ideal, dims),
                q,
                predicate_name="xmax-zero",
            )
            yield SuiteCase(
                parameters={"a": a, "b": b, "c": c, "q": q, "predicate": "xmax-zero"},
                passed=report.holds,
                expected=0,
                observed=report.violation_count,
            )

    @staticmethod
    def trifold(ctx: SuiteContext) -> Iterator[SuiteCase]:
        """KPro orbit sizes agree on the three faces of the box."""
        m = ctx.max_size
        boxes = ctx.boxes or [(a, b, c) for a in range(1, m + 1) for b in range(a, m + 1) for c in range(b, m + 1)]
        for a, b, c in boxes:
            q = a + b + c - 1
            faces = {
                "ab": ctx.orbit_sizes(_kpro([b] * a, q)),
                "ac": ctx.orbit_sizes(_kpro([c] * a, q)),
                "bc": ctx.orbit_sizes(_kpro([c] * b, q)),
            }
            yield SuiteCase(
                parameters={"a": a, "b": b, "c": c, "q": q},
                passed=faces["ab"] == faces["ac"] == faces["bc"],
                observed={face: sizes for face, sizes in faces.items()},
            )

    @staticmethod
    def intertwining(ctx: SuiteContext) -> Iterator[SuiteCase]:
        """psi(Pro_v(I)) = KPro(psi(I)) on each face, and psi is a bijection."""
        for dims in _boxes_3d(ctx, extra=[(2, 2, 4), (2, 4, 2)]):
            p = box_poset(tuple(dims))
            proj = LatticeToggleService.identity_projection(p)
            ideals = PosetService.enumerate_ideals(p)
            for axis in PsiAxis:
                v = PlanePartitionService.intertwining_direction(axis)
                mismatches = 0
                images = set()
                round_trip = 0
                for ideal in ideals:
                    t = PlanePartitionService.psi(ideal, dims, axis)
                    images.add(t.key)
                    if PlanePartitionService.psi_inverse(t, dims, axis) == ideal:
                        round_trip += 1
                    promoted = PlanePartitionService.psi(LatticeToggleService.promotion(p, proj, v, ideal), dims, axis)
                    if promoted != TableauService.k_promotion(t):
                        mismatches += 1
                expected = PlanePartitionService.macmahon_count(*dims)
                yield SuiteCase(
                    parameters={"dims": list(dims), "axis": int(axis), "direction": list(v)},
                    passed=mismatches == 0 and len(images) == len(ideals) == expected == round_trip,
                    expected=expected,
                    observed={"ideals": len(ideals), "images": len(images), "mismatches": mismatches},
                )

    @staticmethod
    def equivariance(ctx: SuiteContext) -> Iterator[SuiteCase]:
        """Row on J(a x b x c) and KPro on Inc^{a+b+c-1}(a x b) share orbit sizes."""
        for a, b, c in _boxes_3d(ctx, extra=[(2, 2, 4), (2, 4, 2)]):
            row = ctx.orbit_sizes(_row([a, b, c]))
            kpro = ctx.orbit_sizes(_kpro([b] * a, a + b + c - 1))
            yield SuiteCase(parameters={"a": a, "b": b, "c": c}, passed=row == kpro, expected=row, observed=kpro)

    @staticmethod
    def wieland(ctx: SuiteContext) -> Iterator[SuiteCase]:
        """Gyration rotates link patterns by one position; counts match the ASM numbers."""
        for n in range(1, ctx.max_size + 1):
            configs = FplService.enumerate_fpl(n)
            failures = sum(
                1
                for config in configs
                if FplService.link_pattern(FplService.gyration_fpl(config))
                != FplService.rotate_link_pattern(FplService.link_pattern(config), WIELAND_SHIFT, n)
            )
            yield SuiteCase(
                parameters={"n": n},
                passed=failures == 0 and len(configs) == FplService.asm_count(n),
                expected=FplService.asm_count(n),
                observed={"configurations": len(configs), "rotation_failures": failures},
            )

    @staticmethod
    def content_cycling(ctx: SuiteContext) -> Iterator[SuiteCase]:
        """Con(KPro(T)) is the left rotation of Con(T)."""
        m = ctx.max_size
        for shape in TableauService.partitions_in_box(m, m):
            for q in range(len(shape) + shape[0] - 1, m + 6):
                failures = 0
                for t in TableauService.enumerate_increasing(shape, q):
                    if TableauService.content(TableauService.k_promotion(t)) != rotate_left(TableauService.content(t)):
                        failures += 1
                yield SuiteCase(parameters={"shape": list(shape), "q": q}, passed=failures == 0, observed=failures)

    @staticmethod
    def descent_cycling(ctx: SuiteContext) -> Iterator[SuiteCase]:
        """
        i is a (transpose) descent of T iff i-1 mod q is one of KPro(T), and
        a label that is both has at least three copies of i and i+1 together.
        """
        m = ctx.max_size
        for a in range(1, m + 1):
            for b in range(1, m + 1):
                if a * b > 8:
                    continue
                for q in range(a + b - 1, 9):
                    failures = 0
                    for t in TableauService.enumerate_increasing([b] * a, q):
                        promoted = TableauService.k_promotion(t)
                        for descents in (TableauService.descent_set, TableauService.transpose_descent_set):
                            after = descents(promoted)
                            shifted = {(i - 2) % q + 1 for i in descents(t)}
                            if shifted != after:
                                failures += 1
                        smallest = TableauService.descent_pair_counts(t)
                        if smallest is not None and smallest < 3:
                            failures += 1
                    yield SuiteCase(parameters={"a": a, "b": b, "q": q}, passed=failures == 0, observed=failures)

    @staticmethod
    def conjugator(ctx: SuiteContext) -> Iterator[SuiteCase]:
        """The constructed toggle word conjugates every Pro_v^sigma to Row."""
        boxes = ctx.boxes or [(2, 2), (2, 3), (3, 3), (2, 2, 2), (2, 2, 3), (2, 3, 3)][: max(1, 2 * ctx.max_size)]
        for dims in boxes:
            p = PosetService.make_chain_product(list(dims))
            ideals = PosetService.enumerate_ideals(p)
            projections = [("identity", LatticeToggleService.identity_projection(p))]
            if len(dims) == 2:
                projections.append(("rank", LatticeToggleService.rank_projection(p)))
            for label, proj in projections:
                base = LatticeToggleService.rowmotion_direction(proj)
                base_sweep = SweepOrder.identity(LatticeToggleService.support(p, proj, base))
                for signs in product((1, -1), repeat=proj.n):
                    v = Direction(signs)
                    support = LatticeToggleService.support(p, proj, v)
                    sweeps = {
                        "identity": SweepOrder.identity(support),
                        "gyration": LatticeToggleService.gyration_sweep(p, proj, v),
                    }
                    for sweep_name, sweep in sweeps.items():
                        word = LatticeToggleService.conjugator(p, proj, v, sweep, base, base_sweep)
                        failures = 0
                        for ideal in ideals:
                            conjugated = LatticeToggleService.conjugate(
                                p, word, lambda j: LatticeToggleService.promotion_sigma(p, proj, v, sweep, j), ideal
                            )
                            if conjugated != LatticeToggleService.promotion_sigma(p, proj, base, base_sweep, ideal):
                                failures += 1
                        yield SuiteCase(
                            parameters={
                                "dims": list(dims), "projection": label,
                                "direction": list(signs), "sweep": sweep_name,
                            },
                            passed=failures == 0,
                            observed={"word_length": len(word), "failures": failures},
                        )

    @staticmethod
    def kpro_divisibility(ctx: SuiteContext) -> Iterator[SuiteCase]:
        """
        For prime q, every tableau meeting kpro_divisibility_premise has a KPro
        orbit of size divisible by q.
        """
        m = ctx.max_size
        for a in range(1, m + 1):
            for b in range(a, m + 1):
                for q in range(a + b - 1, a + b + 4):
                    if not isprime(q):
                        continue
                    report = DynamicsService.divisibility_check(
                        SystemRegistry.build_action(_kpro([b] * a, q)), kpro_divisibility_premise, q,
                        predicate_name="rotation-moving statistic",
                    )
                    yield SuiteCase(
                        parameters={"a": a, "b": b, "q": q},
                        passed=report.holds,
                        expected=0,
                        observed=report.violation_count,
                    )

    @classmethod
    def run(
        cls,
        suite: SuiteName,
        max_size: Optional[int] = None,
        boxes: Optional[List[Box]] = None,
        workers: int = 1,
        timings: bool = False,
    ) -> SuiteReport:
        try:
            suite = SuiteName(suite)
        except ValueError:
            raise UnknownSystemError(f"unknown suite {suite!r}", suite=str(suite))
        if boxes:
            if suite not in BOX_SUITES:
                raise InvalidSpecError(f"suite {suite.value} does not take --box", suite=suite.value)
            if suite != SuiteName.CONJUGATOR and any(len(b) != 3 for b in boxes):
                raise InvalidSpecError(f"suite {suite.value} needs three-dimensional boxes", suite=suite.value)
        runner = SUITE_RUNNERS[suite]
        ctx = SuiteContext(max_size or DEFAULT_MAX[suite], boxes, workers)
        started = time.perf_counter()
        cases: List[SuiteCase] = []
        try:
            generator = runner(ctx)
            while True:
                case_started = time.perf_counter()
                try:
                    case = next(generator)
                except StopIteration:
                    break
                if timings:
                    case.runtime_seconds = round(time.perf_counter() - case_started, 6)
                metrics.suite_cases.labels(suite=suite.value, outcome="pass" if case.passed else "fail").inc()
                cases.append(case)
        except ResonanceLabError:
            raise
        except Exception as e:
            log.error(f"Unexpected error in suite {suite.value}: {str(e)}")
            raise

        failures = sum(1 for case in cases if not case.passed)
        elapsed = time.perf_counter() - started
        log.audit(
            f"Suite {suite.value}: {len(cases) - failures}/{len(cases)} cases pass",
            action="verify", outcome="pass" if not failures else "fail",
        )
        log.performance(f"Suite {suite.value}", duration=round(elapsed, 6), endpoint="verify", cases=len(cases))
        return SuiteReport(
            suite=suite.value,
            passed=failures == 0,
            case_count=len(cases),
            failures=failures,
            cases=cases,
            runtime_seconds=round(elapsed, 6) if timings else None,
        )


SUITE_RUNNERS: Dict[SuiteName, Callable[[SuiteContext], Iterator[SuiteCase]]] = {
    SuiteName.BROUWER_SCHRIJVER: SuiteService.brouwer_schrijver,
    SuiteName.HEIGHT2: SuiteService.height2,
    SuiteName.KPRO_ORDERS: SuiteService.kpro_orders,
    SuiteName.CONJECTURE_HEIGHT3: SuiteService.conjecture_height3,
    SuiteName.CFDF_IMPROVED: SuiteService.cfdf_improved,
    SuiteName.CFDF_ORIGINAL: SuiteService.cfdf_original,
    SuiteName.TRIFOLD: SuiteService.trifold,
    SuiteName.INTERTWINING: SuiteService.intertwining,
    SuiteName.EQUIVARIANCE: SuiteService.equivariance,
    SuiteName.WIELAND: SuiteService.wieland,
    SuiteName.CONTENT_CYCLING: SuiteService.content_cycling,
    SuiteName.DESCENT_CYCLING: SuiteService.descent_cycling,
    SuiteName.CONJUGATOR: SuiteService.conjugator,
    SuiteName.KPRO_DIVISIBILITY: SuiteService.kpro_divisibility,
}
