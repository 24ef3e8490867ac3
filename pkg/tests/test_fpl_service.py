from collections import Counter
from math import lcm

import pytest

from app.handlers.exception import InvalidConfigurationError, InvalidSpecError, ResourceLimitError
from app.repository.system_registry import WIELAND_SHIFT
from app.schemas.enums import SquareColor
from app.schemas.fpl_schema import FplPayload
from app.services.fpl_service import FplConfig, FplService as F, grid_layout
from tests.oracles import brute_force_fpl_count


HORIZONTAL_PAIR = FplPayload(n=2, edges=[[0, 1], [2, 3]])
VERTICAL_PAIR = FplPayload(n=2, edges=[[0, 2], [1, 3]])

# order three: two stacked hooks, and the configuration one gyration later
HOOKS = FplPayload(n=3, edges=[[0, 1], [1, 2], [3, 4], [4, 5], [6, 7], [7, 8]])
HOOKS_GYRATED = FplPayload(n=3, edges=[[0, 3], [1, 2], [1, 4], [4, 7], [5, 8], [6, 7]])

NESTED_TEN = ((1, 10), (2, 3), (4, 5), (6, 7), (8, 9))
ORDER_SIX_PATTERN = ((1, 12), (2, 3), (4, 5), (6, 9), (7, 8), (10, 11))


def gyration_orbits(n):
    seen, orbits = set(), []
    for a in F.enumerate_fpl(n):
        if a not in seen:
            orbit = F.gyration_orbit(a)
            seen.update(orbit)
            orbits.append(orbit)
    return orbits


class TestLayout:
    def test_edge_numbering(self):
        layout = grid_layout(3)
        assert layout.edge_count == 12
        assert layout.edge_ends[layout.horizontal(1, 0)] == (3, 4)
        assert layout.edge_ends[layout.vertical(0, 2)] == (2, 5)

    def test_external_edges_alternate(self):
        assert F.external_edges(2) == {1: (0, 0), 2: (0, 1), 3: (1, 1), 4: (1, 0)}
        assert len(F.external_edges(5)) == 10

    def test_single_dot(self):
        assert F.external_edges(1) == {1: (0, 0), 2: (0, 0)}

    def test_order_must_be_positive(self):
        with pytest.raises(InvalidSpecError):
            grid_layout(0)


class TestEnumeration:
    @pytest.mark.parametrize("n, count", [(1, 1), (2, 2), (3, 7), (4, 42), (5, 429)])
    def test_counts(self, n, count):
        assert len(F.enumerate_fpl(n)) == count
        assert F.asm_count(n) == count

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
    def test_scan_orders_agree(self, n):
        assert F.enumerate_fpl_columnwise(n) == F.enumerate_fpl(n)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_brute_force(self, n):
        assert len(F.enumerate_fpl(n)) == brute_force_fpl_count(n)

    def test_all_valid(self):
        assert all(F.is_valid(a) for a in F.enumerate_fpl(4))

    def test_cap(self, monkeypatch):
        from app.configuration.config import settings

        monkeypatch.setattr(settings, "FPL_MAX_N", 3)
        with pytest.raises(ResourceLimitError):
            F.enumerate_fpl(4)


class TestPayload:
    def test_round_trip(self):
        config = F.from_payload(HORIZONTAL_PAIR)
        assert config.to_payload() == HORIZONTAL_PAIR

    def test_not_a_grid_edge(self):
        with pytest.raises(InvalidConfigurationError):
            F.from_payload(FplPayload(n=2, edges=[[0, 3], [1, 2]]))

    def test_wrong_degree(self):
        with pytest.raises(InvalidConfigurationError):
            F.from_payload(FplPayload(n=2, edges=[[0, 1]]))


class TestGyration:
    def test_two_by_two_swaps(self):
        horizontal, vertical = F.from_payload(HORIZONTAL_PAIR), F.from_payload(VERTICAL_PAIR)
        assert F.gyration_fpl(horizontal) == vertical
        assert F.gyration_fpl(vertical) == horizontal

    def test_order_three_step(self):
        gyrated = F.gyration_fpl(F.from_payload(HOOKS))
        assert gyrated.to_payload() == HOOKS_GYRATED
        assert F.link_pattern(F.from_payload(HOOKS)) == ((1, 2), (3, 6), (4, 5))
        assert F.link_pattern(gyrated) == ((1, 6), (2, 5), (3, 4))

    def test_odd_colour_has_no_squares_at_two(self):
        horizontal = F.from_payload(HORIZONTAL_PAIR)
        assert F.half_gyration(horizontal, SquareColor.ODD) == horizontal

    def test_half_gyration_is_involution(self):
        for a in F.enumerate_fpl(4):
            for colour in SquareColor:
                assert F.half_gyration(F.half_gyration(a, colour), colour) == a

    def test_is_bijection(self):
        configs = F.enumerate_fpl(4)
        assert sorted(F.gyration_fpl(a) for a in configs) == configs

    def test_orbits_of_order_five(self):
        sizes = [len(orbit) for orbit in gyration_orbits(5)]
        assert set(sizes) == {2, 4, 5, 10}
        assert lcm(*sizes) == 20
        assert sum(sizes) == 429

    def test_length_four_orbits_alternate_two_patterns(self):
        short = [orbit for orbit in gyration_orbits(5) if len(orbit) == 4]
        assert short
        flat = F.rotate_link_pattern(NESTED_TEN, -1)
        assert flat == ((1, 2), (3, 4), (5, 6), (7, 8), (9, 10))
        for orbit in short:
            assert {F.link_pattern(a) for a in orbit} == {NESTED_TEN, flat}
        assert any(F.link_pattern(a) == NESTED_TEN for a in short[0])

    def test_orbit_limit(self):
        a = F.enumerate_fpl(5)[0]
        if len(F.gyration_orbit(a)) > 1:
            with pytest.raises(ResourceLimitError):
                F.gyration_orbit(a, limit=1)


class TestLinkPattern:
    def test_single_dot(self):
        assert F.link_pattern(F.enumerate_fpl(1)[0]) == ((1, 2),)

    def test_two_by_two(self):
        assert F.link_pattern(F.from_payload(HORIZONTAL_PAIR)) == ((1, 2), (3, 4))
        assert F.link_pattern(F.from_payload(VERTICAL_PAIR)) == ((1, 4), (2, 3))

    @pytest.mark.parametrize("n, catalan", [(1, 1), (2, 2), (3, 5), (4, 14), (5, 42)])
    def test_every_matching_occurs(self, n, catalan):
        patterns = {F.link_pattern(a) for a in F.enumerate_fpl(n)}
        assert len(patterns) == catalan
        assert patterns == set(F.enumerate_link_patterns(n))
        assert all(F.is_noncrossing(p) for p in patterns)

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_gyration_rotates(self, n):
        for a in F.enumerate_fpl(n):
            expected = F.rotate_link_pattern(F.link_pattern(a), WIELAND_SHIFT, n)
            assert F.link_pattern(F.gyration_fpl(a)) == expected

    def test_rotation(self):
        assert F.rotate_link_pattern(((1, 2), (3, 4)), -1) == ((1, 4), (2, 3))
        assert F.rotate_link_pattern(((1, 2), (3, 4)), 2) == ((1, 2), (3, 4))

    def test_crossing_detected(self):
        assert not F.is_noncrossing([(1, 3), (2, 4)])

    def test_normalize(self):
        assert F.normalize_pattern([[4, 3], [2, 1]]) == ((1, 2), (3, 4))

    def test_configurations_with_pattern(self):
        pattern = F.link_pattern(F.enumerate_fpl(3)[0])
        found = F.configurations_with_pattern(3, [list(p) for p in reversed(pattern)])
        assert found
        assert all(F.link_pattern(a) == pattern for a in found)
        assert sum(len(F.configurations_with_pattern(3, p)) for p in F.enumerate_link_patterns(3)) == 7

    def test_broken_configuration(self):
        with pytest.raises(InvalidConfigurationError):
            F.link_pattern(FplConfig(2, 0))


@pytest.mark.slow
class TestOrderSix:
    def test_count(self):
        assert len(F.enumerate_fpl(6)) == F.asm_count(6) == 7436

    def test_gyration_rotates(self):
        for a in F.enumerate_fpl(6):
            expected = F.rotate_link_pattern(F.link_pattern(a), WIELAND_SHIFT, 6)
            assert F.link_pattern(F.gyration_fpl(a)) == expected

    def test_orbit_sizes(self):
        sizes = Counter(len(orbit) for orbit in gyration_orbits(6))
        assert sizes == {2: 6, 4: 16, 6: 24, 10: 4, 12: 532, 24: 20, 36: 4, 84: 2}
        assert lcm(*sizes) == 2520

    def test_pattern_in_longest_orbit(self):
        found = F.configurations_with_pattern(6, ORDER_SIX_PATTERN)
        assert any(len(F.gyration_orbit(a)) == 84 for a in found)
