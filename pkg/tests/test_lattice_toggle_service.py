import random
from collections import Counter
from itertools import product

import pytest

from app.handlers.exception import (
    DimensionMismatchError,
    InvalidProjectionError,
    InvalidSweepError,
)
from app.services.dynamics_service import Action, DynamicsService
from app.services.lattice_toggle_service import (
    Direction,
    LatticeProjection,
    LatticeToggleService as L,
    SweepOrder,
)
from app.services.poset_service import PosetService


def orbit_sizes(p, successor):
    action = Action(name="test", domain=PosetService.enumerate_ideals(p), successor=successor)
    return DynamicsService.orbit_structure(action, representatives=False).orbit_sizes


class TestProjection:
    def test_identity_is_valid(self, cube):
        proj = L.identity_projection(cube)
        assert proj.n == 3
        assert proj.coords[cube.index_of((1, 0, 1))] == (1, 0, 1)

    def test_rank_projection_of_chain(self, two_chain):
        assert L.rank_projection(two_chain).coords == ((0, 0), (1, 0))

    def test_rank_projection_of_boolean_lattice(self):
        p = PosetService.boolean_lattice(3)
        proj = L.rank_projection(p)
        for e in range(p.size):
            if p.rank[e] == 1:
                assert proj.coords[e] == (1, 0)

    def test_rejects_non_cover_preserving(self, square):
        coords = tuple((2 * x, y) for x, y in square.elements)
        with pytest.raises(InvalidProjectionError):
            LatticeProjection(2, coords).check(square)

    def test_rejects_ragged_coordinates(self):
        with pytest.raises(DimensionMismatchError):
            LatticeProjection(2, ((0, 0), (1,)))

    def test_direction_entries(self):
        with pytest.raises(InvalidProjectionError):
            Direction((1, 0))

    def test_dimension_mismatch(self, cube):
        with pytest.raises(DimensionMismatchError):
            L.support(cube, L.identity_projection(cube), (1, 1))


class TestSupport:
    def test_hyperplane_range(self):
        p = PosetService.make_chain_product([3, 2, 3])
        assert L.support(p, L.identity_projection(p), (1, 1, -1)) == (-2, 3)

    @pytest.mark.parametrize("a, b", [(2, 3), (4, 4), (1, 5)])
    def test_rank_range(self, a, b):
        p = PosetService.make_chain_product([a, b])
        assert L.support(p, L.identity_projection(p), (1, 1)) == (0, a + b - 2)

    def test_cube(self, cube):
        assert L.support(cube, L.identity_projection(cube), (1, 1, 1)) == (0, 3)

    def test_hyperplanes_partition_elements(self, cube):
        levels = L.hyperplanes(cube, L.identity_projection(cube), (1, -1, 1))
        assert sorted(e for members in levels.values() for e in members) == list(range(cube.size))

    def test_levels_follow_rank_parity(self, cube):
        levels = L.hyperplanes(cube, L.identity_projection(cube), (-1, 1, -1))
        for i, members in levels.items():
            assert {cube.rank[e] % 2 for e in members} == {i % 2}


class TestHyperplaneToggle:
    def test_outside_support(self, cube):
        proj = L.identity_projection(cube)
        for ideal in PosetService.enumerate_ideals(cube):
            assert L.hyperplane_toggle(cube, proj, (1, 1, 1), 9, ideal) == ideal

    def test_involution(self, cube):
        proj = L.identity_projection(cube)
        for ideal in PosetService.enumerate_ideals(cube):
            for i in range(-1, 3):
                once = L.hyperplane_toggle(cube, proj, (1, -1, 1), i, ideal)
                assert L.hyperplane_toggle(cube, proj, (1, -1, 1), i, once) == ideal

    @pytest.mark.parametrize("dims, v", [([2, 2, 2], (1, 1, -1)), ([2, 3, 2], (1, -1, 1)), ([3, 3], (1, 1))])
    def test_distant_hyperplanes_commute(self, dims, v):
        p = PosetService.make_chain_product(dims)
        proj = L.identity_projection(p)
        a, b = L.support(p, proj, v)
        pairs = [(i, j) for i in range(a, b + 1) for j in range(i + 2, b + 1)]
        assert pairs
        for ideal in PosetService.enumerate_ideals(p):
            for i, j in pairs:
                first_i = L.hyperplane_toggle(p, proj, v, j, L.hyperplane_toggle(p, proj, v, i, ideal))
                first_j = L.hyperplane_toggle(p, proj, v, i, L.hyperplane_toggle(p, proj, v, j, ideal))
                assert first_i == first_j

    def test_single_element_hyperplane(self, square):
        proj = L.identity_projection(square)
        assert L.hyperplane_toggle(square, proj, (1, 1), 0, 0) == 1 << square.index_of((0, 0))


class TestPromotion:
    def test_all_ones_is_rowmotion(self, cube):
        proj = L.identity_projection(cube)
        v = L.rowmotion_direction(proj)
        for ideal in PosetService.enumerate_ideals(cube):
            assert L.promotion(cube, proj, v, ideal) == PosetService.rowmotion(cube, ideal)

    def test_negated_direction_inverts(self):
        p = PosetService.make_chain_product([2, 3, 2])
        proj = L.identity_projection(p)
        v = Direction((1, -1, 1))
        for ideal in PosetService.enumerate_ideals(p):
            forward = L.promotion(p, proj, v, ideal)
            assert L.promotion(p, proj, L.inverse_direction(v), forward) == ideal

    def test_singleton_poset(self):
        p = PosetService.make_chain_product([1])
        proj = L.identity_projection(p)
        assert L.promotion(p, proj, (-1,), 0) == 1
        assert L.promotion(p, proj, (1,), 1) == 0

    def test_identity_sweep_is_promotion(self, cube):
        proj = L.identity_projection(cube)
        v = (1, 1, -1)
        sweep = SweepOrder.identity(L.support(cube, proj, v))
        for ideal in PosetService.enumerate_ideals(cube):
            assert L.promotion_sigma(cube, proj, v, sweep, ideal) == L.promotion(cube, proj, v, ideal)

    def test_rejects_bad_sweep(self, cube):
        proj = L.identity_projection(cube)
        with pytest.raises(InvalidSweepError):
            L.promotion_sigma(cube, proj, (1, 1, 1), SweepOrder((0, 1, 2)), 0)

    def test_sweeps_share_orbit_sizes(self):
        p = PosetService.make_chain_product([2, 2, 3])
        proj = L.identity_projection(p)
        v = (1, 1, -1)
        support = L.support(p, proj, v)
        sweeps = [SweepOrder.identity(support), SweepOrder.identity(support).reverse(), L.gyration_sweep(p, proj, v)]
        sizes = [
            Counter(orbit_sizes(p, lambda ideal, s=s: L.promotion_sigma(p, proj, v, s, ideal)))
            for s in sweeps
        ]
        assert sizes[0] == sizes[1] == sizes[2]


class TestGyration:
    def test_chain_from_empty(self, two_chain):
        assert L.gyration(two_chain, 0) == 0b11

    def test_chain_from_full(self, two_chain):
        assert L.gyration(two_chain, 0b11) == 0b01

    @pytest.mark.parametrize("v", list(product((1, -1), repeat=3)))
    def test_gyration_sweep_is_gyration(self, cube, v):
        proj = L.identity_projection(cube)
        sweep = L.gyration_sweep(cube, proj, v)
        for ideal in PosetService.enumerate_ideals(cube):
            assert L.promotion_sigma(cube, proj, v, sweep, ideal) == L.gyration(cube, ideal)

    def test_orbit_sizes_match_rowmotion(self, cube):
        assert orbit_sizes(cube, lambda i: L.gyration(cube, i)) == orbit_sizes(
            cube, lambda i: PosetService.rowmotion(cube, i)
        )


class TestNormalizingMoves:
    def test_same_sweep(self):
        sweep = SweepOrder((0, 1, 2, 3))
        assert L.normalizing_moves(sweep, sweep) == []

    def test_reaches_target(self):
        sweep, target = SweepOrder((0, 1, 2, 3)), SweepOrder((1, 3, 0, 2))
        moves = L.normalizing_moves(sweep, target)
        assert moves
        assert all(0 <= s <= 3 for s in moves)


class TestConjugator:
    def test_trivial(self, cube):
        proj = L.identity_projection(cube)
        sweep = SweepOrder.identity(L.support(cube, proj, (1, 1, 1)))
        assert L.conjugator(cube, proj, (1, 1, 1), sweep, (1, 1, 1), sweep) == ()

    def test_rank_projection_square(self, square):
        proj = L.rank_projection(square)
        row, other = Direction((1, 1)), Direction((1, -1))
        row_sweep = SweepOrder.identity(L.support(square, proj, row))
        other_sweep = SweepOrder.identity(L.support(square, proj, other))
        word = L.conjugator(square, proj, other, other_sweep, row, row_sweep)
        for ideal in PosetService.enumerate_ideals(square):
            conjugated = L.conjugate(square, word, lambda j: L.promotion(square, proj, other, j), ideal)
            assert conjugated == PosetService.rowmotion(square, ideal)

    @pytest.mark.parametrize("dims", [[2, 2, 2], [2, 3, 2], [3, 2]])
    def test_conjugates_every_direction_to_rowmotion(self, dims):
        p = PosetService.make_chain_product(dims)
        proj = L.identity_projection(p)
        row = L.rowmotion_direction(proj)
        row_sweep = SweepOrder.identity(L.support(p, proj, row))
        ideals = PosetService.enumerate_ideals(p)
        for signs in product((1, -1), repeat=len(dims)):
            sweep = SweepOrder.identity(L.support(p, proj, signs))
            word = L.conjugator(p, proj, signs, sweep, row, row_sweep)
            for ideal in ideals:
                conjugated = L.conjugate(p, word, lambda j: L.promotion_sigma(p, proj, signs, sweep, j), ideal)
                assert conjugated == PosetService.rowmotion(p, ideal)

    @pytest.mark.parametrize("dims", [[2, 2, 2], [2, 3, 2], [3, 3]])
    def test_shuffled_sweep_pairs(self, dims):
        rng = random.Random(sum(dims))
        p = PosetService.make_chain_product(dims)
        proj = L.identity_projection(p)
        ideals = PosetService.enumerate_ideals(p)
        directions = list(product((1, -1), repeat=len(dims)))

        def shuffled(v):
            order = list(SweepOrder.identity(L.support(p, proj, v)).order)
            rng.shuffle(order)
            return SweepOrder(tuple(order))

        for _ in range(12):
            v, w = rng.choice(directions), rng.choice(directions)
            sweep_v, sweep_w = shuffled(v), shuffled(w)
            word = L.conjugator(p, proj, v, sweep_v, w, sweep_w)
            for ideal in ideals:
                conjugated = L.conjugate(p, word, lambda j: L.promotion_sigma(p, proj, v, sweep_v, j), ideal)
                assert conjugated == L.promotion_sigma(p, proj, w, sweep_w, ideal)


class TestWords:
    def test_invert(self):
        assert L.invert_word([1, 2, 3]) == (3, 2, 1)

    def test_reduce_cancels_adjacent_pairs(self):
        assert L.reduce_word([1, 2, 2, 1, 3]) == (3,)
