from math import lcm

import pytest

from app.handlers.exception import InvalidTableauError, LabelRangeError, ShapeError
from app.schemas.tableau_schema import TableauPayload
from app.services.tableau_service import IncreasingTableau, TableauService as T
from tests.oracles import macmahon, ribbon_promotion


def tableau(rows, q):
    return IncreasingTableau.from_rows(rows, q)


def promotion_order(t):
    current, steps = T.k_promotion(t), 1
    while current != t:
        current, steps = T.k_promotion(current), steps + 1
    return steps


class TestIncreasingTableau:
    def test_rows_and_shape(self, staircase_tableau):
        assert staircase_tableau.shape == (4, 4, 4, 2)
        assert staircase_tableau.rows[3] == [8, 10]
        assert not staircase_tableau.is_rectangular

    def test_row_must_increase(self):
        with pytest.raises(InvalidTableauError):
            tableau([[1, 1]], 3)

    def test_column_must_increase(self):
        with pytest.raises(InvalidTableauError):
            tableau([[1, 2], [1, 3]], 3)

    def test_entry_above_bound(self):
        with pytest.raises(LabelRangeError):
            tableau([[1, 4]], 3)

    def test_shape_must_be_partition(self):
        with pytest.raises(ShapeError):
            tableau([[1], [2, 3]], 3)

    def test_payload_round_trip(self, resonant_tableau):
        payload = TableauPayload.model_validate_json(resonant_tableau.to_payload().model_dump_json())
        assert IncreasingTableau.from_payload(payload) == resonant_tableau

    def test_missing_labels_allowed(self):
        assert tableau([[1, 3]], 5).entries == (1, 3)


class TestKPromotion:
    def test_two_row_example(self, promotion_example):
        assert T.k_promotion(promotion_example).rows == [[1, 3, 5, 6], [3, 4, 6, 7]]

    def test_four_by_four_example(self, resonant_tableau):
        assert T.k_promotion(resonant_tableau).rows == [[1, 3, 5, 6], [2, 4, 7, 9], [4, 6, 9, 11], [6, 8, 11, 12]]

    def test_without_label_one(self):
        assert T.k_promotion(tableau([[2, 3]], 3)).rows == [[1, 2]]

    def test_orbit_of_36(self, resonant_tableau):
        assert promotion_order(resonant_tableau) == 36

    @pytest.mark.parametrize("shape", [(1,), (2,), (2, 1), (2, 2), (3, 1), (3, 2), (2, 2, 2), (3, 3), (3, 2, 1)])
    @pytest.mark.parametrize("q", [3, 4, 5, 6])
    def test_matches_sliding(self, shape, q):
        for t in T.enumerate_increasing(shape, q):
            assert T.k_promotion(t).rows == ribbon_promotion(t.rows, q)

    def test_is_bijection(self):
        tableaux = list(T.enumerate_increasing((3, 2), 6))
        images = {T.k_promotion(t) for t in tableaux}
        assert images == set(tableaux)


class TestKBenderKnuth:
    def test_swap_three_four(self, staircase_tableau):
        assert T.k_bender_knuth(staircase_tableau, 3).rows == [[1, 3, 5, 8], [2, 5, 7, 9], [6, 7, 9, 10], [8, 10]]

    def test_swap_eight_nine(self, staircase_tableau):
        assert T.k_bender_knuth(staircase_tableau, 8).rows == [[1, 4, 5, 8], [2, 5, 7, 9], [6, 7, 8, 10], [9, 10]]

    def test_absent_labels(self):
        t = tableau([[1, 2], [5, 6]], 6)
        assert T.k_bender_knuth(t, 3) == t

    def test_involution(self):
        for t in T.enumerate_increasing((2, 2), 5):
            for i in range(1, 5):
                assert T.k_bender_knuth(T.k_bender_knuth(t, i), i) == t

    @pytest.mark.parametrize("i", [0, 5])
    def test_label_range(self, i):
        with pytest.raises(LabelRangeError):
            T.k_bender_knuth(tableau([[1, 2]], 5), i)


class TestContent:
    def test_four_by_four(self, resonant_tableau):
        assert T.content(resonant_tableau) == (1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 0, 1)
        assert T.content(T.k_promotion(resonant_tableau)) == (1, 1, 1, 1, 1, 1, 1, 1, 1, 0, 1, 1)

    def test_partial(self):
        t = tableau([[1, 2], [2, 3]], 5)
        assert T.content(t) == (1, 1, 1, 0, 0)
        assert not T.has_full_content(t)
        assert T.label_count(t, 2) == 2

    @pytest.mark.parametrize("shape, q", [((2, 2), 5), ((3, 2, 1), 6), ((3, 3), 7)])
    def test_cycles_left(self, shape, q):
        for t in T.enumerate_increasing(shape, q):
            c = T.content(t)
            assert T.content(T.k_promotion(t)) == c[1:] + c[:1]


class TestDescents:
    def test_small_square(self):
        assert T.descent_set(tableau([[1, 2], [2, 3]], 3)) == {1, 2, 3}

    def test_single_row(self):
        assert T.descent_set(tableau([[1, 3]], 3)) == set()

    def test_single_column_transpose(self):
        assert T.transpose_descent_set(tableau([[1], [2], [4]], 4)) == set()

    def test_rejects_non_rectangle(self, staircase_tableau):
        with pytest.raises(ShapeError):
            T.descent_set(staircase_tableau)

    def test_transpose_definition(self):
        for t in T.enumerate_increasing((3, 3), 6):
            assert T.transpose_descent_set(t) == T.descent_set(T.transpose(t))

    def test_transpose_commutes_with_promotion(self):
        for t in T.enumerate_increasing((3, 3), 6):
            assert T.k_promotion(T.transpose(t)) == T.transpose(T.k_promotion(t))

    @pytest.mark.parametrize("shape, q", [((4, 4), 7), ((3, 3), 6)])
    def test_descents_cycle(self, shape, q):
        for t in T.enumerate_increasing(shape, q):
            after = T.k_promotion(t)
            for descents in (T.descent_set, T.transpose_descent_set):
                assert descents(after) == {(i - 2) % q + 1 for i in descents(t)}

    def test_shared_descent_needs_three_labels(self):
        for t in T.enumerate_increasing((3, 3), 7):
            smallest = T.descent_pair_counts(t)
            assert smallest is None or smallest >= 3

    def test_complements(self):
        t = tableau([[1, 3]], 3)
        assert T.non_descents(t) == {1, 2, 3}


class TestSpecialTableaux:
    def test_minimal_square(self):
        t = T.minimal_tableau(2, 2, 5)
        assert t.rows == [[1, 2], [2, 3]]
        assert promotion_order(t) == 5

    def test_minimal_row(self):
        assert T.minimal_tableau(1, 3, 4).rows == [[1, 2, 3]]

    def test_minimal_needs_room(self):
        with pytest.raises(LabelRangeError):
            T.minimal_tableau(2, 2, 3)

    @pytest.mark.parametrize("a, q", [(1, 2), (2, 5), (3, 4), (4, 9)])
    def test_single_row_order(self, a, q):
        sizes = [promotion_order(t) for t in T.enumerate_increasing((a,), q)]
        assert lcm(*sizes) == q


class TestEnumeration:
    @pytest.mark.parametrize("a, b, c", [(1, 1, 1), (2, 2, 2), (2, 3, 2), (3, 3, 2), (2, 2, 4)])
    def test_counts_match_box_formula(self, a, b, c):
        assert T.count_increasing((b,) * a, a + b + c - 1) == macmahon(a, b, c)

    def test_sorted_and_distinct(self):
        tableaux = list(T.enumerate_increasing((3, 2), 6))
        assert tableaux == sorted(tableaux)
        assert len(set(tableaux)) == len(tableaux)

    def test_too_small_bound(self):
        assert T.count_increasing((2, 2), 2) == 0

    def test_partitions_in_box(self):
        assert sorted(T.partitions_in_box(2, 2)) == [(1,), (1, 1), (2,), (2, 1), (2, 2)]

    def test_rectangle(self):
        assert T.rectangle(2, 3) == (3, 3)
        with pytest.raises(ShapeError):
            T.rectangle(0, 3)
