import itertools

import numpy as np
import pytest

from padroes132.closed_forms import all_adjacent, decreasing_pattern, increasing_pattern
from padroes132.enumeration import (
    CountTable, avoider_matrix, avoiders_132, catalan, count_at, count_occurrences, count_partitioned,
    count_series, cross_check_exactly_one, exactly_one_132, exactly_one_matrix, mixed_avoid_contain_series,
    partition_by_first_letter
)
from padroes132.pattern_core import PATTERN_132, avoids, occurrences, parse_pattern

MOTZKIN = [1, 1, 2, 4, 9, 21, 51, 127, 323, 835]


def test_avoider_cardinalities_are_catalan():
    for n in range(15):
        assert avoider_matrix(n).shape[0] == catalan(n)


def test_avoiders_really_avoid_132():
    perms = list(avoiders_132(6))
    assert len(perms) == 132
    assert len(set(perms)) == 132
    assert all(avoids(p, PATTERN_132) for p in perms)


def test_exactly_one_generator_small_cases():
    """n=3 só 132; até n=5 o gerador coincide com a filtragem de S_n."""
    assert [str(p) for p in exactly_one_132(3)] == ["132"]
    for n in range(6):
        expected = {p for p in itertools.permutations(range(1, n + 1)) if occurrences(p, PATTERN_132) == 1}
        generated = {tuple(p) for p in exactly_one_132(n)}
        assert generated == expected


@pytest.mark.timeout(120)
def test_structure_agrees_with_filter_up_to_nine():
    assert all(cross_check_exactly_one(n) for n in range(10))


def test_matrices_are_read_only():
    with pytest.raises(ValueError):
        avoider_matrix(3)[0, 0] = 9
    assert exactly_one_matrix(4).dtype == np.int8


def test_vectorized_count_matches_backtracking():
    matrix = avoider_matrix(7)
    for text in ("1-2", "12", "21-3", "1-23", "45-6-12-3", "2-1"):
        pat = parse_pattern(text)
        fast = count_occurrences(matrix, pat)
        slow = [occurrences(tuple(row), pat) for row in matrix]
        assert list(fast) == slow


def test_motzkin_reproduction():
    """1-23 e 123 (vizinhos) dão os números de Motzkin."""
    assert list(count_series("F", parse_pattern("1-23"), 9).counts) == MOTZKIN
    assert list(count_series("F", parse_pattern("123"), 9).counts) == MOTZKIN


def test_two_layer_example_counts():
    """45-6-12-3 em n=6: só 456123 contém o padrão."""
    table = count_series("F", parse_pattern("45-6-12-3"), 6)
    assert list(table.counts) == [1, 1, 2, 5, 14, 42, 131]
    witnesses = [str(p) for p in avoiders_132(6) if not avoids(p, parse_pattern("45-6-12-3"))]
    assert witnesses == ["456123"]


def test_spot_values():
    assert count_at("H", parse_pattern("12-3"), 3) == 1
    assert count_at("G", parse_pattern("21-3"), 4) == 4
    assert count_at("G", parse_pattern("12-3"), 4) == 5
    assert count_at("F", parse_pattern("12"), 0) == 1
    assert count_at("PHI", parse_pattern("21-3"), 4) == 2


def test_partitions_add_up():
    matrix = avoider_matrix(6)
    parts = partition_by_first_letter(matrix)
    assert sum(part.shape[0] for part in parts.values()) == matrix.shape[0]
    pat = parse_pattern("1-2-3")
    serial = count_partitioned(matrix, pat, once=False)
    threaded = count_partitioned(matrix, pat, once=False, max_workers=3)
    assert serial == threaded == 2 ** 5


def test_count_table_frame():
    table = count_series("G", parse_pattern("12"), 5)
    assert isinstance(table, CountTable)
    assert table.order == 5
    frame = table.to_frame()
    assert list(frame["count"]) == [0, 0, 1, 3, 6, 10]
    assert table.to_series().as_integers() == [0, 0, 1, 3, 6, 10]


def test_mixed_avoid_contain():
    """Evita 21-3 e contém 21 uma única vez: n-1 para n >= 2."""
    table = mixed_avoid_contain_series(parse_pattern("21-3"), parse_pattern("21"), 6)
    assert list(table.counts) == [0, 0, 1, 2, 3, 4, 5]
    assert table.family == "MIXED"


def test_unknown_family():
    with pytest.raises(ValueError):
        count_series("X", parse_pattern("12"), 3)


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5, 6])
def test_increasing_and_decreasing_runs_are_equinumerous(k):
    increasing = list(count_series("F", increasing_pattern(k), 10).counts)
    decreasing = list(count_series("F", decreasing_pattern(k), 10).counts)
    assert increasing == decreasing == all_adjacent(k, 10).as_integers()
