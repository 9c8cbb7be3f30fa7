import itertools

import pytest
from hypothesis import given, settings, strategies as st

from padroes132.error_handler import DecompositionError, PatternParseError
from padroes132.pattern_core import (
    EMPTY_PATTERN, PATTERN_132, GeneralizedPattern, Permutation, avoids, canonical_decomposition,
    is_decomposable, occurrences, parse_pattern
)


def test_parse_dash_notation():
    """Traço separa blocos; letras dentro do bloco exigem vizinhança."""
    pat = parse_pattern("1-23")
    assert pat.letters == (1, 2, 3)
    assert pat.adjacency == (False, True)
    assert str(pat) == "1-23"
    assert pat.k == 3
    assert not pat.is_consecutive


@pytest.mark.parametrize("text", ["123", "1-2-3", "45-6-12-3", "6-4-5-7-8-3-9-12", "21", "1"])
def test_parse_and_print_are_inverse(text):
    assert str(parse_pattern(text)) == text


@pytest.mark.parametrize("text, position", [
    ("1-1", 2),
    ("1--2", 2),
    ("-12", 0),
    ("12-", 3),
    ("1a2", 1),
    ("13", 1),
    ("", 0),
    ("1 2", 1),
])
def test_parse_errors_carry_position(text, position):
    """Erros de leitura sempre informam a posição do problema."""
    with pytest.raises(PatternParseError) as info:
        parse_pattern(text)
    assert info.value.position == position
    assert f"posição {position}" in str(info.value)


def test_permutation_validation():
    assert len(Permutation.of(2, 1, 3)) == 3
    assert str(Permutation.of(1, 3, 2)) == "132"
    assert len(Permutation()) == 0
    with pytest.raises(ValueError):
        Permutation.of(1, 1, 2)


def test_occurrences_respect_adjacency():
    """Em 2413 o padrão 1-2 ocorre 3 vezes e 12 (vizinhos) em 24 e 13."""
    perm = (2, 4, 1, 3)
    assert occurrences(perm, parse_pattern("1-2")) == 3
    assert occurrences(perm, parse_pattern("12")) == 2
    assert occurrences(perm, parse_pattern("21")) == 1
    assert occurrences(perm, PATTERN_132) == 1
    assert occurrences((1, 3, 2), PATTERN_132) == 1


def test_occurrences_cap_and_empty_pattern():
    identity = tuple(range(1, 7))
    assert occurrences(identity, parse_pattern("1-2")) == 15
    assert occurrences(identity, parse_pattern("1-2"), cap=2) == 2
    # toda permutação contém o padrão vazio exatamente uma vez
    assert occurrences(identity, EMPTY_PATTERN) == 1
    assert occurrences((), EMPTY_PATTERN) == 1
    assert occurrences((1, 2), parse_pattern("123")) == 0


def test_avoids_132_counts_catalan():
    counts = [sum(1 for p in itertools.permutations(range(1, n + 1)) if avoids(p, PATTERN_132))
              for n in range(7)]
    assert counts == [1, 1, 2, 5, 14, 42, 132]


def test_segment_is_reduced():
    pat = parse_pattern("45-6-12-3")
    assert str(pat.segment(0, 2)) == "12"
    assert str(pat.segment(3, 6)) == "12-3"
    assert pat.segment(2, 2) == EMPTY_PATTERN


def test_decomposition_of_two_layer_example():
    """45-6-12-3: máximos 6 e 3, blocos 45 e 12."""
    dec = canonical_decomposition(parse_pattern("45-6-12-3"))
    assert dec.maxima == (6, 3)
    assert dec.r == 1
    assert [str(b) for b in dec.blocks] == ["12", "12"]
    assert dec.prefix(-1) == EMPTY_PATTERN
    assert str(dec.prefix(0)) == "12"
    assert str(dec.prefix(1)) == "45-6-12-3"
    assert str(dec.suffix(0)) == "45-6-12-3"
    assert str(dec.suffix(1)) == "12-3"
    assert dec.suffix(2) == EMPTY_PATTERN
    assert str(dec.reassemble()) == "45-6-12-3"


def test_decomposition_single_maximum():
    dec = canonical_decomposition(parse_pattern("12-3"))
    assert dec.r == 0
    assert str(dec.prefix(0)) == "12"
    assert str(dec.suffix(0)) == "12-3"


def test_decomposition_errors():
    with pytest.raises(DecompositionError):
        canonical_decomposition(EMPTY_PATTERN)
    with pytest.raises(DecompositionError):
        canonical_decomposition(parse_pattern("1-3-2"))
    # máximo 3 vizinho do 2
    with pytest.raises(DecompositionError):
        canonical_decomposition(parse_pattern("1-23"))
    assert not is_decomposable(parse_pattern("12"))
    assert is_decomposable(parse_pattern("1"))
    assert is_decomposable(parse_pattern("2-1"))



def _shapes_avoiding_132(k):
    for letters in itertools.permutations(range(1, k + 1)):
        if avoids(letters, PATTERN_132):
            for adjacency in itertools.product((True, False), repeat=k - 1):
                yield GeneralizedPattern(letters, adjacency)


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_decomposition_reassembles_every_shape(k):
    """Toda forma decomponível com subjacente em S_k(132) se remonta a partir dos blocos."""
    decomposable = [pat for pat in _shapes_avoiding_132(k) if is_decomposable(pat)]
    assert decomposable
    for pat in decomposable:
        dec = canonical_decomposition(pat)
        assert dec.reassemble() == pat
        assert dec.r == 0 or dec.prefix(dec.r) == pat
        assert dec.suffix(0) == pat


def _naive_occurrences(perm, pat):
    count = 0
    for chosen in itertools.combinations(range(len(perm)), pat.k):
        if any(adjacent and chosen[j + 1] != chosen[j] + 1 for j, adjacent in enumerate(pat.adjacency)):
            continue
        values = [perm[i] for i in chosen]
        ranks = tuple(sorted(values).index(v) + 1 for v in values)
        if ranks == pat.letters:
            count += 1
    return count


@pytest.mark.parametrize("text", ["1-2", "21", "1-32", "2-13", "12-3", "3-1-2", "132", "2-1-3"])
@pytest.mark.parametrize("cap", [None, 1, 2])
def test_capped_occurrences_match_naive_count(text, cap):
    pat = parse_pattern(text)
    for n in range(7):
        for perm in itertools.permutations(range(1, n + 1)):
            expected = _naive_occurrences(perm, pat)
            if cap is not None:
                expected = min(expected, cap)
            assert occurrences(perm, pat, cap=cap) == expected, (perm, text, cap)


@settings(max_examples=40, deadline=None)
@given(st.permutations(list(range(1, 7))), st.lists(st.booleans(), min_size=2, max_size=2))
def test_adjacency_never_adds_occurrences(perm, adjacency):
    """Exigir vizinhança só pode remover ocorrências do padrão clássico."""
    generalized = GeneralizedPattern((2, 1, 3), tuple(adjacency))
    classical = GeneralizedPattern.classical((2, 1, 3))
    assert occurrences(perm, generalized) <= occurrences(perm, classical)
