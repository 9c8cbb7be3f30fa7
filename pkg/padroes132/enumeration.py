"""
Oráculos de enumeração: classes de permutações e tabelas de contagem.

Cada classe de tamanho n é materializada uma única vez como matriz int8
(uma permutação por linha) e as ocorrências de um padrão são contadas
coluna a coluna sobre todas as tuplas de índices admissíveis.
"""
import itertools
import logging
import math
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np
import pandas as pd

from padroes132.pattern_core import GeneralizedPattern, Permutation, PATTERN_132
from padroes132.series import QSeries

log = logging.getLogger(__name__)

FAMILIES = ("F", "G", "H", "PHI", "MIXED")
AVOID_FAMILIES = ("F", "H")
ONCE_FAMILIES = ("G", "PHI")

_matrix_lock = threading.RLock()
_avoider_cache: Dict[int, np.ndarray] = {}
_exactly_one_cache: Dict[int, np.ndarray] = {}
_symmetric_cache: Dict[int, np.ndarray] = {}


def catalan(n: int) -> int:
    return math.comb(2 * n, n) // (n + 1)


def _empty(n: int) -> np.ndarray:
    return np.zeros((0, n), dtype=np.int8)


def _const(value: int) -> np.ndarray:
    return np.array([[value]], dtype=np.int8)


def _concat_product(parts: List[np.ndarray]) -> np.ndarray:
    """Concatena blocos de linhas em todas as combinações (produto cartesiano)."""
    result = np.zeros((1, 0), dtype=np.int8)
    for part in parts:
        rows, prow = result.shape[0], part.shape[0]
        result = np.hstack([np.repeat(result, prow, axis=0), np.tile(part, (rows, 1))])
    return result


def avoider_matrix(n: int) -> np.ndarray:
    """
    Matriz com todas as permutações de S_n que evitam 1-3-2.

    Construção recursiva: n na posição a, à esquerda um evitador sobre os
    a-1 maiores valores restantes e à direita um evitador sobre 1..n-a.
    """
    with _matrix_lock:
        if n in _avoider_cache:
            return _avoider_cache[n]
        if n == 0:
            matrix = np.zeros((1, 0), dtype=np.int8)
        else:
            blocks = []
            for a in range(1, n + 1):
                left = avoider_matrix(a - 1) + np.int8(n - a)
                right = avoider_matrix(n - a)
                blocks.append(_concat_product([left, _const(n), right]))
            matrix = np.vstack(blocks)
        matrix.setflags(write=False)
        _avoider_cache[n] = matrix
        log.debug(f"Evitadores de 1-3-2 com n={n}: {matrix.shape[0]} permutações")
        return matrix


def exactly_one_matrix(n: int) -> np.ndarray:
    """
    Matriz das permutações de S_n com exatamente uma ocorrência de 1-3-2,
    geradas pelas três estruturas possíveis em torno da letra n.
    """
    with _matrix_lock:
        if n in _exactly_one_cache:
            return _exactly_one_cache[n]
        blocks = []
        for t in range(1, n + 1):
            # (i) parte esquerda com uma ocorrência, direita evitadora
            blocks.append(_concat_product([exactly_one_matrix(t - 1) + np.int8(n - t), _const(n),
                                           avoider_matrix(n - t)]))
            # (ii) parte esquerda evitadora, direita com uma ocorrência
            blocks.append(_concat_product([avoider_matrix(t - 1) + np.int8(n - t), _const(n),
                                           exactly_one_matrix(n - t)]))
        # (iii) (α', n-t+1, n, α'', n-t+2, α''')
        for t in range(3, n + 1):
            for u in range(t, n + 1):
                blocks.append(_concat_product([
                    avoider_matrix(t - 3) + np.int8(n - t + 2),
                    _const(n - t + 1),
                    _const(n),
                    avoider_matrix(u - t) + np.int8(n - u),
                    _const(n - t + 2),
                    avoider_matrix(n - u),
                ]))
        blocks = [b for b in blocks if b.shape[0]]
        matrix = np.vstack(blocks) if blocks else _empty(n)
        matrix.setflags(write=False)
        _exactly_one_cache[n] = matrix
        log.debug(f"Permutações com exatamente um 1-3-2, n={n}: {matrix.shape[0]}")
        return matrix


def symmetric_matrix(n: int) -> np.ndarray:
    """Todo S_n em ordem lexicográfica."""
    with _matrix_lock:
        if n not in _symmetric_cache:
            if n == 0:
                matrix = np.zeros((1, 0), dtype=np.int8)
            else:
                matrix = np.array(list(itertools.permutations(range(1, n + 1))), dtype=np.int8)
            matrix.setflags(write=False)
            _symmetric_cache[n] = matrix
        return _symmetric_cache[n]


def _rows(matrix: np.ndarray) -> Iterator[Permutation]:
    for row in matrix:
        yield Permutation(tuple(int(v) for v in row))


def avoiders_132(n: int) -> Iterator[Permutation]:
    """Permutações de S_n que evitam 1-3-2 (Catalan(n) itens)."""
    return _rows(avoider_matrix(n))


def exactly_one_132(n: int) -> Iterator[Permutation]:
    """Permutações de S_n com exatamente uma ocorrência de 1-3-2."""
    return _rows(exactly_one_matrix(n))


def _index_tuples(n: int, pat: GeneralizedPattern) -> Iterator[Tuple[int, ...]]:
    """Tuplas i_1 < ... < i_k que respeitam a adjacência do padrão."""
    k = pat.k
    block_lengths = []
    run = 1
    for adjacent in pat.adjacency:
        if adjacent:
            run += 1
        else:
            block_lengths.append(run)
            run = 1
    block_lengths.append(run)

    blocks = len(block_lengths)
    free = n - k + blocks
    if free < blocks:
        return
    offsets = []
    extra = 0
    for length in block_lengths:
        offsets.append(extra)
        extra += length - 1
    for starts in itertools.combinations(range(free), blocks):
        positions = []
        for start, offset, length in zip(starts, offsets, block_lengths):
            first = start + offset
            positions.extend(range(first, first + length))
        yield tuple(positions)


def count_occurrences(matrix: np.ndarray, pat: GeneralizedPattern, cap: Optional[int] = None) -> np.ndarray:
    """
    Número de ocorrências do padrão em cada linha da matriz.

    Args:
        matrix (np.ndarray): Uma permutação por linha
        pat (GeneralizedPattern): Padrão procurado
        cap (int, optional): Teto aplicado à contagem de cada linha

    Returns:
        np.ndarray: Contagens por linha (int32)
    """
    rows, n = matrix.shape
    k = pat.k
    if k == 0:
        counts = np.ones(rows, dtype=np.int32)
    elif k > n:
        counts = np.zeros(rows, dtype=np.int32)
    else:
        counts = np.zeros(rows, dtype=np.int32)
        # posições do padrão em ordem crescente de letra
        by_value = sorted(range(k), key=lambda p: pat.letters[p])
        for positions in _index_tuples(n, pat):
            columns = [positions[p] for p in by_value]
            mask = matrix[:, columns[0]] < matrix[:, columns[1]] if k > 1 else np.ones(rows, dtype=bool)
            for a, b in zip(columns[1:-1], columns[2:]):
                mask &= matrix[:, a] < matrix[:, b]
            counts += mask
    if cap is not None:
        np.minimum(counts, cap, out=counts)
    return counts


def partition_by_first_letter(matrix: np.ndarray) -> Dict[int, np.ndarray]:
    """Divide as linhas pela primeira letra (n=0 fica na partição 0)."""
    if matrix.shape[1] == 0:
        return {0: matrix}
    first = matrix[:, 0]
    return {int(letter): matrix[first == letter] for letter in np.unique(first)}


def _matches(matrix: np.ndarray, pat: GeneralizedPattern, once: bool) -> int:
    counts = count_occurrences(matrix, pat, cap=2)
    return int(np.count_nonzero(counts == (1 if once else 0)))


def count_partitioned(matrix: np.ndarray, pat: GeneralizedPattern, once: bool,
                      max_workers: Optional[int] = None) -> int:
    """
    Conta as linhas que evitam (once=False) ou contêm uma vez (once=True) o
    padrão, somando as contagens parciais das partições por primeira letra.
    """
    parts = list(partition_by_first_letter(matrix).values())
    if not max_workers or max_workers <= 1 or len(parts) == 1:
        return sum(_matches(part, pat, once) for part in parts)
    with ThreadPoolExecutor(max_workers=max_workers) as executor:
        return sum(executor.map(lambda part: _matches(part, pat, once), parts))


@dataclass(frozen=True)
class CountTable:
    """Contagens c_0..c_N de uma família para um padrão (a verdade de referência)."""
    family: str
    pattern: GeneralizedPattern
    counts: Tuple[int, ...]
    aux_pattern: Optional[GeneralizedPattern] = None

    @property
    def order(self) -> int:
        return len(self.counts) - 1

    def to_series(self) -> QSeries:
        return QSeries.from_sequence(self.counts)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"n": range(len(self.counts)), "count": self.counts})


def base_matrix(family: str, n: int, base: str = "structure") -> np.ndarray:
    """
    Classe base de tamanho n: evitadores de 1-3-2 para F/G/MIXED e
    permutações com um único 1-3-2 para H/PHI.

    Args:
        base (str): Para H/PHI, "structure" (gerador estrutural) ou "filter"
            (filtragem de S_n)
    """
    if family in ("F", "G", "MIXED"):
        return avoider_matrix(n)
    if family in ("H", "PHI"):
        if base == "filter":
            sn = symmetric_matrix(n)
            return sn[count_occurrences(sn, PATTERN_132, cap=2) == 1]
        return exactly_one_matrix(n)
    raise ValueError(f"Família desconhecida: {family}")


def count_series(family: str, pat: GeneralizedPattern, order: int, base: str = "structure",
                 max_workers: Optional[int] = None) -> CountTable:
    """
    Enumera c_0..c_N para a família.

    F/H contam as permutações da classe base que evitam o padrão; G/PHI as
    que o contêm exatamente uma vez.

    Args:
        family (str): F, G, H ou PHI
        pat (GeneralizedPattern): Padrão
        order (int): N >= 0
        base (str): Fonte da classe base para H/PHI
        max_workers (int, optional): Threads para as partições por primeira letra

    Returns:
        CountTable: Tabela de contagens
    """
    if family not in ("F", "G", "H", "PHI"):
        raise ValueError(f"Família desconhecida: {family}")
    start = time.time()
    once = family in ONCE_FAMILIES
    counts = tuple(count_partitioned(base_matrix(family, n, base), pat, once, max_workers)
                   for n in range(order + 1))
    log.debug(f"count_series({family}, '{pat}', {order}) em {time.time() - start:.2f}s: {counts}")
    return CountTable(family, pat, counts)


def count_at(family: str, pat: GeneralizedPattern, n: int, base: str = "structure") -> int:
    """Contagem para um único tamanho n."""
    return count_partitioned(base_matrix(family, n, base), pat, family in ONCE_FAMILIES)


def mixed_avoid_contain_series(avoid: GeneralizedPattern, contain_once: GeneralizedPattern,
                               order: int) -> CountTable:
    """
    Conta as permutações de S_n(1-3-2) que evitam `avoid` e contêm
    `contain_once` exatamente uma vez, para n = 0..N.
    """
    counts = []
    for n in range(order + 1):
        matrix = avoider_matrix(n)
        avoiding = count_occurrences(matrix, avoid, cap=1) == 0
        once = count_occurrences(matrix, contain_once, cap=2) == 1
        counts.append(int(np.count_nonzero(avoiding & once)))
    return CountTable("MIXED", avoid, tuple(counts), aux_pattern=contain_once)


def _row_set(matrix: np.ndarray) -> set:
    return {row.tobytes() for row in np.ascontiguousarray(matrix)}


def cross_check_exactly_one(n: int) -> bool:
    """Gerador estrutural e filtragem de S_n produzem o mesmo conjunto?"""
    structure = exactly_one_matrix(n)
    filtered = base_matrix("H", n, base="filter")
    same = structure.shape[0] == filtered.shape[0] and _row_set(structure) == _row_set(filtered)
    if not same:
        log.error(f"Gerador estrutural diverge da filtragem de S_{n}: "
                  f"{structure.shape[0]} vs {filtered.shape[0]} permutações")
    return same
