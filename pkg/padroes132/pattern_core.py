"""
Padrões generalizados (com traços), contagem de ocorrências e decomposição
canônica de padrões que evitam 1-3-2.

Um padrão generalizado é uma palavra nas letras 1..k em que duas letras
vizinhas podem ou não estar separadas por um traço; a ausência do traço
exige que as letras correspondentes sejam vizinhas na permutação.
"""
import logging
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple

from padroes132.error_handler import PatternParseError, DecompositionError

log = logging.getLogger(__name__)

MAX_PATTERN_LENGTH = 9


def _reduzir(letters: Sequence[int]) -> Tuple[int, ...]:
    """Renumera as letras de forma order-isomorphic para 1..len(letters)."""
    ranks = {value: rank for rank, value in enumerate(sorted(letters), start=1)}
    return tuple(ranks[value] for value in letters)


@dataclass(frozen=True)
class Permutation:
    """Sequência de inteiros distintos 1..n; n=0 é permitido."""
    entries: Tuple[int, ...] = ()

    def __post_init__(self):
        entries = tuple(int(v) for v in self.entries)
        object.__setattr__(self, "entries", entries)
        if sorted(entries) != list(range(1, len(entries) + 1)):
            raise ValueError(f"Não é uma permutação de 1..{len(entries)}: {entries}")

    @classmethod
    def of(cls, *entries: int) -> "Permutation":
        return cls(tuple(entries))

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, index):
        return self.entries[index]

    def __str__(self):
        return "".join(str(v) for v in self.entries) if len(self.entries) < 10 else \
            ",".join(str(v) for v in self.entries)


@dataclass(frozen=True)
class GeneralizedPattern:
    """
    Padrão generalizado: letras (permutação de 1..k) e k-1 marcas de adjacência.

    adjacency[i] é True quando não há traço entre as posições i e i+1.
    """
    letters: Tuple[int, ...] = ()
    adjacency: Tuple[bool, ...] = ()

    def __post_init__(self):
        letters = tuple(int(v) for v in self.letters)
        adjacency = tuple(bool(a) for a in self.adjacency)
        object.__setattr__(self, "letters", letters)
        object.__setattr__(self, "adjacency", adjacency)
        if sorted(letters) != list(range(1, len(letters) + 1)):
            raise ValueError(f"Letras não formam uma permutação de 1..{len(letters)}: {letters}")
        if len(adjacency) != max(len(letters) - 1, 0):
            raise ValueError(f"Esperadas {max(len(letters) - 1, 0)} marcas de adjacência, "
                             f"recebidas {len(adjacency)}")

    @classmethod
    def classical(cls, letters: Iterable[int]) -> "GeneralizedPattern":
        """Padrão clássico: traço entre todas as letras."""
        letters = tuple(letters)
        return cls(letters, (False,) * max(len(letters) - 1, 0))

    @classmethod
    def consecutive(cls, letters: Iterable[int]) -> "GeneralizedPattern":
        """Padrão sem nenhum traço (todas as letras vizinhas)."""
        letters = tuple(letters)
        return cls(letters, (True,) * max(len(letters) - 1, 0))

    @classmethod
    def reduced(cls, letters: Sequence[int], adjacency: Sequence[bool]) -> "GeneralizedPattern":
        """Constrói o padrão renumerando as letras para 1..k."""
        return cls(_reduzir(letters), tuple(adjacency))

    @property
    def k(self) -> int:
        return len(self.letters)

    @property
    def is_empty(self) -> bool:
        return not self.letters

    @property
    def is_consecutive(self) -> bool:
        return all(self.adjacency)

    @property
    def underlying(self) -> "GeneralizedPattern":
        """O padrão clássico subjacente (mesmas letras, todos os traços)."""
        return GeneralizedPattern.classical(self.letters)

    def segment(self, start: int, stop: int) -> "GeneralizedPattern":
        """Sub-padrão reduzido das posições contíguas [start, stop)."""
        if stop <= start:
            return EMPTY_PATTERN
        return GeneralizedPattern.reduced(self.letters[start:stop], self.adjacency[start:stop - 1])

    def __str__(self):
        if not self.letters:
            return ""
        parts = [str(self.letters[0])]
        for letter, adjacent in zip(self.letters[1:], self.adjacency):
            parts.append(str(letter) if adjacent else f"-{letter}")
        return "".join(parts)

    def __repr__(self):
        return f"GeneralizedPattern('{self}')"


EMPTY_PATTERN = GeneralizedPattern()
PATTERN_132 = GeneralizedPattern.classical((1, 3, 2))


def parse_pattern(text: str) -> GeneralizedPattern:
    """
    Lê um padrão na gramática `pattern := block ('-' block)*; block := digit+`.

    Args:
        text (str): Texto do padrão, ex: "1-23" (dígitos 1..9 e '-', sem espaços)

    Returns:
        GeneralizedPattern: Padrão lido

    Raises:
        PatternParseError: caractere ilegal, bloco vazio, letra repetida ou
            letras que não cobrem 1..k; sempre com a posição do problema
    """
    if not isinstance(text, str):
        raise PatternParseError("O padrão deve ser texto", position=0, text=str(text))

    letters = []
    adjacency = []
    seen = {}
    block_len = 0
    for position, char in enumerate(text):
        if char == "-":
            if block_len == 0:
                raise PatternParseError(f"Bloco vazio em '{text}'", position=position, text=text)
            adjacency.append(False)
            block_len = 0
            continue
        if char not in "123456789":
            raise PatternParseError(f"Caractere ilegal '{char}' em '{text}'", position=position, text=text)
        letter = int(char)
        if letter in seen:
            raise PatternParseError(f"Letra repetida '{char}' em '{text}' (já vista na posição {seen[letter]})",
                                    position=position, text=text)
        seen[letter] = position
        if block_len > 0:
            adjacency.append(True)
        letters.append(letter)
        block_len += 1

    if block_len == 0:
        raise PatternParseError(f"Bloco vazio em '{text}'", position=len(text), text=text)

    k = len(letters)
    for letter, position in seen.items():
        if letter > k:
            raise PatternParseError(f"Letras de '{text}' não cobrem 1..{k}: letra {letter} fora do intervalo",
                                    position=position, text=text)

    return GeneralizedPattern(tuple(letters), tuple(adjacency))


def occurrences(perm: Sequence[int], pat: GeneralizedPattern, cap: Optional[int] = None) -> int:
    """
    Conta as ocorrências de um padrão generalizado numa permutação.

    Uma ocorrência é uma subsequência de índices i_1<...<i_k com
    i_{j+1} = i_j + 1 onde adjacency[j] vale, cujos valores são
    order-isomorphic às letras do padrão. Com `cap`, a contagem para
    assim que atinge o teto e devolve min(contagem, cap).

    Args:
        perm: Permutação (Permutation ou sequência de inteiros)
        pat (GeneralizedPattern): Padrão procurado
        cap (int, optional): Teto positivo para saída antecipada

    Returns:
        int: Número de ocorrências (limitado por cap, se dado)
    """
    values = tuple(perm)
    n, k = len(values), pat.k
    if k == 0:
        return 1 if cap is None else min(1, cap)
    if k > n:
        return 0

    letters = pat.letters
    adjacency = pat.adjacency
    chosen = [0] * k
    count = 0

    def extend(j: int, start: int) -> bool:
        # devolve True quando o teto foi atingido
        nonlocal count
        if j == k:
            count += 1
            return cap is not None and count >= cap
        if j > 0 and adjacency[j - 1]:
            candidates = (start,) if start < n else ()
        else:
            # deixa espaço para as letras restantes
            candidates = range(start, n - (k - j) + 1)
        for i in candidates:
            value = values[i]
            ok = True
            for t in range(j):
                if (values[chosen[t]] < value) != (letters[t] < letters[j]):
                    ok = False
                    break
            if not ok:
                continue
            chosen[j] = i
            if extend(j + 1, i + 1):
                return True
        return False

    extend(0, 0)
    return count if cap is None else min(count, cap)


def avoids(perm: Sequence[int], pat: GeneralizedPattern) -> bool:
    """True se a permutação não contém o padrão."""
    return occurrences(perm, pat, cap=1) == 0


@dataclass(frozen=True)
class CanonicalDecomposition:
    """
    Decomposição canônica τ = φ^0-m_0-φ^1-m_1-...-φ^r-m_r de um padrão.

    `blocks` guarda os fragmentos φ^i já reduzidos; `segments` guarda as
    posições [início, fim) de cada φ^i em τ e `max_positions` as posições
    dos máximos da direita para a esquerda m_0 > m_1 > ... > m_r.
    """
    pattern: GeneralizedPattern
    blocks: Tuple[GeneralizedPattern, ...]
    maxima: Tuple[int, ...]
    max_positions: Tuple[int, ...]
    segments: Tuple[Tuple[int, int], ...]

    @property
    def r(self) -> int:
        return len(self.maxima) - 1

    def prefix(self, i: int) -> GeneralizedPattern:
        """π^i: vazio para i=-1, φ^0 para i=0, e (φ^0, m_0, ..., φ^i, m_i) para i >= 1."""
        if i < -1 or i > self.r:
            raise IndexError(f"Prefixo π^{i} fora de -1..{self.r}")
        if i == -1:
            return EMPTY_PATTERN
        if i == 0:
            return self.blocks[0]
        return self.pattern.segment(0, self.max_positions[i] + 1)

    def suffix(self, i: int) -> GeneralizedPattern:
        """σ^i: (φ^i, m_i, ..., φ^r, m_r) para 0 <= i <= r e vazio para i=r+1."""
        if i < 0 or i > self.r + 1:
            raise IndexError(f"Sufixo σ^{i} fora de 0..{self.r + 1}")
        if i == self.r + 1:
            return EMPTY_PATTERN
        return self.pattern.segment(self.segments[i][0], self.pattern.k)

    def reassemble(self) -> GeneralizedPattern:
        """Remonta (φ^0, m_0, ..., φ^r, m_r) com os valores originais das letras."""
        letters = []
        adjacency = []
        source = self.pattern
        for (start, stop), m in zip(self.segments, self.maxima):
            block_letters = source.letters[start:stop]
            if letters and block_letters:
                adjacency.append(False)
            letters.extend(block_letters)
            adjacency.extend(source.adjacency[start:stop - 1] if stop > start else ())
            if letters:
                adjacency.append(False)
            letters.append(m)
        return GeneralizedPattern(tuple(letters), tuple(adjacency))


def canonical_decomposition(pat: GeneralizedPattern) -> CanonicalDecomposition:
    """
    Calcula a decomposição canônica de um padrão generalizado.

    Os máximos da direita para a esquerda do padrão clássico subjacente
    dividem o padrão em blocos; cada máximo precisa estar separado por
    traços dos dois vizinhos.

    Args:
        pat (GeneralizedPattern): Padrão cujo subjacente evita 1-3-2

    Returns:
        CanonicalDecomposition: Blocos, máximos, prefixos e sufixos

    Raises:
        DecompositionError: subjacente contém 1-3-2, padrão vazio, ou algum
            máximo não separado por traço
    """
    if pat.is_empty:
        raise DecompositionError("Decomposição inaplicável: padrão vazio")
    if not avoids(pat.letters, PATTERN_132):
        raise DecompositionError(f"Decomposição inaplicável: o subjacente de '{pat}' contém 1-3-2",
                                 details=str(pat))

    k = pat.k
    positions = []
    current_max = 0
    for position in range(k - 1, -1, -1):
        if pat.letters[position] > current_max:
            current_max = pat.letters[position]
            positions.append(position)
    positions.reverse()

    for position in positions:
        left_adjacent = position > 0 and pat.adjacency[position - 1]
        right_adjacent = position < k - 1 and pat.adjacency[position]
        if left_adjacent or right_adjacent:
            raise DecompositionError(
                f"Decomposição inaplicável: máximo {pat.letters[position]} de '{pat}' não está separado por traço",
                details=str(pat))

    segments = []
    start = 0
    for position in positions:
        segments.append((start, position))
        start = position + 1

    blocks = tuple(pat.segment(a, b) for a, b in segments)
    maxima = tuple(pat.letters[p] for p in positions)
    log.debug(f"Decomposição de '{pat}': blocos={[str(b) for b in blocks]}, máximos={maxima}")
    return CanonicalDecomposition(pat, blocks, maxima, tuple(positions), tuple(segments))


def is_decomposable(pat: GeneralizedPattern) -> bool:
    try:
        canonical_decomposition(pat)
        return True
    except DecompositionError:
        return False
