"""
Free-group words as sequences of signed generator ids.

Letter k > 0 is generator k, letter -k its inverse. Functions accept any
sequence (tuple, list or deque) and return tuples unless noted otherwise.
"""

from collections import Counter
from typing import Dict, Iterable, List, Sequence, Tuple

Word = Tuple[int, ...]


def inverse(word: Sequence[int]) -> Word:
    return tuple(-letter for letter in reversed(word))


def free_reduce(word: Iterable[int]) -> Word:
    """Cancel adjacent x x^-1 pairs."""
    stack: List[int] = []
    for letter in word:
        if stack and stack[-1] == -letter:
            stack.pop()
        else:
            stack.append(letter)
    return tuple(stack)


def cyclic_reduce(word: Iterable[int]) -> Word:
    """Free reduction followed by cancelling the first letter against the last."""
    reduced = free_reduce(word)
    start, stop = 0, len(reduced)
    while stop - start > 1 and reduced[start] == -reduced[stop - 1]:
        start += 1
        stop -= 1
    return reduced[start:stop]


def rotate(word: Sequence[int], index: int) -> Word:
    """Cyclic conjugate starting at position `index`."""
    return tuple(word[index:]) + tuple(word[:index])


def occurrences(word: Iterable[int], generator: int) -> int:
    return sum(1 for letter in word if abs(letter) == generator)


def exponent_sums(word: Iterable[int]) -> Dict[int, int]:
    sums: Counter = Counter()
    for letter in word:
        sums[abs(letter)] += 1 if letter > 0 else -1
    return {g: s for g, s in sums.items() if s}


def canonical_cyclic(word: Sequence[int]) -> Word:
    """Least rotation of the word or its inverse; equal for conjugate relators."""
    if not word:
        return ()
    candidates = [rotate(word, i) for i in range(len(word))]
    inv = inverse(word)
    candidates += [rotate(inv, i) for i in range(len(inv))]
    return min(candidates)


def substitute_generator(
    word: Iterable[int], generator: int, replacement: Sequence[int]
) -> Word:
    """Replace generator by `replacement` and its inverse by the inverse word."""
    replacement = tuple(replacement)
    replacement_inv = inverse(replacement)
    out: List[int] = []
    for letter in word:
        if letter == generator:
            out.extend(replacement)
        elif letter == -generator:
            out.extend(replacement_inv)
        else:
            out.append(letter)
    return tuple(out)


def format_word(word: Sequence[int], names: Sequence[str]) -> str:
    """`g1 g2^-1 g1` tokens; the empty word renders as `1`."""
    if not word:
        return "1"
    return " ".join(
        names[letter - 1] if letter > 0 else f"{names[-letter - 1]}^-1"
        for letter in word
    )


_CODE_OFFSET = 0x80000


def encode(word: Iterable[int]) -> str:
    """Pack a word into a str so substring search runs in C."""
    return "".join(chr(_CODE_OFFSET + letter) for letter in word)


def decode(text: str) -> Word:
    return tuple(ord(ch) - _CODE_OFFSET for ch in text)
