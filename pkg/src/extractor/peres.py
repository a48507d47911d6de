import numpy as np

from ..timetag.models import BitSequence, bit_array


def von_neumann(bits: BitSequence | np.ndarray) -> BitSequence:
    """Pairs 01 -> 0, 10 -> 1, 00/11 -> nothing; a trailing odd bit is dropped."""
    return BitSequence.from_array(_von_neumann(bit_array(bits)))


def peres(bits: BitSequence | np.ndarray, depth: int) -> BitSequence:
    """Iterated von Neumann extractor.

    Output is vN(x) ++ peres(u, depth - 1) ++ peres(v, depth - 1) where, over
    the pairs (a_i, b_i), u_i = a_i XOR b_i and v lists a_i for the pairs with
    a_i == b_i.
    """
    if depth < 1:
        raise ValueError(f"depth must be >= 1, got {depth}")
    return BitSequence.from_array(peres_array(bit_array(bits), depth))


def peres_array(array: np.ndarray, depth: int) -> np.ndarray:
    parts: list[np.ndarray] = []
    _collect(array, depth, parts)
    if not parts:
        return np.empty(0, dtype=np.uint8)
    return np.concatenate(parts)


def _von_neumann(array: np.ndarray) -> np.ndarray:
    pairs = array[: array.size - array.size % 2].reshape(-1, 2)
    first = pairs[:, 0]
    return first[first != pairs[:, 1]]


def _collect(array: np.ndarray, depth: int, parts: list[np.ndarray]) -> None:
    if depth == 0 or array.size < 2:
        return
    pairs = array[: array.size - array.size % 2].reshape(-1, 2)
    first = pairs[:, 0]
    second = pairs[:, 1]
    differ = first != second
    emitted = first[differ]
    if emitted.size:
        parts.append(emitted)
    _collect(first ^ second, depth - 1, parts)
    _collect(first[~differ], depth - 1, parts)
