"""The fifteen SP 800-22 statistical tests.

Every test takes a 0/1 uint8 array and returns ``{statistic name: p-value}``.
Single-statistic tests use the test name as the key. An empty mapping means
the sequence was not eligible (the Random Excursions cycle rule). Minimum
input sizes are enforced by :func:`plasmon_qrng.nist.battery.run_test`, so
the functions can be called directly on the short worked examples.
"""

import math
from functools import lru_cache

import numpy as np
from scipy.fft import fft
from scipy.special import erfc, gammaincc
from scipy.stats import norm

from ..errors import DomainError

PValues = dict[str, float]

LONGEST_RUN_TABLES = (
    # (minimum n, block length M, bin lower edge, bin upper edge, pi)
    (128, 8, 1, 4, (0.21484375, 0.3671875, 0.23046875, 0.1875)),
    (6272, 128, 4, 9, (0.1174035788, 0.242955959, 0.249363483, 0.17517706, 0.102701071, 0.112398847)),
    (750_000, 10_000, 10, 16, (0.0882, 0.2092, 0.2483, 0.1933, 0.1208, 0.0675, 0.0727)),
)

RANK_MATRIX_SIZE = 32

OVERLAPPING_TEMPLATE_PI = (0.364091, 0.185659, 0.139381, 0.100571, 0.0704323, 0.139865)

UNIVERSAL_TABLE = (
    # (minimum n, L, expected value, variance)
    (387_840, 6, 5.2177052, 2.954),
    (904_960, 7, 6.1962507, 3.125),
    (2_068_480, 8, 7.1836656, 3.238),
    (4_654_080, 9, 8.1764248, 3.311),
    (10_342_400, 10, 9.1723243, 3.356),
    (22_753_280, 11, 10.170032, 3.384),
    (49_643_520, 12, 11.168765, 3.401),
    (107_560_960, 13, 12.168070, 3.410),
    (231_669_760, 14, 13.167693, 3.416),
    (496_435_200, 15, 14.167488, 3.419),
    (1_059_061_760, 16, 15.167379, 3.421),
)
UNIVERSAL_EXPECTED = {L: (expected, variance) for _, L, expected, variance in UNIVERSAL_TABLE}
UNIVERSAL_EXPECTED.update({1: (0.7326495, 0.690), 2: (1.5374383, 1.338), 3: (2.4016068, 1.901)})
UNIVERSAL_EXPECTED.update({4: (3.3112247, 2.358), 5: (4.2534266, 2.705)})

LINEAR_COMPLEXITY_PI = (0.010417, 0.03125, 0.125, 0.5, 0.25, 0.0625, 0.020833)

EXCURSION_STATES = (-4, -3, -2, -1, 1, 2, 3, 4)
VARIANT_STATES = tuple(x for x in range(-9, 10) if x != 0)


def _p(value: float) -> float:
    return float(min(1.0, max(0.0, value)))


def _chi_square(observed: np.ndarray, expected: np.ndarray) -> float:
    return float(np.sum((observed - expected) ** 2 / expected))


def window_values(bits: np.ndarray, m: int, wrap: bool = False) -> np.ndarray:
    """Integer value of every m-bit window (MSB first); with ``wrap`` the first m-1 bits are appended."""
    x = bits.astype(np.int64)
    if wrap and m > 1:
        x = np.concatenate((x, x[: m - 1]))
    count = x.size - m + 1
    values = np.zeros(max(count, 0), dtype=np.int64)
    for offset in range(m):
        values = (values << 1) | x[offset : offset + count]
    return values


def frequency(bits: np.ndarray) -> PValues:
    n = bits.size
    s_obs = abs(2 * int(np.count_nonzero(bits)) - n) / math.sqrt(n)
    return {"frequency": _p(erfc(s_obs / math.sqrt(2)))}


def block_frequency(bits: np.ndarray, block_length: int = 128) -> PValues:
    blocks = bits.size // block_length
    if blocks == 0:
        raise DomainError(f"block_frequency needs at least one block of {block_length} bits")
    proportions = bits[: blocks * block_length].reshape(blocks, block_length).mean(axis=1)
    chi_square = 4.0 * block_length * float(np.sum((proportions - 0.5) ** 2))
    return {"block_frequency": _p(gammaincc(blocks / 2.0, chi_square / 2.0))}


def _trunc_div(a: int, b: int) -> int:
    quotient = abs(a) // abs(b)
    return quotient if (a >= 0) == (b > 0) else -quotient


def _cusum_p(n: int, z: int) -> float:
    sqrt_n = math.sqrt(n)
    ratio = n // z
    k = np.arange(_trunc_div(-ratio + 1, 4), _trunc_div(ratio - 1, 4) + 1)
    sum1 = np.sum(norm.cdf((4 * k + 1) * z / sqrt_n) - norm.cdf((4 * k - 1) * z / sqrt_n))
    k = np.arange(_trunc_div(-ratio - 3, 4), _trunc_div(ratio - 1, 4) + 1)
    sum2 = np.sum(norm.cdf((4 * k + 3) * z / sqrt_n) - norm.cdf((4 * k + 1) * z / sqrt_n))
    return _p(1.0 - sum1 + sum2)


def cumulative_sums(bits: np.ndarray) -> PValues:
    steps = 2 * bits.astype(np.int64) - 1
    forward = int(np.max(np.abs(np.cumsum(steps))))
    backward = int(np.max(np.abs(np.cumsum(steps[::-1]))))
    n = bits.size
    return {"forward": _cusum_p(n, forward), "backward": _cusum_p(n, backward)}


def runs(bits: np.ndarray) -> PValues:
    n = bits.size
    pi = np.count_nonzero(bits) / n
    if abs(pi - 0.5) >= 2.0 / math.sqrt(n):
        return {"runs": 0.0}
    v_obs = 1 + int(np.count_nonzero(np.diff(bits)))
    spread = 2.0 * n * pi * (1.0 - pi)
    return {"runs": _p(erfc(abs(v_obs - spread) / (2.0 * math.sqrt(2.0 * n) * pi * (1.0 - pi))))}


def longest_runs_per_block(bits: np.ndarray, block_length: int) -> np.ndarray:
    blocks = bits.size // block_length
    padded = np.zeros((blocks, block_length + 1), dtype=np.int8)
    padded[:, :block_length] = bits[: blocks * block_length].reshape(blocks, block_length)
    flat = np.concatenate(([0], padded.ravel()))
    edges = np.diff(flat)
    starts = np.flatnonzero(edges == 1)
    ends = np.flatnonzero(edges == -1)
    longest = np.zeros(blocks, dtype=np.int64)
    np.maximum.at(longest, starts // (block_length + 1), ends - starts)
    return longest


def longest_run(bits: np.ndarray) -> PValues:
    n = bits.size
    table = next((row for row in reversed(LONGEST_RUN_TABLES) if n >= row[0]), None)
    if table is None:
        raise DomainError(f"longest_run needs at least {LONGEST_RUN_TABLES[0][0]} bits")
    _, block_length, low, high, pi = table
    longest = np.clip(longest_runs_per_block(bits, block_length), low, high)
    observed = np.bincount(longest - low, minlength=len(pi)).astype(np.float64)
    expected = longest.size * np.asarray(pi)
    chi_square = _chi_square(observed, expected)
    return {"longest_run": _p(gammaincc((len(pi) - 1) / 2.0, chi_square / 2.0))}


def gf2_ranks(rows: np.ndarray) -> np.ndarray:
    """Ranks over GF(2) of a stack of square bit matrices given as uint32 row words, shape (N, 32)."""
    matrices = rows.astype(np.uint32).copy()
    count, size = matrices.shape
    index = np.arange(count)
    used = np.zeros((count, size), dtype=bool)
    ranks = np.zeros(count, dtype=np.int64)
    for bit in range(size - 1, -1, -1):
        has_bit = ((matrices >> np.uint32(bit)) & np.uint32(1)).astype(bool)
        candidates = has_bit & ~used
        found = candidates.any(axis=1)
        pivot_row = np.argmax(candidates, axis=1)
        pivot = matrices[index, pivot_row]
        eliminate = has_bit & found[:, None]
        eliminate[index, pivot_row] = False
        matrices ^= np.where(eliminate, pivot[:, None], np.uint32(0))
        used[index[found], pivot_row[found]] = True
        ranks += found
    return ranks


@lru_cache(maxsize=None)
def rank_probabilities(rows: int = RANK_MATRIX_SIZE, cols: int = RANK_MATRIX_SIZE) -> tuple[float, float, float]:
    """(P(full rank), P(full rank - 1), P(lower)) for random binary matrices."""

    def probability(r: int) -> float:
        product = 1.0
        for i in range(r):
            product *= (1 - 2.0 ** (i - rows)) * (1 - 2.0 ** (i - cols)) / (1 - 2.0 ** (i - r))
        return 2.0 ** (r * (rows + cols - r) - rows * cols) * product

    full = min(rows, cols)
    p_full, p_minus_one = probability(full), probability(full - 1)
    return p_full, p_minus_one, 1.0 - p_full - p_minus_one


def rank(bits: np.ndarray) -> PValues:
    size = RANK_MATRIX_SIZE
    matrices = bits.size // (size * size)
    if matrices == 0:
        raise DomainError(f"rank needs at least {size * size} bits")
    packed = np.packbits(bits[: matrices * size * size].astype(np.uint8))
    rows = np.frombuffer(packed.tobytes(), dtype=">u4").reshape(matrices, size)
    ranks = gf2_ranks(rows)
    observed = np.array(
        [np.count_nonzero(ranks == size), np.count_nonzero(ranks == size - 1), np.count_nonzero(ranks < size - 1)],
        dtype=np.float64,
    )
    chi_square = _chi_square(observed, matrices * np.asarray(rank_probabilities(size, size)))
    return {"rank": _p(math.exp(-chi_square / 2.0))}


def dft(bits: np.ndarray) -> PValues:
    n = bits.size
    spectrum = np.abs(fft(2.0 * bits.astype(np.float64) - 1.0))[: n // 2]
    threshold = math.sqrt(math.log(1.0 / 0.05) * n)
    expected_peaks = 0.95 * n / 2.0
    observed_peaks = int(np.count_nonzero(spectrum < threshold))
    d = (observed_peaks - expected_peaks) / math.sqrt(n * 0.95 * 0.05 / 4.0)
    return {"dft": _p(erfc(abs(d) / math.sqrt(2.0)))}


@lru_cache(maxsize=None)
def aperiodic_templates(m: int) -> tuple[int, ...]:
    """All m-bit words with no proper prefix equal to a suffix, in increasing order."""
    templates = []
    for value in range(1 << m):
        bordered = any((value >> (m - k)) == (value & ((1 << k) - 1)) for k in range(1, m))
        if not bordered:
            templates.append(value)
    return tuple(templates)


def non_overlapping_template(
    bits: np.ndarray,
    template_length: int = 9,
    blocks: int = 8,
    templates: tuple[int, ...] | None = None,
) -> PValues:
    m = template_length
    block_length = bits.size // blocks
    if block_length < m:
        raise DomainError(f"non_overlapping_template needs blocks of at least {m} bits")
    templates = aperiodic_templates(m) if templates is None else templates

    # an aperiodic template cannot overlap itself, so every window match is a
    # non-overlapping occurrence
    per_block = window_values(bits[: blocks * block_length].reshape(blocks, block_length).ravel(), m)
    positions = np.arange(per_block.size)
    inside = (positions % block_length) <= block_length - m
    block_index = positions[inside] // block_length
    counts = np.bincount(block_index * (1 << m) + per_block[inside], minlength=blocks << m).reshape(blocks, 1 << m)

    mean = (block_length - m + 1) / 2.0**m
    variance = block_length * (1.0 / 2.0**m - (2.0 * m - 1.0) / 2.0 ** (2 * m))
    results: PValues = {}
    for template in templates:
        chi_square = float(np.sum((counts[:, template] - mean) ** 2)) / variance
        results[format(template, f"0{m}b")] = _p(gammaincc(blocks / 2.0, chi_square / 2.0))
    return results


def overlapping_template(bits: np.ndarray, template_length: int = 9, block_length: int = 1032) -> PValues:
    m = template_length
    blocks = bits.size // block_length
    if blocks == 0:
        raise DomainError(f"overlapping_template needs at least {block_length} bits")
    values = window_values(bits[: blocks * block_length], m)
    positions = np.arange(values.size)
    hit = ((positions % block_length) <= block_length - m) & (values == (1 << m) - 1)
    hits = np.bincount(positions[hit] // block_length, minlength=blocks)
    k = len(OVERLAPPING_TEMPLATE_PI) - 1
    observed = np.bincount(np.minimum(hits, k), minlength=k + 1).astype(np.float64)
    chi_square = _chi_square(observed, blocks * np.asarray(OVERLAPPING_TEMPLATE_PI))
    return {"overlapping_template": _p(gammaincc(k / 2.0, chi_square / 2.0))}


def universal_parameters(n: int) -> tuple[int, int]:
    """(L, Q) for a sequence of n bits; L = 0 when n is below the smallest tabulated length."""
    row = next((row for row in reversed(UNIVERSAL_TABLE) if n >= row[0]), None)
    if row is None:
        return 0, 0
    return row[1], 10 * (1 << row[1])


def universal(bits: np.ndarray, block_length: int | None = None, init_blocks: int | None = None) -> PValues:
    n = bits.size
    if block_length is None:
        block_length, init_blocks = universal_parameters(n)
    if init_blocks is None:
        init_blocks = 10 * (1 << block_length)
    if block_length not in UNIVERSAL_EXPECTED:
        raise DomainError(f"universal needs a block length in 1..16 (n = {n})")
    L, Q = block_length, init_blocks
    total_blocks = n // L
    K = total_blocks - Q
    if K <= 0:
        raise DomainError(f"universal needs more than {Q} blocks of {L} bits")

    values = window_values(bits[: total_blocks * L], L)[::L]
    order = np.argsort(values, kind="stable")
    same_as_previous = np.concatenate(([False], values[order][1:] == values[order][:-1]))
    previous = np.zeros(total_blocks, dtype=np.int64)
    previous[order[same_as_previous]] = order[np.flatnonzero(same_as_previous) - 1] + 1
    index = np.arange(Q + 1, total_blocks + 1)
    fn = float(np.sum(np.log2(index - previous[Q:]))) / K

    expected, variance = UNIVERSAL_EXPECTED[L]
    c = 0.7 - 0.8 / L + (4.0 + 32.0 / L) * K ** (-3.0 / L) / 15.0
    sigma = c * math.sqrt(variance / K)
    return {"universal": _p(erfc(abs(fn - expected) / (math.sqrt(2.0) * sigma)))}


def _phi(bits: np.ndarray, m: int) -> float:
    if m == 0:
        return 0.0
    counts = np.bincount(window_values(bits, m, wrap=True), minlength=1 << m)
    frequencies = counts[counts > 0] / bits.size
    return float(np.sum(frequencies * np.log(frequencies)))


def approximate_entropy(bits: np.ndarray, block_length: int = 10) -> PValues:
    n = bits.size
    m = block_length
    ap_en = _phi(bits, m) - _phi(bits, m + 1)
    chi_square = 2.0 * n * (math.log(2.0) - ap_en)
    return {"approximate_entropy": _p(gammaincc(2.0 ** (m - 1), chi_square / 2.0))}


def _psi_squared(bits: np.ndarray, m: int) -> float:
    if m <= 0:
        return 0.0
    counts = np.bincount(window_values(bits, m, wrap=True), minlength=1 << m).astype(np.float64)
    return (2.0**m / bits.size) * float(np.sum(counts * counts)) - bits.size


def serial(bits: np.ndarray, block_length: int = 16) -> PValues:
    m = block_length
    psi_m, psi_m1, psi_m2 = (_psi_squared(bits, m - k) for k in range(3))
    delta = psi_m - psi_m1
    delta_squared = psi_m - 2.0 * psi_m1 + psi_m2
    return {
        "p1": _p(gammaincc(2.0 ** (m - 2), delta / 2.0)),
        "p2": _p(gammaincc(2.0 ** (m - 3), delta_squared / 2.0)),
    }


def berlekamp_massey(bits) -> int:
    """Linear complexity of a binary sequence over GF(2)."""
    connection, previous = 1, 1
    length, last_change = 0, -1
    window = 0
    for index, bit in enumerate(bits):
        window = (window << 1) | int(bit)
        if (connection & window).bit_count() & 1:
            saved = connection
            connection ^= previous << (index - last_change)
            if 2 * length <= index:
                length = index + 1 - length
                last_change = index
                previous = saved
    return length


def linear_complexity(bits: np.ndarray, block_length: int = 500) -> PValues:
    M = block_length
    blocks = bits.size // M
    if blocks == 0:
        raise DomainError(f"linear_complexity needs at least {M} bits")
    rows = bits[: blocks * M].reshape(blocks, M).tolist()
    complexities = np.array([berlekamp_massey(row) for row in rows], dtype=np.float64)

    sign = -1.0 if M % 2 else 1.0
    mean = M / 2.0 + (9.0 - sign) / 36.0 - (M / 3.0 + 2.0 / 9.0) / 2.0**M
    t = sign * (complexities - mean) + 2.0 / 9.0
    bins = np.digitize(t, [-2.5, -1.5, -0.5, 0.5, 1.5, 2.5], right=True)
    observed = np.bincount(bins, minlength=len(LINEAR_COMPLEXITY_PI)).astype(np.float64)
    chi_square = _chi_square(observed, blocks * np.asarray(LINEAR_COMPLEXITY_PI))
    return {"linear_complexity": _p(gammaincc((len(LINEAR_COMPLEXITY_PI) - 1) / 2.0, chi_square / 2.0))}


def _walk(bits: np.ndarray) -> tuple[np.ndarray, int]:
    """Zero-padded partial-sum walk and its cycle count J."""
    walk = np.concatenate(([0], np.cumsum(2 * bits.astype(np.int64) - 1), [0]))
    cycles = int(np.count_nonzero(walk == 0)) - 1
    return walk, cycles


def excursion_state_probabilities(x: int) -> np.ndarray:
    """P(state x is visited k times in a cycle) for k = 0..4 and k >= 5."""
    a = 1.0 / (2.0 * abs(x))
    probabilities = [1.0 - a]
    probabilities += [a * a * (1.0 - a) ** (k - 1) for k in range(1, 5)]
    probabilities.append(a * (1.0 - a) ** 4)
    return np.asarray(probabilities)


def random_excursions(bits: np.ndarray, min_cycles: int = 500) -> PValues:
    walk, cycles = _walk(bits)
    if cycles == 0 or cycles < min_cycles:
        return {}
    cycle_of = np.cumsum(walk == 0) - 1
    states = np.asarray(EXCURSION_STATES)
    state_index = np.full(walk.size, -1, dtype=np.int64)
    in_range = (np.abs(walk) >= 1) & (np.abs(walk) <= 4)
    state_index[in_range] = np.searchsorted(states, walk[in_range])
    visited = state_index >= 0
    visits = np.bincount(
        cycle_of[visited] * states.size + state_index[visited], minlength=cycles * states.size
    ).reshape(cycles, states.size)

    results: PValues = {}
    for column, x in enumerate(EXCURSION_STATES):
        observed = np.bincount(np.minimum(visits[:, column], 5), minlength=6).astype(np.float64)
        chi_square = _chi_square(observed, cycles * excursion_state_probabilities(x))
        results[f"x={x:+d}"] = _p(gammaincc(2.5, chi_square / 2.0))
    return results


def random_excursions_variant(bits: np.ndarray, min_cycles: int = 500) -> PValues:
    walk, cycles = _walk(bits)
    if cycles == 0 or cycles < min_cycles:
        return {}
    inner = walk[1:-1]
    in_range = (inner >= -9) & (inner <= 9)
    totals = np.bincount(inner[in_range] + 9, minlength=19)
    results: PValues = {}
    for x in VARIANT_STATES:
        xi = int(totals[x + 9])
        results[f"x={x:+d}"] = _p(erfc(abs(xi - cycles) / math.sqrt(2.0 * cycles * (4.0 * abs(x) - 2.0))))
    return results
