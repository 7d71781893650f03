"""
Brute-force oracles for the test suite.

Each function here recomputes something the library computes, by the most
direct method available, so tests can compare the two.
"""

import os
import random
from itertools import product
from typing import Dict, List, Sequence, Tuple

import numpy as np

SLOW_TESTS = os.environ.get("HYPERROOT_SLOW_TESTS") == "1"
TEST_SEED = int(os.environ.get("HYPERROOT_TEST_SEED", "20240229"))


def make_rng(offset: int = 0) -> random.Random:
    """Seeded generator; the seed comes from HYPERROOT_TEST_SEED."""
    return random.Random(TEST_SEED + offset)


def random_word(rng: random.Random, n: int, max_length: int) -> List[int]:
    length = rng.randint(0, max_length)
    return [rng.randrange(n) for _ in range(length)]


def vectors_up_to_height(n: int, max_height: int) -> List[Tuple[int, ...]]:
    """Every nonzero vector in Q+ of height <= max_height."""
    found = []
    for coords in product(range(max_height + 1), repeat=n):
        h = sum(coords)
        if 0 < h <= max_height:
            found.append(coords)
    return sorted(found, key=lambda v: (sum(v), v))


def word_weyl_sums(a: Sequence[Sequence[int]], max_height: int) -> Dict[Tuple[int, ...], int]:
    """
    s(w) -> length over all words of length <= max_height, by telescoping
    s(w r_i) = s(w) + w(alpha_i) for every word, reduced or not.

    Height(s(w)) >= l(w), so words of length <= max_height reach every
    element with height(s(w)) <= max_height.
    """
    n = len(a)
    A = np.array(a, dtype=np.int64)
    found: Dict[Tuple[int, ...], int] = {}
    layer = [((), np.zeros(n, dtype=np.int64), np.eye(n, dtype=np.int64))]
    for length in range(1, max_height + 1):
        next_layer = []
        for word, sw, images in layer:
            for i in range(n):
                # images[:, j] = w(alpha_j)
                new_sw = sw + images[:, i]
                new_images = images - np.outer(images[:, i], A[i])
                next_layer.append((word + (i,), new_sw, new_images))
                key = tuple(int(x) for x in new_sw)
                if any(key) and sum(key) <= max_height and key not in found:
                    found[key] = length
        layer = next_layer
    return found


def partition_counts(order: int) -> List[int]:
    """p(0..order) by counting partitions part by part."""
    counts = [1] + [0] * order
    for part in range(1, order + 1):
        for n in range(part, order + 1):
            counts[n] += counts[n - part]
    return counts


def convolve(a: Sequence[int], b: Sequence[int], order: int) -> List[int]:
    out = [0] * (order + 1)
    for i, x in enumerate(a[: order + 1]):
        for j, y in enumerate(b[: order + 1 - i]):
            out[i + j] += x * y
    return out


def colored_partition_counts(colors: int, order: int) -> List[int]:
    """p^(l)(0..order) as the l-fold convolution of p."""
    p = partition_counts(order)
    out = [1] + [0] * order
    for _ in range(colors):
        out = convolve(out, p, order)
    return out


def truncated_product(factors: Sequence[Tuple[int, int]], order: int) -> List[int]:
    """prod (1 + sign q^e) over (e, sign) pairs, multiplied out term by term."""
    out = [1] + [0] * order
    for e, sign in factors:
        out = convolve(out, [1] + [0] * (e - 1) + [sign], order)
    return out


def xi_counts(order: int) -> List[int]:
    """xi(0..order) from p^(8) and the product prod(1 - q^{4n-2})."""
    p8 = colored_partition_counts(8, order)
    ratio = truncated_product([(e, -1) for e in range(2, order + 1, 4)], order)
    bracket = [-c for c in ratio]
    bracket[0] += 1
    return convolve(p8, bracket, order)
