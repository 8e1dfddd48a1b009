"""Strongly connected digraphs on n labelled vertices, one per isomorphism class.

Every edge mask is mapped to the minimum of its images under all vertex
permutations; the masks equal to their own minimum are the representatives.
"""

import itertools
from functools import lru_cache

import numpy as np

from tgfactor.digraph import DiGraph, is_strongly_connected

CHUNK = 5


def _pairs(n):
    return [(i, j) for i in range(n) for j in range(n) if i != j]


@lru_cache(maxsize=None)
def canonical_masks(n: int) -> np.ndarray:
    pairs = _pairs(n)
    bit = {p: b for b, p in enumerate(pairs)}
    nbits = len(pairs)
    masks = np.arange(1 << nbits, dtype=np.int64)
    best = masks.copy()
    chunks = [(lo, min(lo + CHUNK, nbits)) for lo in range(0, nbits, CHUNK)]
    for perm in itertools.permutations(range(n)):
        image = [bit[(perm[i], perm[j])] for i, j in pairs]
        out = np.zeros_like(masks)
        for lo, hi in chunks:
            table = np.zeros(1 << (hi - lo), dtype=np.int64)
            for v in range(1 << (hi - lo)):
                table[v] = sum(1 << image[lo + k] for k in range(hi - lo) if v >> k & 1)
            out |= table[(masks >> lo) & ((1 << (hi - lo)) - 1)]
        np.minimum(best, out, out=best)
    return np.flatnonzero(best == masks)


def strongly_connected_classes(n: int) -> list[DiGraph]:
    if n == 1:
        return [DiGraph(["1"], [])]
    pairs = _pairs(n)
    out = []
    for mask in canonical_masks(n):
        g = DiGraph([str(i + 1) for i in range(n)], [p for b, p in enumerate(pairs) if mask >> b & 1])
        if is_strongly_connected(g):
            out.append(g)
    return out
