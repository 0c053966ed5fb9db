"""Brute-force oracles the real implementations are checked against.

Everything here is deliberately naive: set comprehensions over all
substrings, quadratic window scans, letter-by-letter morphism expansion.
Slow and obviously correct is the point.
"""

from __future__ import annotations

import random

ALPHABET = "123"


def brute_factors(w: str, n: int) -> set:
    return {w[i:i + n] for i in range(len(w) - n + 1)}


def brute_complexity(w: str, nmax: int) -> tuple:
    return tuple(len(brute_factors(w, n)) for n in range(nmax + 1))


def brute_extension_pairs(w: str, u: str) -> frozenset:
    """All (a, b) with a+u+b a substring of w, as integer pairs."""
    k = len(u)
    pairs = set()
    for i in range(1, len(w) - k):
        if w[i:i + k] == u:
            pairs.add((int(w[i - 1]), int(w[i + k])))
    return frozenset(pairs)


def brute_bispecials(w: str, maxlen: int) -> list:
    """Factors with at least two left and two right extensions, by length."""
    out = []
    for n in range(maxlen + 1):
        for u in sorted(brute_factors(w, n)):
            pairs = brute_extension_pairs(w, u)
            if len({a for a, _ in pairs}) >= 2 and len({b for _, b in pairs}) >= 2:
                out.append(u)
    return out


def brute_balance_row(w: str, letter: str, n: int) -> int:
    counts = [w[i:i + n].count(letter) for i in range(len(w) - n + 1)]
    return max(counts) - min(counts)


def naive_apply(images: dict, w: str) -> str:
    return "".join(images[ch] for ch in w)


def random_word(rng: random.Random, length: int) -> str:
    return "".join(rng.choice(ALPHABET) for _ in range(length))


def abelianization(w: str) -> tuple:
    return (w.count("1"), w.count("2"), w.count("3"))


def all_extension_sets():
    """All 512 subsets of {1,2,3} x {1,2,3} as frozensets of pairs."""
    universe = [(a, b) for a in (1, 2, 3) for b in (1, 2, 3)]
    for mask in range(512):
        yield frozenset(p for k, p in enumerate(universe) if mask >> k & 1)


def cross_sets(pairs):
    """is_ordinary oracle: contained in ({a} x A) u (A x {b}) with (a,b) in E."""
    for a, b in pairs:
        cross = {(a, c) for c in (1, 2, 3)} | {(c, b) for c in (1, 2, 3)}
        if set(pairs) <= cross:
            return True
    return False


def tree_oracle(pairs) -> bool:
    """Connected acyclic bipartite graph on the pairs, by edge count + DFS."""
    if not pairs:
        return False
    left = {("L", a) for a, _ in pairs}
    right = {("R", b) for _, b in pairs}
    vertices = left | right
    edges = len(pairs)
    if edges != len(vertices) - 1:
        return False
    adj = {v: [] for v in vertices}
    for a, b in pairs:
        adj[("L", a)].append(("R", b))
        adj[("R", b)].append(("L", a))
    seen = set()
    stack = [next(iter(vertices))]
    while stack:
        v = stack.pop()
        if v in seen:
            continue
        seen.add(v)
        stack.extend(adj[v])
    return len(seen) == len(vertices)
