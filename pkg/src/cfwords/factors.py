"""Factor statistics of finite words: counts, extension sets, bispecial audits.

The index groups factor occurrences incrementally: occurrences of length-n
factors are equal exactly when their length-(n-1) prefixes were equal and
their last letters agree, so each length refines the previous grouping with
one vectorized relabeling pass. This is exact (no hashing, no collisions)
and linear in the word per length.

Extension sets record which letters a b admit a u b as a factor. A set is
ordinary when one row/column cross through some of its pairs covers it, and
a tree set when its bipartite extension graph is connected and acyclic;
ordinary implies tree. Bispecial factors of the generated words desubstitute
block by block down to the empty word, and extension sets propagate forward
through a block by a four-step relabeling captured in
`propagate_extensions`. The finитe family of non-ordinary extension sets
that can ever appear is derived at import time from the empty word's tables
and the propagation map, closed under the 1<->3 mirror symmetry.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Union

import numpy as np

from .exactlin import Vector3, vector_payload
from .mcf import DEFAULT_EPS
from .morphisms import CPRIME, CPrimeBlock, apply, desubstitute, recode_cprime
from .sadic import GeneratedWord, directive, generate

Pair = tuple[int, int]
PairSet = frozenset[Pair]


@dataclass(frozen=True)
class ExtensionSet:
    """Two-sided extension pairs of a factor; factor None means detached data."""

    factor: Optional[str]
    pairs: PairSet

    def __init__(self, factor: Optional[str], pairs: Iterable[Pair]):
        object.__setattr__(self, "factor", factor)
        object.__setattr__(self, "pairs", frozenset((int(a), int(b)) for a, b in pairs))

    @property
    def left_letters(self) -> frozenset[int]:
        return frozenset(a for a, _ in self.pairs)

    @property
    def right_letters(self) -> frozenset[int]:
        return frozenset(b for _, b in self.pairs)

    @property
    def is_bispecial(self) -> bool:
        return len(self.left_letters) >= 2 and len(self.right_letters) >= 2

    def sorted_pairs(self) -> tuple[Pair, ...]:
        return tuple(sorted(self.pairs))

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self) -> Iterator[Pair]:
        return iter(sorted(self.pairs))


def _pairs_of(E: Union[ExtensionSet, Iterable[Pair]]) -> PairSet:
    if isinstance(E, ExtensionSet):
        return E.pairs
    return frozenset((int(a), int(b)) for a, b in E)


def is_ordinary(E: Union[ExtensionSet, Iterable[Pair]]) -> bool:
    """Some pair (a, b) in E covers it: E inside ({a} x A) union (A x {b})."""
    pairs = _pairs_of(E)
    return any(all(p == a or q == b for (p, q) in pairs) for (a, b) in pairs)


def is_tree(E: Union[ExtensionSet, Iterable[Pair]]) -> bool:
    """Bipartite graph on left/right letters with E as edges is a tree."""
    pairs = _pairs_of(E)
    if not pairs:
        return False
    lefts = {a for a, _ in pairs}
    rights = {b for _, b in pairs}
    if len(pairs) != len(lefts) + len(rights) - 1:
        return False
    adj: dict[tuple[str, int], set[tuple[str, int]]] = {}
    for a, b in pairs:
        adj.setdefault(("L", a), set()).add(("R", b))
        adj.setdefault(("R", b), set()).add(("L", a))
    start = next(iter(adj))
    seen = {start}
    stack = [start]
    while stack:
        node = stack.pop()
        for other in adj[node]:
            if other not in seen:
                seen.add(other)
                stack.append(other)
    return len(seen) == len(lefts) + len(rights)


@dataclass(frozen=True)
class _Level:
    factors: tuple[str, ...]
    by_factor: dict[str, int]
    pairs: tuple[PairSet, ...]


@dataclass(frozen=True)
class FactorIndex:
    """Factor counts up to nmax and extension data up to ext_max."""

    word: str
    nmax: int
    ext_max: int
    counts: tuple[int, ...]
    _levels: dict[int, _Level]

    def complexity(self) -> tuple[int, ...]:
        """p(0), p(1), ..., p(nmax)."""
        return self.counts

    def extension_set(self, u: str) -> ExtensionSet:
        if len(u) > self.ext_max:
            raise ValueError(f"extensions indexed only up to length {self.ext_max}")
        level = self._levels[len(u)]
        gid = level.by_factor.get(u)
        if gid is None:
            raise KeyError(f"{u!r} is not a factor of the indexed word")
        return ExtensionSet(u, level.pairs[gid])

    def factors_of_length(self, n: int) -> tuple[str, ...]:
        if n > self.ext_max:
            raise ValueError(f"factor strings kept only up to length {self.ext_max}")
        return tuple(sorted(self._levels[n].factors))

    def bispecials(self, maxlen: Optional[int] = None) -> list[ExtensionSet]:
        """Bispecial factors with |u| <= maxlen, by length then lexicographic."""
        top = self.ext_max if maxlen is None else min(maxlen, self.ext_max)
        out = []
        for n in range(top + 1):
            level = self._levels[n]
            hits = [(level.factors[g], level.pairs[g]) for g in range(len(level.factors))]
            for factor, pairs in sorted(hits):
                ext = ExtensionSet(factor, pairs)
                if ext.is_bispecial:
                    out.append(ext)
        return out


def build_index(word: str, nmax: int, ext_max: Optional[int] = None) -> FactorIndex:
    """Index the word's factors up to length nmax.

    Extension sets (and factor strings) are kept for lengths up to ext_max,
    which defaults to nmax; counting alone is much cheaper, so callers that
    only need p(n) should pass ext_max=0.
    """
    if nmax < 1:
        raise ValueError("nmax must be at least 1")
    if len(word) < nmax + 2:
        raise ValueError(f"need |word| >= nmax + 2 = {nmax + 2}, got {len(word)}")
    ext_max = nmax if ext_max is None else min(ext_max, nmax)

    codes = np.frombuffer(word.encode("ascii"), dtype=np.uint8).astype(np.int64) - 48
    if codes.min() < 1 or codes.max() > 3:
        bad = next(ch for ch in word if ch not in "123")
        raise ValueError(f"letter {bad!r} outside alphabet 123")
    L = len(word)

    levels: dict[int, _Level] = {}
    eps_pairs = _decode_pairs(np.unique(codes[:-1] * 4 + codes[1:]))
    levels[0] = _Level(("",), {"": 0}, (frozenset(eps_pairs),))

    counts = [1]
    G = np.zeros(0, dtype=np.int64)
    ngroups = 0
    for n in range(1, nmax + 1):
        combined = codes if n == 1 else G[:-1] * 4 + codes[n - 1:]
        if n <= ext_max:
            _, first, G = np.unique(combined, return_index=True, return_inverse=True)
            ngroups = len(first)
            levels[n] = _build_level(word, codes, G, first, n)
        else:
            bc = np.bincount(combined, minlength=4 * max(ngroups, 1))
            vals = np.flatnonzero(bc)
            lut = np.full(len(bc), -1, dtype=np.int64)
            lut[vals] = np.arange(len(vals))
            G = lut[combined]
            ngroups = len(vals)
        counts.append(ngroups)
    return FactorIndex(word, nmax, ext_max, tuple(counts), levels)


def _decode_pairs(keys: np.ndarray) -> set[Pair]:
    out = set()
    for kv in keys.tolist():
        a, b = divmod(int(kv), 4)
        out.add((a, b))
    return out


def _build_level(word: str, codes: np.ndarray, G: np.ndarray,
                 first: np.ndarray, n: int) -> _Level:
    m = len(G)
    factors = tuple(word[i: i + n] for i in first.tolist())
    pair_sets: list[set[Pair]] = [set() for _ in range(len(factors))]
    if m >= 3:
        key = G[1:-1] * 16 + codes[: m - 2] * 4 + codes[n + 1:]
        for kv in np.unique(key).tolist():
            g, rest = divmod(int(kv), 16)
            a, b = divmod(rest, 4)
            pair_sets[g].add((a, b))
    by_factor = {f: i for i, f in enumerate(factors)}
    return _Level(factors, by_factor, tuple(frozenset(s) for s in pair_sets))


def complexity(idx: FactorIndex) -> tuple[int, ...]:
    return idx.complexity()


def extension_set(idx: FactorIndex, u: str) -> ExtensionSet:
    return idx.extension_set(u)


def stabilized_horizon(counts_a: Iterable[int], counts_b: Iterable[int]) -> int:
    """Largest n with both count tables defined and equal for every m <= n."""
    h = -1
    for n, (a, b) in enumerate(zip(counts_a, counts_b)):
        if a != b:
            break
        h = n
    return h


EMPTY_WORD_EXTENSIONS: dict[str, PairSet] = {
    "c11": frozenset({(1, 1), (1, 2), (1, 3), (2, 1), (3, 1)}),
    "c22": frozenset({(1, 3), (2, 3), (3, 1), (3, 2), (3, 3)}),
    "c122": frozenset({(1, 2), (1, 3), (2, 1), (2, 2), (3, 2)}),
    "c211": frozenset({(1, 3), (2, 1), (2, 2), (2, 3), (3, 2)}),
    "c121": frozenset({(1, 2), (1, 3), (2, 1), (3, 1), (3, 2)}),
    "c212": frozenset({(1, 3), (2, 1), (2, 3), (3, 1), (3, 2)}),
}


def empty_extension_set(block: Union[CPrimeBlock, str]) -> ExtensionSet:
    """Extension set of the empty word in a word whose first recoded block is given."""
    label = block.label if isinstance(block, CPrimeBlock) else str(block)
    if label not in EMPTY_WORD_EXTENSIONS:
        raise ValueError(f"unknown block label {label!r}")
    return ExtensionSet("", EMPTY_WORD_EXTENSIONS[label])


def propagate_extensions(E: Union[ExtensionSet, Iterable[Pair]], block: CPrimeBlock,
                         x: str, y: str) -> ExtensionSet:
    """Push a factor's extension set through one block.

    For v with extension set E and u = x tau(v) y, each pair (a, b) of E
    contributes the pair (last letter, first letter) of the stripped labels:
    the left label is tau(a) (left proper) or i tau(a) (right proper) minus
    the suffix x, the right label tau(b) i (left proper) or tau(b) (right
    proper) minus the prefix y; pairs whose labels do not carry x resp. y,
    or become empty, drop out. (x, y) must be one of the block's shapes.
    """
    if (x, y) not in block.shapes:
        raise ValueError(f"({x!r}, {y!r}) is not an admissible shape of {block.label}")
    pairs = _pairs_of(E)
    tau = block.morphism
    i = block.proper_letter
    left_proper = block.proper_side == "left"
    out: set[Pair] = set()
    for a, b in pairs:
        la = tau.image(str(a)) if left_proper else i + tau.image(str(a))
        rb = tau.image(str(b)) + i if left_proper else tau.image(str(b))
        if x:
            if not la.endswith(x):
                continue
            la = la[: len(la) - len(x)]
        if y:
            if not rb.startswith(y):
                continue
            rb = rb[len(y):]
        if not la or not rb:
            continue
        out.add((int(la[-1]), int(rb[0])))
    factor = None
    if isinstance(E, ExtensionSet) and E.factor is not None:
        factor = x + apply(tau, E.factor) + y
    return ExtensionSet(factor, out)


def _mirror(pairs: PairSet) -> PairSet:
    """The 1 <-> 3 letter swap composed with pair reversal."""
    return frozenset((4 - b, 4 - a) for a, b in pairs)


def _derive_nonordinary_family() -> frozenset[PairSet]:
    a122 = EMPTY_WORD_EXTENSIONS["c122"]
    a121 = EMPTY_WORD_EXTENSIONS["c121"]
    b1 = propagate_extensions(a122, CPRIME["c211"], "", "2").pairs
    c1_ = propagate_extensions(b1, CPRIME["c211"], "3", "2").pairs
    b2 = propagate_extensions(a121, CPRIME["c122"], "2", "1").pairs
    b2p = propagate_extensions(b2, CPRIME["c122"], "2", "").pairs
    base = {a122, a121, EMPTY_WORD_EXTENSIONS["c211"], EMPTY_WORD_EXTENSIONS["c212"],
            b1, c1_, b2, b2p}
    return frozenset(base | {_mirror(E) for E in base})


NONORDINARY_FAMILY: frozenset[PairSet] = _derive_nonordinary_family()


@dataclass(frozen=True)
class BispecialRecord:
    """One desubstitution step of an antecedent chain."""

    factor: str
    extensions: Optional[ExtensionSet]
    block: CPrimeBlock
    x: str
    y: str
    antecedent: str
    depth: int


def antecedent_chain(u: str, blocks: Iterable[CPrimeBlock]) -> tuple[BispecialRecord, ...]:
    """Desubstitute u block by block until the empty word.

    Each step strictly shortens the factor (every shape has a nonempty side),
    so the chain is finite; running out of blocks first raises ValueError.
    """
    records: list[BispecialRecord] = []
    current = u
    for depth, block in enumerate(blocks):
        if current == "":
            break
        v, x, y = desubstitute(current, block)
        if len(v) >= len(current):
            raise AssertionError("desubstitution failed to shorten the factor")
        records.append(BispecialRecord(current, None, block, x, y, v, depth))
        current = v
    if current != "":
        raise ValueError("block directive too short to reach the empty word")
    return tuple(records)


@dataclass(frozen=True)
class TreeWordAudit:
    """Result of a tree/ordinariness audit of one generated word."""

    vector: Vector3
    length: int
    maxlen: int
    nmax: int
    horizon: int
    complexity_table: tuple[int, ...]
    complexity_deviations: tuple[tuple[int, int], ...]
    bispecial_count: int
    non_ordinary: tuple[tuple[str, tuple[Pair, ...]], ...]
    outside_family: tuple[tuple[str, tuple[Pair, ...]], ...]
    tree_failures: tuple[tuple[str, tuple[Pair, ...]], ...]
    chains: tuple[tuple[str, tuple["BispecialRecord", ...]], ...] = ()

    @property
    def passed(self) -> bool:
        return not (self.complexity_deviations or self.outside_family or self.tree_failures)

    def to_json_dict(self) -> dict:
        return {
            "vector": vector_payload(self.vector),
            "L": self.length,
            "maxlen": self.maxlen,
            "horizon": self.horizon,
            "complexity_table": [[n, p] for n, p in enumerate(self.complexity_table)],
            "complexity_deviations": [[n, p] for n, p in self.complexity_deviations],
            "bispecial_count": self.bispecial_count,
            "non_ordinary_sets": [
                {"factor": f, "pairs": [list(p) for p in pairs]}
                for f, pairs in self.non_ordinary],
            "outside_family": [
                {"factor": f, "pairs": [list(p) for p in pairs]}
                for f, pairs in self.outside_family],
            "tree_failures": [
                {"factor": f, "pairs": [list(p) for p in pairs]}
                for f, pairs in self.tree_failures],
            "passed": self.passed,
        }


def audit_tree_word(v: Vector3, length: int, maxlen: int = 40, *,
                    nmax: Optional[int] = None, with_chains: bool = False,
                    eps: float = DEFAULT_EPS) -> TreeWordAudit:
    """Generate the word of v and audit its factor structure.

    Checks, for the length-`length` prefix: p(n) = 2n + 1 up to the
    stabilized horizon (factor counts that agree with the doubled prefix, up
    to nmax), every bispecial factor with |u| <= maxlen having a tree
    extension graph, and every non-ordinary extension set lying in the known
    finite family. with_chains additionally desubstitutes every bispecial
    factor down to the empty word and records the steps.
    """
    if nmax is None:
        nmax = max(maxlen + 2, 56)
    gw = generate(v, length, eps=eps)
    gw2 = generate(v, 2 * length, eps=eps)
    idx = build_index(gw.word, nmax, ext_max=min(maxlen, nmax))
    idx2 = build_index(gw2.word, nmax, ext_max=0)
    horizon = stabilized_horizon(idx.counts, idx2.counts)

    deviations = tuple((n, idx.counts[n]) for n in range(horizon + 1)
                       if idx.counts[n] != 2 * n + 1)

    blocks = chain_blocks_for(v, gw, eps=eps) if with_chains else ()
    non_ordinary = []
    outside = []
    failures = []
    chains = []
    count = 0
    for ext in idx.bispecials(maxlen):
        count += 1
        if not is_tree(ext):
            failures.append((ext.factor, ext.sorted_pairs()))
        if not is_ordinary(ext):
            non_ordinary.append((ext.factor, ext.sorted_pairs()))
            if ext.pairs not in NONORDINARY_FAMILY:
                outside.append((ext.factor, ext.sorted_pairs()))
        if with_chains:
            chains.append((ext.factor, antecedent_chain(ext.factor, blocks)))
    return TreeWordAudit(
        vector=v, length=length, maxlen=maxlen, nmax=nmax, horizon=horizon,
        complexity_table=idx.counts, complexity_deviations=deviations,
        bispecial_count=count, non_ordinary=tuple(non_ordinary),
        outside_family=tuple(outside), tree_failures=tuple(failures),
        chains=tuple(chains))


def chain_blocks_for(v: Vector3, gw: GeneratedWord, depth_margin: int = 120, *,
                     eps: float = DEFAULT_EPS) -> tuple[CPrimeBlock, ...]:
    """Recoded block directive of gw's word, extended enough for deep chains."""
    d = directive(v, gw.anchored_index + 1 + depth_margin, eps=eps)
    blocks, _ = recode_cprime(tuple(d))
    return blocks
