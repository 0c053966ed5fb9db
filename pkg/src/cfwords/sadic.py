"""Words generated by composing branch substitutions along an itinerary.

The word attached to a vector x is the limit of sigma_0 sigma_1 ... sigma_n
applied to '1', where sigma_k picks c1 or c2 according to the k-th branch
label of x's orbit. Finite compositions are not automatically prefixes of the
later ones (two leading c2 steps give "2" then "13"), so the generator only
trusts a composition at anchored indices m where label m+1 is 1 and label
m+2 is 2: there sigma_{m+1} sigma_{m+2}(...) starts with the letter 1, which
pins sigma_0..sigma_m('1') as a proper prefix of every later composition.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .exactlin import IntMatrix3, Vector3, mat_mul
from .mcf import (BRANCH_MATRICES, CASSAIGNE, DEFAULT_EPS, DirectiveSequence,
                  orbit, _check_algorithm)
from .morphisms import Morphism, c1, c2, compose

DEFAULT_RUN_GUARD = 64
_MAX_GENERATION_STEPS = 100_000


class NonConvergentError(RuntimeError):
    """Directive shows no usable growth: generation cannot reach the requested length."""

    def __init__(self, message: str, labels: tuple[int, ...], partial: str):
        self.labels = labels
        self.partial = partial
        super().__init__(message)


@dataclass(frozen=True)
class GeneratedWord:
    """A requested-length prefix of the limit word, with provenance."""

    word: str
    length: int
    directive: DirectiveSequence
    anchored_index: int
    converged: bool = True

    def __str__(self) -> str:
        return self.word


def directive(v: Vector3, n: int, algorithm: str = CASSAIGNE, *,
              eps: float = DEFAULT_EPS) -> DirectiveSequence:
    """First n branch labels of v's orbit (float orbits renormalized)."""
    _check_algorithm(algorithm)
    labels = tuple(st.branch for st in orbit(v, n, algorithm, eps=eps, renormalize=True))
    return DirectiveSequence(algorithm, labels, v)


def generate(v: Vector3, length: int, *, run_guard: int = DEFAULT_RUN_GUARD,
             eps: float = DEFAULT_EPS) -> GeneratedWord:
    """Length-`length` prefix of the word generated by v's itinerary.

    Walks the orbit lazily, composing one substitution per step, and emits as
    soon as an anchored composition is long enough. Raises NonConvergentError
    when `run_guard` consecutive equal labels arrive before the prefix is
    long enough (the composition's first image stalls or grows only linearly
    on such runs, which is the finite signature of a degenerate itinerary).
    """
    if length < 1:
        raise ValueError("requested length must be positive")
    labels: list[int] = []
    gen = orbit(v, _MAX_GENERATION_STEPS + 3, CASSAIGNE, eps=eps, renormalize=True)

    def need(k: int) -> None:
        while len(labels) <= k:
            labels.append(next(gen).branch)

    imgs = ("1", "2", "3")
    run = 0
    for m in range(_MAX_GENERATION_STEPS):
        need(m + 2)
        sig = labels[m]
        run = run + 1 if m > 0 and labels[m - 1] == sig else 1
        # imgs = images of sigma_0..sigma_m; composing with c1 or c2 reuses
        # the previous images, so each step allocates one concatenation
        if sig == 1:
            imgs = (imgs[0], imgs[0] + imgs[2], imgs[1])
        else:
            imgs = (imgs[1], imgs[0] + imgs[2], imgs[2])
        done = len(imgs[0]) >= length
        if run >= run_guard and not done:
            raise NonConvergentError(
                f"{run} consecutive '{sig}' labels before reaching length {length}; "
                "itinerary looks degenerate", tuple(labels[: m + 1]), imgs[0][:length])
        if done and labels[m + 1] == 1 and labels[m + 2] == 2:
            d = DirectiveSequence(CASSAIGNE, tuple(labels[: m + 1]), v)
            return GeneratedWord(imgs[0][:length], length, d, m)
    raise NonConvergentError(
        f"no anchored prefix of length {length} within {_MAX_GENERATION_STEPS} steps",
        tuple(labels), imgs[0][:length])


def shifted_word(v: Vector3, k: int, length: int, *,
                 eps: float = DEFAULT_EPS) -> GeneratedWord:
    """Word generated from the k-th orbit iterate (the k-fold shifted system)."""
    if k < 0:
        raise ValueError("shift count must be nonnegative")
    w = v
    for st in orbit(v, k, CASSAIGNE, eps=eps, renormalize=not v.is_exact):
        w = st.vector_after
    if not w.is_exact:
        s = w.x1 + w.x2 + w.x3
        if s > 0:
            w = w.replace(w.x1 / s, w.x2 / s, w.x3 / s)
    return generate(w, length, eps=eps)


def generation_morphism(d: Sequence[int]) -> Morphism:
    """Composition of the branch substitutions along the labels, left to right."""
    out = Morphism("1", "2", "3", name="id")
    for b in d:
        out = compose(out, c1 if b == 1 else c2)
    return out


@dataclass(frozen=True)
class PrimitivityReport:
    """Finite-prefix evidence about an itinerary's primitivity.

    `degenerate_tail_start` is the earliest index from which the remaining
    labels factor exactly into equal-label pairs with both pair kinds
    present; a single-label run also pairs up but is reported separately via
    `trailing_run` (long runs are routine near-degeneracy events in healthy
    itineraries, and the generation guard owns that failure mode).
    `positive_window` is the longest window whose branch-matrix product is
    entrywise positive, which witnesses primitivity over that window.
    """

    labels: tuple[int, ...]
    degenerate_tail_start: Optional[int]
    positive_window: Optional[tuple[int, int]]
    window_product: Optional[IntMatrix3]
    trailing_run: tuple[int, int]

    @property
    def consistent_with_primitive(self) -> bool:
        return self.positive_window is not None and self.degenerate_tail_start is None


def primitivity_window_check(d: Sequence[int]) -> PrimitivityReport:
    labels = tuple(int(b) for b in d)
    if any(b not in (1, 2) for b in labels):
        raise ValueError("branch labels must be 1 or 2")
    n = len(labels)

    tail_start: Optional[int] = None
    for r in range(n - 3):
        rest = labels[r:]
        if len(rest) % 2:
            continue
        pairs = [rest[i: i + 2] for i in range(0, len(rest), 2)]
        if all(p[0] == p[1] for p in pairs) and len({p[0] for p in pairs}) == 2:
            tail_start = r
            break

    if labels:
        last = labels[-1]
        run = 1
        while run < n and labels[-1 - run] == last:
            run += 1
        trailing = (last, run)
    else:
        trailing = (0, 0)

    mats = BRANCH_MATRICES[CASSAIGNE]
    window = None
    product = None
    acc = IntMatrix3.identity()
    # suffix products: positivity of nonnegative invertible products is
    # monotone under extension, so the longest positive window ends at n
    best: Optional[int] = None
    for i in range(n - 1, -1, -1):
        acc = mat_mul(mats[labels[i]], acc)
        if acc.entrywise_positive():
            best = i
            product = acc
    if best is not None:
        window = (best, n)
        # recompute the product over exactly [best, n); acc kept growing past it
        product = IntMatrix3.identity()
        for i in range(best, n):
            product = mat_mul(product, mats[labels[i]])
    return PrimitivityReport(labels, tail_start, window, product, trailing)


def letter_frequencies(w: str) -> Vector3:
    """Exact letter frequency vector (|w|_1, |w|_2, |w|_3) / |w|."""
    if not w:
        raise ValueError("word must be nonempty")
    n = len(w)
    counts = [w.count(ch) for ch in "123"]
    if sum(counts) != n:
        bad = next(ch for ch in w if ch not in "123")
        raise ValueError(f"letter {bad!r} outside alphabet 123")
    return Vector3(Fraction(counts[0], n), Fraction(counts[1], n), Fraction(counts[2], n))
