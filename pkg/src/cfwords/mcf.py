"""Two ternary continued fraction maps and their matrix cocycles.

The first map acts on the nonnegative cone: when x1 >= x3 it sends
(x1, x2, x3) to (x1 - x3, x3, x2), otherwise to (x2, x1, x3 - x1). The second
acts on the semi-sorted cone Gamma = {max(x2, x3) <= x1 <= x2 + x3}: when
x2 >= x3 it sends (x1, x2, x3) to (x2, x1 - x3, x3), otherwise to
(x3, x2, x1 - x2). Ties pick branch 1 in both maps.

Each step divides out one of two unimodular nonnegative matrices, so the
original vector is recovered as the accumulated product times the iterate.
Left-multiplying by the bridge matrix Z conjugates the first map's orbits to
the second's with a one-step shift (the Z-image of x steps to the Z-image of
the already-stepped x).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

from .exactlin import DomainError, IntMatrix3, Vector3, mat_mul, one_norm

CASSAIGNE = "cassaigne"
SELMER = "selmer"

C1 = IntMatrix3(((1, 1, 0), (0, 0, 1), (0, 1, 0)))
C2 = IntMatrix3(((0, 1, 0), (1, 0, 0), (0, 1, 1)))
S1 = IntMatrix3(((0, 1, 1), (1, 0, 0), (0, 0, 1)))
S2 = IntMatrix3(((0, 1, 1), (0, 1, 0), (1, 0, 0)))
Z = IntMatrix3(((1, 1, 1), (1, 1, 0), (0, 1, 1)))

BRANCH_MATRICES = {
    CASSAIGNE: {1: C1, 2: C2},
    SELMER: {1: S1, 2: S2},
}

DEFAULT_EPS = 1e-13


class NonExpansiveError(RuntimeError):
    """An orbit entry fell strictly between 0 and eps: float underflow, not structure."""

    def __init__(self, step: int, entry_index: int, value: float):
        self.step = step
        self.entry_index = entry_index
        self.value = value
        super().__init__(
            f"entry x{entry_index + 1} = {value!r} is positive but below eps "
            f"at step {step}; orbit numerically degenerate")


Branch = int  # 1 or 2


@dataclass(frozen=True)
class OrbitStep:
    """One application of a continued fraction map."""

    vector_before: Vector3
    branch: Branch
    vector_after: Vector3


@dataclass(frozen=True)
class DirectiveSequence:
    """Symbolic itinerary of a vector: the branch labels its orbit visits.

    Behaves like an immutable sequence of ints from {1, 2}. str() gives the
    compact digit form, e.g. "21211".
    """

    algorithm: str
    labels: tuple[int, ...]
    source: Optional[Vector3] = None

    def __len__(self) -> int:
        return len(self.labels)

    def __getitem__(self, i):
        return self.labels[i]

    def __iter__(self) -> Iterator[int]:
        return iter(self.labels)

    def __str__(self) -> str:
        return "".join(str(b) for b in self.labels)


def classify_cassaigne(v: Vector3) -> Branch:
    """Branch the first map takes at v (1 when x1 >= x3)."""
    return 1 if v.x1 >= v.x3 else 2


def step_cassaigne(v: Vector3) -> OrbitStep:
    if v.x1 >= v.x3:
        return OrbitStep(v, 1, v.replace(v.x1 - v.x3, v.x3, v.x2))
    return OrbitStep(v, 2, v.replace(v.x2, v.x1, v.x3 - v.x1))


def in_selmer_cone(v: Vector3) -> bool:
    """Membership in Gamma; float mode tolerates ~1e-9 relative boundary noise."""
    lo, hi = max(v.x2, v.x3), v.x2 + v.x3
    if v.is_exact:
        return lo <= v.x1 <= hi
    slack = 1e-9 * (one_norm(v) or 1.0)
    return lo - slack <= v.x1 <= hi + slack


def classify_selmer(v: Vector3) -> Branch:
    """Branch the second map takes at v (1 when x2 >= x3); v must lie in Gamma."""
    if not in_selmer_cone(v):
        raise DomainError(f"vector {v.entries()} outside the semi-sorted cone")
    return 1 if v.x2 >= v.x3 else 2


def step_selmer(v: Vector3) -> OrbitStep:
    branch = classify_selmer(v)
    if branch == 1:
        return OrbitStep(v, 1, v.replace(v.x2, v.x1 - v.x3, v.x3))
    return OrbitStep(v, 2, v.replace(v.x3, v.x2, v.x1 - v.x2))


_STEP = {CASSAIGNE: step_cassaigne, SELMER: step_selmer}


def _check_algorithm(algorithm: str) -> None:
    if algorithm not in _STEP:
        raise ValueError(f"unknown algorithm {algorithm!r}")


def project(v: Vector3) -> Vector3:
    """Scale to 1-norm 1; exact in rational mode."""
    s = one_norm(v)
    if s == 0:
        raise DomainError("cannot project the zero vector")
    return v.replace(v.x1 / s, v.x2 / s, v.x3 / s)


def _guard(v: Vector3, step: int, eps: float) -> None:
    if eps <= 0 or v.is_exact:
        return
    scale = one_norm(v)
    if scale == 0:
        return
    bound = eps * scale
    for i, e in enumerate(v.entries()):
        if 0 < e < bound:
            raise NonExpansiveError(step, i, e)


def orbit(v: Vector3, n: int, algorithm: str = CASSAIGNE, *,
          eps: float = DEFAULT_EPS, renormalize: bool = False) -> Iterator[OrbitStep]:
    """Yield n orbit steps. Float iterates may be renormalized to 1-norm 1.

    Renormalization never changes branch choices (both maps commute with
    scaling), so itineraries from renormalized and raw orbits agree.
    """
    _check_algorithm(algorithm)
    if n < 0:
        raise ValueError("step count must be nonnegative")
    step_fn = _STEP[algorithm]
    for k in range(n):
        st = step_fn(v)
        v = st.vector_after
        _guard(v, k, eps)
        yield st
        if renormalize and not v.is_exact:
            s = one_norm(v)
            if s > 0:
                v = v.replace(v.x1 / s, v.x2 / s, v.x3 / s)


def orbit_steps(v: Vector3, n: int, algorithm: str = CASSAIGNE, *,
                eps: float = DEFAULT_EPS) -> list[OrbitStep]:
    """The first n steps as a list, raw iterates (no renormalization)."""
    return list(orbit(v, n, algorithm, eps=eps))


def cocycle(v: Vector3, n: int, algorithm: str = CASSAIGNE, *,
            eps: float = DEFAULT_EPS) -> tuple[IntMatrix3, DirectiveSequence]:
    """Accumulated branch-matrix product over n steps, plus the itinerary.

    The product M_n = M(b_0) @ M(b_1) @ ... @ M(b_{n-1}) recovers the start:
    M_n applied to the n-th iterate equals v (exactly in rational mode).
    Matrix accumulation is integer-exact; float iterates are renormalized
    every step so long runs cannot underflow.
    """
    _check_algorithm(algorithm)
    mats = BRANCH_MATRICES[algorithm]
    acc = IntMatrix3.identity()
    labels = []
    for st in orbit(v, n, algorithm, eps=eps, renormalize=True):
        labels.append(st.branch)
        acc = mat_mul(acc, mats[st.branch])
    return acc, DirectiveSequence(algorithm, tuple(labels), v)


def conjugate_to_selmer(v: Vector3) -> Vector3:
    """Bridge a nonnegative-cone vector into Gamma: left-multiply by Z."""
    w = Z.apply(v)
    if not in_selmer_cone(w):
        raise DomainError("bridge image unexpectedly outside the semi-sorted cone")
    return w
