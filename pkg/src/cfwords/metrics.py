"""Numerical measurements: Lyapunov exponents and balance tables.

The Lyapunov estimator runs a fixed batch of walkers in lock step (numpy
rows) and accumulates the growth of two orthonormalized dual vectors under
the transpose branch matrices: v <- M(x_k)^T v multiplies up the transpose
of the forward product M(x_0) M(x_1) ... M(x_{k-1}), whose singular values
grow at the same exponential rates. The top two rates come out of periodic
Gram-Schmidt log norms; the third is -(theta1 + theta2) because the branch
matrices are unimodular, so the exponents sum to zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .mcf import CASSAIGNE, SELMER

CONVENTION = "transpose-cocycle gram-schmidt; theta3 by zero-sum"


@dataclass(frozen=True)
class LyapunovEstimate:
    algorithm: str
    seed: int
    n_iter: int
    steps_accumulated: int
    renorm: int
    walkers: int
    burn_in: int
    theta1: float
    theta2: float
    theta3: float
    restarts: int
    convention: str = CONVENTION

    @property
    def contraction_ratio(self) -> float:
        """1 - theta2/theta1, the strong-convergence exponent of the algorithm."""
        return 1.0 - self.theta2 / self.theta1

    def to_json_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "seed": self.seed,
            "n_iter": self.n_iter,
            "steps_accumulated": self.steps_accumulated,
            "renorm": self.renorm,
            "walkers": self.walkers,
            "burn_in": self.burn_in,
            "theta1": self.theta1,
            "theta2": self.theta2,
            "theta3": self.theta3,
            "restarts": self.restarts,
            "convention": self.convention,
        }


def _fresh_points(rng: np.random.Generator, k: int, algorithm: str):
    e = rng.exponential(size=(k, 3))
    x = e / e.sum(axis=1, keepdims=True)
    if algorithm == SELMER:
        # bridge uniform simplex points into the semi-sorted cone, renormalized
        y0 = x[:, 0] + x[:, 1] + x[:, 2]
        y1 = x[:, 0] + x[:, 1]
        y2 = x[:, 1] + x[:, 2]
        s = y0 + y1 + y2
        return y0 / s, y1 / s, y2 / s
    return x[:, 0].copy(), x[:, 1].copy(), x[:, 2].copy()


def lyapunov(seed: int, n_iter: int, renorm: int = 10, algorithm: str = CASSAIGNE, *,
             walkers: int = 2048, burn_in: int = 256) -> LyapunovEstimate:
    """Top two Lyapunov exponents of the chosen algorithm's matrix cocycle.

    n_iter is the total accumulated step budget, split over the walker batch;
    per-walker steps are rounded up to whole renorm periods, so the actual
    accumulated total (reported on the estimate) is at least n_iter. Same
    seed, same parameters: bit-identical output.
    """
    if n_iter < 10**5:
        raise ValueError("n_iter below 10^5 gives meaningless estimates; refusing")
    if not 1 <= renorm <= 100:
        raise ValueError("renorm period must lie in [1, 100]")
    if algorithm not in (CASSAIGNE, SELMER):
        raise ValueError(f"unknown algorithm {algorithm!r}")
    if walkers < 1:
        raise ValueError("need at least one walker")

    rng = np.random.default_rng(seed)
    per_walker = -(-n_iter // walkers)  # ceil
    periods = -(-per_walker // renorm)
    steps = periods * renorm

    x0, x1, x2 = _fresh_points(rng, walkers, algorithm)
    u = rng.normal(size=(2, 3, walkers))
    acc1 = np.zeros(walkers)
    acc2 = np.zeros(walkers)
    restarts = 0

    def gram_schmidt(accumulate: bool) -> None:
        nonlocal acc1, acc2
        n1 = np.sqrt((u[0] * u[0]).sum(axis=0))
        u[0] /= n1
        proj = (u[1] * u[0]).sum(axis=0)
        u[1] -= proj * u[0]
        n2 = np.sqrt((u[1] * u[1]).sum(axis=0))
        u[1] /= n2
        if accumulate:
            acc1 += np.log(n1)
            acc2 += np.log(n2)

    gram_schmidt(False)
    # burn-in rounded to whole periods so accumulation stays aligned
    burn_steps = -(-burn_in // renorm) * renorm if burn_in > 0 else 0
    accumulated = 0
    for t in range(burn_steps + steps):
        if algorithm == CASSAIGNE:
            b = x0 >= x2
            n0 = np.where(b, x0 - x2, x1)
            n1_ = np.where(b, x2, x0)
            n2_ = np.where(b, x1, x2 - x0)
            v0 = np.where(b, u[:, 0], u[:, 1])
            v1 = u[:, 0] + u[:, 2]
            v2 = np.where(b, u[:, 1], u[:, 2])
        else:
            b = x1 >= x2
            n0 = np.where(b, x1, x2)
            n1_ = np.where(b, x0 - x2, x1)
            n2_ = np.where(b, x2, x0 - x1)
            v0 = np.where(b, u[:, 1], u[:, 2])
            v1 = np.where(b, u[:, 0], u[:, 0] + u[:, 1])
            v2 = np.where(b, u[:, 0] + u[:, 2], u[:, 0])
        s = n0 + n1_ + n2_
        x0, x1, x2 = n0 / s, n1_ / s, n2_ / s
        u[:, 0], u[:, 1], u[:, 2] = v0, v1, v2
        bad = (x0 < 1e-14) | (x1 < 1e-14) | (x2 < 1e-14)
        if bad.any():
            k = int(bad.sum())
            restarts += k
            f0, f1, f2 = _fresh_points(rng, k, algorithm)
            x0[bad], x1[bad], x2[bad] = f0, f1, f2
        if (t + 1) % renorm == 0:
            collecting = t >= burn_steps
            gram_schmidt(collecting)
            if collecting:
                accumulated += renorm * walkers

    theta1 = float(acc1.sum() / accumulated)
    theta2 = float(acc2.sum() / accumulated)
    return LyapunovEstimate(
        algorithm=algorithm, seed=seed, n_iter=n_iter,
        steps_accumulated=accumulated, renorm=renorm, walkers=walkers,
        burn_in=burn_steps, theta1=theta1, theta2=theta2,
        theta3=-(theta1 + theta2), restarts=restarts)


@dataclass(frozen=True)
class BalanceTable:
    """Per-letter balance B_i(n) = max - min of letter counts over windows."""

    word_length: int
    nmax: int
    b1: tuple[int, ...]
    b2: tuple[int, ...]
    b3: tuple[int, ...]

    def letter(self, i: int) -> tuple[int, ...]:
        return (self.b1, self.b2, self.b3)[i - 1]

    @property
    def overall(self) -> int:
        return max(max(self.b1), max(self.b2), max(self.b3))

    def to_csv(self) -> str:
        lines = ["n,B_1(n),B_2(n),B_3(n)"]
        for k in range(self.nmax):
            lines.append(f"{k + 1},{self.b1[k]},{self.b2[k]},{self.b3[k]}")
        return "\n".join(lines) + "\n"

    def to_json_dict(self) -> dict:
        return {
            "word_length": self.word_length,
            "nmax": self.nmax,
            "B1": list(self.b1),
            "B2": list(self.b2),
            "B3": list(self.b3),
            "overall": self.overall,
        }


def balance(w: str, nmax: int) -> BalanceTable:
    """Balance table of w for window lengths 1..nmax.

    B_i(n) is the spread (max minus min) of the number of occurrences of
    letter i across all length-n windows of w; a word is C-balanced when
    every B_i(n) stays at most C.
    """
    if nmax < 1:
        raise ValueError("nmax must be at least 1")
    if len(w) < nmax:
        raise ValueError(f"need |w| >= nmax = {nmax}, got {len(w)}")
    codes = np.frombuffer(w.encode("ascii"), dtype=np.uint8)
    if ((codes < 49) | (codes > 51)).any():
        bad = next(ch for ch in w if ch not in "123")
        raise ValueError(f"letter {bad!r} outside alphabet 123")
    out = []
    for letter in (49, 50, 51):
        pref = np.concatenate([[0], np.cumsum(codes == letter, dtype=np.int64)])
        col = []
        for n in range(1, nmax + 1):
            win = pref[n:] - pref[:-n]
            col.append(int(win.max()) - int(win.min()))
        out.append(tuple(col))
    return BalanceTable(len(w), nmax, out[0], out[1], out[2])
