"""Small exact linear algebra for nonnegative 3-vectors and integer 3x3 matrices.

Vectors carry their arithmetic mode with them: either all three entries are
`fractions.Fraction` (rational mode, exact) or all three are `float` (float64
mode). Matrices always have plain Python int entries, so products can never
wrap or lose precision regardless of how long a product chain gets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union

Scalar = Union[Fraction, float]

RATIONAL = "rational"
FLOAT64 = "float64"


class DomainError(ValueError):
    """Input left the domain a routine requires (negative entry, wrong cone, ...)."""


def _coerce_entries(a, b, c) -> tuple[Scalar, Scalar, Scalar]:
    entries = (a, b, c)
    if any(isinstance(e, float) for e in entries):
        out = []
        for e in entries:
            if isinstance(e, Fraction):
                raise DomainError("cannot mix Fraction and float entries in one vector")
            out.append(float(e))
        return tuple(out)
    return tuple(Fraction(e) for e in entries)


@dataclass(frozen=True)
class Vector3:
    """Nonnegative 3-vector, either all-Fraction or all-float64.

    Plain ints are coerced to Fraction unless a float entry is present, in
    which case everything becomes float64. Negative or non-finite entries are
    rejected at construction.
    """

    x1: Scalar
    x2: Scalar
    x3: Scalar

    def __init__(self, x1, x2, x3):
        e1, e2, e3 = _coerce_entries(x1, x2, x3)
        for e in (e1, e2, e3):
            if isinstance(e, float) and not math.isfinite(e):
                raise DomainError(f"non-finite entry {e!r}")
            if e < 0:
                raise DomainError(f"negative entry {e!r}")
        # normalize -0.0 to +0.0 so serializations stay deterministic
        if isinstance(e1, float):
            e1, e2, e3 = e1 + 0.0, e2 + 0.0, e3 + 0.0
        object.__setattr__(self, "x1", e1)
        object.__setattr__(self, "x2", e2)
        object.__setattr__(self, "x3", e3)

    @classmethod
    def exact(cls, a, b, c) -> "Vector3":
        """Rational-mode vector; accepts ints, Fractions, or 'p/q' strings."""
        return cls(Fraction(a), Fraction(b), Fraction(c))

    @classmethod
    def floats(cls, a: float, b: float, c: float) -> "Vector3":
        return cls(float(a), float(b), float(c))

    @property
    def mode(self) -> str:
        return RATIONAL if isinstance(self.x1, Fraction) else FLOAT64

    @property
    def is_exact(self) -> bool:
        return self.mode == RATIONAL

    def entries(self) -> tuple[Scalar, Scalar, Scalar]:
        return (self.x1, self.x2, self.x3)

    def __iter__(self) -> Iterator[Scalar]:
        return iter(self.entries())

    def replace(self, a, b, c) -> "Vector3":
        """New vector with the same mode contract, entries as given."""
        return Vector3(a, b, c)


def one_norm(v: Vector3) -> Scalar:
    """Sum of entries; with nonnegative entries this is the 1-norm."""
    return v.x1 + v.x2 + v.x3


def vector_payload(v: Vector3) -> list:
    """JSON-ready entries: 'p/q' strings in rational mode, floats otherwise."""
    if v.is_exact:
        return [str(e) for e in v.entries()]
    return [float(e) for e in v.entries()]


@dataclass(frozen=True)
class IntMatrix3:
    """3x3 integer matrix, row-major tuple of tuples."""

    rows: tuple[tuple[int, int, int], tuple[int, int, int], tuple[int, int, int]]

    def __init__(self, rows):
        rows = tuple(tuple(int(e) for e in row) for row in rows)
        if len(rows) != 3 or any(len(r) != 3 for r in rows):
            raise ValueError("expected a 3x3 row-major layout")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def identity(cls) -> "IntMatrix3":
        return cls(((1, 0, 0), (0, 1, 0), (0, 0, 1)))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.rows[i][j]

    def __matmul__(self, other: "IntMatrix3") -> "IntMatrix3":
        return mat_mul(self, other)

    def transpose(self) -> "IntMatrix3":
        r = self.rows
        return IntMatrix3(tuple(tuple(r[i][j] for i in range(3)) for j in range(3)))

    def det(self) -> int:
        r = self.rows
        return (r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1])
                - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
                + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0]))

    def apply(self, v: Vector3) -> Vector3:
        """Matrix-vector product m @ v, staying in v's arithmetic mode."""
        r = self.rows
        e = v.entries()
        out = tuple(r[i][0] * e[0] + r[i][1] * e[1] + r[i][2] * e[2] for i in range(3))
        return Vector3(*out)

    def column(self, j: int) -> tuple[int, int, int]:
        return tuple(self.rows[i][j] for i in range(3))

    def entrywise_positive(self) -> bool:
        return all(e > 0 for row in self.rows for e in row)

    def entrywise_nonnegative(self) -> bool:
        return all(e >= 0 for row in self.rows for e in row)


def mat_mul(a: IntMatrix3, b: IntMatrix3) -> IntMatrix3:
    ar, br = a.rows, b.rows
    return IntMatrix3(tuple(
        tuple(ar[i][0] * br[0][j] + ar[i][1] * br[1][j] + ar[i][2] * br[2][j]
              for j in range(3))
        for i in range(3)))


def _adjugate(m: IntMatrix3) -> IntMatrix3:
    r = m.rows
    c = [[0, 0, 0], [0, 0, 0], [0, 0, 0]]
    for i in range(3):
        for j in range(3):
            sub = [r[p][q] for p in range(3) if p != i for q in range(3) if q != j]
            minor = sub[0] * sub[3] - sub[1] * sub[2]
            c[i][j] = minor if (i + j) % 2 == 0 else -minor
    # adjugate is the transpose of the cofactor matrix
    return IntMatrix3(tuple(tuple(c[j][i] for j in range(3)) for i in range(3)))


def apply_inverse(m: IntMatrix3, v: Vector3) -> Vector3:
    """Solve m @ y = v for a unimodular m, exactly in rational mode.

    Requires det(m) in {-1, +1}. A negative entry in the result means v was
    not in the cone m spans, which is reported as a DomainError rather than
    returned.
    """
    d = m.det()
    if d not in (-1, 1):
        raise DomainError(f"matrix is not unimodular (det={d})")
    adj = _adjugate(m)
    e = v.entries()
    out = []
    for i in range(3):
        num = adj.rows[i][0] * e[0] + adj.rows[i][1] * e[1] + adj.rows[i][2] * e[2]
        out.append(num if d == 1 else -num)
    if any(val < 0 for val in out):
        raise DomainError("inverse image has a negative entry; vector outside the branch cone")
    return Vector3(*out)
