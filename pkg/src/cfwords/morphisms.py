"""Substitutions on the alphabet {1, 2, 3} and the two-step block recoding.

Words are plain Python strings over the characters '1', '2', '3'. A morphism
is determined by its three letter images. The two generating substitutions
mirror the continued fraction branches:

    c1: 1 -> 1,  2 -> 13, 3 -> 2        c2: 1 -> 2,  2 -> 13, 3 -> 3

Neither c1 nor c2 is left or right proper, but every product of two or three
of them appearing in the block recoding is, which is what makes factors of
the generated words decodable. The six blocks (labelled by their branch
words) are:

    c11 = c1 c1    c22 = c2 c2    c122 = c1 c2 c2
    c211 = c2 c1 c1    c121 = c1 c2 c1    c212 = c2 c1 c2

A left proper block starts every image with the same letter and its image
set is a suffix code; a right proper block ends every image with the same
letter and its image set is a prefix code. Each block carries the finite
list of boundary shapes (x, y) such that a bispecial factor u of a word
w = x' tau(w') y' decomposes as u = x tau(v) y for a bispecial factor v of
the preimage word; `desubstitute` inverts that decomposition.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .exactlin import IntMatrix3

ALPHABET = "123"
_INDEX = {"1": 0, "2": 1, "3": 2}


class NoDecodingError(ValueError):
    """The word does not decompose over the block's images with any admitted shape."""


class AmbiguousDecodingError(ValueError):
    """Two boundary shapes both decode the word; callers treat this as a hard flag."""


@dataclass(frozen=True)
class Morphism:
    """Substitution given by the images of '1', '2', '3' (in that order)."""

    images: tuple[str, str, str]
    name: Optional[str] = None

    def __init__(self, im1: str, im2: str, im3: str, name: Optional[str] = None):
        for im in (im1, im2, im3):
            if not im or any(ch not in ALPHABET for ch in im):
                raise ValueError(f"image {im!r} is not a nonempty word over {ALPHABET}")
        object.__setattr__(self, "images", (im1, im2, im3))
        object.__setattr__(self, "name", name)

    def image(self, letter: str) -> str:
        return self.images[_INDEX[letter]]

    def __call__(self, word: str) -> str:
        return apply(self, word)

    def to_literal(self) -> str:
        return ",".join(f"{a}>{im}" for a, im in zip(ALPHABET, self.images))

    @classmethod
    def from_literal(cls, text: str, name: Optional[str] = None) -> "Morphism":
        """Parse the '1>12,2>132,3>2' form; all three letters must be present."""
        imgs: dict[str, str] = {}
        for part in text.split(","):
            part = part.strip()
            if ">" not in part:
                raise ValueError(f"bad morphism literal component {part!r}")
            letter, _, image = part.partition(">")
            letter, image = letter.strip(), image.strip()
            if letter not in ALPHABET or letter in imgs:
                raise ValueError(f"bad or repeated letter {letter!r} in morphism literal")
            imgs[letter] = image
        if set(imgs) != set(ALPHABET):
            raise ValueError("morphism literal must define images for 1, 2 and 3")
        return cls(imgs["1"], imgs["2"], imgs["3"], name=name)


def apply(m: Morphism, word: str) -> str:
    imgs = m.images
    try:
        return "".join(imgs[_INDEX[ch]] for ch in word)
    except KeyError as exc:
        raise ValueError(f"letter {exc.args[0]!r} outside alphabet {ALPHABET}") from None


def compose(outer: Morphism, inner: Morphism) -> Morphism:
    """Morphism acting as outer after inner: (outer . inner)(w) = outer(inner(w))."""
    return Morphism(*(apply(outer, im) for im in inner.images))


def compose_all(ms: Sequence[Morphism]) -> Morphism:
    """Left-to-right product: compose_all([a, b, c]) = a . b . c."""
    if not ms:
        return Morphism("1", "2", "3", name="id")
    out = ms[0]
    for m in ms[1:]:
        out = compose(out, m)
    return out


def incidence(m: Morphism) -> IntMatrix3:
    """Abelianization: column j counts the letters of the image of letter j."""
    return IntMatrix3(tuple(
        tuple(m.images[j].count(ALPHABET[i]) for j in range(3))
        for i in range(3)))


c1 = Morphism("1", "13", "2", name="c1")
c2 = Morphism("2", "13", "3", name="c2")
s1 = Morphism("2", "1", "31", name="s1")
s2 = Morphism("3", "12", "1", name="s2")
z_left = Morphism("12", "123", "13", name="z_left")
z_right = Morphism("21", "231", "31", name="z_right")

BRANCH_MORPHISMS = {"cassaigne": {1: c1, 2: c2}, "selmer": {1: s1, 2: s2}}


@dataclass(frozen=True)
class CPrimeBlock:
    """One block of the two-step recoding, with its decoding data.

    `shapes` lists the admissible boundary pairs (x, y) in the order they are
    tried during desubstitution; `proper_side` is "left" or "right" and
    `proper_letter` the shared first (resp. last) letter of the images.
    """

    label: str
    branch_labels: tuple[int, ...]
    morphism: Morphism
    proper_side: str
    proper_letter: str
    shapes: tuple[tuple[str, str], ...]

    def __str__(self) -> str:
        return self.label


def _proper_side(m: Morphism) -> tuple[str, str]:
    firsts = {im[0] for im in m.images}
    lasts = {im[-1] for im in m.images}
    if len(firsts) == 1:
        return "left", next(iter(firsts))
    if len(lasts) == 1:
        return "right", next(iter(lasts))
    raise ValueError(f"morphism {m.to_literal()} is neither left nor right proper")


def _block(label: str, shapes: tuple[tuple[str, str], ...]) -> CPrimeBlock:
    branch_labels = tuple(int(ch) for ch in label[1:])
    morphism = compose_all([c1 if b == 1 else c2 for b in branch_labels])
    morphism = Morphism(*morphism.images, name=label)
    side, letter = _proper_side(morphism)
    return CPrimeBlock(label, branch_labels, morphism, side, letter, shapes)


CPRIME: dict[str, CPrimeBlock] = {
    b.label: b for b in (
        _block("c11", (("", "1"),)),
        _block("c22", (("3", ""),)),
        _block("c122", (("2", "1"), ("2", ""))),
        _block("c211", (("3", "2"), ("", "2"))),
        _block("c121", (("2", "1"), ("2", "13"), ("", "1"), ("", "13"))),
        _block("c212", (("3", "2"), ("13", "2"), ("3", ""), ("13", ""))),
    )
}


def recode_cprime(labels: Sequence[int]) -> tuple[tuple[CPrimeBlock, ...], tuple[int, ...]]:
    """Greedy left-to-right recoding of a branch itinerary into blocks.

    Two equal labels form a two-letter block; otherwise three labels form one
    of the four three-letter blocks. A leftover of fewer than three labels
    that forms no block is returned as the tail (possibly empty).
    """
    labels = tuple(int(b) for b in labels)
    if any(b not in (1, 2) for b in labels):
        raise ValueError("branch labels must be 1 or 2")
    blocks: list[CPrimeBlock] = []
    i = 0
    n = len(labels)
    while True:
        if i + 2 <= n and labels[i] == labels[i + 1]:
            blocks.append(CPRIME[f"c{labels[i]}{labels[i + 1]}"])
            i += 2
        elif i + 3 <= n and labels[i] != labels[i + 1]:
            blocks.append(CPRIME[f"c{labels[i]}{labels[i + 1]}{labels[i + 2]}"])
            i += 3
        else:
            break
    return tuple(blocks), labels[i:]


def _decode_exact(core: str, block: CPrimeBlock) -> Optional[str]:
    """Parse core as a concatenation of block images, or None.

    Right proper blocks have prefix-code images (left-to-right scan), left
    proper blocks suffix-code images (right-to-left scan); in both cases at
    most one image can match at each position, so the scan never backtracks.
    """
    images = block.morphism.images
    letters: list[str] = []
    if block.proper_side == "right":
        pos = 0
        while pos < len(core):
            for k, im in enumerate(images):
                if core.startswith(im, pos):
                    letters.append(ALPHABET[k])
                    pos += len(im)
                    break
            else:
                return None
        return "".join(letters)
    pos = len(core)
    while pos > 0:
        for k, im in enumerate(images):
            if pos >= len(im) and core.startswith(im, pos - len(im)):
                letters.append(ALPHABET[k])
                pos -= len(im)
                break
        else:
            return None
    return "".join(reversed(letters))


def desubstitute(u: str, block: CPrimeBlock) -> tuple[str, str, str]:
    """Invert u = x . tau(v) . y for the block's morphism tau.

    Shapes are tried in the block's listed order; exactly one must succeed.
    Zero successes raise NoDecodingError, two raise AmbiguousDecodingError
    (the shape tables make two successes impossible for factors of generated
    words, so an ambiguity indicates the input was not such a factor).
    """
    if any(ch not in ALPHABET for ch in u):
        raise ValueError(f"word {u!r} contains letters outside {ALPHABET}")
    found: list[tuple[str, str, str]] = []
    for x, y in block.shapes:
        if not u.startswith(x):
            continue
        core = u[len(x):]
        if y:
            if not core.endswith(y) or len(core) < len(y):
                continue
            core = core[: len(core) - len(y)]
        v = _decode_exact(core, block)
        if v is not None:
            found.append((v, x, y))
    if not found:
        raise NoDecodingError(f"{u!r} has no decomposition over block {block.label}")
    if len(found) > 1:
        raise AmbiguousDecodingError(
            f"{u!r} decodes under {len(found)} shapes of block {block.label}: {found!r}")
    return found[0]
