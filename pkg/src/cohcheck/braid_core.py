"""Permutations, braid words, and the word problem in the braid groups B_n.

Conventions used throughout the package:

- Permutations are 0-indexed tuples in one-line image notation: p[i] is the
  final position of the strand that starts at position i. Composition is
  function composition, compose_perm(p, q)[i] = p[q[i]].
- A braid word composes the same way: in a word written left to right, the
  rightmost letter is applied first. Positive sigma_i passes the strand at
  position i under the strand at position i+1.
- Text format: whitespace-separated letters "s<i>" or "s<i>^-1" with 1-based
  strand indices; the empty string is the identity.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache

Perm = tuple[int, ...]


def is_perm(p: Perm) -> bool:
    return sorted(p) == list(range(len(p)))


def identity_perm(n: int) -> Perm:
    return tuple(range(n))


def compose_perm(p: Perm, q: Perm) -> Perm:
    """(p o q)[i] = p[q[i]]; q acts first."""
    assert len(p) == len(q)
    return tuple(p[q[i]] for i in range(len(q)))


def inverse_perm(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def transposition(n: int, j: int) -> Perm:
    """Swap of positions j and j+1, 0-indexed."""
    assert 0 <= j < n - 1
    p = list(range(n))
    p[j], p[j + 1] = p[j + 1], p[j]
    return tuple(p)


def perm_one_line(p: Perm) -> list[int]:
    """1-based one-line image, the external form used in reports."""
    return [i + 1 for i in p]


_LETTER_RE = re.compile(r"s(\d+)(\^-1)?$")


@dataclass(frozen=True)
class BraidWord:
    """A word in B_n. letters[k] = i means sigma_i, -i means sigma_i^-1."""

    n: int
    letters: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        assert self.n >= 0
        for l in self.letters:
            assert l != 0 and 1 <= abs(l) <= self.n - 1, (l, self.n)

    def __str__(self) -> str:
        return braid_str(self)


def parse_braid(text: str, n: int) -> BraidWord:
    """Parse the text format; raises ValueError on bad letters."""
    letters = []
    for tok in text.split():
        m = _LETTER_RE.match(tok)
        if not m:
            raise ValueError(f"bad braid letter {tok!r}")
        i = int(m.group(1))
        if not 1 <= i <= n - 1:
            raise ValueError(f"letter {tok!r} out of range for {n} strands")
        letters.append(-i if m.group(2) else i)
    return BraidWord(n, tuple(letters))


def braid_str(w: BraidWord) -> str:
    return " ".join(f"s{l}" if l > 0 else f"s{-l}^-1" for l in w.letters)


def braid_id(n: int) -> BraidWord:
    return BraidWord(n)


def braid_compose(u: BraidWord, v: BraidWord) -> BraidWord:
    """u o v, with v applied first."""
    assert u.n == v.n
    return BraidWord(u.n, u.letters + v.letters)


def braid_tensor(u: BraidWord, v: BraidWord) -> BraidWord:
    """Disjoint juxtaposition, v on strands shifted past u's."""
    return BraidWord(
        u.n + v.n,
        u.letters + tuple(l + u.n if l > 0 else l - u.n for l in v.letters),
    )


def braid_shift(w: BraidWord, off: int, n: int) -> BraidWord:
    """Reindex w to live on strands off+1..off+w.n inside B_n."""
    assert off >= 0 and off + w.n <= n
    return BraidWord(n, tuple(l + off if l > 0 else l - off for l in w.letters))


def braid_inverse(w: BraidWord) -> BraidWord:
    return BraidWord(w.n, tuple(-l for l in reversed(w.letters)))


def braid_perm(w: BraidWord) -> Perm:
    """Underlying permutation; signs are ignored."""
    pos = list(range(w.n))  # pos[i] = current position of strand i
    for l in reversed(w.letters):
        j = abs(l) - 1
        for i in range(w.n):
            if pos[i] == j:
                pos[i] = j + 1
            elif pos[i] == j + 1:
                pos[i] = j
    return tuple(pos)


def left_descents(p: Perm) -> set[int]:
    q = inverse_perm(p)
    return {j for j in range(len(p) - 1) if q[j] > q[j + 1]}


def right_descents(p: Perm) -> set[int]:
    return {j for j in range(len(p) - 1) if p[j] > p[j + 1]}


def perm_braid(p: Perm) -> BraidWord:
    """A positive reduced word with underlying permutation p."""
    n = len(p)
    letters = []
    q = p
    ident = identity_perm(n)
    while q != ident:
        # strip a letter from the left of the word: q = t_j o q'
        j = min(left_descents(q))
        letters.append(j + 1)
        q = compose_perm(transposition(n, j), q)
    return BraidWord(n, tuple(letters))


# -- block braidings and cabling ---------------------------------------------


def block_perm(m: int, k: int) -> Perm:
    """Permutation moving the first m strands past the last k."""
    return tuple(i + k for i in range(m)) + tuple(range(k))


def block_braid(m: int, k: int) -> BraidWord:
    """The braid passing the first m strands under the last k, with no
    crossings inside either block."""
    letters: list[int] = []
    for i in range(1, m + 1):
        # strand i goes under strands i+1 .. i+k
        letters.extend(range(k + i - 1, i - 1, -1))
    return BraidWord(m + k, tuple(letters))


def permute_sizes(sizes: list[int], p: Perm) -> list[int]:
    """Sizes of the blocks after the block at i moves to position p[i]."""
    out = [0] * len(sizes)
    for i, s in enumerate(sizes):
        out[p[i]] = s
    return out


def cable(w: BraidWord, sizes: list[int]) -> BraidWord:
    """Replace strand i of w by sizes[i] parallel strands."""
    assert len(sizes) == w.n and all(s >= 0 for s in sizes)
    total = sum(sizes)
    blocks = list(sizes)
    chunks: list[BraidWord] = []  # in application order
    for l in reversed(w.letters):
        j = abs(l) - 1
        a, b = blocks[j], blocks[j + 1]
        off = sum(blocks[:j])
        if l > 0:
            piece = braid_shift(block_braid(a, b), off, total)
        else:
            piece = braid_inverse(braid_shift(block_braid(b, a), off, total))
        chunks.append(piece)
        blocks[j], blocks[j + 1] = b, a
    letters: list[int] = []
    for piece in reversed(chunks):
        letters.extend(piece.letters)
    return BraidWord(total, tuple(letters))


def cable_perm(p: Perm, sizes: list[int]) -> Perm:
    """The permutation of cable(w, sizes) depends on w only through p."""
    assert len(sizes) == len(p)
    tgt_sizes = permute_sizes(list(sizes), p)
    src_off = [0] * len(p)
    tgt_off = [0] * len(p)
    for i in range(1, len(p)):
        src_off[i] = src_off[i - 1] + sizes[i - 1]
        tgt_off[i] = tgt_off[i - 1] + tgt_sizes[i - 1]
    out = [0] * sum(sizes)
    for i in range(len(p)):
        for r in range(sizes[i]):
            out[src_off[i] + r] = tgt_off[p[i]] + r
    return tuple(out)


# -- Garside left-greedy normal form ------------------------------------------

# Factors are permutation braids, stored as their permutations. A pair of
# consecutive factors (x, y), with y applied first, is left-weighted iff
# every left descent of y is a right descent of x.


@dataclass(frozen=True)
class BraidNormalForm:
    n: int
    delta_power: int
    factors: tuple[Perm, ...]

    def __str__(self) -> str:
        parts = [f"D^{self.delta_power}"]
        parts.extend(f"({braid_str(perm_braid(f))})" for f in self.factors)
        return " ".join(parts)


@lru_cache(maxsize=None)
def _w0(n: int) -> Perm:
    return tuple(range(n - 1, -1, -1))


def _tau(p: Perm) -> Perm:
    """Conjugation by the half twist; an involution."""
    w0 = _w0(len(p))
    return compose_perm(w0, compose_perm(p, w0))


def _left_weight(n: int, factors: list[Perm]) -> list[Perm]:
    ident = identity_perm(n)
    changed = True
    while changed:
        changed = False
        for i in range(len(factors) - 1):
            x, y = factors[i], factors[i + 1]
            while diff := left_descents(y) - right_descents(x):
                j = min(diff)
                x = compose_perm(x, transposition(n, j))
                y = compose_perm(transposition(n, j), y)
                changed = True
            factors[i], factors[i + 1] = x, y
    # identities sink to the right, half twists float to the left
    while factors and factors[-1] == ident:
        factors.pop()
    return factors


def normalize_braid(w: BraidWord) -> BraidNormalForm:
    """Left-greedy normal form: Delta^k f_1 ... f_r with each f_i a
    permutation braid, no f_i trivial or the half twist, and each
    consecutive pair left-weighted. Words are equal in B_n iff their
    normal forms coincide."""
    n = w.n
    if n <= 1:
        return BraidNormalForm(n, 0, ())
    w0 = _w0(n)
    delta = 0
    factors: list[Perm] = []
    for l in w.letters:
        t = transposition(n, abs(l) - 1)
        if l > 0:
            factors.append(t)
        else:
            # sigma_j^-1 = Delta^-1 (Delta sigma_j^-1), the paren is simple
            delta -= 1
            factors = [_tau(f) for f in factors]
            factors.append(compose_perm(w0, t))
    factors = _left_weight(n, factors)
    while factors and factors[0] == w0:
        delta += 1
        factors.pop(0)
    return BraidNormalForm(n, delta, tuple(factors))


def nf_word(nf: BraidNormalForm) -> BraidWord:
    """Expand a normal form back to a braid word."""
    if nf.n <= 1:
        return braid_id(nf.n)
    delta_word = perm_braid(_w0(nf.n))
    if nf.delta_power >= 0:
        w = BraidWord(nf.n, delta_word.letters * nf.delta_power)
    else:
        w = BraidWord(nf.n, braid_inverse(delta_word).letters * (-nf.delta_power))
    for f in nf.factors:
        w = braid_compose(w, perm_braid(f))
    return w


def braid_equal(u: BraidWord, v: BraidWord) -> bool:
    assert u.n == v.n, "words on different strand counts"
    return normalize_braid(u) == normalize_braid(v)
