"""Free strict monoidal categories on a finite generator set.

Three flavors are supported: M (plain monoidal), S (symmetric), B (braided).
Objects are tuples of generator names. A morphism exists only between tuples
of equal length with matching multiset of labels; it carries no content in M,
a permutation in S, and a braid word in B.

Morphisms of the depth-two free algebra (tuples of tuples) are FreeMor2
values: a permutation/braid of the blocks plus one inner morphism per block.
Labels are compared only by equality, so the same FreeMor machinery serves
both levels; at depth two the "generators" are themselves tuples.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

from .braid_core import (
    BraidWord,
    Perm,
    braid_compose,
    braid_equal,
    braid_id,
    braid_inverse,
    braid_perm,
    braid_tensor,
    block_braid,
    block_perm,
    cable,
    cable_perm,
    compose_perm,
    identity_perm,
    inverse_perm,
    is_perm,
)
from .errors import BoundaryError, FlavorError, StructureError, UnknownName, UnsupportedOp

Flavor = Literal["M", "S", "B"]
FLAVORS: tuple[Flavor, ...] = ("M", "S", "B")

Gen = str
Obj = tuple[Gen, ...]
# Depth-two objects: tuples whose entries are themselves objects.
Tuple2 = tuple[Obj, ...]
Label = Gen | Obj
Content = None | Perm | BraidWord


@dataclass(frozen=True)
class GenSet:
    name: str
    names: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(set(self.names)) != len(self.names):
            raise StructureError(f"generator set {self.name}: duplicate names")
        if any(not n for n in self.names):
            raise StructureError(f"generator set {self.name}: empty name")

    def __contains__(self, g: str) -> bool:
        return g in self.names


def unit_embed(gens: GenSet, g: str) -> Obj:
    """The length-one tuple on a generator."""
    if g not in gens:
        raise UnknownName(f"unknown generator {g!r} in {gens.name}")
    return (g,)


def _content_perm(flavor: Flavor, content: Content, n: int) -> Perm:
    if flavor == "M":
        return identity_perm(n)
    if flavor == "S":
        assert isinstance(content, tuple)
        return content
    assert isinstance(content, BraidWord)
    return braid_perm(content)


@dataclass(frozen=True)
class FreeMor:
    """A morphism of the free algebra; target is stored redundantly so
    every constructor revalidates the boundary."""

    flavor: Flavor
    source: tuple[Label, ...]
    target: tuple[Label, ...]
    content: Content

    def __post_init__(self) -> None:
        n = len(self.source)
        if self.flavor == "M":
            if self.content is not None or self.source != self.target:
                raise StructureError("flavor M admits only identities")
            return
        if self.flavor == "S":
            if not (isinstance(self.content, tuple) and len(self.content) == n and is_perm(self.content)):
                raise StructureError("flavor S needs a permutation of the source length")
        elif self.flavor == "B":
            if not isinstance(self.content, BraidWord) or self.content.n != n:
                raise StructureError("flavor B needs a braid word on the source strands")
        else:
            raise FlavorError(f"unknown flavor {self.flavor!r}")
        p = _content_perm(self.flavor, self.content, n)
        if len(self.target) != n or any(self.target[p[i]] != self.source[i] for i in range(n)):
            raise StructureError("target word is not the source permuted by the content")


def fmor_id(flavor: Flavor, x: tuple[Label, ...]) -> FreeMor:
    content: Content
    if flavor == "M":
        content = None
    elif flavor == "S":
        content = identity_perm(len(x))
    else:
        content = braid_id(len(x))
    return FreeMor(flavor, x, x, content)


def fmor_of_perm(x: tuple[Label, ...], p: Perm) -> FreeMor:
    target = [None] * len(x)
    for i in range(len(x)):
        target[p[i]] = x[i]
    return FreeMor("S", x, tuple(target), p)


def fmor_of_braid(x: tuple[Label, ...], w: BraidWord) -> FreeMor:
    p = braid_perm(w)
    target = [None] * len(x)
    for i in range(len(x)):
        target[p[i]] = x[i]
    return FreeMor("B", x, tuple(target), w)


def _check_flavors(u: FreeMor, v: FreeMor) -> None:
    if u.flavor != v.flavor:
        raise FlavorError(f"cannot combine flavors {u.flavor} and {v.flavor}")


def fmor_compose(u: FreeMor, v: FreeMor) -> FreeMor:
    """u after v."""
    _check_flavors(u, v)
    if u.source != v.target:
        raise BoundaryError("compose: source of the outer morphism differs from target of the inner")
    content: Content
    if u.flavor == "M":
        content = None
    elif u.flavor == "S":
        content = compose_perm(u.content, v.content)
    else:
        content = braid_compose(u.content, v.content)
    return FreeMor(u.flavor, v.source, u.target, content)


def _perm_tensor(p: Perm, q: Perm) -> Perm:
    m = len(p)
    return p + tuple(m + j for j in q)


def fmor_tensor(u: FreeMor, v: FreeMor) -> FreeMor:
    _check_flavors(u, v)
    content: Content
    if u.flavor == "M":
        content = None
    elif u.flavor == "S":
        content = _perm_tensor(u.content, v.content)
    else:
        content = braid_tensor(u.content, v.content)
    return FreeMor(u.flavor, u.source + v.source, u.target + v.target, content)


def fmor_inverse(u: FreeMor) -> FreeMor:
    content: Content
    if u.flavor == "M":
        content = None
    elif u.flavor == "S":
        content = inverse_perm(u.content)
    else:
        content = braid_inverse(u.content)
    return FreeMor(u.flavor, u.target, u.source, content)


def fmor_braiding(x: tuple[Label, ...], y: tuple[Label, ...], flavor: Flavor) -> FreeMor:
    """The block braiding x;y -> y;x (block transposition in flavor S)."""
    if flavor == "M":
        raise UnsupportedOp("flavor M has no braiding")
    content: Content
    if flavor == "S":
        content = block_perm(len(x), len(y))
    else:
        content = block_braid(len(x), len(y))
    return FreeMor(flavor, x + y, y + x, content)


def underlying_permutation(u: FreeMor) -> Perm:
    return _content_perm(u.flavor, u.content, len(u.source))


def permutation_shadow(u: FreeMor) -> FreeMor:
    """The flavor-S morphism with the same boundary and underlying
    permutation; used to state symmetric-level facts about braids."""
    return FreeMor("S", u.source, u.target, underlying_permutation(u))


def fmor_equal(u: FreeMor, v: FreeMor) -> bool:
    _check_flavors(u, v)
    if u.source != v.source or u.target != v.target:
        raise BoundaryError("equality of non-parallel morphisms")
    if u.flavor == "M":
        return True
    if u.flavor == "S":
        return u.content == v.content
    return braid_equal(u.content, v.content)


def project_generator(u: FreeMor, g: str, gens: GenSet | None = None) -> Perm:
    """The self-permutation of the g-labeled strands: delete every other
    position and renumber. Flavor S only; for braids, project the shadow."""
    if gens is not None and g not in gens:
        raise UnknownName(f"unknown generator {g!r} in {gens.name}")
    if u.flavor != "S":
        raise UnsupportedOp("self-permutations are defined for flavor S")
    p = u.content
    images = [p[i] for i, lab in enumerate(u.source) if lab == g]
    rank = {v: r for r, v in enumerate(sorted(images))}
    return tuple(rank[v] for v in images)


# -- depth two ----------------------------------------------------------------


def concat_blocks(blocks: Tuple2) -> Obj:
    out: tuple[Gen, ...] = ()
    for b in blocks:
        out = out + tuple(b)
    return out


@dataclass(frozen=True)
class FreeMor2:
    """A morphism of the depth-two free algebra: an outer permutation or
    braid of the blocks, plus one inner morphism per block. Inner i maps
    source block i to the target block at its image position."""

    flavor: Flavor
    source: Tuple2
    target: Tuple2
    outer: Content
    inners: tuple[FreeMor, ...]

    def __post_init__(self) -> None:
        m = len(self.source)
        if len(self.inners) != m or len(self.target) != m:
            raise StructureError("block counts of boundary and inner morphisms differ")
        if self.flavor == "M":
            if self.outer is not None:
                raise StructureError("flavor M admits only identity outer content")
        elif self.flavor == "S":
            if not (isinstance(self.outer, tuple) and len(self.outer) == m and is_perm(self.outer)):
                raise StructureError("flavor S needs an outer permutation of the blocks")
        elif self.flavor == "B":
            if not isinstance(self.outer, BraidWord) or self.outer.n != m:
                raise StructureError("flavor B needs an outer braid word on the blocks")
        else:
            raise FlavorError(f"unknown flavor {self.flavor!r}")
        p = _content_perm(self.flavor, self.outer, m)
        for i, inner in enumerate(self.inners):
            if inner.flavor != self.flavor:
                raise FlavorError("inner morphism flavor differs from the outer flavor")
            if inner.source != self.source[i] or inner.target != self.target[p[i]]:
                raise StructureError(f"inner morphism {i} does not match its blocks")


def fmor2_id(flavor: Flavor, blocks: Tuple2) -> FreeMor2:
    outer = fmor_id(flavor, blocks).content
    return FreeMor2(flavor, blocks, blocks, outer, tuple(fmor_id(flavor, b) for b in blocks))


def fmor2_compose(u: FreeMor2, v: FreeMor2) -> FreeMor2:
    """u after v; inner i of the composite routes through v's image block."""
    if u.flavor != v.flavor:
        raise FlavorError(f"cannot combine flavors {u.flavor} and {v.flavor}")
    if u.source != v.target:
        raise BoundaryError("compose: source of the outer morphism differs from target of the inner")
    pv = _content_perm(v.flavor, v.outer, len(v.source))
    outer: Content
    if u.flavor == "M":
        outer = None
    elif u.flavor == "S":
        outer = compose_perm(u.outer, v.outer)
    else:
        outer = braid_compose(u.outer, v.outer)
    inners = tuple(fmor_compose(u.inners[pv[i]], v.inners[i]) for i in range(len(v.source)))
    return FreeMor2(u.flavor, v.source, u.target, outer, inners)


def fmor2_shadow(u: FreeMor2) -> FreeMor2:
    """Forget braiding blockwise: the flavor-S morphism with the same
    boundary, outer permutation, and shadowed inners."""
    m = len(u.source)
    return FreeMor2(
        "S",
        u.source,
        u.target,
        _content_perm(u.flavor, u.outer, m),
        tuple(permutation_shadow(i) for i in u.inners),
    )


def fmor2_tensor(u: FreeMor2, v: FreeMor2) -> FreeMor2:
    if u.flavor != v.flavor:
        raise FlavorError(f"cannot combine flavors {u.flavor} and {v.flavor}")
    outer: Content
    if u.flavor == "M":
        outer = None
    elif u.flavor == "S":
        outer = _perm_tensor(u.outer, v.outer)
    else:
        outer = braid_tensor(u.outer, v.outer)
    return FreeMor2(u.flavor, u.source + v.source, u.target + v.target, outer, u.inners + v.inners)


def flatten_mu(u: FreeMor2) -> FreeMor:
    """Collapse a depth-two morphism to depth one: cable the outer braid by
    the block sizes and precompose with the block sum of the inners."""
    flavor = u.flavor
    sizes = [len(b) for b in u.source]
    inner_sum = fmor_id(flavor, ())
    for inner in u.inners:
        inner_sum = fmor_tensor(inner_sum, inner)
    content: Content
    if flavor == "M":
        content = None
    elif flavor == "S":
        content = cable_perm(u.outer, sizes)
    else:
        content = cable(u.outer, sizes)
    cabled = FreeMor(flavor, inner_sum.target, concat_blocks(u.target), content)
    return fmor_compose(cabled, inner_sum)


def format_obj(x: Obj) -> str:
    return "[" + " ".join(x) + "]"


def format_fmor(u: FreeMor) -> str:
    if u.flavor == "M":
        word = "id"
    elif u.flavor == "S":
        word = "perm(" + " ".join(str(i + 1) for i in u.content) + ")"
    else:
        word = str(u.content) if u.content.letters else "id"
    return f"{format_obj(u.source)} -> {format_obj(u.target)} : {word}"
