"""The universal algebra of a generator map.

Given a map phi from source generators to target generators, objects here
are words in two kinds of letters: plain target generators, and formed
letters Phi(w) standing for the image of a whole source word w. A formed
letter on a length-one word is the same thing as the plain letter phi(a),
and a formed letter on the empty word is the monoidal unit, so objects
normalize to words whose formed letters all have length at least two.

Morphism terms are syntax trees over six generator families:

  UFree     a free morphism between plain words
  UPhiFree  a blockwise image of a depth-two free morphism over the source
  UPhiQ     the adjoined isomorphism gluing formed letters into one
  UPhiQInv  its formal inverse
  UBraiding a formal braiding between two objects (not in flavor M)
  UId       an identity

closed under UCompose and UTensor. Equality of parallel terms is decided
by dissolution: every adjoined isomorphism becomes an identity and every
formed letter is read through phi, landing in the free algebra on the
target generators where the word problem is decidable. Dissolution is
faithful here, so the answer is exact, not conservative.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence, Union

from .braid_core import braid_id
from .errors import BoundaryError, FlavorError, StructureError, UnknownName, UnsupportedOp
from .free_cat import (
    Flavor,
    FreeMor,
    FreeMor2,
    GenSet,
    Obj,
    Tuple2,
    concat_blocks,
    flatten_mu,
    fmor2_shadow,
    fmor_braiding,
    fmor_compose,
    fmor_equal,
    fmor_id,
    fmor_tensor,
    permutation_shadow,
)


@dataclass(frozen=True)
class ObjMap:
    """A total map between generator sets."""

    source: GenSet
    target: GenSet
    pairs: tuple[tuple[str, str], ...]

    def __post_init__(self) -> None:
        seen = dict(self.pairs)
        for g in self.source.names:
            if g not in seen:
                raise StructureError(f"map is not total: no image for {g!r}")
        for g, img in self.pairs:
            if g not in self.source:
                raise UnknownName(f"map source {g!r} is not in {self.source.name}")
            if img not in self.target:
                raise UnknownName(f"map image {img!r} is not in {self.target.name}")

    def __call__(self, g: str) -> str:
        for src, img in self.pairs:
            if src == g:
                return img
        raise UnknownName(f"unknown generator {g!r} in {self.source.name}")


def identity_obj_map(gens: GenSet) -> ObjMap:
    return ObjMap(gens, gens, tuple((g, g) for g in gens.names))


# -- objects ------------------------------------------------------------------


@dataclass(frozen=True)
class FreeLetter:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class PhiLetter:
    word: Obj

    def __str__(self) -> str:
        return "phi(" + " ".join(self.word) + ")"


ULetter = Union[FreeLetter, PhiLetter]
UObj = tuple[ULetter, ...]


def format_uobj(x: UObj) -> str:
    return "[" + " ; ".join(str(l) for l in x) + "]"


def normalize_uobj(x: Iterable[ULetter], phi: ObjMap) -> UObj:
    """Canonical form: length-one formed letters become plain letters,
    empty ones disappear. Letterwise, hence idempotent and a monoid map."""
    out: list[ULetter] = []
    for letter in x:
        if isinstance(letter, FreeLetter):
            if letter.name not in phi.target:
                raise UnknownName(f"unknown generator {letter.name!r} in {phi.target.name}")
            out.append(letter)
            continue
        for a in letter.word:
            if a not in phi.source:
                raise UnknownName(f"unknown generator {a!r} in {phi.source.name}")
        if len(letter.word) == 1:
            out.append(FreeLetter(phi(letter.word[0])))
        elif len(letter.word) >= 2:
            out.append(letter)
    return tuple(out)


def phi_object(blocks: Tuple2, phi: ObjMap) -> UObj:
    """The normalized word of formed letters for a tuple of source words."""
    return normalize_uobj((PhiLetter(tuple(b)) for b in blocks), phi)


def free_uobj(word: Obj, phi: ObjMap) -> UObj:
    return normalize_uobj((FreeLetter(g) for g in word), phi)


def uobj_dissolve(x: UObj, phi: ObjMap) -> Obj:
    """Read formed letters through phi, giving a plain target word."""
    out: list[str] = []
    for letter in x:
        if isinstance(letter, FreeLetter):
            out.append(letter.name)
        else:
            out.extend(phi(a) for a in letter.word)
    return tuple(out)


# -- morphism terms -----------------------------------------------------------


@dataclass(frozen=True)
class UFree:
    mor: FreeMor


@dataclass(frozen=True)
class UPhiFree:
    mor: FreeMor2


@dataclass(frozen=True)
class UPhiQ:
    blocks: Tuple2


@dataclass(frozen=True)
class UPhiQInv:
    blocks: Tuple2


@dataclass(frozen=True)
class UBraiding:
    x: UObj
    y: UObj


@dataclass(frozen=True)
class UId:
    obj: UObj


@dataclass(frozen=True)
class UCompose:
    """after is applied second: UCompose(after, first)."""

    after: "UMor"
    first: "UMor"


@dataclass(frozen=True)
class UTensor:
    left: "UMor"
    right: "UMor"


UMor = Union[UFree, UPhiFree, UPhiQ, UPhiQInv, UBraiding, UId, UCompose, UTensor]


def kappa_embed(u: FreeMor) -> UMor:
    """Free morphisms over the target generators embed as they are;
    dissolution undoes the embedding exactly."""
    return UFree(u)


def phi_tilde(x, role: str, phi: ObjMap):
    """The components of the universal map out of the source algebra.

    role "object": x a source word, giving one formed letter (normalized).
    role "morphism": x a source FreeMor, giving a one-block image.
    role "unit-constraint": the adjoined isomorphism at no blocks.
    role "monoidal-constraint": x a pair of source words (w1, w2).
    """
    if role == "object":
        return normalize_uobj((PhiLetter(tuple(x)),), phi)
    if role == "morphism":
        u: FreeMor = x
        outer = None if u.flavor == "M" else (0,) if u.flavor == "S" else braid_id(1)
        return UPhiFree(FreeMor2(u.flavor, (u.source,), (u.target,), outer, (u,)))
    if role == "unit-constraint":
        return UPhiQ(())
    if role == "monoidal-constraint":
        w1, w2 = x
        return UPhiQ((tuple(w1), tuple(w2)))
    raise StructureError(f"unknown role {role!r}")


# -- validation ---------------------------------------------------------------


def validate_umor(t: UMor, phi: ObjMap, flavor: Flavor) -> tuple[UObj, UObj]:
    """Boundary computation; rejects ill-typed terms naming the subterm."""
    return _validate(t, phi, flavor, "term")


def _validate(t: UMor, phi: ObjMap, flavor: Flavor, path: str) -> tuple[UObj, UObj]:
    if isinstance(t, UFree):
        if t.mor.flavor != flavor:
            raise FlavorError(f"{path}: flavor {t.mor.flavor} inside a {flavor} term")
        src = free_uobj(t.mor.source, phi)
        tgt = free_uobj(t.mor.target, phi)
        return src, tgt
    if isinstance(t, UPhiFree):
        if t.mor.flavor != flavor:
            raise FlavorError(f"{path}: flavor {t.mor.flavor} inside a {flavor} term")
        return phi_object(t.mor.source, phi), phi_object(t.mor.target, phi)
    if isinstance(t, UPhiQ):
        return phi_object(t.blocks, phi), phi_object((concat_blocks(t.blocks),), phi)
    if isinstance(t, UPhiQInv):
        return phi_object((concat_blocks(t.blocks),), phi), phi_object(t.blocks, phi)
    if isinstance(t, UBraiding):
        if flavor == "M":
            raise UnsupportedOp(f"{path}: no braiding in flavor M")
        x = normalize_uobj(t.x, phi)
        y = normalize_uobj(t.y, phi)
        return x + y, y + x
    if isinstance(t, UId):
        x = normalize_uobj(t.obj, phi)
        return x, x
    if isinstance(t, UCompose):
        s1, t1 = _validate(t.first, phi, flavor, path + ".first")
        s2, t2 = _validate(t.after, phi, flavor, path + ".after")
        if s2 != t1:
            raise BoundaryError(
                f"{path}: middle boundary mismatch: {format_uobj(t1)} then {format_uobj(s2)}"
            )
        return s1, t2
    if isinstance(t, UTensor):
        s1, t1 = _validate(t.left, phi, flavor, path + ".left")
        s2, t2 = _validate(t.right, phi, flavor, path + ".right")
        return s1 + s2, t1 + t2
    raise StructureError(f"{path}: not a morphism term: {t!r}")


# -- dissolution --------------------------------------------------------------


def _relabel(u: FreeMor, phi: ObjMap) -> FreeMor:
    return FreeMor(
        u.flavor,
        tuple(phi(g) for g in u.source),
        tuple(phi(g) for g in u.target),
        u.content,
    )


def dissolve(t: UMor, phi: ObjMap, flavor: Flavor) -> FreeMor:
    """The image in the free algebra on the target generators: adjoined
    isomorphisms become identities, formed letters are read through phi."""
    validate_umor(t, phi, flavor)
    return _dissolve(t, phi, flavor)


def _dissolve(t: UMor, phi: ObjMap, flavor: Flavor) -> FreeMor:
    if isinstance(t, UFree):
        return t.mor
    if isinstance(t, UPhiFree):
        return _relabel(flatten_mu(t.mor), phi)
    if isinstance(t, (UPhiQ, UPhiQInv)):
        word = tuple(phi(a) for a in concat_blocks(t.blocks))
        return fmor_id(flavor, word)
    if isinstance(t, UBraiding):
        x = uobj_dissolve(normalize_uobj(t.x, phi), phi)
        y = uobj_dissolve(normalize_uobj(t.y, phi), phi)
        return fmor_braiding(x, y, flavor)
    if isinstance(t, UId):
        return fmor_id(flavor, uobj_dissolve(normalize_uobj(t.obj, phi), phi))
    if isinstance(t, UCompose):
        return fmor_compose(_dissolve(t.after, phi, flavor), _dissolve(t.first, phi, flavor))
    if isinstance(t, UTensor):
        return fmor_tensor(_dissolve(t.left, phi, flavor), _dissolve(t.right, phi, flavor))
    raise StructureError(f"not a morphism term: {t!r}")


def umor_shadow(t: UMor) -> UMor:
    """Forget braid data down to permutations, sending a braided term to
    the symmetric term with the same shape."""
    if isinstance(t, UFree):
        return UFree(permutation_shadow(t.mor))
    if isinstance(t, UPhiFree):
        return UPhiFree(fmor2_shadow(t.mor))
    if isinstance(t, (UPhiQ, UPhiQInv, UBraiding, UId)):
        return t
    if isinstance(t, UCompose):
        return UCompose(umor_shadow(t.after), umor_shadow(t.first))
    if isinstance(t, UTensor):
        return UTensor(umor_shadow(t.left), umor_shadow(t.right))
    raise StructureError(f"not a morphism term: {t!r}")


def umor_equal(s: UMor, t: UMor, phi: ObjMap, flavor: Flavor) -> bool:
    ss, st = validate_umor(s, phi, flavor)
    ts, tt = validate_umor(t, phi, flavor)
    if (ss, st) != (ts, tt):
        raise BoundaryError(
            f"equality of non-parallel terms: {format_uobj(ss)} -> {format_uobj(st)}"
            f" vs {format_uobj(ts)} -> {format_uobj(tt)}"
        )
    return fmor_equal(_dissolve(s, phi, flavor), _dissolve(t, phi, flavor))


# -- counting invariants ------------------------------------------------------


def signature_of(
    x: UObj,
    weight: Mapping[str, int] | Callable[[str], int],
    phi_weight: Mapping[Obj, int] | Callable[[Obj], int],
) -> list[int]:
    """Per-letter weights: plain letters through the generator weighting,
    formed letters through the word weighting."""
    wf = weight if callable(weight) else weight.__getitem__
    pf = phi_weight if callable(phi_weight) else phi_weight.__getitem__
    out: list[int] = []
    for letter in x:
        try:
            out.append(wf(letter.name) if isinstance(letter, FreeLetter) else pf(letter.word))
        except KeyError as exc:
            raise UnknownName(f"no weight for letter {letter}") from exc
    return out


def is_tidy(x: UObj, unit_gens: Iterable[str]) -> bool:
    """No formed letter built from unit-like generators alone."""
    units = frozenset(unit_gens)
    return not any(
        isinstance(letter, PhiLetter) and all(a in units for a in letter.word) for letter in x
    )


def _contains_compose(t: UMor) -> bool:
    if isinstance(t, UCompose):
        return True
    if isinstance(t, UTensor):
        return _contains_compose(t.left) or _contains_compose(t.right)
    return False


def is_tidy_composite(
    ts: Sequence[UMor], phi: ObjMap, flavor: Flavor, unit_gens: Iterable[str]
) -> bool:
    """Every step a product of generators, every boundary tidy."""
    units = frozenset(unit_gens)
    for t in ts:
        src, tgt = validate_umor(t, phi, flavor)
        if not (is_tidy(src, units) and is_tidy(tgt, units)):
            return False
        if _contains_compose(t):
            return False
    return True
