"""Strong monoidal functor specifications and the evaluation map.

A FunctorSpec packages the four pieces of a strong monoidal functor
between free algebras: the object map, the morphism map, and the
invertible constraints f2 (binary) and f0 (unit). check_axioms probes the
coherence axioms on finite sets of objects; in the braided flavor the
braid axiom is probed separately because a functor can be coherent for
permutations yet fail it for braids.

lambda_eval reads a universal-algebra term through a functor: plain
letters through a caller-supplied interpretation, formed letters through
the object map, adjoined isomorphisms through folds of f2 and f0. For a
term to evaluate, the functor must live in the term's flavor.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Callable, Mapping

from .errors import BoundaryError, FlavorError, InterpError, StructureError, UnsupportedOp
from .free_cat import (
    Flavor,
    FreeMor,
    FreeMor2,
    GenSet,
    Obj,
    flatten_mu,
    fmor_braiding,
    fmor_compose,
    fmor_equal,
    fmor_id,
    fmor_inverse,
    fmor_tensor,
)
from .ualg import (
    FreeLetter,
    ObjMap,
    UBraiding,
    UCompose,
    UFree,
    UId,
    UMor,
    UObj,
    UPhiFree,
    UPhiQ,
    UPhiQInv,
    UTensor,
    normalize_uobj,
    validate_umor,
)


@dataclass(frozen=True)
class FunctorSpec:
    flavor: Flavor
    source: GenSet
    target: GenSet
    obj: Callable[[Obj], Obj]
    mor: Callable[[FreeMor], FreeMor]
    f2: Callable[[Obj, Obj], FreeMor]
    f0: Callable[[], FreeMor]
    name: str = "functor"


_NFOLD_RE = re.compile(r"nfold\((\d+)\)$")


def make_builtin_spec(kind: str, gens: GenSet, flavor: Flavor) -> FunctorSpec:
    """identity, doubling, or nfold(n): the n-fold copying functor whose
    binary constraint shuffles the copies into n interleaved groups."""
    if kind == "identity":
        return FunctorSpec(
            flavor,
            gens,
            gens,
            obj=lambda x: x,
            mor=lambda u: u,
            f2=lambda x, y: fmor_id(flavor, x + y),
            f0=lambda: fmor_id(flavor, ()),
            name="identity",
        )
    if kind == "doubling":
        return _nfold(2, gens, flavor, name="doubling")
    if m := _NFOLD_RE.match(kind):
        n = int(m.group(1))
        if n < 1:
            raise ValueError("nfold needs n >= 1")
        return _nfold(n, gens, flavor)
    raise StructureError(f"unknown builtin functor {kind!r}")


def _nfold(n: int, gens: GenSet, flavor: Flavor, name: str | None = None) -> FunctorSpec:
    if n >= 2 and flavor == "M":
        raise UnsupportedOp("copying functors need a braiding; flavor M has none")

    def obj(x: Obj) -> Obj:
        return x * n

    def mor(u: FreeMor) -> FreeMor:
        out = fmor_id(u.flavor, ())
        for _ in range(n):
            out = fmor_tensor(out, u)
        return out

    if n == 1:
        f2 = lambda x, y: fmor_id(flavor, x + y)
    else:
        prev = _nfold(n - 1, gens, flavor)

        def f2(x: Obj, y: Obj) -> FreeMor:
            # pull the last copy of x through the earlier copies of y
            inner = fmor_tensor(
                fmor_id(flavor, x * (n - 1)),
                fmor_tensor(fmor_braiding(x, y * (n - 1), flavor), fmor_id(flavor, y)),
            )
            outer = fmor_tensor(prev.f2(x, y), fmor_id(flavor, x + y))
            return fmor_compose(outer, inner)

    return FunctorSpec(
        flavor,
        gens,
        gens,
        obj=obj,
        mor=mor,
        f2=f2,
        f0=lambda: fmor_id(flavor, ()),
        name=name or f"nfold({n})",
    )


def compose_specs(g: FunctorSpec, f: FunctorSpec) -> FunctorSpec:
    if f.target != g.source:
        raise BoundaryError(f"cannot compose {g.name} after {f.name}: generator sets differ")
    if f.flavor != g.flavor:
        raise FlavorError(f"cannot compose {g.name} after {f.name}: flavors differ")
    return FunctorSpec(
        f.flavor,
        f.source,
        g.target,
        obj=lambda x: g.obj(f.obj(x)),
        mor=lambda u: g.mor(f.mor(u)),
        f2=lambda x, y: fmor_compose(g.mor(f.f2(x, y)), g.f2(f.obj(x), f.obj(y))),
        f0=lambda: fmor_compose(g.mor(f.f0()), g.f0()),
        name=f"{g.name}.{f.name}",
    )


# -- axiom checking -------------------------------------------------------------


@dataclass(frozen=True)
class AxiomFailure:
    axiom: str
    witness: tuple
    left: FreeMor
    right: FreeMor


@dataclass(frozen=True)
class AxiomReport:
    functor: str
    failures: tuple[AxiomFailure, ...]
    checked: int

    @property
    def ok(self) -> bool:
        return not self.failures


def default_probe(gens: GenSet, max_len: int = 2) -> list[Obj]:
    out: list[Obj] = []
    for k in range(max_len + 1):
        out.extend(itertools.product(gens.names, repeat=k))
    return out


def check_axioms(F: FunctorSpec, probe: list[Obj] | None = None) -> AxiomReport:
    """Probe associativity, both unit squares, and (outside flavor M) the
    braid axiom on all pairs/triples from the probe set."""
    if probe is None:
        probe = default_probe(F.source)
    flavor = F.flavor
    failures: list[AxiomFailure] = []
    checked = 0

    def record(axiom: str, witness: tuple, left: FreeMor, right: FreeMor) -> None:
        nonlocal checked
        checked += 1
        if not fmor_equal(left, right):
            failures.append(AxiomFailure(axiom, witness, left, right))

    for x, y, z in itertools.product(probe, repeat=3):
        left = fmor_compose(F.f2(x, y + z), fmor_tensor(fmor_id(flavor, F.obj(x)), F.f2(y, z)))
        right = fmor_compose(F.f2(x + y, z), fmor_tensor(F.f2(x, y), fmor_id(flavor, F.obj(z))))
        record("associativity", (x, y, z), left, right)

    for x in probe:
        one = fmor_id(flavor, F.obj(x))
        left_unit = fmor_compose(F.f2((), x), fmor_tensor(F.f0(), one))
        record("unit-left", (x,), left_unit, one)
        right_unit = fmor_compose(F.f2(x, ()), fmor_tensor(one, F.f0()))
        record("unit-right", (x,), right_unit, one)

    if flavor != "M":
        for x, y in itertools.product(probe, repeat=2):
            left = fmor_compose(F.f2(y, x), fmor_braiding(F.obj(x), F.obj(y), flavor))
            right = fmor_compose(F.mor(fmor_braiding(x, y, flavor)), F.f2(x, y))
            record("braid", (x, y), left, right)

    return AxiomReport(F.name, tuple(failures), checked)


# -- evaluation -----------------------------------------------------------------


def f_bullet(F: FunctorSpec, blocks: tuple[Obj, ...]) -> FreeMor:
    """The n-ary constraint: F(w1);...;F(wm) -> F(w1 ... wm), folded from
    f2 left to right, with f0 for no blocks."""
    if not blocks:
        return F.f0()
    acc = fmor_id(F.flavor, F.obj(blocks[0]))
    done = blocks[0]
    for w in blocks[1:]:
        acc = fmor_compose(F.f2(done, w), fmor_tensor(acc, fmor_id(F.flavor, F.obj(w))))
        done = done + w
    return acc


def check_interp(F: FunctorSpec, interp: Mapping[str, Obj], phi: ObjMap) -> None:
    """An interpretation must cover every plain letter and agree with the
    functor on images of source generators; the functor must also send the
    empty word to the empty word, or normalized objects would shift."""
    if F.source != phi.source:
        raise InterpError(f"functor {F.name} reads {F.source.name}, diagram maps {phi.source.name}")
    if F.obj(()) != ():
        raise InterpError(f"functor {F.name} does not preserve the empty word")
    for g in phi.target.names:
        if g not in interp:
            raise InterpError(f"no interpretation for generator {g!r}")
    for a in phi.source.names:
        if interp[phi(a)] != F.obj((a,)):
            raise InterpError(
                f"interpretation of {phi(a)!r} disagrees with the functor on {a!r}"
            )


def uobj_lambda(x: UObj, F: FunctorSpec, interp: Mapping[str, Obj]) -> Obj:
    out: tuple[str, ...] = ()
    for letter in x:
        out = out + (tuple(interp[letter.name]) if isinstance(letter, FreeLetter) else F.obj(letter.word))
    return out


def lambda_eval(
    t: UMor, F: FunctorSpec, interp: Mapping[str, Obj], phi: ObjMap
) -> FreeMor:
    """Evaluate a term in the target algebra of the functor."""
    check_interp(F, interp, phi)
    validate_umor(t, phi, F.flavor)
    return _lambda(t, F, interp, phi)


def _lambda(t: UMor, F: FunctorSpec, interp: Mapping[str, Obj], phi: ObjMap) -> FreeMor:
    flavor = F.flavor
    if isinstance(t, UFree):
        u = t.mor
        blocks_src = tuple(tuple(interp[g]) for g in u.source)
        blocks_tgt = tuple(tuple(interp[g]) for g in u.target)
        inners = tuple(fmor_id(flavor, b) for b in blocks_src)
        return flatten_mu(FreeMor2(flavor, blocks_src, blocks_tgt, u.content, inners))
    if isinstance(t, UPhiFree):
        m2 = t.mor
        return flatten_mu(
            FreeMor2(
                flavor,
                tuple(F.obj(b) for b in m2.source),
                tuple(F.obj(b) for b in m2.target),
                m2.outer,
                tuple(F.mor(i) for i in m2.inners),
            )
        )
    if isinstance(t, UPhiQ):
        return f_bullet(F, t.blocks)
    if isinstance(t, UPhiQInv):
        return fmor_inverse(f_bullet(F, t.blocks))
    if isinstance(t, UBraiding):
        x = uobj_lambda(normalize_uobj(t.x, phi), F, interp)
        y = uobj_lambda(normalize_uobj(t.y, phi), F, interp)
        return fmor_braiding(x, y, flavor)
    if isinstance(t, UId):
        return fmor_id(flavor, uobj_lambda(normalize_uobj(t.obj, phi), F, interp))
    if isinstance(t, UCompose):
        return fmor_compose(_lambda(t.after, F, interp, phi), _lambda(t.first, F, interp, phi))
    if isinstance(t, UTensor):
        return fmor_tensor(_lambda(t.left, F, interp, phi), _lambda(t.right, F, interp, phi))
    raise StructureError(f"not a morphism term: {t!r}")


def verify_lift(
    t: UMor, claimed: FreeMor, F: FunctorSpec, interp: Mapping[str, Obj], phi: ObjMap
) -> bool:
    """Does the term evaluate to the morphism it claims to present?"""
    return fmor_equal(lambda_eval(t, F, interp, phi), claimed)
