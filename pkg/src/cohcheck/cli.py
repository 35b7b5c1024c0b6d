"""Source format and the coh command line.

The source format is line oriented; ``#`` starts a comment. Declarations:

    flavor braided | symmetric | monoidal
    gens A = { a, b }
    gens A2 = { fa, fb }
    map phi : A -> A2 { a -> fa; b -> fb }
    node N = <object expr>
    edge e : N1 -> N2 = <morphism expr>
    functor F = identity | doubling | nfold(4) on A
    functor H = compose(F, F)
    interp fa = [a a]
    goal g : e1 . e2 == e3 . e4

Object expressions concatenate with ``;``: a bracket list ``[a b]`` of plain
letters, or a formed block written with the declared map's name, ``phi(a b)``.

Morphism expressions compose with ``.`` (rightmost applied first) and tensor
with ``;``. Factors: ``id``, a braid word (quoted or bare, as in ``"s2 s1"``),
``perm(2 1 3)`` (one-line, 1-based), ``q(a | b)``, ``q^-1(a | b)``,
``pf(outer=id; inner="s1", id)``, and ``braid(X, Y)`` on object expressions.

Each factor consumes a prefix of the raw letter sequence of its source:
``id`` takes one letter (the whole remainder in final position), a braid word
takes its minimal strand count (the remainder in final position), ``q`` takes
one letter per block, ``q^-1`` the single merged letter, ``pf`` one formed
letter per inner morphism, and ``braid(X, Y)`` the width of ``X ; Y``.
"""

from __future__ import annotations

import json
import os
import re
import sys
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import click

from .braid_core import BraidWord, braid_perm, braid_str, identity_perm, normalize_braid, perm_braid
from .diagram_check import (
    EQUAL,
    EQUAL_IN_S_ONLY,
    Diagram,
    Edge,
    Goal,
    check_goal,
    compose_path,
    explain_goal,
    report_json,
    validate_diagram,
)
from .errors import CohError, ElabError, ParseError, SourceSpan, StructureError
from .free_cat import Flavor, FreeMor, FreeMor2, GenSet, fmor_id, fmor_of_braid, fmor_of_perm
from .functor_eval import FunctorSpec, compose_specs, make_builtin_spec
from .ualg import (
    FreeLetter,
    ObjMap,
    PhiLetter,
    UBraiding,
    UCompose,
    UFree,
    UId,
    ULetter,
    UPhiFree,
    UPhiQ,
    UPhiQInv,
    UTensor,
    dissolve,
    format_uobj,
    normalize_uobj,
)

# -- tokens ----------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r'"[^"]*"'
    r"|->|=="
    r"|[A-Za-z_][A-Za-z0-9_]*(?:\^-1)?"
    r"|-?\d+"
    r"|[()\[\]{}|;.,=:]"
)
_WORD_LETTER_RE = re.compile(r"s(\d+)(\^-1)?$")

FLAVOR_WORDS = {"braided": "B", "symmetric": "S", "monoidal": "M"}


@dataclass(frozen=True)
class Token:
    text: str
    span: SourceSpan


def _tokenize_line(line: str, lineno: int) -> list[Token]:
    toks: list[Token] = []
    pos = 0
    body = line.split("#", 1)[0]
    while pos < len(body):
        if body[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(body, pos)
        if m is None:
            raise ParseError(f"unexpected character {body[pos]!r}", SourceSpan(lineno, pos + 1))
        toks.append(Token(m.group(0), SourceSpan(lineno, pos + 1)))
        pos = m.end()
    return toks


class _Cursor:
    """A token stream with one-token lookahead and span-carrying errors."""

    def __init__(self, tokens: list[Token], end_span: SourceSpan) -> None:
        self.tokens = tokens
        self.i = 0
        self.end_span = end_span

    def peek(self) -> str | None:
        return self.tokens[self.i].text if self.i < len(self.tokens) else None

    def span(self) -> SourceSpan:
        return self.tokens[self.i].span if self.i < len(self.tokens) else self.end_span

    def next(self) -> Token:
        if self.i >= len(self.tokens):
            raise ParseError("unexpected end of line", self.end_span)
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text: str) -> Token:
        tok = self.next()
        if tok.text != text:
            raise ParseError(f"expected {text!r}, found {tok.text!r}", tok.span)
        return tok

    def name(self, what: str) -> Token:
        tok = self.next()
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", tok.text):
            raise ParseError(f"expected {what}, found {tok.text!r}", tok.span)
        return tok

    def done(self) -> None:
        if self.i < len(self.tokens):
            tok = self.tokens[self.i]
            raise ParseError(f"trailing input starting at {tok.text!r}", tok.span)


# -- source model ----------------------------------------------------------------

# Expression ASTs are plain tuples so structural equality is tuple equality:
#   object item:  ("letters", names) | ("block", head, names)
#   morphism:     ("compose", rows); row ("tensor", factors)
#   factor:       ("id",) | ("word", letters) | ("perm", p) | ("q", blocks)
#                 | ("qinv", blocks) | ("pf", outer, inners) | ("braid", x, y)

ObjAst = tuple
MorAst = tuple
FunAst = tuple


@dataclass(frozen=True)
class SourceFile:
    flavor: Flavor | None = None
    gens: tuple[tuple[str, tuple[str, ...]], ...] = ()
    objmap: tuple[str, str, str, tuple[tuple[str, str], ...]] | None = None
    nodes: tuple[tuple[str, ObjAst], ...] = ()
    edges: tuple[tuple[str, str, str, MorAst], ...] = ()
    functors: tuple[tuple[str, FunAst], ...] = ()
    interps: tuple[tuple[str, tuple[str, ...]], ...] = ()
    goals: tuple[tuple[str, tuple[str, ...], tuple[str, ...]], ...] = ()
    spans: dict[tuple[str, str], SourceSpan] = field(default_factory=dict)

    def structure(self) -> tuple:
        """Everything but the spans; the round-trip invariant compares this."""
        return (
            self.flavor, self.gens, self.objmap, self.nodes,
            self.edges, self.functors, self.interps, self.goals,
        )


def _parse_word_token(text: str, span: SourceSpan) -> int:
    m = _WORD_LETTER_RE.fullmatch(text)
    if m is None:
        raise ParseError(f"{text!r} is not a braid letter", span)
    i = int(m.group(1))
    if i == 0:
        raise ParseError("braid letters are numbered from 1", span)
    return -i if m.group(2) else i


def _parse_quoted_word(tok: Token) -> tuple[int, ...]:
    letters = []
    for part in tok.text[1:-1].split():
        letters.append(_parse_word_token(part, tok.span))
    return tuple(letters)


def _parse_obj(cur: _Cursor) -> ObjAst:
    items = []
    while True:
        tok = cur.next()
        if tok.text == "[":
            names = []
            while cur.peek() != "]":
                if cur.peek() == ",":
                    cur.next()
                    continue
                names.append(cur.name("a generator").text)
            cur.expect("]")
            items.append(("letters", tuple(names)))
        elif re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", tok.text) and cur.peek() == "(":
            cur.expect("(")
            names = []
            while cur.peek() != ")":
                if cur.peek() == ",":
                    cur.next()
                    continue
                names.append(cur.name("a generator").text)
            cur.expect(")")
            items.append(("block", tok.text, tuple(names)))
        else:
            raise ParseError(f"expected an object item, found {tok.text!r}", tok.span)
        if cur.peek() == ";":
            cur.next()
        else:
            return tuple(items)


def _parse_block_list(cur: _Cursor) -> tuple[tuple[str, ...], ...]:
    cur.expect("(")
    blocks: list[tuple[str, ...]] = []
    if cur.peek() == ")":
        cur.next()
        return ()
    word: list[str] = []
    while True:
        tok = cur.next()
        if tok.text == "|":
            blocks.append(tuple(word))
            word = []
        elif tok.text == ")":
            blocks.append(tuple(word))
            return tuple(blocks)
        elif re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", tok.text):
            word.append(tok.text)
        else:
            raise ParseError(f"expected a generator, found {tok.text!r}", tok.span)


def _parse_factor(cur: _Cursor) -> tuple:
    tok = cur.next()
    if tok.text == "id":
        return ("id",)
    if tok.text.startswith('"'):
        return ("word", _parse_quoted_word(tok))
    if _WORD_LETTER_RE.fullmatch(tok.text):
        letters = [_parse_word_token(tok.text, tok.span)]
        while cur.peek() is not None and _WORD_LETTER_RE.fullmatch(cur.peek() or ""):
            letters.append(_parse_word_token(cur.next().text, tok.span))
        return ("word", tuple(letters))
    if tok.text == "perm":
        cur.expect("(")
        images = []
        while cur.peek() != ")":
            if cur.peek() == ",":
                cur.next()
                continue
            t = cur.next()
            if not t.text.isdigit():
                raise ParseError(f"expected a strand number, found {t.text!r}", t.span)
            images.append(int(t.text))
        cur.expect(")")
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ParseError(f"{images} is not a permutation of 1..{len(images)}", tok.span)
        return ("perm", tuple(i - 1 for i in images))
    if tok.text == "q":
        return ("q", _parse_block_list(cur))
    if tok.text == "q^-1":
        return ("qinv", _parse_block_list(cur))
    if tok.text == "pf":
        cur.expect("(")
        cur.expect("outer")
        cur.expect("=")
        outer = _parse_factor(cur)
        cur.expect(";")
        cur.expect("inner")
        cur.expect("=")
        inners = [_parse_factor(cur)]
        while cur.peek() == ",":
            cur.next()
            inners.append(_parse_factor(cur))
        cur.expect(")")
        return ("pf", outer, tuple(inners))
    if tok.text == "braid":
        cur.expect("(")
        x = _parse_obj(cur)
        cur.expect(",")
        y = _parse_obj(cur)
        cur.expect(")")
        return ("braid", x, y)
    raise ParseError(f"expected a morphism factor, found {tok.text!r}", tok.span)


def _parse_mor(cur: _Cursor) -> MorAst:
    def row() -> tuple:
        factors = [_parse_factor(cur)]
        while cur.peek() == ";":
            cur.next()
            factors.append(_parse_factor(cur))
        return ("tensor", tuple(factors))

    rows = [row()]
    while cur.peek() == ".":
        cur.next()
        rows.append(row())
    return ("compose", tuple(rows))


def parse_source(text: str) -> SourceFile:
    """Parse a source file. Malformed input raises ParseError with the
    offending position; nothing else escapes."""
    flavor: Flavor | None = None
    gens: list[tuple[str, tuple[str, ...]]] = []
    objmap = None
    nodes: list[tuple[str, ObjAst]] = []
    edges: list[tuple[str, str, str, MorAst]] = []
    functors: list[tuple[str, FunAst]] = []
    interps: list[tuple[str, tuple[str, ...]]] = []
    goals: list[tuple[str, tuple[str, ...], tuple[str, ...]]] = []
    spans: dict[tuple[str, str], SourceSpan] = {}

    def declare(kind: str, name: str, span: SourceSpan) -> None:
        if (kind, name) in spans:
            raise ParseError(f"{kind} {name!r} already declared at {spans[kind, name]}", span)
        spans[kind, name] = span

    for lineno, line in enumerate(text.splitlines(), start=1):
        toks = _tokenize_line(line, lineno)
        if not toks:
            continue
        cur = _Cursor(toks, SourceSpan(lineno, len(line) + 1))
        head = cur.next()
        if head.text == "flavor":
            word = cur.name("a flavor").text
            if word not in FLAVOR_WORDS:
                raise ParseError(f"unknown flavor {word!r}", cur.tokens[cur.i - 1].span)
            if flavor is not None:
                raise ParseError("flavor already declared", head.span)
            flavor = FLAVOR_WORDS[word]
        elif head.text == "gens":
            name = cur.name("a generator set name").text
            declare("gens", name, head.span)
            cur.expect("=")
            cur.expect("{")
            names = []
            while cur.peek() != "}":
                if cur.peek() == ",":
                    cur.next()
                    continue
                names.append(cur.name("a generator").text)
            cur.expect("}")
            gens.append((name, tuple(names)))
        elif head.text == "map":
            if objmap is not None:
                raise ParseError("a file declares a single map", head.span)
            name = cur.name("a map name").text
            declare("map", name, head.span)
            cur.expect(":")
            src = cur.name("a generator set").text
            cur.expect("->")
            tgt = cur.name("a generator set").text
            cur.expect("{")
            pairs = []
            while cur.peek() != "}":
                if cur.peek() == ";":
                    cur.next()
                    continue
                a = cur.name("a generator").text
                cur.expect("->")
                b = cur.name("a generator").text
                pairs.append((a, b))
            cur.expect("}")
            objmap = (name, src, tgt, tuple(pairs))
        elif head.text == "node":
            name = cur.name("a node name").text
            declare("node", name, head.span)
            cur.expect("=")
            nodes.append((name, _parse_obj(cur)))
        elif head.text == "edge":
            name = cur.name("an edge name").text
            declare("edge", name, head.span)
            cur.expect(":")
            src = cur.name("a node").text
            cur.expect("->")
            tgt = cur.name("a node").text
            cur.expect("=")
            edges.append((name, src, tgt, _parse_mor(cur)))
        elif head.text == "functor":
            name = cur.name("a functor name").text
            declare("functor", name, head.span)
            cur.expect("=")
            kind = cur.next()
            if kind.text == "compose":
                cur.expect("(")
                f = cur.name("a functor").text
                cur.expect(",")
                g = cur.name("a functor").text
                cur.expect(")")
                functors.append((name, ("compose", f, g)))
            else:
                spec = kind.text
                if kind.text == "nfold":
                    cur.expect("(")
                    n = cur.next()
                    if not n.text.isdigit():
                        raise ParseError(f"expected a count, found {n.text!r}", n.span)
                    cur.expect(")")
                    spec = f"nfold({n.text})"
                elif kind.text not in ("identity", "doubling"):
                    raise ParseError(f"unknown functor {kind.text!r}", kind.span)
                cur.expect("on")
                on = cur.name("a generator set").text
                functors.append((name, ("builtin", spec, on)))
        elif head.text == "interp":
            name = cur.name("a letter").text
            declare("interp", name, head.span)
            cur.expect("=")
            cur.expect("[")
            names = []
            while cur.peek() != "]":
                if cur.peek() == ",":
                    cur.next()
                    continue
                names.append(cur.name("a generator").text)
            cur.expect("]")
            interps.append((name, tuple(names)))
        elif head.text == "goal":
            name = cur.name("a goal name").text
            declare("goal", name, head.span)
            cur.expect(":")

            def path() -> tuple[str, ...]:
                steps = [cur.name("an edge").text]
                while cur.peek() == ".":
                    cur.next()
                    steps.append(cur.name("an edge").text)
                return tuple(steps)

            left = path()
            cur.expect("==")
            right = path()
            goals.append((name, left, right))
        else:
            raise ParseError(f"unknown declaration {head.text!r}", head.span)
        cur.done()

    sf = SourceFile(
        flavor, tuple(gens), objmap, tuple(nodes), tuple(edges),
        tuple(functors), tuple(interps), tuple(goals), spans,
    )
    _resolve(sf)
    return sf


def _resolve(sf: SourceFile) -> None:
    """Cross-declaration reference checks; expression-level name checks
    happen during elaboration."""

    def at(kind: str, name: str) -> SourceSpan | None:
        return sf.spans.get((kind, name))

    gen_names = {n for n, _ in sf.gens}
    if sf.objmap is not None:
        name, src, tgt, _ = sf.objmap
        for g in (src, tgt):
            if g not in gen_names:
                raise ParseError(f"map {name}: no generator set {g!r}", at("map", name))
    node_names = {n for n, _ in sf.nodes}
    for name, src, tgt, _ in sf.edges:
        for n in (src, tgt):
            if n not in node_names:
                raise ParseError(f"edge {name}: no node {n!r}", at("edge", name))
    functor_names = set()
    for name, ast in sf.functors:
        if ast[0] == "builtin" and ast[2] not in gen_names:
            raise ParseError(f"functor {name}: no generator set {ast[2]!r}", at("functor", name))
        if ast[0] == "compose":
            for f in ast[1:]:
                if f not in functor_names:
                    raise ParseError(f"functor {name}: no functor {f!r}", at("functor", name))
        functor_names.add(name)
    edge_names = {n for n, *_ in sf.edges}
    for name, left, right in sf.goals:
        for step in left + right:
            if step not in edge_names:
                raise ParseError(f"goal {name}: no edge {step!r}", at("goal", name))


# -- printing back ---------------------------------------------------------------

def _format_obj(ast: ObjAst) -> str:
    parts = []
    for item in ast:
        if item[0] == "letters":
            parts.append("[" + " ".join(item[1]) + "]")
        else:
            parts.append(f"{item[1]}(" + " ".join(item[2]) + ")")
    return " ; ".join(parts)


def _format_word(letters: tuple[int, ...]) -> str:
    return '"' + braid_str(BraidWord(max((abs(l) for l in letters), default=0) + 1, letters)) + '"'


def _format_factor(f: tuple) -> str:
    if f[0] == "id":
        return "id"
    if f[0] == "word":
        return _format_word(f[1])
    if f[0] == "perm":
        return "perm(" + " ".join(str(i + 1) for i in f[1]) + ")"
    if f[0] in ("q", "qinv"):
        head = "q" if f[0] == "q" else "q^-1"
        return head + "(" + " | ".join(" ".join(w) for w in f[1]) + ")"
    if f[0] == "pf":
        inner = ", ".join(_format_factor(g) for g in f[2])
        return f"pf(outer={_format_factor(f[1])}; inner={inner})"
    return f"braid({_format_obj(f[1])}, {_format_obj(f[2])})"


def _format_mor(ast: MorAst) -> str:
    return " . ".join(" ; ".join(_format_factor(f) for f in row[1]) for row in ast[1])


def format_source(sf: SourceFile) -> str:
    """Print a SourceFile back out; reparsing yields the same structure."""
    out: list[str] = []
    if sf.flavor is not None:
        word = {v: k for k, v in FLAVOR_WORDS.items()}[sf.flavor]
        out.append(f"flavor {word}")
    for name, names in sf.gens:
        out.append(f"gens {name} = {{ " + ", ".join(names) + " }")
    if sf.objmap is not None:
        name, src, tgt, pairs = sf.objmap
        body = "; ".join(f"{a} -> {b}" for a, b in pairs)
        out.append(f"map {name} : {src} -> {tgt} {{ {body} }}")
    for name, ast in sf.nodes:
        out.append(f"node {name} = {_format_obj(ast)}")
    for name, src, tgt, ast in sf.edges:
        out.append(f"edge {name} : {src} -> {tgt} = {_format_mor(ast)}")
    for name, ast in sf.functors:
        if ast[0] == "builtin":
            out.append(f"functor {name} = {ast[1]} on {ast[2]}")
        else:
            out.append(f"functor {name} = compose({ast[1]}, {ast[2]})")
    for name, names in sf.interps:
        out.append(f"interp {name} = [" + " ".join(names) + "]")
    for name, left, right in sf.goals:
        out.append(f"goal {name} : " + " . ".join(left) + " == " + " . ".join(right))
    return "\n".join(out) + "\n"


# -- elaboration -----------------------------------------------------------------

@dataclass(frozen=True)
class _Env:
    phi: ObjMap
    flavor: Flavor
    mapname: str
    span: SourceSpan | None


def _elab_obj(ast: ObjAst, env: _Env) -> tuple[ULetter, ...]:
    raw: list[ULetter] = []
    for item in ast:
        if item[0] == "letters":
            for n in item[1]:
                if n not in env.phi.target:
                    raise ElabError(f"{n!r} is not a generator of {env.phi.target.name}", env.span)
                raw.append(FreeLetter(n))
        else:
            _, head, names = item
            if head != env.mapname:
                raise ElabError(f"{head!r} is not the declared map {env.mapname!r}", env.span)
            for n in names:
                if n not in env.phi.source:
                    raise ElabError(f"{n!r} is not a generator of {env.phi.source.name}", env.span)
            raw.append(PhiLetter(names))
    return tuple(raw)


def _take(remaining: list[ULetter], count: int, what: str, env: _Env) -> list[ULetter]:
    if len(remaining) < count:
        raise ElabError(f"{what} needs {count} letters, {len(remaining)} left", env.span)
    chunk = remaining[:count]
    del remaining[:count]
    return chunk


def _free_labels(chunk: Sequence[ULetter], env: _Env) -> tuple[str, ...]:
    labels = []
    for letter in chunk:
        norm = normalize_uobj((letter,), env.phi)
        if len(norm) != 1 or not isinstance(norm[0], FreeLetter):
            raise ElabError(f"{format_uobj((letter,))} is not a single plain letter", env.span)
        labels.append(norm[0].name)
    return tuple(labels)


def _check_word_width(letters: tuple[int, ...], n: int, what: str, env: _Env) -> None:
    if any(abs(l) > n - 1 for l in letters):
        raise ElabError(f"{what} uses strand {max(abs(l) for l in letters) + 1}, only {n} available", env.span)


def _inner_mor(f: tuple, block: tuple[str, ...], env: _Env) -> FreeMor:
    """A factor elaborated as a plain morphism over the source generators,
    at the exact width of its block."""
    if f[0] == "id":
        return fmor_id(env.flavor, block)
    if f[0] == "word":
        if env.flavor == "M":
            raise ElabError("braid words need a symmetric or braided flavor", env.span)
        _check_word_width(f[1], len(block), "inner word", env)
        word = BraidWord(len(block), f[1])
        if env.flavor == "B":
            return fmor_of_braid(block, word)
        return fmor_of_perm(block, braid_perm(word))
    if f[0] == "perm":
        if env.flavor != "S":
            raise ElabError("perm(..) is only available in the symmetric flavor", env.span)
        if len(f[1]) != len(block):
            raise ElabError(f"perm of length {len(f[1])} on a block of {len(block)}", env.span)
        return fmor_of_perm(block, f[1])
    raise ElabError(f"{f[0]} cannot appear inside pf(..)", env.span)


def _outer_content(f: tuple, k: int, env: _Env):
    if f[0] == "id":
        if env.flavor == "M":
            return None
        return identity_perm(k) if env.flavor == "S" else BraidWord(k, ())
    if f[0] == "word":
        if env.flavor == "M":
            raise ElabError("braid words need a symmetric or braided flavor", env.span)
        _check_word_width(f[1], k, "outer word", env)
        word = BraidWord(k, f[1])
        return word if env.flavor == "B" else braid_perm(word)
    if f[0] == "perm":
        if env.flavor != "S":
            raise ElabError("perm(..) is only available in the symmetric flavor", env.span)
        if len(f[1]) != k:
            raise ElabError(f"outer perm of length {len(f[1])} on {k} blocks", env.span)
        return f[1]
    raise ElabError(f"{f[0]} cannot be the outer part of pf(..)", env.span)


def _elab_factor(
    f: tuple, remaining: list[ULetter], final: bool, env: _Env
) -> tuple[object, list[ULetter]]:
    phi = env.phi
    if f[0] == "id":
        chunk = remaining[:] if final else _take(remaining, 1, "id", env)
        if final:
            del remaining[:]
        return UId(normalize_uobj(chunk, phi)), chunk

    if f[0] == "word":
        if env.flavor == "M":
            raise ElabError("braid words need a symmetric or braided flavor", env.span)
        min_width = max((abs(l) for l in f[1]), default=0) + 1 if f[1] else 0
        width = len(remaining) if final else min_width
        if width < min_width:
            raise ElabError(f"word needs {min_width} strands, {width} left", env.span)
        chunk = _take(remaining, width, "braid word", env)
        if not f[1]:
            return UId(normalize_uobj(chunk, phi)), chunk
        labels = _free_labels(chunk, env)
        word = BraidWord(width, f[1])
        u = fmor_of_braid(labels, word) if env.flavor == "B" else fmor_of_perm(labels, braid_perm(word))
        return UFree(u), _permute_raw(chunk, u)

    if f[0] == "perm":
        if env.flavor != "S":
            raise ElabError("perm(..) is only available in the symmetric flavor", env.span)
        chunk = _take(remaining, len(f[1]), "perm", env)
        u = fmor_of_perm(_free_labels(chunk, env), f[1])
        return UFree(u), _permute_raw(chunk, u)

    if f[0] in ("q", "qinv"):
        blocks = f[1]
        for w in blocks:
            for n in w:
                if n not in phi.source:
                    raise ElabError(f"{n!r} is not a generator of {phi.source.name}", env.span)
        merged = tuple(n for w in blocks for n in w)
        if f[0] == "q":
            chunk = _take(remaining, len(blocks), "q", env)
            for w, letter in zip(blocks, chunk):
                if not _letter_matches_block(letter, w, env):
                    raise ElabError(
                        f"{format_uobj((letter,))} does not match the block ({' '.join(w)})", env.span
                    )
            return UPhiQ(blocks), [PhiLetter(merged)]
        chunk = _take(remaining, 1, "q^-1", env)
        if not _letter_matches_block(chunk[0], merged, env):
            raise ElabError(
                f"{format_uobj((chunk[0],))} does not match the merged block ({' '.join(merged)})", env.span
            )
        return UPhiQInv(blocks), [PhiLetter(w) for w in blocks]

    if f[0] == "pf":
        inners_ast = f[2]
        chunk = _take(remaining, len(inners_ast), "pf", env)
        blocks = []
        for letter in chunk:
            if not isinstance(letter, PhiLetter):
                raise ElabError(f"pf expects formed letters, found {format_uobj((letter,))}", env.span)
            blocks.append(letter.word)
        inners = tuple(_inner_mor(g, w, env) for g, w in zip(inners_ast, blocks))
        outer = _outer_content(f[1], len(blocks), env)
        m2 = FreeMor2(env.flavor, tuple(blocks), _permute_blocks(inners, outer, env), outer, inners)
        return UPhiFree(m2), [PhiLetter(w) for w in m2.target]

    if f[0] == "braid":
        xraw = _elab_obj(f[1], env)
        yraw = _elab_obj(f[2], env)
        chunk = _take(remaining, len(xraw) + len(yraw), "braid", env)
        got_x = normalize_uobj(tuple(chunk[: len(xraw)]), env.phi)
        got_y = normalize_uobj(tuple(chunk[len(xraw):]), env.phi)
        x, y = normalize_uobj(xraw, env.phi), normalize_uobj(yraw, env.phi)
        if (got_x, got_y) != (x, y):
            raise ElabError(
                f"braid arguments {format_uobj(x)} ; {format_uobj(y)} do not match the "
                f"source letters {format_uobj(got_x)} ; {format_uobj(got_y)}", env.span
            )
        if env.flavor == "M":
            if x and y:
                raise ElabError("the plain flavor has no braiding", env.span)
            return UId(normalize_uobj(tuple(chunk), env.phi)), chunk
        return UBraiding(x, y), chunk[len(xraw):] + chunk[: len(xraw)]

    raise ElabError(f"unknown factor {f[0]!r}", env.span)


def _letter_matches_block(letter: ULetter, word: tuple[str, ...], env: _Env) -> bool:
    if isinstance(letter, PhiLetter) and letter.word == word:
        return True
    if len(word) == 1 and isinstance(letter, FreeLetter):
        return letter.name == env.phi(word[0])
    return False


def _permute_raw(chunk: list[ULetter], u: FreeMor) -> list[ULetter]:
    from .free_cat import underlying_permutation

    p = underlying_permutation(u)
    out: list[ULetter] = list(chunk)
    for i, letter in enumerate(chunk):
        out[p[i]] = letter
    return out


def _permute_blocks(inners: tuple[FreeMor, ...], outer, env: _Env) -> tuple[tuple[str, ...], ...]:
    if outer is None:
        p = identity_perm(len(inners))
    elif isinstance(outer, BraidWord):
        p = braid_perm(outer)
    else:
        p = outer
    out: list[tuple[str, ...]] = [()] * len(inners)
    for i, u in enumerate(inners):
        out[p[i]] = u.target
    return tuple(out)


def _elab_mor(ast: MorAst, raw: tuple[ULetter, ...], env: _Env) -> tuple[object, tuple[ULetter, ...]]:
    rows = ast[1]
    letters = list(raw)
    terms = []
    for row in reversed(rows):
        remaining = list(letters)
        parts = []
        for idx, f in enumerate(row[1]):
            final = idx == len(row[1]) - 1
            t, chunk_tgt = _elab_factor(f, remaining, final, env)
            parts.append((t, chunk_tgt))
        if remaining:
            raise ElabError(
                f"{len(remaining)} source letters not consumed, starting at "
                f"{format_uobj((remaining[0],))}", env.span
            )
        term = parts[-1][0]
        for t, _ in reversed(parts[:-1]):
            term = UTensor(t, term)
        terms.append(term)
        letters = [l for _, tgt in parts for l in tgt]
    composite = terms[0]
    for t in terms[1:]:
        composite = UCompose(t, composite)
    return composite, tuple(letters)


def build_diagram(sf: SourceFile) -> Diagram:
    """Elaborate a parsed file into a validated diagram."""
    if sf.flavor is None:
        raise ElabError("file declares no flavor")
    if sf.objmap is None:
        raise ElabError("file declares no map")
    gensets = {name: GenSet(name, names) for name, names in sf.gens}
    mapname, src, tgt, pairs = sf.objmap
    phi = ObjMap(gensets[src], gensets[tgt], pairs)

    raw_nodes: dict[str, tuple[ULetter, ...]] = {}
    nodes: dict[str, tuple[ULetter, ...]] = {}
    for name, ast in sf.nodes:
        env = _Env(phi, sf.flavor, mapname, sf.spans.get(("node", name)))
        raw_nodes[name] = _elab_obj(ast, env)
        nodes[name] = normalize_uobj(raw_nodes[name], phi)

    edges: dict[str, Edge] = {}
    for name, esrc, etgt, ast in sf.edges:
        env = _Env(phi, sf.flavor, mapname, sf.spans.get(("edge", name)))
        term, raw_tgt = _elab_mor(ast, raw_nodes[esrc], env)
        if normalize_uobj(raw_tgt, phi) != nodes[etgt]:
            raise ElabError(
                f"edge {name} ends at {format_uobj(normalize_uobj(raw_tgt, phi))}, "
                f"node {etgt} is {format_uobj(nodes[etgt])}", env.span
            )
        edges[name] = Edge(name, esrc, etgt, term)

    functor: FunctorSpec | None = None
    built: dict[str, FunctorSpec] = {}
    for name, ast in sf.functors:
        span = sf.spans.get(("functor", name))
        try:
            if ast[0] == "builtin":
                built[name] = make_builtin_spec(ast[1], gensets[ast[2]], sf.flavor)
            else:
                built[name] = compose_specs(built[ast[1]], built[ast[2]])
        except (CohError, ValueError) as err:
            raise ElabError(f"functor {name}: {err}", span) from err
        functor = built[name]

    interp: dict[str, tuple[str, ...]] | None = None
    if sf.interps:
        interp = {}
        for name, names in sf.interps:
            span = sf.spans.get(("interp", name))
            if name not in phi.target:
                raise ElabError(f"{name!r} is not a generator of {phi.target.name}", span)
            for n in names:
                if n not in phi.source:
                    raise ElabError(f"{n!r} is not a generator of {phi.source.name}", span)
            interp[name] = names

    goals = tuple(Goal(name, left, right) for name, left, right in sf.goals)
    d = Diagram(sf.flavor, phi, nodes, edges, goals, functor, interp)
    validate_diagram(d)
    return d


# -- rendering -------------------------------------------------------------------

def render_braid_ascii(w: BraidWord, labels: Sequence[str]) -> str:
    """One header row of labels, then one row per letter in application
    order (first applied on top). A positive letter marks its crossing with
    ``+`` (left strand passing under), the inverse with ``-``."""
    if len(labels) != w.n:
        raise StructureError(f"{len(labels)} labels for {w.n} strands")
    col = lambda j: 4 * j  # noqa: E731
    width = col(max(w.n - 1, 0)) + 1
    header = [" "] * (width + 3)
    for j, label in enumerate(labels):
        for k, ch in enumerate(label[:3]):
            header[col(j) + k] = ch
    lines = ["".join(header).rstrip()]

    def bars() -> list[str]:
        row = [" "] * width
        for j in range(w.n):
            row[col(j)] = "|"
        return row

    if not w.letters:
        lines.append("".join(bars()).rstrip())
    for letter in reversed(w.letters):
        i = abs(letter) - 1
        row = bars()
        row[col(i)] = "\\"
        row[col(i + 1)] = "/"
        row[col(i) + 2] = "+" if letter > 0 else "-"
        lines.append("".join(row).rstrip())
    return "\n".join(lines)


# -- commands --------------------------------------------------------------------

def _color_enabled() -> bool | None:
    setting = os.environ.get("COH_COLOR")
    if setting == "0":
        return False
    if setting == "1":
        return True
    return None


def _fail(err: CohError) -> None:
    click.echo(f"error: {err}", err=True)
    sys.exit(2)


def _load(path: str) -> Diagram:
    try:
        with open(path, encoding="utf-8") as handle:
            return build_diagram(parse_source(handle.read()))
    except CohError as err:
        _fail(err)
        raise AssertionError  # unreachable


_VERDICT_COLORS = {EQUAL: "green", EQUAL_IN_S_ONLY: "yellow"}


@click.group()
def main() -> None:
    """Decide whether diagrams of braids, permutations, and constraint
    collapses commute."""


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--symmetric-ok", is_flag=True, help="Exit 0 when braids differ but permutations agree.")
@click.option("--json", "json_path", type=click.Path(), default=None, help="Also write the verdicts to a file.")
def check(file: str, symmetric_ok: bool, json_path: str | None) -> None:
    """Check every goal and print the verdict array."""
    d = _load(file)
    try:
        reports = [explain_goal(d, g) for g in d.goals]
    except CohError as err:
        click.echo(json.dumps({"error": str(err)}))
        click.echo(f"error: {err}", err=True)
        sys.exit(2)
    payload = [report_json(r) for r in reports]
    color = _color_enabled()
    for r in reports:
        tone = _VERDICT_COLORS.get(r.verdict, "red")
        click.echo(
            f"goal {r.goal}: " + click.style(r.verdict, fg=tone), err=True,
            color=color,
        )
    blob = json.dumps(payload, indent=2)
    click.echo(blob)
    if json_path is not None:
        with open(json_path, "w", encoding="utf-8") as handle:
            handle.write(blob + "\n")
    passing = {EQUAL, EQUAL_IN_S_ONLY} if symmetric_ok else {EQUAL}
    sys.exit(0 if all(r.verdict in passing for r in reports) else 1)


@main.command("dissolve")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
def dissolve_cmd(file: str) -> None:
    """Print every edge's dissolution, then each goal side's composite."""
    d = _load(file)
    try:
        for name in d.edges:
            e = d.edges[name]
            u = dissolve(e.term, d.phi, d.flavor)
            click.echo(f"edge {name}: {' '.join(u.source)} -> {' '.join(u.target)}  {_content_str(u, d.flavor)}")
        for g in d.goals:
            for label, path in (("left", g.left), ("right", g.right)):
                u = dissolve(compose_path(d, path), d.phi, d.flavor)
                click.echo(f"goal {g.name} {label}: {_content_str(u, d.flavor)}  nf {_nf_str(u, d.flavor)}")
    except CohError as err:
        _fail(err)


def _content_str(u: FreeMor, flavor: Flavor) -> str:
    if flavor == "B":
        return braid_str(u.content) or "(empty)"
    if flavor == "S":
        return "perm " + " ".join(str(i + 1) for i in u.content)
    return "id"


def _nf_str(u: FreeMor, flavor: Flavor) -> str:
    if flavor == "B":
        return str(normalize_braid(u.content))
    if flavor == "S":
        return braid_str(perm_braid(u.content)) or "(empty)"
    return "id"


@main.command("braid-eq")
@click.argument("w1")
@click.argument("w2")
@click.option("--strands", type=int, required=True)
def braid_eq(w1: str, w2: str, strands: int) -> None:
    """Decide equality of two braid words on the given strand count."""
    from .braid_core import braid_equal, parse_braid

    try:
        u = parse_braid(w1, strands)
        v = parse_braid(w2, strands)
    except ValueError as err:
        click.echo(f"error: {err}", err=True)
        sys.exit(2)
    if braid_equal(u, v):
        click.echo("equal")
        sys.exit(0)
    click.echo("not equal")
    sys.exit(1)


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--edge", "edge_name", required=True)
def render(file: str, edge_name: str) -> None:
    """Draw an edge's dissolved braid."""
    d = _load(file)
    e = d.edges.get(edge_name)
    if e is None:
        click.echo(f"error: no edge named {edge_name!r}", err=True)
        sys.exit(2)
    try:
        u = dissolve(e.term, d.phi, d.flavor)
        if d.flavor == "B":
            word = u.content
        elif d.flavor == "S":
            word = perm_braid(u.content)
        else:
            word = BraidWord(len(u.source), ())
        click.echo(render_braid_ascii(word, u.source))
    except CohError as err:
        _fail(err)


if __name__ == "__main__":
    main()
