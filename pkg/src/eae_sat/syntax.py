"""Front end for the one-leading-existential Ackermann fragment.

Sentences have the shape

    [exists z.] forall x. exists y1 ... . MATRIX

where MATRIX is a quantifier-free boolean combination of relation atoms
and (in)equalities over the prefix variables.  The grammar is:

    sentence := [ "exists" var "." ] "forall" var "." { "exists" var+ "." } formula
    formula  := iff
    iff      := imp { "<->" imp }
    imp      := disj { "->" disj }
    disj     := conj { "|" conj }
    conj     := lit { "&" lit }
    lit      := "~" lit | "(" formula ")" | atom
    atom     := RELNAME "(" var { "," var } ")" | var ("="|"!=") var

Relation names start with an uppercase letter, variables with a lowercase
letter.  `u != v` is sugar for `~(u = v)`.  `#` starts a line comment.
A missing leading existential is repaired by synthesizing a fresh unused
variable (satisfiability is unaffected).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field


class ParseError(Exception):
    """Lexical, grammatical or well-formedness error in an input sentence."""

    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at offset {position})"
        super().__init__(message)


class FragmentError(Exception):
    """The quantifier prefix does not match exists^{0|1} forall exists*."""


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Rel:
    name: str
    args: tuple[str, ...]


@dataclass(frozen=True)
class Eq:
    left: str
    right: str


@dataclass(frozen=True)
class Not:
    sub: object


@dataclass(frozen=True)
class And:
    left: object
    right: object


@dataclass(frozen=True)
class Or:
    left: object
    right: object


@dataclass(frozen=True)
class Imp:
    left: object
    right: object


@dataclass(frozen=True)
class Iff:
    left: object
    right: object


_BINOPS = {And: "&", Or: "|", Imp: "->", Iff: "<->"}


@dataclass(frozen=True)
class Signature:
    """Relation symbols with arities, ordered lexicographically by name."""

    relations: tuple[tuple[str, int], ...]

    def __post_init__(self):
        names = [n for n, _ in self.relations]
        if names != sorted(names):
            raise ValueError("signature relations must be sorted by name")
        if len(set(names)) != len(names):
            raise ValueError("duplicate relation name in signature")
        for n, a in self.relations:
            if a < 1:
                raise ValueError(f"relation {n} has arity {a} < 1")

    def __len__(self):
        return len(self.relations)

    def __iter__(self):
        return iter(self.relations)

    @property
    def names(self):
        return tuple(n for n, _ in self.relations)

    def arity(self, name):
        for n, a in self.relations:
            if n == name:
                return a
        raise KeyError(name)

    def index(self, name):
        for i, (n, _) in enumerate(self.relations):
            if n == name:
                return i
        raise KeyError(name)

    def max_arity(self):
        return max((a for _, a in self.relations), default=0)


@dataclass(frozen=True)
class PrenexSentence:
    z: str
    x: str
    ys: tuple[str, ...]
    matrix: object
    signature: Signature
    z_synthesized: bool = field(default=False, compare=False)

    @property
    def prefix_vars(self):
        return (self.z, self.x) + self.ys

    @property
    def n(self):
        return len(self.ys)


# ---------------------------------------------------------------------------
# AST utilities
# ---------------------------------------------------------------------------

def atoms_of(matrix):
    """All distinct relation atoms of a matrix, in first-occurrence order."""
    seen = []
    def walk(node):
        if isinstance(node, Rel):
            if node not in seen:
                seen.append(node)
        elif isinstance(node, Eq):
            pass
        elif isinstance(node, Not):
            walk(node.sub)
        else:
            walk(node.left)
            walk(node.right)
    walk(matrix)
    return tuple(seen)


def equalities_of(matrix):
    """All distinct equality atoms of a matrix, in first-occurrence order."""
    seen = []
    def walk(node):
        if isinstance(node, Eq):
            if node not in seen:
                seen.append(node)
        elif isinstance(node, Rel):
            pass
        elif isinstance(node, Not):
            walk(node.sub)
        else:
            walk(node.left)
            walk(node.right)
    walk(matrix)
    return tuple(seen)


def matrix_variables(matrix):
    out = set()
    for a in atoms_of(matrix):
        out.update(a.args)
    for e in equalities_of(matrix):
        out.add(e.left)
        out.add(e.right)
    return out


def extract_signature(matrix):
    """The relation symbols of a matrix with their arities (equality excluded)."""
    arities = {}
    for a in atoms_of(matrix):
        arities[a.name] = len(a.args)
    return Signature(tuple(sorted(arities.items())))


# ---------------------------------------------------------------------------
# Tokenizer
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<ident>[A-Za-z][A-Za-z0-9_]*)
  | (?P<op><->|->|!=|=|~|&|\||\(|\)|,|\.)
    """,
    re.VERBOSE,
)


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        if m.lastgroup != "ws":
            tokens.append((m.group(), pos))
        pos = m.end()
    tokens.append((None, pos))  # end marker
    return tokens


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i][0]

    def pos(self):
        return self.tokens[self.i][1]

    def next(self):
        tok, pos = self.tokens[self.i]
        self.i += 1
        return tok, pos

    def expect(self, literal):
        tok, pos = self.next()
        if tok != literal:
            raise ParseError(f"expected {literal!r}, found {tok!r}", pos)
        return tok

    def variable(self):
        tok, pos = self.next()
        if tok is None or not tok[0].islower():
            raise ParseError(f"expected a variable, found {tok!r}", pos)
        if tok in ("exists", "forall"):
            raise ParseError(f"keyword {tok!r} cannot be used as a variable", pos)
        return tok

    # -- prefix -----------------------------------------------------------

    def prefix(self):
        """Raw quantifier blocks as a list of ('exists'|'forall', [vars])."""
        blocks = []
        while self.peek() in ("exists", "forall"):
            kind, _ = self.next()
            vs = [self.variable()]
            while self.peek() is not None and self.peek()[0].islower() \
                    and self.peek() not in ("exists", "forall"):
                vs.append(self.variable())
            self.expect(".")
            blocks.append((kind, vs))
        if not blocks:
            raise ParseError("expected a quantifier prefix", self.pos())
        return blocks

    # -- formula ----------------------------------------------------------

    def formula(self):
        node = self.imp()
        while self.peek() == "<->":
            self.next()
            node = Iff(node, self.imp())
        return node

    def imp(self):
        node = self.disj()
        while self.peek() == "->":
            self.next()
            node = Imp(node, self.disj())
        return node

    def disj(self):
        node = self.conj()
        while self.peek() == "|":
            self.next()
            node = Or(node, self.conj())
        return node

    def conj(self):
        node = self.lit()
        while self.peek() == "&":
            self.next()
            node = And(node, self.lit())
        return node

    def lit(self):
        tok = self.peek()
        if tok == "~":
            self.next()
            return Not(self.lit())
        if tok == "(":
            self.next()
            node = self.formula()
            self.expect(")")
            return node
        return self.atom()

    def atom(self):
        tok, pos = self.next()
        if tok is None:
            raise ParseError("unexpected end of input", pos)
        if tok[0].isupper():
            if self.peek() != "(":
                raise ParseError(
                    f"relation {tok} used without arguments "
                    "(nullary relations are not allowed)", pos)
            self.next()
            args = [self.variable()]
            while self.peek() == ",":
                self.next()
                args.append(self.variable())
            self.expect(")")
            return Rel(tok, tuple(args))
        if not tok[0].islower() or tok in ("exists", "forall"):
            raise ParseError(f"expected an atom, found {tok!r}", pos)
        op, oppos = self.next()
        if op == "=":
            return Eq(tok, self.variable())
        if op == "!=":
            return Not(Eq(tok, self.variable()))
        raise ParseError(f"expected '=' or '!=', found {op!r}", oppos)


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

def _fresh_z(used):
    if "z" not in used:
        return "z"
    i = 0
    while f"z{i}" in used:
        i += 1
    return f"z{i}"


def validate_prefix(blocks, matrix):
    """Check the prefix shape exists^{0|1} forall exists* and build a sentence.

    `blocks` is the raw quantifier-block list produced by the parser.  A
    missing leading existential gets a fresh variable synthesized for it.
    """
    quants = [(kind, v) for kind, vs in blocks for v in vs]
    universals = [i for i, (kind, _) in enumerate(quants) if kind == "forall"]
    if len(universals) == 0:
        raise FragmentError("prefix contains no universal quantifier")
    if len(universals) > 1:
        raise FragmentError("prefix contains more than one universal quantifier")
    u = universals[0]
    if u > 1:
        raise FragmentError(
            "at most one existential may precede the universal quantifier "
            f"(found {u})")

    leading = [v for _, v in quants[:u]]
    x = quants[u][1]
    ys = [v for _, v in quants[u + 1:]]

    allvars = leading + [x] + ys
    if len(set(allvars)) != len(allvars):
        dup = next(v for v in allvars if allvars.count(v) > 1)
        raise ParseError(f"duplicate prefix variable {dup!r}")

    if leading:
        z = leading[0]
        synthesized = False
    else:
        z = _fresh_z(set(allvars) | matrix_variables(matrix))
        synthesized = True

    free = matrix_variables(matrix) - set(allvars) - {z}
    if free:
        raise ParseError(f"unbound variable(s) in matrix: {', '.join(sorted(free))}")

    sig = _checked_signature(matrix)
    return PrenexSentence(z=z, x=x, ys=tuple(ys), matrix=matrix,
                          signature=sig, z_synthesized=synthesized)


def _checked_signature(matrix):
    arities = {}
    for a in atoms_of(matrix):
        prev = arities.get(a.name)
        if prev is not None and prev != len(a.args):
            raise ParseError(
                f"arity conflict for {a.name}: used with arities {prev} "
                f"and {len(a.args)}")
        arities[a.name] = len(a.args)
    return Signature(tuple(sorted(arities.items())))


def parse(text):
    """Parse a sentence of the fragment; raises ParseError/FragmentError."""
    p = _Parser(text)
    blocks = p.prefix()
    matrix = p.formula()
    tok, pos = p.next()
    if tok is not None:
        raise ParseError(f"trailing input starting with {tok!r}", pos)
    return validate_prefix(blocks, matrix)


# ---------------------------------------------------------------------------
# Canonical printing
# ---------------------------------------------------------------------------

def format_matrix(node):
    """Fully parenthesized canonical rendering of a matrix."""
    if isinstance(node, Rel):
        return f"{node.name}({', '.join(node.args)})"
    if isinstance(node, Eq):
        return f"{node.left} = {node.right}"
    if isinstance(node, Not):
        return f"(~{format_matrix(node.sub)})"
    op = _BINOPS[type(node)]
    return f"({format_matrix(node.left)} {op} {format_matrix(node.right)})"


def format_sentence(s):
    """Canonical print; parse(format_sentence(s)) == s for every sentence."""
    body = format_matrix(s.matrix)
    if isinstance(s.matrix, (Rel, Eq)):
        body = f"({body})"
    parts = [f"exists {s.z}.", f"forall {s.x}."]
    parts += [f"exists {y}." for y in s.ys]
    return " ".join(parts) + " " + body


# ---------------------------------------------------------------------------
# Matrix semantics over an abstract atom valuation
# ---------------------------------------------------------------------------

def eval_matrix(node, rel_value, eq_value):
    """Three-valued (Kleene) evaluation of a matrix.

    `rel_value(atom)` may return True, False, or None (unknown);
    `eq_value(u, v)` must return a definite boolean.  The result is None
    only if the truth value genuinely depends on unknown atoms.
    """
    if isinstance(node, Rel):
        return rel_value(node)
    if isinstance(node, Eq):
        return eq_value(node.left, node.right)
    if isinstance(node, Not):
        v = eval_matrix(node.sub, rel_value, eq_value)
        return None if v is None else not v
    a = eval_matrix(node.left, rel_value, eq_value)
    if isinstance(node, And):
        if a is False:
            return False
        b = eval_matrix(node.right, rel_value, eq_value)
        if b is False:
            return False
        return True if (a is True and b is True) else None
    if isinstance(node, Or):
        if a is True:
            return True
        b = eval_matrix(node.right, rel_value, eq_value)
        if b is True:
            return True
        return False if (a is False and b is False) else None
    if isinstance(node, Imp):
        if a is False:
            return True
        b = eval_matrix(node.right, rel_value, eq_value)
        if b is True:
            return True
        return False if (a is True and b is False) else None
    if isinstance(node, Iff):
        b = eval_matrix(node.right, rel_value, eq_value)
        if a is None or b is None:
            return None
        return a is b
    raise TypeError(f"not a matrix node: {node!r}")


def load_sentence(path):
    """Read and parse the sentence in a UTF-8 text file."""
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())
