"""Explicit finite models: evaluation, realization, oracle, staged building.

The brute-force model search is the independent oracle the solvers are
differential-tested against: it enumerates every structure up to a size
bound, in a fixed canonical order, and evaluates the sentence directly.

The staged builder replays a SAT certificate as an increasing chain of
models B0 <= B1 <= ..., gluing one witness instance onto every element of
the previous stage, completing minimally (unforced tuples stay false)
and aborting with a conflict object whenever a witness dictates a value
that contradicts an already-determined one.  Conflicts are data, not
faults: they pinpoint instances where a surviving strategy cannot
actually be glued into a model.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .onetypes import OneType, render_one_type, type_of_element
from .syntax import (
    And,
    Eq,
    Iff,
    Imp,
    Not,
    Or,
    Rel,
    Signature,
    equalities_of,
    eval_matrix,
)


class UnboundVariableError(Exception):
    pass


class EmptyUniverseError(Exception):
    pass


class MissingStrategyEntry(Exception):
    """A realized type has no strategy entry; the certificate was unsound."""


class OracleBudgetExceeded(Exception):
    def __init__(self, count):
        self.count = count
        super().__init__(
            f"brute-force budget exceeded after {count} structures")


@dataclass(frozen=True)
class FiniteStructure:
    signature: Signature
    size: int
    extents: object  # mapping relation name -> frozenset of tuples

    def __post_init__(self):
        for name, arity in self.signature:
            for tup in self.extents.get(name, ()):
                if len(tup) != arity or any(not 0 <= e < self.size for e in tup):
                    raise ValueError(f"bad tuple {tup} for {name}/{arity}")


@dataclass(frozen=True)
class GlueRecord:
    stage: int  # index of the stage this witness instance was glued into
    b: int  # the element being served
    pi: OneType
    element_map: tuple  # ((class id, element), ...)


@dataclass
class StagedModel:
    stages: list  # [FiniteStructure, ...], each a substructure of the next
    b0: int
    glue: list  # [GlueRecord, ...]


@dataclass(frozen=True)
class ConstructionConflict:
    stage: int
    element: int
    relation: str  # relation name, or "=" for an identification clash
    tuple_: tuple
    required: bool
    existing: bool


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

def eval_qf(structure, assignment, matrix):
    """Standard quantifier-free semantics; equality is element identity."""
    extents = structure.extents

    def rel_value(a):
        try:
            tup = tuple(assignment[v] for v in a.args)
        except KeyError as e:
            raise UnboundVariableError(f"unbound variable {e.args[0]!r}") from None
        return tup in extents.get(a.name, frozenset())

    def eq_value(u, v):
        try:
            return assignment[u] == assignment[v]
        except KeyError as e:
            raise UnboundVariableError(f"unbound variable {e.args[0]!r}") from None

    return eval_matrix(matrix, rel_value, eq_value) is True


def eval_sentence(structure, sentence):
    """Finite semantics of the full sentence, with early exits."""
    if structure.size == 0:
        raise EmptyUniverseError("sentences have no truth value over an empty universe")
    rng = range(structure.size)
    matrix = sentence.matrix
    ys = sentence.ys
    for zv in rng:
        ok_all_x = True
        for xv in rng:
            assignment = {sentence.z: zv, sentence.x: xv}
            found = False
            for ytuple in product(rng, repeat=len(ys)):
                assignment.update(zip(ys, ytuple))
                if eval_qf(structure, assignment, matrix):
                    found = True
                    break
            if not found:
                ok_all_x = False
                break
        if ok_all_x:
            return True
    return False


def eval_sentence_naive(structure, sentence):
    """Reference evaluation by full assignment enumeration (test oracle)."""
    if structure.size == 0:
        raise EmptyUniverseError("sentences have no truth value over an empty universe")
    rng = range(structure.size)
    ys = sentence.ys

    def holds(zv):
        for xv in rng:
            if not any(
                eval_qf(structure,
                        dict(zip((sentence.z, sentence.x) + ys, (zv, xv) + yt)),
                        sentence.matrix)
                for yt in product(rng, repeat=len(ys))
            ):
                return False
        return True

    return any(holds(zv) for zv in rng)


# ---------------------------------------------------------------------------
# Descriptor realization
# ---------------------------------------------------------------------------

def descriptor_to_structure(d, sentence):
    """Realize a valid descriptor as an (n+2)-element structure + assignment.

    One element per class in class-id order, then padding duplicates of
    the z-class (same 1-type, no other relations).  Extents hold exactly
    the class-type diagonals and the true atoms; everything else is
    false.
    """
    sig = sentence.signature
    nclasses = d.num_classes
    size = nclasses + d.padding_count
    cz = d.partition[0]
    extents = {name: set() for name, _ in sig}
    for c, t in enumerate(d.class_types):
        for i, (name, arity) in enumerate(sig):
            if t.bit(i):
                extents[name].add((c,) * arity)
    for pad in range(nclasses, size):
        for i, (name, arity) in enumerate(sig):
            if d.class_types[cz].bit(i):
                extents[name].add((pad,) * arity)
    for name, ctuple, v in d.atom_values:
        if v:
            extents[name].add(ctuple)
    structure = FiniteStructure(
        signature=sig, size=size,
        extents={name: frozenset(ts) for name, ts in extents.items()})
    assignment = {v: d.partition[i] for i, v in enumerate(sentence.prefix_vars)}
    return structure, assignment


# ---------------------------------------------------------------------------
# Brute-force oracle
# ---------------------------------------------------------------------------

def _compile_matrix(sentence):
    """Translate the matrix into a plain Python lambda for the hot loop.

    The function takes one set per relation (in signature order) followed
    by one element per prefix variable (in prefix order).  Membership
    tests and boolean operators inline to native bytecode, which is far
    cheaper than walking the AST once per assignment.
    """
    def expr(node):
        if isinstance(node, Rel):
            args = ", ".join(f"v_{a}" for a in node.args)
            comma = "," if len(node.args) == 1 else ""
            return f"(({args}{comma}) in ext_{node.name})"
        if isinstance(node, Eq):
            return f"(v_{node.left} == v_{node.right})"
        if isinstance(node, Not):
            return f"(not {expr(node.sub)})"
        if isinstance(node, And):
            return f"({expr(node.left)} and {expr(node.right)})"
        if isinstance(node, Or):
            return f"({expr(node.left)} or {expr(node.right)})"
        if isinstance(node, Imp):
            return f"((not {expr(node.left)}) or {expr(node.right)})"
        if isinstance(node, Iff):
            return f"({expr(node.left)} == {expr(node.right)})"
        raise TypeError(f"unknown matrix node {node!r}")

    params = [f"ext_{name}" for name, _ in sentence.signature]
    params += [f"v_{v}" for v in sentence.prefix_vars]
    return eval(f"lambda {', '.join(params)}: {expr(sentence.matrix)}", {})


def _fast_eval(fn, exts, size, n_ys):
    rng = range(size)
    y_tuples = list(product(rng, repeat=n_ys))
    for zv in rng:
        for xv in rng:
            if not any(fn(*exts, zv, xv, *yt) for yt in y_tuples):
                break
        else:
            return True
    return False


def brute_force_search(sentence, max_size, budget=10**7):
    """First satisfying structure in canonical enumeration order, or None.

    Universes of size 1..max_size; per size, extents are enumerated by
    binary counting over the concatenated tuple list (relations in
    signature order, tuples in positional product order, first tuple as
    least significant bit).  Exhaustive within the bound.
    """
    if max_size < 1:
        raise ValueError("max_size must be at least 1")
    sig = sentence.signature
    fn = _compile_matrix(sentence)
    n_ys = len(sentence.ys)
    count = 0
    for k in range(1, max_size + 1):
        slots = []  # (relation name, tuple) per bit position
        for name, arity in sig:
            for tup in product(range(k), repeat=arity):
                slots.append((name, tup))
        for i in range(1 << len(slots)):
            count += 1
            if count > budget:
                raise OracleBudgetExceeded(count)
            extents = {name: set() for name, _ in sig}
            for j, (name, tup) in enumerate(slots):
                if i >> j & 1:
                    extents[name].add(tup)
            exts = [extents[name] for name, _ in sig]
            if _fast_eval(fn, exts, k, n_ys):
                return FiniteStructure(
                    signature=sig, size=k,
                    extents={name: frozenset(ts)
                             for name, ts in extents.items()})
    return None


# ---------------------------------------------------------------------------
# Staged model construction
# ---------------------------------------------------------------------------

def build_model_sequence(sentence, cert, depth):
    """Grow the certificate's strategy into a chain of models.

    Every element of the previous stage gets its type's witness glued on:
    the z-class lands on b0, the x-class on the element itself, the other
    classes on fresh elements (padding adds no obligations and is
    skipped).  Returns the StagedModel, or the first ConstructionConflict
    encountered.
    """
    sig = sentence.signature
    strategy = cert.strategy_map()
    pi0 = cert.pi0
    eq_atoms = equalities_of(sentence.matrix)

    b0 = 0
    extents0 = {name: frozenset({(0,) * arity} if pi0.bit(i) else set())
                for i, (name, arity) in enumerate(sig)}
    stages = [FiniteStructure(signature=sig, size=1, extents=extents0)]
    glue = []
    next_fresh = 1

    for stage in range(1, depth + 1):
        prev = stages[-1]
        required = {}  # (relation, element tuple) -> bool
        for b in range(prev.size):
            pi = type_of_element(prev, b)
            d = strategy.get(pi)
            if d is None:
                raise MissingStrategyEntry(
                    f"no strategy entry for realized type {pi.bits} "
                    f"(stage {stage}, element {b})")
            cz, cx = d.partition[0], d.partition[1]
            if cz == cx and b != b0:
                # the witness identifies z and x, but this element is not b0
                return ConstructionConflict(
                    stage=stage, element=b, relation="=",
                    tuple_=(b0, b), required=True, existing=False)
            emap = {}
            for c in range(d.num_classes):
                if c == cz:
                    emap[c] = b0
                elif c == cx:
                    emap[c] = b
                else:
                    emap[c] = next_fresh
                    next_fresh += 1
            glue.append(GlueRecord(
                stage=stage, b=b, pi=pi,
                element_map=tuple(sorted(emap.items()))))

            var_class = {v: d.partition[i]
                         for i, v in enumerate(sentence.prefix_vars)}
            for eq in eq_atoms:
                want = var_class[eq.left] == var_class[eq.right]
                got = emap[var_class[eq.left]] == emap[var_class[eq.right]]
                if want != got:
                    return ConstructionConflict(
                        stage=stage, element=b, relation="=",
                        tuple_=(emap[var_class[eq.left]],
                                emap[var_class[eq.right]]),
                        required=want, existing=got)

            dictated = []
            for c, t in enumerate(d.class_types):
                e = emap[c]
                for i, (name, arity) in enumerate(sig):
                    dictated.append((name, (e,) * arity, t.bit(i)))
            for name, ctuple, v in d.atom_values:
                dictated.append((name, tuple(emap[c] for c in ctuple), v))

            for name, tup, v in dictated:
                if all(t < prev.size for t in tup):
                    existing = tup in prev.extents.get(name, frozenset())
                    if existing != v:
                        return ConstructionConflict(
                            stage=stage, element=b, relation=name,
                            tuple_=tup, required=v, existing=existing)
                    continue
                key = (name, tup)
                if key in required:
                    if required[key] != v:
                        return ConstructionConflict(
                            stage=stage, element=b, relation=name,
                            tuple_=tup, required=v, existing=required[key])
                else:
                    required[key] = v

        new_extents = {}
        for name, _ in sig:
            ts = set(prev.extents.get(name, frozenset()))
            for (rname, tup), v in required.items():
                if rname == name and v:
                    ts.add(tup)
            new_extents[name] = frozenset(ts)
        stages.append(FiniteStructure(
            signature=sig, size=next_fresh, extents=new_extents))

    return StagedModel(stages=stages, b0=b0, glue=glue)


def verify_construction(staged, sentence, cert):
    """Independent check of the two gluing requirements; returns failures.

    R1: every element of every stage realizes a type the strategy covers.
    R2: every element of stage i has a recorded witness tuple making the
    matrix true in stage i+1.
    """
    failures = []
    sig = sentence.signature
    good = cert.good_types
    strategy = cert.strategy_map()
    for i, st in enumerate(staged.stages):
        for a in range(st.size):
            if type_of_element(st, a) not in good:
                failures.append(
                    f"R1: stage {i} element {a} realizes "
                    f"{render_one_type(type_of_element(st, a), sig)}, "
                    "not covered by the strategy")
    by_key = {(g.stage, g.b): g for g in staged.glue}
    for i in range(len(staged.stages) - 1):
        nxt = staged.stages[i + 1]
        for b in range(staged.stages[i].size):
            g = by_key.get((i + 1, b))
            if g is None:
                failures.append(f"R2: stage {i} element {b} has no glue record")
                continue
            d = strategy.get(g.pi)
            emap = dict(g.element_map)
            var_class = {v: d.partition[j]
                         for j, v in enumerate(sentence.prefix_vars)}
            assignment = {v: emap[var_class[v]] for v in sentence.prefix_vars}
            if assignment[sentence.z] != staged.b0 or assignment[sentence.x] != b:
                failures.append(
                    f"R2: stage {i} element {b} glue record maps z/x wrongly")
                continue
            if not eval_qf(nxt, assignment, sentence.matrix):
                failures.append(
                    f"R2: stage {i} element {b}: matrix false under the "
                    "recorded witness tuple")
    return failures
