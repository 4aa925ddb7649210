"""Deterministic satisfiability solvers for the fragment.

Three methods, all driven by the same witness search:

* ``gfp_solve`` — greatest-fixpoint elimination over 1-types: for each
  candidate starting type pi0, repeatedly discard types that lack a
  witness whose realized types all survive; SAT iff pi0 survives.
* ``bounded_game_solve`` — the literal counter semantics: acceptance is
  decided by memoized recursion Acc(pi, c), where the game is won
  outright once the counter reaches 2^{|sigma|} + 1.
* ``extended_solve`` — the same fixpoint over z-relative extended types,
  a strictly more conservative state space that also tracks the current
  element's relations to the fixed z-element.

SAT results from the fixpoint methods carry a positional-strategy
certificate that an independent checker can validate; UNSAT results
carry per-candidate elimination traces.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .onetypes import (
    DEFAULT_ARITY_CAP,
    check_arity_cap,
    enumerate_extended_types,
    enumerate_one_types,
    initial_extended_type,
)
from .witness import (
    ExtWitnessContext,
    WitnessContext,
    check_descriptor,
    find_ext_witness,
    find_witness,
    realized_types,
)

DEFAULT_GAME_DEPTH_BUDGET = 1025  # covers |sigma| <= 10


class GameDepthExceeded(Exception):
    """The counter bound 2^{|sigma|}+1 is above the configured budget."""

    def __init__(self, depth, budget):
        self.depth = depth
        self.budget = budget
        super().__init__(
            f"game depth {depth} exceeds the configured budget {budget}")


class InternalInvariantError(Exception):
    """A solver-produced artifact failed its own self-check."""


@dataclass(frozen=True)
class Certificate:
    """Positional strategy: one witness descriptor per surviving 1-type."""

    pi0: object
    strategy: tuple  # ((OneType, WitnessDescriptor), ...) in canonical type order

    def strategy_map(self):
        return dict(self.strategy)

    @property
    def good_types(self):
        return frozenset(t for t, _ in self.strategy)


@dataclass
class EliminationTrace:
    """Per starting candidate: which states died in which round."""

    pi0: object
    rounds: list  # [(round index starting at 1, [states eliminated]), ...]
    surviving: list


@dataclass
class Refutation:
    traces: list  # one EliminationTrace per candidate, canonical order


@dataclass
class SolveStats:
    witness_searches: int = 0
    cache_hits: int = 0
    elapsed_ms: float = 0.0
    types_total: int = 0


@dataclass
class SolveOutcome:
    verdict: str  # "SAT" | "UNSAT"
    method: str  # "gfp" | "game" | "extended"
    pi0: object = None
    certificate: Certificate | None = None
    refutation: Refutation | None = None
    stats: SolveStats = field(default_factory=SolveStats)


class _WitnessCache:
    """Memoizes witness searches per (pi0, pi, allowed-set) triple."""

    def __init__(self, sentence, record=None):
        self.sentence = sentence
        self.table = {}
        self.searches = 0
        self.hits = 0
        self.record = record

    def find(self, pi0, pi, allowed):
        key = (pi0, pi, allowed)
        if key in self.table:
            self.hits += 1
            return self.table[key]
        self.searches += 1
        if self.record is not None:
            self.record.append(key)
        d = find_witness(WitnessContext(self.sentence, pi0, pi, allowed))
        self.table[key] = d
        return d


class _ExtWitnessCache:
    def __init__(self, sentence):
        self.sentence = sentence
        self.table = {}
        self.searches = 0
        self.hits = 0

    def find(self, pi0, state, allowed_ext):
        key = (pi0, state, allowed_ext)
        if key in self.table:
            self.hits += 1
            return self.table[key]
        self.searches += 1
        d = find_ext_witness(
            ExtWitnessContext(self.sentence, pi0, state, allowed_ext))
        self.table[key] = d
        return d


# ---------------------------------------------------------------------------
# Greatest-fixpoint elimination
# ---------------------------------------------------------------------------

def _gfp_for_pi0(sentence, all_types, pi0, cache):
    """Eliminate until stable; returns (certificate-or-None, trace)."""
    good = list(all_types)
    rounds = []
    rnd = 0
    while True:
        allowed = frozenset(good)
        removed = [pi for pi in good
                   if cache.find(pi0, pi, allowed) is None]
        if not removed:
            break
        rnd += 1
        rounds.append((rnd, removed))
        good = [pi for pi in good if pi not in set(removed)]
    trace = EliminationTrace(pi0=pi0, rounds=rounds, surviving=list(good))
    if pi0 not in good:
        return None, trace
    allowed = frozenset(good)
    strategy = tuple((pi, cache.find(pi0, pi, allowed)) for pi in good)
    return Certificate(pi0=pi0, strategy=strategy), trace


def _run_candidates(candidates, worker, jobs):
    """Per-candidate results, consumed in canonical order up to the first hit.

    `worker(candidate)` must be a pure function.  Results past the first
    successful candidate are ignored, so the reported outcome and the
    aggregated statistics are identical to sequential processing.
    """
    if jobs <= 1 or len(candidates) <= 1:
        results = map(worker, candidates)
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(worker, candidates))
    consumed = []
    for res in results:
        consumed.append(res)
        if res[0] is not None:  # first successful candidate wins
            break
    return consumed


def gfp_solve(sentence, jobs=1, record_contexts=None):
    """Decide satisfiability by type elimination; the reference method."""
    t0 = time.perf_counter()
    all_types = enumerate_one_types(sentence.signature)

    def worker(pi0):
        cache = _WitnessCache(sentence, record=record_contexts)
        cert, trace = _gfp_for_pi0(sentence, all_types, pi0, cache)
        return cert, trace, cache

    consumed = _run_candidates(all_types, worker, jobs)
    stats = SolveStats(types_total=len(all_types))
    traces = []
    outcome = None
    for cert, trace, cache in consumed:
        stats.witness_searches += cache.searches
        stats.cache_hits += cache.hits
        traces.append(trace)
        if cert is not None:
            outcome = SolveOutcome(
                verdict="SAT", method="gfp", pi0=cert.pi0,
                certificate=cert, stats=stats)
            break
    if outcome is None:
        outcome = SolveOutcome(
            verdict="UNSAT", method="gfp",
            refutation=Refutation(traces=traces), stats=stats)
    stats.elapsed_ms = (time.perf_counter() - t0) * 1000.0
    return outcome


# ---------------------------------------------------------------------------
# Bounded game (literal counter semantics)
# ---------------------------------------------------------------------------

def bounded_game_solve(sentence, jobs=1,
                       depth_budget=DEFAULT_GAME_DEPTH_BUDGET):
    """Decide satisfiability by the counter-bounded game.

    Acc(pi, D) accepts outright at depth D = 2^{|sigma|}+1; below it,
    Acc(pi, c) holds iff some witness for (pi0, pi) has all its realized
    types accepted at counter c+1.  The per-level accepted sets are the
    memo table of that recursion, keyed by (pi, c).
    """
    t0 = time.perf_counter()
    all_types = enumerate_one_types(sentence.signature)
    depth = len(all_types) + 1  # 2^{|sigma|} + 1
    if depth > depth_budget:
        raise GameDepthExceeded(depth, depth_budget)

    def worker(pi0):
        cache = _WitnessCache(sentence)
        accepted = frozenset(all_types)  # level D: accept unconditionally
        rounds = []
        rnd = 0
        for _ in range(depth, 0, -1):
            nxt = frozenset(
                pi for pi in all_types
                if cache.find(pi0, pi, accepted) is not None)
            removed = [pi for pi in all_types
                       if pi in accepted and pi not in nxt]
            if removed:
                rnd += 1
                rounds.append((rnd, removed))
            accepted = nxt
        surviving = [pi for pi in all_types if pi in accepted]
        trace = EliminationTrace(pi0=pi0, rounds=rounds, surviving=surviving)
        ok = pi0 in accepted
        return (True if ok else None), trace, cache

    consumed = _run_candidates(all_types, worker, jobs)
    stats = SolveStats(types_total=len(all_types))
    traces = []
    outcome = None
    for ok, trace, cache in consumed:
        stats.witness_searches += cache.searches
        stats.cache_hits += cache.hits
        traces.append(trace)
        if ok is not None:
            outcome = SolveOutcome(
                verdict="SAT", method="game", pi0=trace.pi0, stats=stats)
            break
    if outcome is None:
        outcome = SolveOutcome(
            verdict="UNSAT", method="game",
            refutation=Refutation(traces=traces), stats=stats)
    stats.elapsed_ms = (time.perf_counter() - t0) * 1000.0
    return outcome


# ---------------------------------------------------------------------------
# Extended-type fixpoint
# ---------------------------------------------------------------------------

def extended_solve(sentence, jobs=1, arity_cap=DEFAULT_ARITY_CAP):
    """Type elimination over z-relative extended states.

    SAT results carry a plain certificate for the same starting type:
    an extended strategy always shadows a plain one, so the plain
    fixpoint for that candidate must succeed (asserted, not assumed).
    """
    t0 = time.perf_counter()
    sig = sentence.signature
    check_arity_cap(sig, arity_cap)
    all_types = enumerate_one_types(sig)

    def worker(pi0):
        cache = _ExtWitnessCache(sentence)
        states = enumerate_extended_types(sig, pi0, cap=arity_cap)
        start = initial_extended_type(sig, pi0)
        good = list(states)
        rounds = []
        rnd = 0
        while True:
            allowed = frozenset(good)
            removed = [s for s in good
                       if cache.find(pi0, s, allowed) is None]
            if not removed:
                break
            rnd += 1
            rounds.append((rnd, removed))
            good = [s for s in good if s not in set(removed)]
        trace = EliminationTrace(pi0=pi0, rounds=rounds, surviving=list(good))
        ok = start in good
        return (True if ok else None), trace, cache

    consumed = _run_candidates(all_types, worker, jobs)
    stats = SolveStats(types_total=len(all_types))
    traces = []
    outcome = None
    for ok, trace, cache in consumed:
        stats.witness_searches += cache.searches
        stats.cache_hits += cache.hits
        traces.append(trace)
        if ok is not None:
            plain_cache = _WitnessCache(sentence)
            cert, _ = _gfp_for_pi0(sentence, all_types, trace.pi0, plain_cache)
            stats.witness_searches += plain_cache.searches
            stats.cache_hits += plain_cache.hits
            if cert is None:
                raise InternalInvariantError(
                    "extended fixpoint accepted a starting type the plain "
                    "fixpoint rejects")
            outcome = SolveOutcome(
                verdict="SAT", method="extended", pi0=trace.pi0,
                certificate=cert, stats=stats)
            break
    if outcome is None:
        outcome = SolveOutcome(
            verdict="UNSAT", method="extended",
            refutation=Refutation(traces=traces), stats=stats)
    stats.elapsed_ms = (time.perf_counter() - t0) * 1000.0
    return outcome


# ---------------------------------------------------------------------------
# Certificate checking and dispatch
# ---------------------------------------------------------------------------

def check_certificate(sentence, cert):
    """Validate a certificate independently of how it was produced.

    Re-runs the descriptor checker per strategy entry with the strategy's
    own key set as the allowed types, and checks closure.  Returns the
    full violation list; empty means the certificate is sound.
    """
    violations = []
    keys = cert.good_types
    if cert.pi0 not in keys:
        violations.append("pi0 is not covered by the strategy")
    for pi, d in cert.strategy:
        ctx = WitnessContext(sentence=sentence, pi0=cert.pi0, pi=pi,
                             allowed=keys)
        for v in check_descriptor(d, ctx):
            violations.append(f"entry {pi.bits}: {v}")
        extra = realized_types(d) - keys
        if extra:
            violations.append(
                f"entry {pi.bits}: closure violated by {len(extra)} realized type(s)")
    return violations


METHODS = ("gfp", "game", "extended")


def solve(sentence, method="gfp", **kwargs):
    """Dispatch to one of the solving methods (default: gfp)."""
    if method == "gfp":
        return gfp_solve(sentence, **kwargs)
    if method == "game":
        return bounded_game_solve(sentence, **kwargs)
    if method == "extended":
        return extended_solve(sentence, **kwargs)
    raise ValueError(f"unknown method {method!r}")
