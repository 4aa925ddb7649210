import pytest

from eae_sat.onetypes import OneType, enumerate_one_types
from eae_sat.serialize import certificate_from_json, certificate_to_json
from eae_sat.solver import (
    Certificate,
    GameDepthExceeded,
    bounded_game_solve,
    check_certificate,
    extended_solve,
    gfp_solve,
    solve,
)
from eae_sat.structures import brute_force_search
from eae_sat.syntax import parse
from eae_sat.witness import WitnessDescriptor

import corpus

METHODS = ("gfp", "game", "extended")


# ---------------------------------------------------------------------------
# Fixture verdicts
# ---------------------------------------------------------------------------

def test_s1_all_methods(s1):
    for method in METHODS:
        out = solve(s1, method=method)
        assert out.verdict == "SAT"
    out = gfp_solve(s1)
    assert out.pi0 == OneType(())
    assert out.certificate.good_types == {OneType(())}


def test_s2_all_methods(s2):
    for method in METHODS:
        assert solve(s2, method=method).verdict == "UNSAT"


def test_s2_refutation_trace(s2):
    out = gfp_solve(s2)
    neg, pos = OneType((False,)), OneType((True,))
    traces = {t.pi0: t for t in out.refutation.traces}
    # pi0 = {-P}: round 1 eliminates {-P}, then the rest collapses
    assert traces[neg].rounds[0] == (1, [neg])
    assert traces[neg].surviving == []
    # pi0 = {+P}: everything dies in the first round
    assert traces[pos].rounds[0][0] == 1
    assert set(traces[pos].rounds[0][1]) == {neg, pos}


def test_s3_all_methods(s3):
    for method in METHODS:
        out = solve(s3, method=method)
        assert out.verdict == "SAT"
    out = gfp_solve(s3)
    assert out.certificate.good_types == {OneType((False,))}


def test_s4_divergence(s4):
    neg = OneType((False,))
    out = gfp_solve(s4)
    assert out.verdict == "SAT"
    assert out.pi0 == neg
    assert out.certificate.good_types == {OneType((False,)), OneType((True,))}
    assert bounded_game_solve(s4).verdict == "SAT"
    assert extended_solve(s4).verdict == "UNSAT"
    assert brute_force_search(s4, 4) is None


def test_s5_all_methods(s5):
    for method in METHODS:
        assert solve(s5, method=method).verdict == "SAT"


def test_s1_game_accepts_at_minimal_depth(s1):
    # empty signature: counter bound 2^0 + 1 = 2
    out = bounded_game_solve(s1)
    assert out.verdict == "SAT"
    assert out.stats.types_total == 1


def test_game_depth_budget(s2):
    with pytest.raises(GameDepthExceeded):
        bounded_game_solve(s2, depth_budget=2)


def test_solve_dispatch(s1):
    assert solve(s1).method == "gfp"
    with pytest.raises(ValueError):
        solve(s1, method="magic")


# ---------------------------------------------------------------------------
# Certificates
# ---------------------------------------------------------------------------

def test_certificates_pass_checker(s1, s3, s4, s5):
    for s in (s1, s3, s4, s5):
        out = gfp_solve(s)
        assert check_certificate(s, out.certificate) == []
        ext = extended_solve(s)
        if ext.verdict == "SAT":
            assert check_certificate(s, ext.certificate) == []


def test_certificate_closure_violation(s3):
    out = gfp_solve(s3)
    mutated = Certificate(pi0=out.certificate.pi0, strategy=())
    bad = check_certificate(s3, mutated)
    assert any("pi0" in v for v in bad)


def test_certificate_flipped_atom_fails(s3):
    out = gfp_solve(s3)
    (pi, d), = out.certificate.strategy
    flipped_values = tuple(
        (name, classes, not v if (name, classes) == ("E", (1, 1)) else v)
        for name, classes, v in d.atom_values)
    mutant = Certificate(pi0=out.certificate.pi0, strategy=(
        (pi, WitnessDescriptor(partition=d.partition,
                               class_types=d.class_types,
                               atom_values=flipped_values,
                               padding_count=d.padding_count)),))
    assert check_certificate(s3, mutant) != []


def test_certificate_serialization_roundtrip(s3, s4, s5):
    for s in (s3, s4, s5):
        cert = gfp_solve(s).certificate
        obj = certificate_to_json(cert, s)
        assert certificate_from_json(obj, s) == cert


# ---------------------------------------------------------------------------
# Cross-method properties on the random corpus (small slice; the full
# 200-sentence runs live in the acceptance suite)
# ---------------------------------------------------------------------------

def test_method_agreement_sample():
    for s in corpus.corpus(size=40):
        assert gfp_solve(s).verdict == bounded_game_solve(s).verdict


def test_extended_implies_plain_sample():
    for s in corpus.corpus(size=40):
        if extended_solve(s).verdict == "SAT":
            assert gfp_solve(s).verdict == "SAT"


def test_no_false_unsat_sample():
    for s in corpus.corpus(size=30):
        if brute_force_search(s, 2) is not None:
            for method in METHODS:
                assert solve(s, method=method).verdict == "SAT"


def test_elimination_monotone():
    for s in corpus.corpus(size=30):
        out = gfp_solve(s)
        if out.refutation is None:
            continue
        total = len(enumerate_one_types(s.signature))
        for tr in out.refutation.traces:
            sizes = [total]
            for _, removed in tr.rounds:
                assert removed
                sizes.append(sizes[-1] - len(removed))
            assert sizes[-1] == len(tr.surviving)
            assert len(tr.rounds) <= total


def test_determinism(s3, s4):
    for s in (s3, s4):
        a, b = gfp_solve(s), gfp_solve(s)
        assert (a.verdict, a.pi0, a.certificate) == (b.verdict, b.pi0, b.certificate)
        assert a.stats.witness_searches == b.stats.witness_searches
        assert a.stats.cache_hits == b.stats.cache_hits


def test_jobs_parallel_identical(s2, s3, s4):
    for s in (s2, s3, s4):
        for method, fn in (("gfp", gfp_solve), ("game", bounded_game_solve),
                           ("extended", extended_solve)):
            seq = fn(s, jobs=1)
            par = fn(s, jobs=4)
            assert seq.verdict == par.verdict
            assert seq.pi0 == par.pi0
            assert seq.certificate == par.certificate
            assert seq.stats.witness_searches == par.stats.witness_searches


def test_stats_populated(s3):
    out = gfp_solve(s3)
    assert out.stats.witness_searches > 0
    assert out.stats.types_total == 2
    assert out.stats.elapsed_ms >= 0.0
