"""One test per acceptance criterion; each records a PASS/FAIL line for the summary."""

import os
import random
import time
from collections import Counter

import numpy as np
import pytest

from k3sextic.cli.pipeline import EXAMPLE_CLASS, EXAMPLE_LINE, EXPECTED, Pipeline, PipelineConfig
from k3sextic.fermat.geometry import hermitian_points
from k3sextic.fermat.group import build_group, verify_group
from k3sextic.fermat.lines import BASIS_TABLE, parse_basis_row, split_line
from k3sextic.fermat import lines as lines_mod
from k3sextic.models.equivalence import FERMAT, hermitian_test
from k3sextic.models.involution import check_involution
from k3sextic.models.model import check_model

from conftest import record_criterion
from props import canonical_spot_check, check_gb_shuffle, check_line_pair, check_triple_against_box, \
    random_positive_triple

GROUP_ORDER = 756_000


def _record(number, checks: dict, extra: str = ""):
    ok = all(checks.values())
    failed = [k for k, v in checks.items() if not v]
    detail = "all checks hold" if ok else f"failed: {', '.join(failed)}"
    record_criterion(number, ok, f"{detail}{'; ' + extra if extra else ''}")
    assert ok, failed


def test_criterion_1_geometry():
    t0 = time.perf_counter()
    conf = lines_mod.build_configuration.__wrapped__()
    elapsed = time.perf_counter() - t0
    rederived = True
    for row in BASIS_TABLE:
        ln = parse_basis_row(row)
        a, b = split_line(ln.point)
        rederived &= ln.linear == a.linear and ln.g in (a.g, b.g)
    det = round(np.linalg.det(conf.gram.astype(float)))
    ex = conf.classes[conf.index_of(*EXAMPLE_LINE)]
    _record(1, {
        "126 points": len(hermitian_points()) == 126,
        "252 lines": len(conf.lines) == 252,
        "basis rows re-derived": bool(rederived),
        "det -25": det == -25,
        "example class": tuple(int(x) for x in ex) == EXAMPLE_CLASS,
        "under a minute": elapsed < 60,
    }, f"build {elapsed:.1f}s")


def test_criterion_2_group(conf):
    t0 = time.perf_counter()
    group = build_group(conf, verify=False)
    verify_group(group)  # isometries and distinct images of the basis lines
    elapsed = time.perf_counter() - t0
    keys = np.unique(group.keys.view(np.dtype((np.void, group.keys.shape[1]))))
    _record(2, {
        "order 756000": len(group) == GROUP_ORDER,
        "faithful": len(keys) == GROUP_ORDER,
    }, f"closure and verification {elapsed:.1f}s")


def test_criterion_3_degree_four(pipeline, orbits4):
    stabs = Counter(o.stabilizer_order for o in orbits4 if o.is_polarization)
    spans = pipeline.spans_flags(4)
    _record(3, {
        "|V4| = 1020600": pipeline.count(4) == EXPECTED["V"][4],
        "orbit sizes sum to |V4|": sum(o.size for o in orbits4) == EXPECTED["V"][4],
        "8 orbits": len(orbits4) == 8,
        "7 polarizations": sum(bool(o.is_polarization) for o in orbits4) == 7,
        "stabilizers": stabs == Counter([720, 3, 12, 2, 4, 9, 20]),
        "Exc and Lin span NS": all(s for s, o in zip(spans, orbits4) if o.is_polarization),
    }, f"polarization stabilizers {sorted(stabs.elements())}")


def test_criterion_4_models(models4, group):
    recs = list(models4.values())
    canon = {r.canonical.coeffs for r in recs}
    six = [r.canonical for r in recs if r.rt == "6A1"]
    aut = {r.rt: r.aut_order for r in recs}
    smooth = next(r for r in recs if r.rt == "0")
    _record(4, {
        "dims (3, 11, 38)": all(r.dims == (3, 11, 38) for r in recs),
        "omega^2 = s_h(xi) mod F": all(check_model(r) for r in recs),
        "RT multiset": sorted(r.rt for r in recs) == EXPECTED["rt_d4"],
        "6 classes": len(canon) == 6 and len(six) == 2 and six[0] == six[1],
        "|aut|": aut == {"0": 378000, "6A1": 12, "7A1": 6, "8A1": 8, "9A1": 9, "10A1": 20},
        "smooth case is Hermitian": hermitian_test(smooth.sextic)[0] and smooth.canonical == FERMAT,
    }, f"|aut| by RT {aut}")


def test_criterion_5_involution(pipeline, group):
    G = pipeline.involution()
    checks = check_involution(G, group)
    _record(5, {
        "G^2 = Id": checks["order2"],
        "isometry": checks["isometry"],
        "<h_F G, h_F> = 4": checks["pairing"] == 4,
        "outside Aut(X, h_F)": checks["outside_group"],
    })


def test_criterion_6_degree_five_count(pipeline):
    t0 = time.perf_counter()
    n = pipeline.count(5)
    elapsed = time.perf_counter() - t0
    _record("6a", {"|V5| = 208059000": n == EXPECTED["V"][5]}, f"count-only {elapsed:.0f}s")


@pytest.mark.skipif(os.environ.get("K3SEXTIC_FULL") != "1",
                    reason="degree-5 full mode takes hours; set K3SEXTIC_FULL=1")
def test_criterion_6_degree_five_full(tmp_path_factory):
    cache = os.environ.get("K3SEXTIC_CACHE") or tmp_path_factory.mktemp("full")
    p = Pipeline(PipelineConfig(cache, max_degree=5, degree5="full", allow_full=True))
    summary = p.classify()
    _record("6b", {
        "312 orbits": summary["orbits_d5"] == 312,
        "224 polarizations": summary["polarizations_d5"] == 224,
        "65 classes": summary["classes"] == 65,
        "ball total": summary["ball_total"] == EXPECTED["ball_total_d5"],
    })


def test_criterion_6_full_mode_status():
    if os.environ.get("K3SEXTIC_FULL") != "1":
        record_criterion("6b", None, "degree-5 full mode implemented but not executed in this run")


def test_criterion_7_properties(conf, group, pipeline, models4, orbits4):
    rnd = random.Random(7)
    triples = all(check_triple_against_box(random_positive_triple(rnd)) for _ in range(200))
    gb = all(check_gb_shuffle(rnd.randrange(10**9)) for _ in range(50))
    pairs = [tuple(rnd.sample(range(252), 2)) for _ in range(100)]
    lines_ok = all(check_line_pair(conf, i, j) for i, j in pairs)
    orbit_ok = all(o.size * o.stabilizer_order == GROUP_ORDER
                   for d in (2, 3, 4) for o in pipeline.orbits(d))
    spot = canonical_spot_check({i: (orbits4[i].representative, r.canonical) for i, r in models4.items()},
                                group, conf, count=20, pool=400)
    canon_ok = all(n == 20 and k == n for n, k in spot.values())
    _record(7, {
        "200 triples vs box scan": triples,
        "50 Groebner shuffles": gb,
        "100 line pairs symmetric": lines_ok,
        "size x stabilizer": orbit_ok,
        "canonical forms constant on orbits": canon_ok,
    }, f"canonical spot check over {len(spot)} polarization orbits x 20 members")
