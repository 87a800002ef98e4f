"""Acceptance criteria, one test each.

Under pytest every criterion records a PASS/FAIL line that is printed in the
"acceptance criteria" section of the terminal summary.  Run directly
(``python tests/test_acceptance.py``) it prints the same lines without pytest.
"""

import json
import math
import random
import sys
import time
from fractions import Fraction as F
from itertools import combinations_with_replacement, product
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from entrocone.cli import main, rays_report
from entrocone.coupling import entropy_lipschitz_gap, ikd_exact, ikd_greedy
from entrocone.diagrams import full_diagram
from entrocone.explorer import (expansion_sweep, maximize_alpha15, sample_distributions,
                                sample_group_points, table_points)
from entrocone.geometry.chart import (PRINTED_ROWS, alpha_coords, expanded, from_alpha,
                                      ning_chart, printed_row_certificate, rep_diagram,
                                      verify_chart)
from entrocone.geometry.cones import abc, extremal_rays, in_cone, smc
from entrocone.geometry.vectors import (D2, ingleton_vectors, lambda4, lambda4_vector, pair,
                                        s4_act, spc, symmetric_group)
from entrocone.groups import exact_entropy_vector, find_group_realization, prime_base
from entrocone.indexing import lambda_n, lambda_set
from entrocone.spaces import FiniteProbabilitySpace

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # pragma: no cover - script mode without the test tree
    ACCEPTANCE_LINES = {}

L4 = lambda4()


def record(k, title, fn, *args):
    t = time.perf_counter()
    try:
        detail = fn(*args)
    except AssertionError as e:
        ACCEPTANCE_LINES[k] = f"[FAIL] {k}. {title}: {e}"
        raise
    ACCEPTANCE_LINES[k] = (f"[PASS] {k}. {title}: {detail} "
                           f"({time.perf_counter() - t:.1f}s)")
    return detail


# -- 1 ------------------------------------------------------------------------

# rows whose group representatives must reproduce the tabulated vertices;
# a2, a10, a13 are the D2 images of the tabulated a1, a9, a12
GROUP_ROWS = (1, 2, 9, 10, 11, 12, 13, 14)


def _printed_orbit_vertex(i):
    """Tabulated coordinates for row ``i``, moved by D2 for untabulated rows."""
    for r in PRINTED_ROWS:
        if i in r.orbit:
            base = lambda4_vector(r.coords)
            seen, elems = [], []
            for g in D2:
                img = s4_act(g, base).values
                if img not in seen:
                    seen.append(img)
                    elems.append(g)
            return s4_act(elems[r.orbit.index(i)], base)
    raise KeyError(i)


def criterion_1():
    ning_chart.cache_clear()
    t = time.perf_counter()
    chart = ning_chart()
    checked = []
    for i in GROUP_ROWS:
        rep = chart.reps[i - 1]
        gd = rep_diagram(rep)
        base = prime_base(gd.ambient)
        got = exact_entropy_vector(gd, base)
        want = _printed_orbit_vertex(i)
        assert got.exact and got == want, f"a{i}: representative gives {got}, printed {want}"
        assert base == (3 if i == 14 else 2)
        checked.append(f"a{i}")
    report = verify_chart(chart)
    assert report.passed, "; ".join(report.lines())
    for i in range(3, 9):
        assert chart.origin[i - 1].startswith("reconciled"), f"a{i} not reconciled"
    elapsed = time.perf_counter() - t
    assert elapsed < 5, f"took {elapsed:.2f}s"
    cert = printed_row_certificate(3)
    assert cert is not None and cert[1] == -1
    assert expanded(cert[0]) == "-[23]+[123]"
    return (f"{len(checked)} group rows exact, a3-a8 reconciled and verified, printed a3 "
            f"certificate {expanded(cert[0])} = {cert[1]}")


def test_criterion_1_chart_verification():
    record(1, "Simplex chart group verification", criterion_1)


# -- 2 ------------------------------------------------------------------------

def criterion_2():
    ing = ingleton_vectors()[0]
    assert pair(spc(), ing) == -1
    assert in_cone(spc(), smc(L4))
    m = in_cone(spc(), abc())
    assert not m and m.witness.name == "ing(12;34)" and m.value == -1
    return "<spc, ing(12;34)> = -1, spc in SH, spc not in abc (witness ing(12;34))"


def test_criterion_2_pairing():
    record(2, "Pairing identity", criterion_2)


# -- 3 ------------------------------------------------------------------------

def criterion_3(reports):
    sh, t_sh = reports["smc"]
    ab, t_ab = reports["abc"]
    assert (sh["count"], sh["orbit_count"]) == (41, 11), (sh["count"], sh["orbit_count"])
    assert (ab["count"], ab["orbit_count"]) == (35, 10), (ab["count"], ab["orbit_count"])
    spc_orbit = {s4_act(g, spc()).values for g in symmetric_group(4)}
    assert len(spc_orbit) == 6
    big = {tuple(F(x) for x in r) for r in sh["rays"]}
    small = {tuple(F(x) for x in r) for r in ab["rays"]}
    assert big == small | spc_orbit and not small & spc_orbit
    assert t_sh + t_ab < 600
    return (f"SH 41 rays / 11 orbits, SH+Ingleton 35 / 10, difference = spc orbit "
            f"(enumeration {t_sh:.1f}s + {t_ab:.1f}s)")


def _reports_now():
    out = {}
    for cone in ("smc", "abc"):
        t = time.perf_counter()
        out[cone] = (rays_report(cone), time.perf_counter() - t)
    return out


def test_criterion_3_rays(ray_reports):
    record(3, "Ray enumeration", criterion_3, ray_reports)


# -- 4 ------------------------------------------------------------------------

def criterion_4():
    chart = ning_chart()
    n = 0
    for i, a in enumerate(chart.vertices):
        for j, alpha in enumerate(chart.covectors):
            assert pair(a, alpha) == (1 if i == j else 0), (i + 1, j + 1)
            n += 1
    rng = random.Random(4)
    for _ in range(100):
        f = lambda4_vector([F(rng.randint(-50, 50), rng.randint(1, 12)) for _ in range(15)])
        assert from_alpha(alpha_coords(f)) == f
    return f"{n} pairs give the identity, 100 random rational vectors reconstructed exactly"


def test_criterion_4_duality():
    record(4, "Duality matrix", criterion_4)


# -- 5 ------------------------------------------------------------------------

def _entropy_of_counts(weights):
    return math.fsum(-float(w) * math.log2(w) for w in weights if w)


def _oracle_vector(joint):
    """[I] for every subset, straight from marginals of a joint on tuples."""
    out = []
    for o in L4.objects:
        idx = [k - 1 for k in sorted(lambda_set(o))]
        marg = {}
        for t, w in joint.items():
            key = tuple(t[k] for k in idx)
            marg[key] = marg.get(key, 0) + w
        out.append(_entropy_of_counts(marg.values()))
    return out


def _random_joint(rng):
    sizes = [rng.randint(1, 4) for _ in range(4)]
    cells = list(product(*(range(k) for k in sizes)))
    k = rng.randint(1, min(len(cells), 12))
    chosen = rng.sample(cells, k)
    den = 2 ** rng.randint(4, 8)
    while den < k:
        den *= 2
    cuts = sorted(rng.sample(range(1, den), k - 1))
    parts = [b - a for a, b in zip([0] + cuts, cuts + [den])]
    return {tuple(str(x) for x in c): F(p, den) for c, p in zip(chosen, parts)}


def _random_noise(rng):
    k = rng.randint(1, 3)
    den = 2 ** rng.randint(1, 4)
    while den < k:
        den *= 2
    cuts = sorted(rng.sample(range(1, den), k - 1))
    parts = [b - a for a, b in zip([0] + cuts, cuts + [den])]
    return FiniteProbabilitySpace.from_weights({f"n{i}": F(p, den) for i, p in enumerate(parts)})


def criterion_5():
    rng = random.Random(5)
    worst = 0.0
    for _ in range(200):
        joint = _random_joint(rng)
        noises = [_random_noise(rng) for _ in range(4)]
        rep = expansion_sweep(full_diagram(joint), noises)
        # independent route: build the expanded joint by hand
        big = {}
        for t, w in joint.items():
            for extra in product(*(n.atoms for n in noises)):
                key = tuple(f"{x}/{e[0]}" for x, e in zip(t, extra))
                big[key] = big.get(key, 0) + w * math.prod(e[1] for e in extra)
        before, after = _oracle_vector(joint), _oracle_vector(big)
        ents = [_entropy_of_counts(n.weights.values()) for n in noises]
        for k, o in enumerate(L4.objects):
            want = math.fsum(ents[i - 1] for i in lambda_set(o))
            worst = max(worst, abs(after[k] - before[k] - want),
                        abs(float(rep.after.values[k]) - after[k]),
                        abs(float(rep.before.values[k]) - before[k]))
        for j, d in enumerate(rep.alpha_deltas, start=1):
            target = ents[j - 1] if j <= 4 else 0.0
            worst = max(worst, abs(float(d) - target))
    assert worst <= 1e-9, worst
    return f"200 diagrams, worst deviation {worst:.1e} (hand-built expanded joints agree)"


def test_criterion_5_expansion():
    record(5, "Expansion invariance", criterion_5)


# -- 6 ------------------------------------------------------------------------

def criterion_6():
    n_dist = n_group = 0
    for p in sample_distributions(6, 300, (2, 3, 2, 3)):
        assert in_cone(p.entropy_vector, smc(L4), tolerance=1e-9)
        n_dist += 1
    for p in list(sample_group_points(6, 300)) + table_points():
        v = p.entropy_vector
        assert v.exact and in_cone(v, smc(L4))
        assert all(pair(v, ing) >= 0 for ing in ingleton_vectors()), p.id
        n_group += 1
    return (f"{n_dist} distribution points Shannon within 1e-9, {n_group} Abelian points "
            f"Shannon and Ingleton exactly")


def test_criterion_6_shannon_validity():
    record(6, "Shannon validity", criterion_6)


# -- 7 ------------------------------------------------------------------------

def small_family():
    """Every law on at most four atoms with weights in twelfths (this holds
    all quarter- and third-valued laws), one per multiset of weights."""
    out = []
    for k in range(1, 5):
        for parts in combinations_with_replacement(range(1, 13), k):
            if sum(parts) == 12:
                out.append(FiniteProbabilitySpace.from_weights(
                    {f"x{i}": F(p, 12) for i, p in enumerate(sorted(parts, reverse=True))}))
    return out


def criterion_7():
    point = FiniteProbabilitySpace.point()
    coin = FiniteProbabilitySpace.uniform("01")
    assert ikd_exact(coin, point).value == 1
    fam = small_family()
    n = len(fam)
    d = [[0.0] * n for _ in range(n)]
    greedy_gap = 0.0
    for i in range(n):
        for j in range(n):
            r = ikd_exact(fam[i], fam[j]).value
            d[i][j] = r
            assert entropy_lipschitz_gap(fam[i], fam[j]) <= r + 1e-9, (i, j)
            g = ikd_greedy(fam[i], fam[j]).value
            assert g >= r - 1e-9, (i, j, g, r)
            greedy_gap = max(greedy_gap, g - r)
    for i in range(n):
        assert d[i][i] == 0
        for j in range(n):
            assert d[i][j] == d[j][i], (i, j, d[i][j], d[j][i])
    worst = 0.0
    for i, j, k in product(range(n), repeat=3):
        worst = max(worst, d[i][k] - d[i][j] - d[j][k])
    assert worst <= 1e-9, worst
    return (f"{n} spaces, {n * n} pairs symmetric exactly, {n ** 3} triangles "
            f"(max excess {worst:.1e}), greedy >= exact (max gap {greedy_gap:.3f})")


def test_criterion_7_coupling():
    record(7, "Coupling distances", criterion_7)


# -- 8 ------------------------------------------------------------------------

def criterion_8():
    rays = extremal_rays(smc(lambda_n(3)))
    orders = []
    for r in rays:
        found = find_group_realization(r, order_cap=64)
        assert found is not None, f"no group diagram for {r}"
        gd, q = found
        assert exact_entropy_vector(gd, q) == r
        orders.append(gd.ambient.order)
    return f"{len(rays)} rays of SH(Lambda_3), each realized exactly (group orders {sorted(set(orders))})"


def test_criterion_8_lambda3():
    record(8, "Lambda_3 coincidence", criterion_8)


# -- 9 ------------------------------------------------------------------------

SEARCH_SEED, SEARCH_BUDGET = 1, 20000


def criterion_9():
    r = maximize_alpha15(SEARCH_SEED, SEARCH_BUDGET)
    assert r.best.in_smc
    assert r.ingleton_sign() == -1, "no Ingleton violator found"
    assert r.violator
    return (f"seed {SEARCH_SEED}, budget {SEARCH_BUDGET}: exact sign of ing(12;34) is -1, "
            f"alpha15 = {r.best.alpha15:.6f}")


def test_criterion_9_search():
    record(9, "Ingleton-violation search", criterion_9)


# -- 10 -----------------------------------------------------------------------

def criterion_10(tmp, reports):
    import os
    os.environ["SOURCE_DATE_EPOCH"] = "1700000000"
    blobs = []
    for run in ("a", "b"):
        out = tmp / f"explore-{run}.csv"
        code = main(["explore", "--seed", "7", "--samples", "1000", "--search-budget", "2000",
                     "--out", str(out)])
        assert code == 0
        blobs.append([Path(f"{out}{suffix}").read_bytes()
                      for suffix in ("", ".witnesses.json")])
        man = json.loads(Path(f"{out}.manifest.json").read_text())
        man["arguments"].pop("out")
        blobs[-1].append(json.dumps(man, sort_keys=True).encode())
    assert blobs[0] == blobs[1], "explore outputs differ"
    for cone in ("smc", "abc"):
        out = tmp / f"rays-{cone}.json"
        assert main(["rays", "--cone", cone, "--out", str(out)]) == 0
        assert out.read_text() == json.dumps(reports[cone][0], indent=1) + "\n"
    return "explore (1000 samples, seed 7) byte-identical twice; rays CLI output equals an independent run"


def test_criterion_10_determinism(tmp_path, ray_reports, monkeypatch):
    monkeypatch.setenv("SOURCE_DATE_EPOCH", "1700000000")
    record(10, "Determinism", criterion_10, tmp_path, ray_reports)


if __name__ == "__main__":
    import tempfile
    reports = _reports_now()
    jobs = [(1, "Simplex chart group verification", criterion_1, ()),
            (2, "Pairing identity", criterion_2, ()),
            (3, "Ray enumeration", criterion_3, (reports,)),
            (4, "Duality matrix", criterion_4, ()),
            (5, "Expansion invariance", criterion_5, ()),
            (6, "Shannon validity", criterion_6, ()),
            (7, "Coupling distances", criterion_7, ()),
            (8, "Lambda_3 coincidence", criterion_8, ()),
            (9, "Ingleton-violation search", criterion_9, ()),
            (10, "Determinism", criterion_10, (Path(tempfile.mkdtemp()), reports))]
    failed = 0
    for k, title, fn, args in jobs:
        try:
            record(k, title, fn, *args)
        except AssertionError:
            failed += 1
        print(ACCEPTANCE_LINES[k], flush=True)
    sys.exit(1 if failed else 0)
