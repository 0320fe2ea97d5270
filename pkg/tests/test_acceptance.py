"""Acceptance gate: eight exact, oracle-backed properties at desk scale.

Each test prints one [PASS]/[FAIL] line (visible under pytest -s) and then
asserts.  Every expected value is recomputed here by an independent oracle:
orbit simulation for torsion profiles, cofactor determinants and minor gcds
for SNF, brute-force additive closure for finite duality, residue enumeration
for radicals.  All comparisons are exact; the only pinned tolerances are the
per-criterion wall-clock budgets below.
"""

import math
import random
import time
from fractions import Fraction
from itertools import combinations, combinations_with_replacement, product

from gclose.circle import CirclePoint, SurdSum, cf_expand, convergents
from gclose.duality import (
    Character,
    DualSubgroup,
    FgAbelianGroup,
    IntMatrix,
    PrecompactTopology,
    annihilator,
    closure_in_dual,
    smith_normal_form,
    von_neumann_radical,
)
from gclose.circle import add as circle_add
from gclose.circle import int_mul
from gclose.torsion import Budget, Factorial, Geometric, rational_torsion_profile
from gclose.witness import (
    ConsistentWithMembership,
    NotInGClosure,
    Witness,
    bds_experiment,
    check_witness,
    find_witness,
    g_membership_experiment,
)

BUDGETS = {1: 5.0, 2: 1.0, 3: 30.0, 4: 60.0, 5: 120.0, 6: 10.0, 7: 10.0, 8: 10.0}


def _report(num: int, label: str, ok: bool, detail: str, elapsed: float):
    budget = BUDGETS[num]
    status = "PASS" if ok and elapsed < budget else "FAIL"
    print(f"[{status}] criterion {num} ({label}): {detail} [{elapsed:.2f}s / {budget:.0f}s]")
    assert ok, f"criterion {num} failed: {detail}"
    assert elapsed < budget, f"criterion {num} overran: {elapsed:.2f}s >= {budget}s"


def _small_det(rows) -> int:
    # independent cofactor determinant, sizes 1..3 only
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    if n == 3:
        a, b, c = rows[0]
        d, e, f = rows[1]
        g, h, i = rows[2]
        return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
    raise ValueError("oracle determinant limited to 3x3")


# 1. geometric torsion profile ------------------------------------------------------


def _orbit_absorbed(base: int, q: int) -> bool:
    # simulate base^n mod q until the residue repeats; member iff cycle is {0}
    seen = {}
    residues = []
    r = 1 % q
    while r not in seen:
        seen[r] = len(residues)
        residues.append(r)
        r = (r * base) % q
    cycle = residues[seen[r]:]
    return all(c == 0 for c in cycle)


def test_criterion_1_geometric_profile():
    t0 = time.perf_counter()
    prof = rational_torsion_profile(Geometric(2), 1000)
    ok = not prof.flagged
    matched = 0
    for q, verdict in prof.entries:
        expect = _orbit_absorbed(2, q)
        if verdict.status == "exact" and verdict.member == expect:
            matched += 1
        else:
            ok = False
    powers = tuple(2**j for j in range(10))
    ok = ok and prof.admitted == powers and matched == 1000
    elapsed = time.perf_counter() - t0
    _report(
        1,
        "geometric torsion profile",
        ok,
        f"{matched}/1000 exact verdicts match the orbit oracle; "
        f"admitted = powers of two up to 512; {len(prof.flagged)} flagged",
        elapsed,
    )


# 2. factorial absorbs rationals -----------------------------------------------------


def test_criterion_2_factorial_absorbs_rationals():
    t0 = time.perf_counter()
    prof = rational_torsion_profile(Factorial(), 1000)
    ok = prof.admitted == tuple(range(1, 1001)) and not prof.flagged
    checked = 0
    for q, verdict in prof.entries:
        if not (verdict.status == "exact" and verdict.member):
            ok = False
            continue
        # oracle: first n with q | n!, found by incremental products mod q
        r, n = 1 % q, 0
        while r != 0:
            n += 1
            r = (r * n) % q
        if verdict.fact("from_index") == n:
            checked += 1
        else:
            ok = False
    elapsed = time.perf_counter() - t0
    _report(
        2,
        "factorial absorbs rationals",
        ok,
        f"{checked}/1000 denominators Exact In with the oracle's first divisible index",
        elapsed,
    )


# 3. Smith normal form ---------------------------------------------------------------


def _minor_gcd(entries, size: int) -> int:
    rows, cols = len(entries), len(entries[0])
    g = 0
    for ri in combinations(range(rows), size):
        for ci in combinations(range(cols), size):
            sub = [[entries[i][j] for j in ci] for i in ri]
            g = math.gcd(g, _small_det(sub))
    return g


def test_criterion_3_snf():
    t0 = time.perf_counter()
    rng = random.Random(3)
    ok = True
    cross_checked = 0
    for trial in range(500):
        r = rng.randint(1, 6)
        c = rng.randint(1, 6)
        rows = [[rng.randint(-50, 50) for _ in range(c)] for _ in range(r)]
        m = IntMatrix.from_rows(rows, c)
        u, d, v = smith_normal_form(m)
        if d != u @ m @ v:
            ok = False
        if abs(u.determinant()) != 1 or abs(v.determinant()) != 1:
            ok = False
        diag = d.diagonal()
        for a, b in zip(diag, diag[1:]):
            if a == 0:
                ok = ok and b == 0
            else:
                ok = ok and a > 0 and b % a == 0
        for i in range(r):
            for j in range(c):
                if i != j and d.entries[i][j] != 0:
                    ok = False
        if trial < 50:
            flat_gcd = 0
            for row in rows:
                for x in row:
                    flat_gcd = math.gcd(flat_gcd, x)
            if (diag[0] if diag else 0) != flat_gcd:
                ok = False
            prod = 1
            for i in range(min(3, r, c)):
                prod *= diag[i]
                if prod != _minor_gcd(rows, i + 1):
                    ok = False
            cross_checked += 1
    elapsed = time.perf_counter() - t0
    _report(
        3,
        "Smith normal form",
        ok,
        f"500 matrices up to 6x6: D = U*M*V, unimodular U and V, divisor chain; "
        f"{cross_checked} minor-gcd cross-checks",
        elapsed,
    )


# 4. finite duality, exhaustive ------------------------------------------------------


def _all_subgroups(factors):
    """Every subgroup of Z/d1 x ... as an element set plus one generating pair."""
    elements = list(product(*(range(d) for d in factors)))
    zero = tuple(0 for _ in factors)

    def addv(x, y):
        return tuple((a + b) % d for a, b, d in zip(x, y, factors))

    found = {}
    for g1, g2 in combinations_with_replacement(elements, 2):
        group = {zero}
        queue = [zero]
        while queue:
            x = queue.pop()
            for g in (g1, g2):
                y = addv(x, g)
                if y not in group:
                    group.add(y)
                    queue.append(y)
        key = frozenset(group)
        if key not in found:
            found[key] = (g1, g2)
    return elements, found


def test_criterion_4_finite_duality():
    t0 = time.perf_counter()
    moduli = (2, 3, 4, 6, 8, 12)
    ok = True
    pairs = 0
    subgroups_checked = 0
    done_forms = set()
    for m in moduli:
        for n in moduli:
            pairs += 1
            ambient = FgAbelianGroup.from_torsion(0, (m, n))
            if ambient.invariant_factors in done_forms:
                continue
            done_forms.add(ambient.invariant_factors)
            factors = ambient.invariant_factors
            elements, subgroups = _all_subgroups(factors)
            for key, (g1, g2) in subgroups.items():
                h = DualSubgroup(
                    ambient,
                    (
                        Character.make(ambient, (), g1),
                        Character.make(ambient, (), g2),
                    ),
                )
                closure = closure_in_dual(h)
                if not closure.is_finitely_generated:
                    ok = False
                    continue
                if closure.as_dual_subgroup() != h:
                    ok = False
                perp = annihilator(h)
                cols = perp.basis.columns()
                double = {
                    t
                    for t in elements
                    if all(
                        Character.make(ambient, (), t).vanishes_on(ambient, col)
                        for col in cols
                    )
                }
                if double != set(key):
                    ok = False
                subgroups_checked += 1
    elapsed = time.perf_counter() - t0
    _report(
        4,
        "finite duality exhaustive",
        ok,
        f"{pairs} ambient pairs ({len(done_forms)} distinct forms), "
        f"{subgroups_checked} subgroups: closure == H and double annihilator == H",
        elapsed,
    )


# 5. witness soundness fuzz -----------------------------------------------------------


def _random_point(rng) -> CirclePoint:
    q = rng.randint(1, 30)
    return CirclePoint.rational(rng.randrange(q), q)


def test_criterion_5_witness_fuzz():
    t0 = time.perf_counter()
    rng = random.Random(5)
    ok = True
    witnessed = 0
    for _ in range(100):
        k = rng.randint(1, 2)
        m = rng.randint(1, 2)
        gens = [tuple(_random_point(rng) for _ in range(k)) for _ in range(m)]
        topology = PrecompactTopology.on_free(k, gens)
        h = topology.as_dual_subgroup()
        chi = None
        for _ in range(1000):
            cand = tuple(_random_point(rng) for _ in range(k))
            if not h.contains(Character.make(topology.ambient, cand)):
                chi = cand
                break
        if chi is None:
            ok = False
            continue
        lcm = 1
        for p in chi:
            lcm = lcm * p.den // math.gcd(lcm, p.den)
        outcome = find_witness(topology, chi, Fraction(1, lcm))
        if not isinstance(outcome, Witness):
            ok = False
            continue
        if outcome.strategy not in ("annihilator", "lattice-approximation"):
            ok = False
        if not check_witness(outcome, topology, chi):
            ok = False
        witnessed += 1

    members_clean = 0
    for _ in range(100):
        k = rng.randint(1, 2)
        m = rng.randint(1, 2)
        gens = [tuple(_random_point(rng) for _ in range(k)) for _ in range(m)]
        topology = PrecompactTopology.on_free(k, gens)
        chi = tuple(CirclePoint.zero() for _ in range(k))
        for g in gens:
            c = rng.randrange(60)
            chi = tuple(circle_add(xj, int_mul(c, gj)) for xj, gj in zip(chi, g))
        outcome = g_membership_experiment(topology, chi, budget=Budget(16, 128))
        if isinstance(outcome, ConsistentWithMembership):
            members_clean += 1
        else:
            ok = False
    elapsed = time.perf_counter() - t0
    _report(
        5,
        "witness soundness fuzz",
        ok,
        f"{witnessed}/100 non-members witnessed and re-verified; "
        f"{members_clean}/100 members produced zero witnesses",
        elapsed,
    )


# 6. desk-scale escape demonstration ---------------------------------------------------


def test_criterion_6_bds_demonstration():
    t0 = time.perf_counter()
    golden = CirclePoint.quadratic(-1, 1, 2, 5)
    sqrt2m1 = CirclePoint.quadratic(-1, 1, 1, 2)
    probes = [
        CirclePoint.rational(1, 2),
        CirclePoint.rational(1, 3),
        CirclePoint.rational(1, 5),
    ]
    ok = True
    escapes = 0
    null_terms_checked = 0
    for alpha in (golden, sqrt2m1):
        report = bds_experiment(alpha, probes)
        if not report.inclusion_verified:
            ok = False
        topology = PrecompactTopology.on_free(1, [(alpha,)])
        for probe, outcome in report.probes:
            if not isinstance(outcome, NotInGClosure):
                ok = False
                continue
            w = outcome.witness
            if not check_witness(w, topology, (probe,)):
                ok = False
            for tc in w.null_certificate:
                if tc.index > 40:
                    continue
                # exact quadratic sign test: norm(a_n * alpha) <= 2^-n
                s = SurdSum.from_point(alpha, tc.term[0])
                if s.norm_cmp(Fraction(1, 2**tc.index)) > 0:
                    ok = False
                null_terms_checked += 1
            for ec in w.escape_certificate:
                value = Fraction(ec.term[0] * probe.num, probe.den)
                frac = value - math.floor(value)
                norm = min(frac, 1 - frac)
                if norm < Fraction(1, 6) or norm < ec.threshold:
                    ok = False
            escapes += 1
    elapsed = time.perf_counter() - t0
    _report(
        6,
        "quadratic escape demonstration",
        ok,
        f"2 irrationals x 3 probes: {escapes} NotInGClosure outcomes; "
        f"{null_terms_checked} null terms obey 2^-n exactly; escape norms >= 1/6",
        elapsed,
    )


# 7. radical identity -------------------------------------------------------------------


def test_criterion_7_radical_oracle():
    t0 = time.perf_counter()
    rng = random.Random(7)
    ok = True
    instances = 0
    for _ in range(50):
        k = rng.randint(1, 3)
        m = rng.randint(1, 3)
        chars = []
        for _ in range(m):
            row = []
            for _ in range(k):
                q = rng.randint(1, 4)
                row.append(CirclePoint.rational(rng.randrange(q), q))
            chars.append(tuple(row))
        topology = PrecompactTopology.on_free(k, chars)
        rad = von_neumann_radical(topology)

        modulus = 1
        for row in chars:
            for p in row:
                modulus = modulus * p.den // math.gcd(modulus, p.den)
        # cleared-denominator congruences: sum_i (p_i * M / q_i) x_i = 0 (mod M)
        coeff_rows = [
            [p.num * (modulus // p.den) for p in row] for row in chars
        ]
        solutions = [
            x
            for x in product(range(modulus), repeat=k)
            if all(
                sum(c * xi for c, xi in zip(row, x)) % modulus == 0
                for row in coeff_rows
            )
        ]

        basis_cols = rad.basis.columns()
        if len(basis_cols) != k:
            ok = False
            continue
        for col in basis_cols:
            for row in coeff_rows:
                if sum(c * xi for c, xi in zip(row, col)) % modulus != 0:
                    ok = False
        for x in solutions:
            if not rad.contains(x):
                ok = False
        index = abs(_small_det([list(r) for r in zip(*basis_cols)]))
        if index * len(solutions) != modulus**k:
            ok = False
        instances += 1
    elapsed = time.perf_counter() - t0
    _report(
        7,
        "radical identity",
        ok,
        f"{instances}/50 instances: radical basis satisfies the congruences, every "
        f"enumerated solution lifts into it, and the index identity holds exactly",
        elapsed,
    )


# 8. continued fraction machinery ---------------------------------------------------------


def test_criterion_8_cf_machinery():
    t0 = time.perf_counter()
    rng = random.Random(8)
    ok = True
    sampled = 0
    while sampled < 20:
        d = rng.randint(2, 50)
        if math.isqrt(d) ** 2 == d:
            continue
        a = rng.randint(-10, 10)
        b = rng.randint(1, 5)
        c = rng.randint(1, 10)
        alpha = CirclePoint.quadratic(a, b, c, d)
        if alpha.is_rational:
            continue
        cf = cf_expand(alpha, max_terms=256)
        conv = convergents(cf, 61)
        for j in range(1, 62):
            pj, qj = conv[j]
            pj1, qj1 = conv[j - 1]
            if pj * qj1 - pj1 * qj != (-1) ** (j - 1):
                ok = False
        for j in range(60):
            qj = conv[j][1]
            qnext = conv[j + 1][1]
            s = SurdSum.from_point(alpha, qj)
            if s.norm_cmp(Fraction(1, qnext)) >= 0:
                ok = False
        sampled += 1
    elapsed = time.perf_counter() - t0
    _report(
        8,
        "continued fraction machinery",
        ok,
        f"{sampled} quadratic irrationals (d <= 50): 61 determinant identities and "
        f"60 strict approximation bounds each, all exact",
        elapsed,
    )
