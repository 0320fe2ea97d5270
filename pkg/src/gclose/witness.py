"""Escape witnesses: certified demonstrations that a character is not in the
g-closure of a finitely generated subgroup of the torus.

A witness for (H, chi) is a nonzero integer sequence (a_n) that is null for
every generator of H (max norm <= 2^-n per term) while chi stays uniformly
far from 0 on it (norm >= delta per term).  Both facts are certified per
term by exact arithmetic; the searcher can use any heuristics because every
returned witness is re-checkable from scratch.

An Exhausted result asserts nothing: failure to find a witness is consistent
with membership, never proof of it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .circle import CirclePoint, SurdSum, int_mul
from .duality import PrecompactTopology, von_neumann_radical
from .torsion import (
    Budget,
    CFDenominators,
    Constant,
    Explicit,
    IntVecSeq,
    NullTermCert,
    Subsequence,
    TorsionError,
    Verdict,
    _char_pairing,
    _expansion,
    _norm_upper,
    _run_cycle,
    _CFMachine,
    _PairMachine,
    _StrideMachine,
    eval_seq,
    t_membership,
)

__all__ = [
    "WitnessError",
    "EscapeTermCert",
    "Witness",
    "Exhausted",
    "find_witness",
    "check_witness",
    "NotInGClosure",
    "ConsistentWithMembership",
    "g_membership_experiment",
    "DEFAULT_DELTA_LADDER",
    "BdsReport",
    "bds_experiment",
]

DEFAULT_DELTA_LADDER = (
    Fraction(1, 2),
    Fraction(1, 3),
    Fraction(1, 6),
    Fraction(1, 12),
)

_SCALE_EXPONENTS = (4, 8, 16, 32, 64, 128)


class WitnessError(ValueError):
    """Invalid witness-search input."""


@dataclass(frozen=True)
class EscapeTermCert:
    """One verified escape: norm(<a_n, chi>) >= threshold, exactly."""

    index: int
    term: tuple[int, ...]
    norm_lower: Fraction  # display bound; the exact claim is >= threshold
    threshold: Fraction


@dataclass(frozen=True)
class Witness:
    sequence: IntVecSeq
    escape_threshold: Fraction
    null_certificate: tuple[NullTermCert, ...]
    escape_certificate: tuple[EscapeTermCert, ...]
    strategy: str


@dataclass(frozen=True)
class Exhausted:
    """Search budget consumed without a certified witness.  No claim made."""

    reason: str
    candidates_tested: int


@dataclass(frozen=True)
class NotInGClosure:
    witness: Witness
    delta: Fraction


@dataclass(frozen=True)
class ConsistentWithMembership:
    """Every threshold exhausted its budget.  Explicitly not a proof."""

    attempts: tuple[tuple[Fraction, Exhausted], ...]
    note: str = (
        "no escape witness found at any threshold; this is consistent with "
        "membership in the g-closure but does not prove it"
    )


def _validate(topology: PrecompactTopology, chi, delta: Fraction):
    k = topology.ambient.free_rank
    chi = tuple(chi)
    if len(chi) != k:
        raise WitnessError(f"candidate character has {len(chi)} coordinates, need {k}")
    delta = Fraction(delta)
    if not 0 < delta <= Fraction(1, 2):
        raise WitnessError("escape threshold must lie in (0, 1/2]")
    return chi, delta


def _certify(
    seq: IntVecSeq,
    characters,
    chi: tuple[CirclePoint, ...],
    delta: Fraction,
    count: int,
    strategy: str,
) -> Witness | None:
    """Exact per-term verification; None as soon as one bound fails."""
    null_certs = []
    escape_certs = []
    for n in range(count):
        term = eval_seq(seq, n)
        if not any(term):
            return None
        envelope = Fraction(1, 2**n)
        norms = []
        for h in characters:
            val = _char_pairing(term, h)
            if val.norm_cmp(envelope) > 0:
                return None
            norms.append(_norm_upper(val, envelope / 8))
        escape_val = _char_pairing(term, chi)
        if escape_val.norm_cmp(delta) < 0:
            return None
        if escape_val.is_rational():
            r = escape_val.mod1().rat
            lower = min(r, 1 - r)
        else:
            lower = escape_val.norm_enclosure(delta / 8).lower
        null_certs.append(NullTermCert(n, term, tuple(norms), envelope))
        escape_certs.append(EscapeTermCert(n, term, lower, delta))
    return Witness(seq, delta, tuple(null_certs), tuple(escape_certs), strategy)


class _CandidateCounter:
    def __init__(self, limit: int):
        self.used = 0
        self.limit = limit

    def spend(self) -> bool:
        self.used += 1
        return self.used <= self.limit


def _annihilator_candidates(generators, radius: int) -> list[tuple[int, ...]]:
    """Sign-canonical integer combinations with coefficients in [-r, r]."""
    dim = len(generators[0])
    combos: set[tuple[int, ...]] = set()
    stack = [()]
    for g in generators:
        stack = [s + (c,) for s in stack for c in range(-radius, radius + 1)]
    for coeffs in stack:
        vec = tuple(
            sum(c * g[i] for c, g in zip(coeffs, generators)) for i in range(dim)
        )
        if not any(vec):
            continue
        lead = next(x for x in vec if x)
        if lead < 0:
            vec = tuple(-x for x in vec)
        combos.add(vec)
    return sorted(combos, key=lambda v: (max(abs(x) for x in v), v))


def _stage_annihilator(topology, chi, delta, count, counter) -> Witness | None:
    lattice = von_neumann_radical(topology)
    generators = lattice.element_generators()
    if not generators:
        return None
    tried: set[tuple[int, ...]] = set()
    for radius in (1, 2, 3):
        for a in _annihilator_candidates(generators, radius):
            if a in tried:
                continue
            tried.add(a)
            if not counter.spend():
                return None
            if _char_pairing(a, chi).norm_cmp(delta) >= 0:
                witness = _certify(
                    Constant(a), topology.characters, chi, delta, count, "annihilator"
                )
                if witness is not None:
                    return witness
    return None


def _stage_cf_subsequence(topology, chi, delta, count, counter) -> Witness | None:
    chars = topology.characters
    if topology.ambient.free_rank != 1 or len(chars) != 1:
        return None
    alpha = chars[0][0]
    if alpha.is_rational:
        return None
    x = chi[0]
    cf = _expansion(alpha)
    if x.is_rational:
        modulus = x.den
        machine = _CFMachine(cf, x.num, modulus)
    elif x.surd == alpha.surd:
        m = Fraction(x.surd_coeff * alpha.den, x.den * alpha.surd_coeff)
        r = Fraction(x.num, x.den) - m * Fraction(alpha.num, alpha.den)
        modulus = lcm(m.denominator, r.denominator)
        machine = _PairMachine(cf, int(m * modulus), int(r * modulus), modulus)
    else:
        return None
    run = _run_cycle(machine)
    if run is None:
        return None
    residues, first, period = run
    cycle = residues[first : first + period]
    classes = []
    for pos, v in enumerate(cycle):
        norm = Fraction(min(v, modulus - v), modulus)
        if v and norm >= delta:
            classes.append((norm, pos))
    classes.sort(key=lambda t: (-t[0], t[1]))
    stride = period if period >= 2 else 2
    for _, pos in classes:
        for shift in (0, 1, 2, 4, 8, 16):
            if not counter.spend():
                return None
            seq = Subsequence(CFDenominators(alpha), stride, first + pos + shift * stride)
            witness = _certify(seq, chars, chi, delta, count, "cf-subsequence")
            if witness is not None:
                return witness
    return None


def _stage_lattice(topology, chi, delta, count, counter) -> Witness | Exhausted:
    from .lattice import approximation_candidates

    chars = topology.characters
    terms: list[tuple[int, ...]] = []
    escape_failed: set[tuple[int, ...]] = set()
    pools: dict[int, list[tuple[int, ...]]] = {}
    for n in range(count):
        envelope = Fraction(1, 2**n)
        found = None
        seen: set[tuple[int, ...]] = set()
        for exponent in _SCALE_EXPONENTS:
            if exponent not in pools:
                pools[exponent] = approximation_candidates(chars, 2**exponent)
            for a in pools[exponent]:
                if a in seen or a in escape_failed:
                    continue
                seen.add(a)
                if not counter.spend():
                    return Exhausted(
                        f"candidate budget exhausted at term {n}", counter.used
                    )
                # escape first: for rational chi it is plain fraction
                # arithmetic, and a failure rules the candidate out forever
                if _char_pairing(a, chi).norm_cmp(delta) < 0:
                    escape_failed.add(a)
                    continue
                if any(
                    _char_pairing(a, h).norm_cmp(envelope) > 0 for h in chars
                ):
                    continue
                found = a
                break
            if found is not None:
                break
        if found is None:
            return Exhausted(
                f"no candidate met envelope {envelope} with escape >= {delta} "
                f"at term {n}",
                counter.used,
            )
        terms.append(found)
    witness = _certify(Explicit(tuple(terms)), chars, chi, delta, count, "lattice")
    if witness is None:  # defensive; terms were verified individually
        return Exhausted("assembled terms failed final certification", counter.used)
    return witness


def find_witness(
    topology: PrecompactTopology,
    chi: tuple[CirclePoint, ...] | list[CirclePoint],
    delta: Fraction,
    budget: Budget | None = None,
) -> Witness | Exhausted:
    """Search for a certified escape witness, deterministically.

    Strategy order: annihilator shortcut, continued-fraction subsequences
    (single irrational generator on Z), then per-term lattice approximation
    over the scale ladder with lexicographically smallest candidates first.
    """
    chi, delta = _validate(topology, chi, delta)
    budget = budget or Budget()
    count = budget.max_terms
    counter = _CandidateCounter(budget.max_candidates)
    if all(p.is_rational for p in chi):
        c = lcm(*(p.den for p in chi))
        best = Fraction(c // 2, c)
        if best < delta:
            return Exhausted(
                f"every pairing with the candidate lies in (1/{c})Z/Z, whose "
                f"largest norm {best} is below the threshold {delta}",
                0,
            )
    witness = _stage_annihilator(topology, chi, delta, count, counter)
    if witness is not None:
        return witness
    if counter.used >= counter.limit:
        return Exhausted("candidate budget exhausted in annihilator stage", counter.used)
    witness = _stage_cf_subsequence(topology, chi, delta, count, counter)
    if witness is not None:
        return witness
    if counter.used >= counter.limit:
        return Exhausted(
            "candidate budget exhausted in subsequence stage", counter.used
        )
    if not topology.characters:
        # indiscrete topology: the annihilator stage already enumerated Z^k
        return Exhausted("no escaping vector found for the indiscrete topology", counter.used)
    return _stage_lattice(topology, chi, delta, count, counter)


def check_witness(
    witness: Witness,
    topology: PrecompactTopology,
    chi: tuple[CirclePoint, ...] | list[CirclePoint],
) -> bool:
    """Recompute every certificate bound from scratch; True iff all hold."""
    try:
        chi = tuple(chi)
        delta = witness.escape_threshold
        if not 0 < delta <= Fraction(1, 2):
            return False
        nulls, escapes = witness.null_certificate, witness.escape_certificate
        if len(nulls) != len(escapes) or not nulls:
            return False
        for n, (nc, ec) in enumerate(zip(nulls, escapes)):
            if nc.index != n or ec.index != n:
                return False
            term = eval_seq(witness.sequence, n)
            if term != nc.term or term != ec.term or not any(term):
                return False
            if nc.envelope != Fraction(1, 2**n) or ec.threshold != delta:
                return False
            for h in topology.characters:
                if _char_pairing(term, h).norm_cmp(nc.envelope) > 0:
                    return False
            if _char_pairing(term, chi).norm_cmp(delta) < 0:
                return False
        return True
    except (WitnessError, TorsionError, ValueError, IndexError):
        return False


def g_membership_experiment(
    topology: PrecompactTopology,
    chi: tuple[CirclePoint, ...] | list[CirclePoint],
    budget: Budget | None = None,
    deltas: tuple[Fraction, ...] = DEFAULT_DELTA_LADDER,
) -> NotInGClosure | ConsistentWithMembership:
    """Run find_witness down the threshold ladder; a single witness decides."""
    chi = tuple(chi)
    attempts = []
    for delta in deltas:
        result = find_witness(topology, chi, delta, budget)
        if isinstance(result, Witness):
            return NotInGClosure(result, Fraction(delta))
        attempts.append((Fraction(delta), result))
    return ConsistentWithMembership(tuple(attempts))


@dataclass(frozen=True)
class BdsReport:
    """Exact verification that <alpha> lies in t_u for u = (q_n), plus
    per-probe escape experiments.  Never claims t_u equals <alpha>."""

    alpha: CirclePoint
    multiple_bound: int
    multiples: tuple[tuple[int, Verdict], ...]
    inclusion_verified: bool
    probes: tuple[tuple[CirclePoint, NotInGClosure | ConsistentWithMembership], ...]
    note: str = (
        "verified: every listed multiple of alpha is topologically annihilated "
        "by the convergent denominators; equality of the two groups is not claimed"
    )


def bds_experiment(
    alpha: CirclePoint,
    probes: list[CirclePoint] | tuple[CirclePoint, ...],
    budget: Budget | None = None,
    multiple_bound: int = 10,
) -> BdsReport:
    """Exercise the countable-subgroup closedness phenomenon for <alpha>."""
    if alpha.is_rational:
        raise WitnessError("the base point must be a quadratic irrational")
    if not probes:
        raise WitnessError("at least one probe point is required")
    if multiple_bound < 1:
        raise WitnessError("multiple bound must be >= 1")
    u = CFDenominators(alpha)
    multiples = []
    verified = True
    for j in range(-multiple_bound, multiple_bound + 1):
        verdict = t_membership(u, int_mul(j, alpha))
        multiples.append((j, verdict))
        if not (verdict.is_exact and verdict.member):
            verified = False
    topology = PrecompactTopology.on_free(1, [(alpha,)])
    probe_results = tuple(
        (p, g_membership_experiment(topology, (p,), budget)) for p in probes
    )
    return BdsReport(
        alpha, multiple_bound, tuple(multiples), verified, probe_results
    )
