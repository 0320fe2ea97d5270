"""Integer-vector sequences in the dual of Z^k and certified decisions about
which circle-group elements they annihilate in the limit.

A sequence u = (u_n) of integer vectors acts on a point x (one CirclePoint
per coordinate) by n |-> <u_n, x> mod 1.  Membership of x in s_u means this
scalar orbit converges to 0 in R/Z.  Verdicts come in three strengths:

* Exact: decided, with a finitely checkable reason (an eventual-zero index,
  or an escaping residue that recurs with a stated period).
* CertifiedUpTo: every norm in a trailing window up to the horizon is below
  tolerance; no claim beyond the horizon.
* Undecided: the scan saw norms above tolerance and no exact route applied.

The exact routes never consult floating point: rational orbits live in a
finite cyclic group and are decided by residue automata with cycle
detection; quadratic orbits along continued-fraction denominators are
decided through the classical approximation bound |q_n*alpha - p_n| <
1/q_{n+1}.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .circle import (
    BoundedExpansionError,
    CFExpansion,
    CirclePoint,
    SurdSum,
    cf_expand,
)
from .duality import PrecompactTopology, von_neumann_radical

__all__ = [
    "TorsionError",
    "IntVecSeq",
    "Geometric",
    "Factorial",
    "CFDenominators",
    "Explicit",
    "Constant",
    "Subsequence",
    "Interleave",
    "eval_seq",
    "Policy",
    "Verdict",
    "EXACT",
    "CERTIFIED_UP_TO",
    "UNDECIDED",
    "s_membership",
    "t_membership",
    "RationalTorsionProfile",
    "rational_torsion_profile",
    "Budget",
    "NullTermCert",
    "NullCertificate",
    "NullSequenceResult",
    "NotFound",
    "null_sequence",
    "recheck_null_certificate",
]

# residue-automaton state cap before degrading to a numeric scan
_STATE_CAP = 1_000_000


class TorsionError(ValueError):
    """Invalid sequence or membership query."""


# ---------------------------------------------------------------------------
# sequences


class IntVecSeq:
    """Total function n -> u_n in Z^k (finite generators carry a horizon)."""

    def dimension(self) -> int:
        raise NotImplementedError

    def term(self, n: int) -> tuple[int, ...]:
        raise NotImplementedError

    def horizon(self) -> int | None:
        """Number of defined terms, or None when the sequence is infinite."""
        return None

    def describe(self) -> str:
        raise NotImplementedError

    def __str__(self) -> str:
        return self.describe()


@dataclass(frozen=True)
class Geometric(IntVecSeq):
    """u_n = base^n * pattern, base >= 2."""

    base: int
    pattern: tuple[int, ...] = (1,)

    def __post_init__(self):
        if self.base < 2:
            raise TorsionError("geometric base must be >= 2")
        if not self.pattern:
            raise TorsionError("empty coordinate pattern")

    def dimension(self) -> int:
        return len(self.pattern)

    def term(self, n: int) -> tuple[int, ...]:
        m = self.base**n
        return tuple(m * p for p in self.pattern)

    def describe(self) -> str:
        if self.pattern == (1,):
            return f"geom:{self.base}"
        return f"geom:{self.base}*({','.join(map(str, self.pattern))})"


@dataclass(frozen=True)
class Factorial(IntVecSeq):
    """u_n = n! * pattern."""

    pattern: tuple[int, ...] = (1,)

    def __post_init__(self):
        if not self.pattern:
            raise TorsionError("empty coordinate pattern")

    def dimension(self) -> int:
        return len(self.pattern)

    def term(self, n: int) -> tuple[int, ...]:
        f = 1
        for i in range(2, n + 1):
            f *= i
        return tuple(f * p for p in self.pattern)

    def describe(self) -> str:
        if self.pattern == (1,):
            return "fact"
        return f"fact*({','.join(map(str, self.pattern))})"


_CF_CACHE: dict[CirclePoint, CFExpansion] = {}
_QDEN_CACHE: dict[CirclePoint, list[int]] = {}


def _expansion(alpha: CirclePoint) -> CFExpansion:
    cf = _CF_CACHE.get(alpha)
    if cf is None:
        cf = cf_expand(alpha)
        _CF_CACHE[alpha] = cf
    return cf


def _q_denominator(alpha: CirclePoint, n: int) -> int:
    qs = _QDEN_CACHE.setdefault(alpha, [])
    if not qs:
        qs.append(1)  # q_0 = 1 regardless of the expansion
    cf = _expansion(alpha)
    while len(qs) <= n:
        i = len(qs)
        prev = qs[i - 2] if i >= 2 else 0  # q_{-1} = 0
        qs.append(cf.quotient(i) * qs[i - 1] + prev)
    return qs[n]


@dataclass(frozen=True)
class CFDenominators(IntVecSeq):
    """u_n = q_n, the convergent denominators of an irrational alpha."""

    alpha: CirclePoint

    def __post_init__(self):
        if self.alpha.is_rational:
            raise TorsionError("convergent denominators need an irrational point")

    def dimension(self) -> int:
        return 1

    def term(self, n: int) -> tuple[int, ...]:
        return (_q_denominator(self.alpha, n),)

    def describe(self) -> str:
        return f"cfden:{self.alpha}"


@dataclass(frozen=True)
class Explicit(IntVecSeq):
    """Finite list of terms; evaluation past the horizon is an error."""

    terms: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if not self.terms:
            raise TorsionError("explicit sequence needs at least one term")
        k = len(self.terms[0])
        if k < 1 or any(len(t) != k for t in self.terms):
            raise TorsionError("explicit terms must share a positive dimension")

    def dimension(self) -> int:
        return len(self.terms[0])

    def term(self, n: int) -> tuple[int, ...]:
        if n >= len(self.terms):
            raise BoundedExpansionError(
                f"explicit sequence has {len(self.terms)} terms, index {n} requested"
            )
        return self.terms[n]

    def horizon(self) -> int | None:
        return len(self.terms)

    def describe(self) -> str:
        body = ";".join(",".join(map(str, t)) for t in self.terms)
        return f"list:{body}"


@dataclass(frozen=True)
class Constant(IntVecSeq):
    """u_n = vector for every n."""

    vector: tuple[int, ...]

    def __post_init__(self):
        if not self.vector:
            raise TorsionError("constant sequence needs a positive dimension")

    def dimension(self) -> int:
        return len(self.vector)

    def term(self, n: int) -> tuple[int, ...]:
        return self.vector

    def describe(self) -> str:
        return f"const:{','.join(map(str, self.vector))}"


@dataclass(frozen=True)
class Subsequence(IntVecSeq):
    """u_n = parent_{stride*n + offset} along an arithmetic progression."""

    parent: IntVecSeq
    stride: int
    offset: int = 0

    def __post_init__(self):
        if self.stride < 1:
            raise TorsionError("subsequence stride must be >= 1")
        if self.offset < 0:
            raise TorsionError("subsequence offset must be >= 0")

    def dimension(self) -> int:
        return self.parent.dimension()

    def term(self, n: int) -> tuple[int, ...]:
        return self.parent.term(self.stride * n + self.offset)

    def horizon(self) -> int | None:
        h = self.parent.horizon()
        if h is None:
            return None
        if h <= self.offset:
            return 0
        return (h - 1 - self.offset) // self.stride + 1

    def describe(self) -> str:
        return f"sub({self.stride},{self.offset}):{self.parent.describe()}"


@dataclass(frozen=True)
class Interleave(IntVecSeq):
    """Round-robin over children: child i contributes blocks[i] consecutive
    terms per cycle, advancing through its own terms in order."""

    children: tuple[IntVecSeq, ...]
    blocks: tuple[int, ...]

    def __post_init__(self):
        if not self.children:
            raise TorsionError("interleave needs at least one child")
        if len(self.blocks) != len(self.children):
            raise TorsionError("one block size per child required")
        if any(b < 1 for b in self.blocks):
            raise TorsionError("block sizes must be >= 1")
        k = self.children[0].dimension()
        if any(c.dimension() != k for c in self.children):
            raise TorsionError("interleaved children must share a dimension")

    def dimension(self) -> int:
        return self.children[0].dimension()

    def _locate(self, n: int) -> tuple[int, int]:
        """Global index -> (child index, child-local term index)."""
        cycle = sum(self.blocks)
        c, r = divmod(n, cycle)
        for j, b in enumerate(self.blocks):
            if r < b:
                return j, c * b + r
            r -= b
        raise AssertionError("unreachable")

    def global_index(self, child: int, m: int) -> int:
        """Child-local term index -> global index of that term."""
        cycle = sum(self.blocks)
        b = self.blocks[child]
        c, p = divmod(m, b)
        return c * cycle + sum(self.blocks[:child]) + p

    def term(self, n: int) -> tuple[int, ...]:
        j, m = self._locate(n)
        return self.children[j].term(m)

    def horizon(self) -> int | None:
        finite = [
            self.global_index(j, h)
            for j, c in enumerate(self.children)
            if (h := c.horizon()) is not None
        ]
        return min(finite) if finite else None

    def describe(self) -> str:
        body = ";".join(
            f"{c.describe()}@{b}" for c, b in zip(self.children, self.blocks)
        )
        return f"interleave({body})"


def eval_seq(u: IntVecSeq, n: int) -> tuple[int, ...]:
    """u_n, exactly.  Explicit generators error beyond their horizon."""
    if n < 0:
        raise TorsionError("sequence index must be >= 0")
    return u.term(n)


# ---------------------------------------------------------------------------
# verdicts

EXACT = "exact"
CERTIFIED_UP_TO = "certified_up_to"
UNDECIDED = "undecided"


@dataclass(frozen=True)
class Policy:
    """Scan horizon and tolerance for the non-exact tier."""

    horizon: int = 512
    tolerance: Fraction = Fraction(1, 2**20)

    def __post_init__(self):
        if self.horizon < 1:
            raise TorsionError("horizon must be >= 1")
        if not 0 < self.tolerance < 1:
            raise TorsionError("tolerance must lie in (0, 1)")


@dataclass(frozen=True)
class Verdict:
    status: str
    member: bool | None
    reason: str
    horizon: int | None = None
    worst_bound: Fraction | None = None
    trace: tuple[tuple[int, Fraction], ...] = ()
    detail: tuple[tuple[str, object], ...] = ()

    @classmethod
    def exact_in(cls, reason: str, **facts) -> "Verdict":
        return cls(EXACT, True, reason, detail=tuple(sorted(facts.items())))

    @classmethod
    def exact_out(cls, reason: str, **facts) -> "Verdict":
        return cls(EXACT, False, reason, detail=tuple(sorted(facts.items())))

    @classmethod
    def certified(cls, horizon, worst, trace, reason, **facts) -> "Verdict":
        return cls(
            CERTIFIED_UP_TO,
            None,
            reason,
            horizon=horizon,
            worst_bound=worst,
            trace=tuple(trace),
            detail=tuple(sorted(facts.items())),
        )

    @classmethod
    def undecided(cls, reason, horizon=None, worst=None, trace=(), **facts) -> "Verdict":
        return cls(
            UNDECIDED,
            None,
            reason,
            horizon=horizon,
            worst_bound=worst,
            trace=tuple(trace),
            detail=tuple(sorted(facts.items())),
        )

    def fact(self, key: str, default=None):
        for k, v in self.detail:
            if k == key:
                return v
        return default

    @property
    def is_exact(self) -> bool:
        return self.status == EXACT

    def __str__(self) -> str:
        if self.status == EXACT:
            head = "Exact In" if self.member else "Exact Out"
            return f"{head}: {self.reason}"
        if self.status == CERTIFIED_UP_TO:
            return f"CertifiedUpTo(horizon={self.horizon}): {self.reason}"
        return f"Undecided: {self.reason}"


# ---------------------------------------------------------------------------
# residue automata for rational points


class _ConstMachine:
    def __init__(self, r: int):
        self.r = r

    def state(self):
        return ()

    def residue(self) -> int:
        return self.r

    def advance(self):
        pass


class _GeoMachine:
    def __init__(self, start: int, step: int, q: int):
        self.s = start % q
        self.step = step % q
        self.q = q

    def state(self):
        return self.s

    def residue(self) -> int:
        return self.s

    def advance(self):
        self.s = self.s * self.step % self.q


class _FactMachine:
    # r_n = n! * c mod q; the next multiplier is (n+1) mod q
    def __init__(self, c: int, q: int):
        self.r = c % q
        self.m = 0
        self.q = q

    def state(self):
        return (self.r, self.m)

    def residue(self) -> int:
        return self.r

    def advance(self):
        self.m = (self.m + 1) % self.q
        self.r = self.r * self.m % self.q


class _CFMachine:
    # r_n = q_n * c mod q along the convergent recurrence
    def __init__(self, cf: CFExpansion, c: int, q: int):
        self.cf = cf
        self.c = c % q
        self.q = q
        self.prev, self.cur = 0, 1 % q
        self.idx = 1

    def state(self):
        return (self.cf.canonical_index(self.idx), self.prev, self.cur)

    def residue(self) -> int:
        return self.cur * self.c % self.q

    def advance(self):
        a = self.cf.quotient(self.idx)
        self.prev, self.cur = self.cur, (a * self.cur + self.prev) % self.q
        self.idx += 1


class _PairMachine:
    # R_n = (cp * p_n + cq * q_n) mod L along the convergent recurrences
    def __init__(self, cf: CFExpansion, cp: int, cq: int, L: int):
        self.cf = cf
        self.cp, self.cq, self.L = cp % L, cq % L, L
        self.pprev, self.pcur = 1 % L, cf.quotient(0) % L
        self.qprev, self.qcur = 0, 1 % L
        self.idx = 1

    def state(self):
        return (
            self.cf.canonical_index(self.idx),
            self.pprev,
            self.pcur,
            self.qprev,
            self.qcur,
        )

    def residue(self) -> int:
        return (self.cp * self.pcur + self.cq * self.qcur) % self.L

    def advance(self):
        a = self.cf.quotient(self.idx)
        self.pprev, self.pcur = self.pcur, (a * self.pcur + self.pprev) % self.L
        self.qprev, self.qcur = self.qcur, (a * self.qcur + self.qprev) % self.L
        self.idx += 1


class _StrideMachine:
    def __init__(self, parent, stride: int, offset: int):
        self.parent = parent
        self.stride = stride
        for _ in range(offset):
            parent.advance()

    def state(self):
        return self.parent.state()

    def residue(self) -> int:
        return self.parent.residue()

    def advance(self):
        for _ in range(self.stride):
            self.parent.advance()


class _InterleaveMachine:
    def __init__(self, children, blocks):
        self.children = children
        self.blocks = blocks
        self.cycle = sum(blocks)
        self.slot = 0

    def _active(self) -> int:
        r = self.slot
        for j, b in enumerate(self.blocks):
            if r < b:
                return j
            r -= b
        raise AssertionError("unreachable")

    def state(self):
        return (self.slot, tuple(c.state() for c in self.children))

    def residue(self) -> int:
        return self.children[self._active()].residue()

    def advance(self):
        self.children[self._active()].advance()
        self.slot = (self.slot + 1) % self.cycle


def _build_machine(u: IntVecSeq, w: tuple[int, ...], q: int):
    """Automaton for n -> <u_n, w> mod q, or None when u has finite terms."""
    if isinstance(u, Constant):
        return _ConstMachine(sum(a * b for a, b in zip(u.vector, w)) % q)
    if isinstance(u, Geometric):
        c = sum(a * b for a, b in zip(u.pattern, w)) % q
        return _GeoMachine(c, u.base, q)
    if isinstance(u, Factorial):
        c = sum(a * b for a, b in zip(u.pattern, w)) % q
        return _FactMachine(c, q)
    if isinstance(u, CFDenominators):
        return _CFMachine(_expansion(u.alpha), w[0], q)
    if isinstance(u, Subsequence):
        inner = _build_machine(u.parent, w, q)
        if inner is None:
            return None
        return _StrideMachine(inner, u.stride, u.offset)
    if isinstance(u, Interleave):
        inner = [_build_machine(c, w, q) for c in u.children]
        if any(m is None for m in inner):
            return None
        return _InterleaveMachine(inner, u.blocks)
    return None


def _run_cycle(machine, cap: int = _STATE_CAP):
    """Drive the automaton to a state repetition; residues plus cycle bounds."""
    seen: dict = {}
    residues: list[int] = []
    while True:
        st = machine.state()
        if st in seen:
            first = seen[st]
            return residues, first, len(residues) - first
        if len(residues) >= cap:
            return None
        seen[st] = len(residues)
        residues.append(machine.residue())
        machine.advance()


def _verdict_from_cycle(residues, first, period, q) -> Verdict:
    cycle = residues[first : first + period]
    if not any(cycle):
        nz = [i for i, v in enumerate(residues) if v]
        start = max(nz) + 1 if nz else 0
        return Verdict.exact_in(
            f"pairing = 0 (mod 1) for all n >= {start}; the residue orbit mod {q} "
            f"enters an all-zero cycle (pre-period {first}, period {period})",
            from_index=start,
            preperiod=first,
            period=period,
            modulus=q,
        )
    best = max((v for v in cycle if v), key=lambda v: (min(v, q - v), -v))
    norm = Fraction(min(best, q - best), q)
    idx = first + cycle.index(best)
    return Verdict.exact_out(
        f"pairing norm = {norm} at n = {idx}, recurring with period {period} "
        f"(residue {best} mod {q})",
        escape_index=idx,
        escape_value=norm,
        period=period,
        modulus=q,
        residue=best,
    )


# ---------------------------------------------------------------------------
# the decision ladder


def _pairing(u: IntVecSeq, x: tuple[CirclePoint, ...], n: int) -> SurdSum:
    term = u.term(n)
    total = SurdSum()
    for coeff, point in zip(term, x):
        if coeff:
            total = total + SurdSum.from_point(point, coeff)
    return total


def _norm_upper(value: SurdSum, tol: Fraction) -> Fraction:
    if value.is_rational():
        r = value.mod1().rat
        return min(r, 1 - r)
    return value.norm_enclosure(tol).upper


def _tail_scan(uppers: list[Fraction], horizon: int, tol: Fraction) -> Verdict:
    n = len(uppers)
    t = n
    while t > 0 and uppers[t - 1] <= tol:
        t -= 1
    window = min(16, n)
    trace = tuple((i, uppers[i]) for i in range(max(0, n - 16), n))
    if n - t >= window:
        worst = max(uppers[t:]) if t < n else Fraction(0)
        return Verdict.certified(
            horizon,
            worst,
            trace,
            f"all pairing norms <= {tol} from index {t} up to horizon {horizon}",
            tail_start=t,
        )
    bad = max(i for i in range(n) if uppers[i] > tol)
    return Verdict.undecided(
        f"pairing norm {uppers[bad]} exceeds tolerance {tol} at index {bad} "
        f"(horizon {horizon})",
        horizon=horizon,
        worst=uppers[bad],
        trace=trace,
        offending_index=bad,
    )


def _finite_scan(u: IntVecSeq, x: tuple[CirclePoint, ...], policy: Policy) -> Verdict:
    h = u.horizon()
    if h == 0:
        return Verdict.exact_in(
            "sequence defines no terms; convergence holds vacuously",
            from_index=0,
            sequence_horizon=0,
        )
    values = [_pairing(u, x, n) for n in range(h)]
    integral = [v.is_rational() and v.rat.denominator == 1 for v in values]
    t = h
    while t > 0 and integral[t - 1]:
        t -= 1
    if t < h:
        return Verdict.exact_in(
            f"pairing = 0 (mod 1) from index {t} through the final index {h - 1} "
            f"of a finite sequence",
            from_index=t,
            sequence_horizon=h,
        )
    uppers = [_norm_upper(v, policy.tolerance / 4) for v in values]
    return _tail_scan(uppers, h, policy.tolerance)


def _scan(u: IntVecSeq, x: tuple[CirclePoint, ...], policy: Policy) -> Verdict:
    n = policy.horizon
    uppers = [
        _norm_upper(_pairing(u, x, i), policy.tolerance / 4) for i in range(n)
    ]
    return _tail_scan(uppers, n, policy.tolerance)


def _chain(u: IntVecSeq) -> tuple[IntVecSeq, int, int]:
    """(root, A, B) with u.term(n) == root.term(A*n + B) for every n."""
    A, B = 1, 0
    while isinstance(u, Subsequence):
        A, B = A * u.stride, A * u.offset + B
        u = u.parent
    return u, A, B


def _factorial_in(c: int, q: int, A: int, B: int) -> Verdict:
    """Absorbing divisibility: (An+B)! * c = 0 mod q from some index on."""
    m, f = 0, 1
    while f * c % q:
        m += 1
        f = f * (m % q) % q
    start = 0 if B >= m else -((B - m) // A)
    return Verdict.exact_in(
        f"q = {q} divides (A*n+B)!*{c} for all n >= {start} "
        f"(A = {A}, B = {B}; factorials absorb every modulus)",
        from_index=start,
        modulus=q,
        absorbed_at=m,
    )


def _decide_rational(u: IntVecSeq, x: tuple[CirclePoint, ...], policy: Policy) -> Verdict:
    q = lcm(*(p.den for p in x))
    w = tuple(p.num * (q // p.den) for p in x)
    root, A, B = _chain(u)
    if isinstance(root, Factorial):
        c = sum(a * b for a, b in zip(root.pattern, w)) % q
        return _factorial_in(c, q, A, B)
    machine = _build_machine(u, w, q)
    if machine is None:
        return _scan(u, x, policy)
    run = _run_cycle(machine)
    if run is None:
        return _scan(u, x, policy)
    residues, first, period = run
    return _verdict_from_cycle(residues, first, period, q)


def _decide_cf_quadratic(
    alpha: CirclePoint, A: int, B: int, x: CirclePoint, u: IntVecSeq
) -> Verdict:
    """x = m*alpha + r in the same quadratic field; q_n*x = (m*p_n + r*q_n)
    + m*(q_n*alpha - p_n), and the bracket lives in (1/L)Z."""
    m = Fraction(x.surd_coeff * alpha.den, x.den * alpha.surd_coeff)
    r = Fraction(x.num, x.den) - m * Fraction(alpha.num, alpha.den)
    L = lcm(m.denominator, r.denominator)
    cp = int(m * L)
    cq = int(r * L)
    cf = _expansion(alpha)
    machine = _StrideMachine(_PairMachine(cf, cp, cq, L), A, B)
    run = _run_cycle(machine)
    if run is None:  # unreachable for quadratics; defensive
        raise AssertionError("quadratic pair automaton failed to cycle")
    residues, first, period = run
    cycle = residues[first : first + period]
    if not any(cycle):
        nz = [i for i, v in enumerate(residues) if v]
        start = max(nz) + 1 if nz else 0
        return Verdict.exact_in(
            f"<u_n, x> = R_n/{L} + m*theta_n with R_n = 0 for all n >= {start} "
            f"and |theta_n| < 1/q_(A*n+B+1) -> 0 (m = {m}, r = {r})",
            from_index=start,
            preperiod=first,
            period=period,
            modulus=L,
            slope=m,
            intercept=r,
        )
    best = max((v for v in cycle if v), key=lambda v: (min(v, L - v), -v))
    vnorm = Fraction(min(best, L - best), L)
    idx = first + cycle.index(best)
    # past the tail index the CF perturbation is below vnorm/2
    threshold = 2 * abs(m) / vnorm
    M = 0
    while Fraction(_q_denominator(alpha, M)) < threshold:
        M += 1
    # escape indices idx + t*period once A*n + B + 1 >= M
    lowest = max(idx, 0 if B + 1 >= M else -((B + 1 - M) // A))
    e0 = idx + (-(-(lowest - idx) // period)) * period if lowest > idx else idx
    bound = vnorm / 2
    return Verdict.exact_out(
        f"pairing norm >= {bound} at n = {e0} and every {period} steps thereafter "
        f"(recurring residue {best}/{L}, CF tail below {bound} from n = {lowest})",
        escape_index=e0,
        escape_bound=bound,
        escape_value=vnorm,
        period=period,
        modulus=L,
        residue=best,
        tail_index=lowest,
    )


def _decide_constant_value(value: SurdSum) -> Verdict:
    if value.is_rational() and value.rat.denominator == 1:
        return Verdict.exact_in(
            "constant pairing = 0 (mod 1) at every index", from_index=0
        )
    if value.is_rational():
        r = value.mod1().rat
        norm = min(r, 1 - r)
        return Verdict.exact_out(
            f"constant pairing norm = {norm} at every index",
            escape_index=0,
            escape_value=norm,
            period=1,
        )
    tol = Fraction(1, 2**16)
    while True:
        enc = value.norm_enclosure(tol)
        if enc.lower > 0:
            return Verdict.exact_out(
                f"constant irrational pairing has norm >= {enc.lower} at every index",
                escape_index=0,
                escape_bound=enc.lower,
                period=1,
            )
        tol /= 2**16


def _combine_interleave(
    u: Interleave, verdicts: list[Verdict], policy: Policy
) -> Verdict:
    for j, v in enumerate(verdicts):
        if v.status == EXACT and v.member is False:
            e0 = v.fact("escape_index", 0)
            period = v.fact("period", 1)
            big = lcm(period, u.blocks[j])
            gper = (big // u.blocks[j]) * sum(u.blocks)
            g0 = u.global_index(j, e0)
            return Verdict.exact_out(
                f"interleaved component {j} escapes: {v.reason} "
                f"(globally at n = {g0}, period {gper})",
                escape_index=g0,
                period=gper,
                component=j,
            )
    if all(v.status == EXACT and v.member for v in verdicts):
        start = max(
            u.global_index(j, f) if (f := v.fact("from_index", 0)) > 0 else 0
            for j, v in enumerate(verdicts)
        )
        return Verdict.exact_in(
            f"every interleaved component is eventually 0; combined from n >= {start}",
            from_index=start,
        )
    if any(v.status == UNDECIDED for v in verdicts):
        j = next(i for i, v in enumerate(verdicts) if v.status == UNDECIDED)
        return Verdict.undecided(
            f"interleaved component {j} undecided: {verdicts[j].reason}",
            horizon=verdicts[j].horizon,
            worst=verdicts[j].worst_bound,
            component=j,
        )
    horizon = min(
        u.global_index(j, v.horizon)
        for j, v in enumerate(verdicts)
        if v.status == CERTIFIED_UP_TO
    )
    worst = max(
        (v.worst_bound for v in verdicts if v.worst_bound is not None),
        default=Fraction(0),
    )
    return Verdict.certified(
        horizon,
        worst,
        (),
        f"every interleaved component is exact-in or certified below tolerance "
        f"(combined horizon {horizon})",
    )


def s_membership(
    u: IntVecSeq,
    x: tuple[CirclePoint, ...] | list[CirclePoint],
    policy: Policy | None = None,
) -> Verdict:
    """Does <u_n, x> mod 1 converge to 0?  Exact where the ladder applies."""
    policy = policy or Policy()
    x = tuple(x)
    if len(x) != u.dimension():
        raise TorsionError(
            f"sequence has dimension {u.dimension()}, point has {len(x)} coordinates"
        )
    if all(p.is_zero() for p in x):
        return Verdict.exact_in("x = 0: every character kills it", from_index=0)
    return _decide(u, x, policy)


def _decide(u: IntVecSeq, x: tuple[CirclePoint, ...], policy: Policy) -> Verdict:
    if isinstance(u, Interleave) and u.horizon() is None:
        verdicts = [_decide(c, x, policy) for c in u.children]
        return _combine_interleave(u, verdicts, policy)
    if u.horizon() is not None:
        return _finite_scan(u, x, policy)
    if all(p.is_rational for p in x):
        return _decide_rational(u, x, policy)
    root, A, B = _chain(u)
    if isinstance(root, Constant):
        return _decide_constant_value(_pairing(root, x, 0))
    if (
        isinstance(root, CFDenominators)
        and len(x) == 1
        and not x[0].is_rational
        and x[0].surd == root.alpha.surd
    ):
        return _decide_cf_quadratic(root.alpha, A, B, x[0], u)
    if isinstance(root, (Geometric, Factorial)):
        y = SurdSum()
        for coeff, point in zip(root.pattern, x):
            if coeff:
                y = y + SurdSum.from_point(point, coeff)
        if y.is_rational():
            f = y.rat
            q = f.denominator
            if isinstance(root, Factorial):
                return _factorial_in(f.numerator % q, q, A, B)
            start = f.numerator * pow(root.base, B, q) % q
            machine = _GeoMachine(start, pow(root.base, A, q), q)
            run = _run_cycle(machine)
            if run is not None:
                residues, first, period = run
                return _verdict_from_cycle(residues, first, period, q)
    return _scan(u, x, policy)


def t_membership(
    u: IntVecSeq, x: CirclePoint, policy: Policy | None = None
) -> Verdict:
    """Membership of a single circle point: s_membership specialized to k = 1."""
    if u.dimension() != 1:
        raise TorsionError("t-membership requires a one-dimensional sequence")
    return s_membership(u, (x,), policy)


# ---------------------------------------------------------------------------
# rational torsion profile


@dataclass(frozen=True)
class RationalTorsionProfile:
    entries: tuple[tuple[int, Verdict], ...]
    admitted: tuple[int, ...]
    flagged: tuple[int, ...]


def rational_torsion_profile(
    u: IntVecSeq, max_den: int, policy: Policy | None = None
) -> RationalTorsionProfile:
    """Verdicts for x = 1/q over all q <= max_den, plus the admitted set.

    Entries outside the exact ladder are flagged, never dropped.
    """
    if u.dimension() != 1:
        raise TorsionError("profile requires a one-dimensional sequence")
    if max_den < 1:
        raise TorsionError("max_den must be >= 1")
    entries = []
    admitted = []
    flagged = []
    for q in range(1, max_den + 1):
        v = s_membership(u, (CirclePoint.rational(1, q),), policy)
        entries.append((q, v))
        if v.status == EXACT and v.member:
            admitted.append(q)
        elif v.status != EXACT:
            flagged.append(q)
    return RationalTorsionProfile(tuple(entries), tuple(admitted), tuple(flagged))


# ---------------------------------------------------------------------------
# null sequences for precompact topologies


@dataclass(frozen=True)
class Budget:
    max_terms: int = 48
    max_candidates: int = 512

    def __post_init__(self):
        if self.max_terms < 1 or self.max_candidates < 1:
            raise TorsionError("budget bounds must be >= 1")


@dataclass(frozen=True)
class NullTermCert:
    """One verified term: every generator norm is exactly <= the envelope."""

    index: int
    term: tuple[int, ...]
    norms: tuple[Fraction, ...]  # per-generator upper bounds (display)
    envelope: Fraction  # 2^-index; the exact verified claim


@dataclass(frozen=True)
class NullCertificate:
    strategy: str
    terms: tuple[NullTermCert, ...]


@dataclass(frozen=True)
class NullSequenceResult:
    sequence: IntVecSeq
    certificate: NullCertificate


@dataclass(frozen=True)
class NotFound:
    """Budget exhausted; deliberately carries no nonexistence claim."""

    reason: str


def _char_pairing(term: tuple[int, ...], char: tuple[CirclePoint, ...]) -> SurdSum:
    total = SurdSum()
    for coeff, point in zip(term, char):
        if coeff:
            total = total + SurdSum.from_point(point, coeff)
    return total


def _certify_terms(
    seq: IntVecSeq,
    characters,
    count: int,
    strategy: str,
) -> NullCertificate:
    """Verify norm(<a_n, h>) <= 2^-n exactly for every generator and term."""
    certs = []
    for n in range(count):
        term = seq.term(n)
        if not any(term):
            raise TorsionError("null sequence term is the zero vector")
        envelope = Fraction(1, 2**n)
        norms = []
        for char in characters:
            val = _char_pairing(term, char)
            if val.norm_cmp(envelope) > 0:
                raise TorsionError(
                    f"term {n} violates its envelope {envelope} on {char}"
                )
            norms.append(_norm_upper(val, envelope / 8))
        certs.append(NullTermCert(n, term, tuple(norms), envelope))
    return NullCertificate(strategy, tuple(certs))


def null_sequence(
    topology: PrecompactTopology, budget: Budget | None = None
) -> NullSequenceResult | NotFound:
    """A nonzero integer sequence converging to 0 in the given topology,
    with a per-term exact certificate (envelope 2^-n), or NotFound.

    Strategies, in order: a nonzero annihilator vector gives a constant
    sequence; a single quadratic character on Z is handled by every other
    continued-fraction denominator of that point; otherwise per-term lattice
    reduction searches for simultaneous approximations.
    """
    budget = budget or Budget()
    k = topology.ambient.free_rank
    chars = topology.characters
    count = budget.max_terms
    if not chars:
        seq: IntVecSeq = Constant((1,) + (0,) * (k - 1))
        return NullSequenceResult(seq, _certify_terms(seq, chars, count, "indiscrete"))
    radical = von_neumann_radical(topology)
    gens = radical.element_generators()
    if gens:
        vec = min(gens, key=lambda g: (max(abs(c) for c in g), g))
        seq = Constant(vec)
        return NullSequenceResult(
            seq, _certify_terms(seq, chars, count, "annihilator")
        )
    if k == 1 and len(chars) == 1 and not chars[0][0].is_rational:
        alpha = chars[0][0]
        seq = Subsequence(CFDenominators(alpha), 2, 0)
        # q_{2n+1} >= 2^n, so norm(q_{2n} * alpha) < 1/q_{2n+1} <= 2^-n
        return NullSequenceResult(
            seq, _certify_terms(seq, chars, count, "cf-denominators")
        )
    from .lattice import approximation_candidates

    used = 0
    terms: list[tuple[int, ...]] = []
    for n in range(count):
        envelope = Fraction(1, 2**n)
        found = None
        scale = 2 ** (n + 4)
        while found is None and scale <= 2**192:
            for cand in approximation_candidates(chars, scale):
                used += 1
                if used > budget.max_candidates:
                    return NotFound(
                        f"candidate budget {budget.max_candidates} exhausted "
                        f"at term {n}"
                    )
                ok = all(
                    _char_pairing(cand, h).norm_cmp(envelope) <= 0 for h in chars
                )
                if ok and any(cand):
                    found = cand
                    break
            scale *= 2**8
        if found is None:
            return NotFound(f"no candidate met envelope {envelope} at term {n}")
        terms.append(found)
    seq = Explicit(tuple(terms))
    return NullSequenceResult(
        seq, _certify_terms(seq, chars, count, "lattice-approximation")
    )


def recheck_null_certificate(
    topology: PrecompactTopology, result: NullSequenceResult
) -> bool:
    """Recompute every certificate claim from scratch."""
    for tc in result.certificate.terms:
        if eval_seq(result.sequence, tc.index) != tc.term:
            return False
        if not any(tc.term):
            return False
        for char in topology.characters:
            if _char_pairing(tc.term, char).norm_cmp(tc.envelope) > 0:
                return False
    return True
