"""Command-line front end: parsing, configuration, report emission.

Verbs map one-to-one onto kernel operations.  Reports are self-contained:
a serialized witness carries its generators, candidate, and certificates,
so it can be re-verified without any state beyond the report itself.

Exit codes: 0 for decided or computed outcomes, 2 for inconclusive ones
(Undecided or CertifiedUpTo verdicts, Exhausted searches, NotFound, probes
consistent with membership), 1 for any error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass
from fractions import Fraction

from . import __version__
from .circle import CirclePoint
from .duality import (
    Character,
    DualSubgroup,
    FgAbelianGroup,
    IntMatrix,
    PrecompactTopology,
    closure_in_dual,
    group_from_presentation,
    smith_normal_form,
    von_neumann_radical,
)
from .torsion import (
    Budget,
    CFDenominators,
    Constant,
    Explicit,
    Factorial,
    Geometric,
    Interleave,
    IntVecSeq,
    NotFound,
    NullSequenceResult,
    NullTermCert,
    Policy,
    Subsequence,
    Verdict,
    null_sequence,
    rational_torsion_profile,
    s_membership,
    t_membership,
)
from .witness import (
    ConsistentWithMembership,
    EscapeTermCert,
    Exhausted,
    NotInGClosure,
    Witness,
    bds_experiment,
    check_witness,
    find_witness,
    g_membership_experiment,
)

__all__ = [
    "ParseError",
    "CliError",
    "parse_fraction",
    "parse_point",
    "parse_point_vector",
    "parse_char_list",
    "parse_int_matrix",
    "parse_group",
    "parse_seq",
    "Command",
    "Report",
    "report_to_json",
    "report_from_json",
    "witness_from_result",
    "run",
    "main",
    "SCHEMA_VERSION",
]

SCHEMA_VERSION = "1"

VERBS = (
    "dual",
    "closure",
    "radical",
    "snf",
    "tmem",
    "smem",
    "profile",
    "nullseq",
    "witness",
    "gmem",
    "bds",
)


class ParseError(ValueError):
    """Malformed literal; carries the offending position in the input."""

    def __init__(self, message: str, position: int = 0):
        super().__init__(f"at position {position}: {message}")
        self.position = position


class CliError(ValueError):
    """Bad flags or unusable configuration."""


# ---------------------------------------------------------------------------
# literal parsers


def _int_at(text: str, pos: int) -> int:
    piece = text[pos:].strip()
    try:
        return int(piece)
    except ValueError:
        raise ParseError(f"expected an integer, got {piece!r}", pos) from None


def parse_fraction(text: str, base: int = 0) -> Fraction:
    """Accepts 'p/q', a bare integer, or '2^-k'."""
    t = text.strip()
    if not t:
        raise ParseError("empty fraction literal", base)
    if t.startswith("2^-") or t.startswith("2^"):
        exp = t[2:]
        try:
            e = int(exp)
        except ValueError:
            raise ParseError(f"bad exponent {exp!r}", base + 2) from None
        return Fraction(2) ** e
    if "/" in t:
        num, _, den = t.partition("/")
        try:
            n, d = int(num), int(den)
        except ValueError:
            raise ParseError(f"bad fraction {t!r}", base) from None
        if d == 0:
            raise ParseError("zero denominator", base + len(num) + 1)
        return Fraction(n, d)
    try:
        return Fraction(int(t))
    except ValueError:
        raise ParseError(f"bad fraction {t!r}", base) from None


def parse_point(text: str, base: int = 0) -> CirclePoint:
    """'p/q', a bare integer, or 'quad:(a+b*sqrt(d))/c'."""
    t = text.strip()
    if not t:
        raise ParseError("empty point literal", base)
    if t.startswith("quad:"):
        body = t[5:]
        off = base + 5
        # (a+b*sqrt(d))/c with optional signs on a and b
        if not body.startswith("("):
            raise ParseError("expected '(' after quad:", off)
        close = body.find(")/")
        if close < 0:
            raise ParseError("expected ')/c' closing the quadratic literal", off)
        inner, tail = body[1:close], body[close + 2 :]
        try:
            c = int(tail)
        except ValueError:
            raise ParseError(f"bad denominator {tail!r}", off + close + 2) from None
        if c == 0:
            raise ParseError("zero denominator", off + close + 2)
        marker = "*sqrt("
        star = inner.find(marker)
        if star < 0 or not inner.endswith(")"):
            raise ParseError("expected 'a+b*sqrt(d)'", off + 1)
        dpos = off + 1 + star + len(marker)
        d_text = inner[star + len(marker) : -1]
        try:
            d = int(d_text)
        except ValueError:
            raise ParseError(f"bad radicand {d_text!r}", dpos) from None
        if d < 2:
            raise ParseError(f"radicand {d} must be >= 2", dpos)
        root = 1
        while root * root < d:
            root += 1
        if root * root == d:
            raise ParseError(f"radicand {d} is a perfect square", dpos)
        head = inner[:star]
        # split a and b on the sign separating them (skip a leading sign)
        cut = None
        for i in range(1, len(head)):
            if head[i] in "+-":
                cut = i
        if cut is None:
            raise ParseError("expected 'a+b' before *sqrt", off + 1)
        try:
            a = int(head[:cut])
            b = int(head[cut:].lstrip("+") or "0") if head[cut] == "+" else int(head[cut:])
        except ValueError:
            raise ParseError(f"bad coefficients {head!r}", off + 1) from None
        return CirclePoint.quadratic(a, b, c, d)
    frac = parse_fraction(t, base)
    return CirclePoint.rational(frac.numerator, frac.denominator)


def parse_point_vector(text: str, base: int = 0) -> tuple[CirclePoint, ...]:
    """Comma-separated point literals (quadratic literals contain no commas)."""
    t = text.strip()
    if not t:
        raise ParseError("empty point vector", base)
    points = []
    offset = 0
    for piece in t.split(","):
        points.append(parse_point(piece, base + offset))
        offset += len(piece) + 1
    return tuple(points)


def parse_char_list(text: str, base: int = 0) -> tuple[tuple[CirclePoint, ...], ...]:
    """Semicolon-separated character vectors; empty text means no characters."""
    t = text.strip()
    if not t:
        return ()
    chars = []
    offset = 0
    for piece in t.split(";"):
        chars.append(parse_point_vector(piece, base + offset))
        offset += len(piece) + 1
    return tuple(chars)


def parse_int_matrix(text: str, base: int = 0) -> IntMatrix:
    """Rows separated by ';', entries by ','; e.g. '2,4;6,8'."""
    t = text.strip()
    if not t:
        raise ParseError("empty matrix literal", base)
    rows = []
    offset = 0
    width = None
    for piece in t.split(";"):
        entries = []
        inner = 0
        for cell in piece.split(","):
            try:
                entries.append(int(cell.strip()))
            except ValueError:
                raise ParseError(
                    f"bad matrix entry {cell.strip()!r}", base + offset + inner
                ) from None
            inner += len(cell) + 1
        if width is None:
            width = len(entries)
        elif len(entries) != width:
            raise ParseError("ragged matrix rows", base + offset)
        rows.append(entries)
        offset += len(piece) + 1
    return IntMatrix.from_rows(rows)


def parse_group(text: str, base: int = 0) -> FgAbelianGroup:
    """'Z^r + Z/d1 + Z/d2 + ...' with d1 | d2 | ... (or '0' for trivial)."""
    t = text.replace(" ", "")
    if not t:
        raise ParseError("empty group literal", base)
    if t == "0":
        return FgAbelianGroup(0, ())
    free = 0
    factors = []
    offset = 0
    for piece in t.split("+"):
        if piece == "Z":
            free += 1
        elif piece.startswith("Z^"):
            try:
                r = int(piece[2:])
            except ValueError:
                raise ParseError(f"bad free rank {piece[2:]!r}", base + offset + 2) from None
            if r < 1:
                raise ParseError("free rank must be >= 1", base + offset + 2)
            free += r
        elif piece.startswith("Z/"):
            try:
                d = int(piece[2:])
            except ValueError:
                raise ParseError(f"bad torsion order {piece[2:]!r}", base + offset + 2) from None
            factors.append(d)
        else:
            raise ParseError(f"unknown group term {piece!r}", base + offset)
        offset += len(piece) + 1
    try:
        return FgAbelianGroup(free, tuple(factors))
    except ValueError as exc:
        raise ParseError(str(exc), base) from None


def _split_top(text: str, sep: str) -> list[str]:
    parts = []
    depth = 0
    cur = []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def _parse_int_tuple(text: str, base: int) -> tuple[int, ...]:
    out = []
    offset = 0
    for piece in text.split(","):
        try:
            out.append(int(piece.strip()))
        except ValueError:
            raise ParseError(f"bad integer {piece.strip()!r}", base + offset) from None
        offset += len(piece) + 1
    return tuple(out)


def parse_seq(text: str, base: int = 0) -> IntVecSeq:
    """Sequence mini-language:

    geom:B [*(p1,...)], fact [*(p1,...)], cfden:<point>, const:v1,...,
    list:v11,v12;v21,v22;..., sub(a,b):<seq>, interleave(<seq>@b;...).
    """
    t = text.strip()
    if not t:
        raise ParseError("empty sequence literal", base)
    try:
        if t.startswith("geom:"):
            body = t[5:]
            if "*(" in body:
                head, _, pat = body.partition("*(")
                if not pat.endswith(")"):
                    raise ParseError("unclosed pattern", base + len(t) - 1)
                return Geometric(
                    _int_at(head, 0), _parse_int_tuple(pat[:-1], base + 5 + len(head) + 2)
                )
            return Geometric(_int_at(body, 0))
        if t == "fact":
            return Factorial()
        if t.startswith("fact*("):
            pat = t[6:]
            if not pat.endswith(")"):
                raise ParseError("unclosed pattern", base + len(t) - 1)
            return Factorial(_parse_int_tuple(pat[:-1], base + 6))
        if t.startswith("cfden:"):
            return CFDenominators(parse_point(t[6:], base + 6))
        if t.startswith("const:"):
            return Constant(_parse_int_tuple(t[6:], base + 6))
        if t.startswith("list:"):
            body = t[5:]
            terms = []
            offset = base + 5
            for piece in body.split(";"):
                terms.append(_parse_int_tuple(piece, offset))
                offset += len(piece) + 1
            return Explicit(tuple(terms))
        if t.startswith("sub("):
            close = t.find("):")
            if close < 0:
                raise ParseError("expected '(a,b):' after sub", base + 4)
            params = _parse_int_tuple(t[4:close], base + 4)
            if len(params) != 2:
                raise ParseError("sub takes exactly (stride, offset)", base + 4)
            return Subsequence(parse_seq(t[close + 2 :], base + close + 2), *params)
        if t.startswith("interleave(") and t.endswith(")"):
            body = t[11:-1]
            children = []
            blocks = []
            offset = base + 11
            for piece in _split_top(body, ";"):
                depth = 0
                at = None
                for i, ch in enumerate(piece):
                    if ch == "(":
                        depth += 1
                    elif ch == ")":
                        depth -= 1
                    elif ch == "@" and depth == 0:
                        at = i
                if at is None:
                    raise ParseError("expected '<seq>@<block>'", offset)
                children.append(parse_seq(piece[:at], offset))
                try:
                    blocks.append(int(piece[at + 1 :]))
                except ValueError:
                    raise ParseError(
                        f"bad block size {piece[at + 1:]!r}", offset + at + 1
                    ) from None
                offset += len(piece) + 1
            return Interleave(tuple(children), tuple(blocks))
    except (ValueError, TypeError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(str(exc), base) from None
    raise ParseError(f"unknown sequence form {t!r}", base)


def _parse_ambient_character(ambient: FgAbelianGroup, text: str, base: int) -> Character:
    pieces = text.split(",")
    need = ambient.free_rank + len(ambient.invariant_factors)
    if len(pieces) != need:
        raise ParseError(
            f"character needs {need} coordinates for {ambient}, got {len(pieces)}", base
        )
    free = []
    offset = 0
    for piece in pieces[: ambient.free_rank]:
        free.append(parse_point(piece, base + offset))
        offset += len(piece) + 1
    torsion = []
    for piece in pieces[ambient.free_rank :]:
        try:
            torsion.append(int(piece.strip()))
        except ValueError:
            raise ParseError(f"bad torsion residue {piece.strip()!r}", base + offset) from None
        offset += len(piece) + 1
    return Character.make(ambient, tuple(free), tuple(torsion))


# ---------------------------------------------------------------------------
# serialization helpers (domain integers as decimal strings)


def _s(x: int) -> str:
    return str(int(x))


def _fr(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _matrix_payload(m: IntMatrix) -> list[list[str]]:
    return [[_s(x) for x in row] for row in m.entries]


def _verdict_payload(v: Verdict) -> dict:
    return {
        "status": v.status,
        "member": v.member,
        "reason": v.reason,
        "horizon": None if v.horizon is None else _s(v.horizon),
        "worst_bound": None if v.worst_bound is None else _fr(v.worst_bound),
        "trace": [[_s(n), _fr(b)] for n, b in v.trace],
        "detail": {k: str(val) for k, val in v.detail},
    }


def _null_cert_payload(cert: tuple[NullTermCert, ...]) -> list[dict]:
    return [
        {
            "index": _s(tc.index),
            "term": [_s(x) for x in tc.term],
            "norms": [_fr(b) for b in tc.norms],
            "envelope": _fr(tc.envelope),
        }
        for tc in cert
    ]


def _escape_cert_payload(cert: tuple[EscapeTermCert, ...]) -> list[dict]:
    return [
        {
            "index": _s(tc.index),
            "term": [_s(x) for x in tc.term],
            "norm_lower": _fr(tc.norm_lower),
            "threshold": _fr(tc.threshold),
        }
        for tc in cert
    ]


def _witness_payload(
    w: Witness, chars: tuple[tuple[CirclePoint, ...], ...], chi
) -> dict:
    return {
        "generators": [",".join(str(p) for p in c) for c in chars],
        "chi": ",".join(str(p) for p in chi),
        "delta": _fr(w.escape_threshold),
        "strategy": w.strategy,
        "sequence": w.sequence.describe(),
        "null_certificate": _null_cert_payload(w.null_certificate),
        "escape_certificate": _escape_cert_payload(w.escape_certificate),
    }


def witness_from_result(payload: dict) -> tuple[Witness, PrecompactTopology, tuple[CirclePoint, ...]]:
    """Rebuild a witness and its context from a self-contained report payload."""
    chars = tuple(parse_point_vector(t) for t in payload["generators"])
    chi = parse_point_vector(payload["chi"])
    k = len(chi)
    topology = PrecompactTopology.on_free(k, chars)
    nulls = tuple(
        NullTermCert(
            int(tc["index"]),
            tuple(int(x) for x in tc["term"]),
            tuple(parse_fraction(b) for b in tc["norms"]),
            parse_fraction(tc["envelope"]),
        )
        for tc in payload["null_certificate"]
    )
    escapes = tuple(
        EscapeTermCert(
            int(tc["index"]),
            tuple(int(x) for x in tc["term"]),
            parse_fraction(tc["norm_lower"]),
            parse_fraction(tc["threshold"]),
        )
        for tc in payload["escape_certificate"]
    )
    witness = Witness(
        parse_seq(payload["sequence"]),
        parse_fraction(payload["delta"]),
        nulls,
        escapes,
        payload["strategy"],
    )
    return witness, topology, chi


# ---------------------------------------------------------------------------
# command and report


@dataclass(frozen=True)
class Command:
    verb: str
    arguments: dict
    policy: dict
    output_path: str | None = None
    fmt: str = "human"


@dataclass(frozen=True)
class Report:
    schema_version: str
    kernel_version: str
    verb: str
    arguments: dict
    config: dict
    result: dict
    timing_seconds: float
    note: str


def report_to_json(report: Report) -> str:
    return json.dumps(
        {
            "schema_version": report.schema_version,
            "kernel_version": report.kernel_version,
            "verb": report.verb,
            "arguments": report.arguments,
            "config": report.config,
            "result": report.result,
            "timing_seconds": report.timing_seconds,
            "note": report.note,
        },
        sort_keys=True,
        indent=2,
    )


def report_from_json(text: str) -> Report:
    data = json.loads(text)
    return Report(
        data["schema_version"],
        data["kernel_version"],
        data["verb"],
        data["arguments"],
        data["config"],
        data["result"],
        data["timing_seconds"],
        data["note"],
    )


_NOTE = (
    "Exact verdicts are decided with finitely checkable reasons; "
    "CertifiedUpTo and Exhausted outcomes are bounded evidence, not decisions."
)


def _resolve_config(policy: dict) -> tuple[Policy, Budget, dict]:
    """Flags > GCLOSE_* environment variables > defaults."""

    def pick(flag_key, env_key, parse, default):
        if policy.get(flag_key) is not None:
            return parse(policy[flag_key]), "flag"
        env = os.environ.get(env_key)
        if env is not None:
            try:
                return parse(env), "env"
            except (ValueError, ParseError) as exc:
                raise CliError(f"bad {env_key}: {exc}") from None
        return default, "default"

    horizon, hsrc = pick("horizon", "GCLOSE_HORIZON", int, 512)
    tolerance, tsrc = pick(
        "tolerance", "GCLOSE_TOLERANCE", parse_fraction, Fraction(1, 2**20)
    )

    def parse_budget(text):
        if isinstance(text, Budget):
            return text
        parts = str(text).split(",")
        if len(parts) != 2:
            raise CliError("budget must be 'max_terms,max_candidates'")
        return Budget(int(parts[0]), int(parts[1]))

    budget, bsrc = pick("budget", "GCLOSE_BUDGET", parse_budget, Budget())
    try:
        pol = Policy(horizon=int(horizon), tolerance=Fraction(tolerance))
    except ValueError as exc:
        raise CliError(str(exc)) from None
    echo = {
        "horizon": _s(pol.horizon),
        "tolerance": _fr(pol.tolerance),
        "budget": f"{budget.max_terms},{budget.max_candidates}",
        "sources": {"horizon": hsrc, "tolerance": tsrc, "budget": bsrc},
    }
    return pol, budget, echo


# ---------------------------------------------------------------------------
# verb handlers: each returns (result_payload, exit_code)


def _run_dual(args, policy, budget):
    generators = int(args["generators"])
    relations = parse_int_matrix(args["relations"]) if args.get("relations") else IntMatrix.from_rows([], cols=generators)
    group = group_from_presentation(relations, generators)
    return {
        "generators": _s(generators),
        "relations": _matrix_payload(relations),
        "group": str(group),
        "free_rank": _s(group.free_rank),
        "invariant_factors": [_s(d) for d in group.invariant_factors],
    }, 0


def _run_closure(args, policy, budget):
    ambient = parse_group(args["group"])
    gens = []
    text = args.get("gens", "") or ""
    offset = 0
    for piece in text.split(";") if text.strip() else []:
        gens.append(_parse_ambient_character(ambient, piece, offset))
        offset += len(piece) + 1
    subgroup = DualSubgroup(ambient, tuple(gens))
    closure = closure_in_dual(subgroup)
    closed = closure.is_finitely_generated and closure.as_dual_subgroup() == subgroup
    return {
        "group": str(ambient),
        "subgroup_generators": [str(g) for g in subgroup.generators],
        "finite_generators": [str(g) for g in closure.finite_generators],
        "torus_directions": [[_s(x) for x in w] for w in closure.torus_directions],
        "finitely_generated": closure.is_finitely_generated,
        "closed": closed,
        "kernel_generators": [
            [_s(x) for x in g] for g in closure.kernel.element_generators()
        ],
    }, 0


def _run_radical(args, policy, budget):
    chars = parse_char_list(args.get("chars", "") or "")
    k = int(args["k"]) if args.get("k") else (len(chars[0]) if chars else None)
    if k is None:
        raise CliError("--k is required when no characters are given")
    topology = PrecompactTopology.on_free(k, chars)
    radical = von_neumann_radical(topology)
    return {
        "k": _s(k),
        "characters": [",".join(str(p) for p in c) for c in chars],
        "lattice_generators": [[_s(x) for x in g] for g in radical.element_generators()],
        "is_trivial": radical.is_trivial(),
    }, 0


def _run_snf(args, policy, budget):
    m = parse_int_matrix(args["matrix"])
    u, d, v = smith_normal_form(m)
    return {
        "matrix": _matrix_payload(m),
        "U": _matrix_payload(u),
        "D": _matrix_payload(d),
        "V": _matrix_payload(v),
        "diagonal": [_s(x) for x in d.diagonal()],
        "det_U": _s(u.determinant()),
        "det_V": _s(v.determinant()),
    }, 0


def _membership_result(seq, points, verdict, policy):
    code = 0 if verdict.is_exact else 2
    return {
        "sequence": seq.describe(),
        "point": ",".join(str(p) for p in points),
        "policy": {"horizon": _s(policy.horizon), "tolerance": _fr(policy.tolerance)},
        "verdict": _verdict_payload(verdict),
    }, code


def _run_tmem(args, policy, budget):
    seq = parse_seq(args["seq"])
    point = parse_point(args["point"])
    verdict = t_membership(seq, point, policy)
    return _membership_result(seq, (point,), verdict, policy)


def _run_smem(args, policy, budget):
    seq = parse_seq(args["seq"])
    points = parse_point_vector(args["point"])
    verdict = s_membership(seq, points, policy)
    return _membership_result(seq, points, verdict, policy)


def _run_profile(args, policy, budget):
    seq = parse_seq(args["seq"])
    max_den = int(args["max_den"])
    profile = rational_torsion_profile(seq, max_den, policy)
    return {
        "sequence": seq.describe(),
        "max_den": _s(max_den),
        "entries": [
            {"q": _s(q), **_verdict_payload(v)} for q, v in profile.entries
        ],
        "admitted": [_s(q) for q in profile.admitted],
        "flagged": [_s(q) for q in profile.flagged],
    }, (2 if profile.flagged else 0)


def _run_nullseq(args, policy, budget):
    chars = parse_char_list(args.get("chars", "") or "")
    k = int(args["k"]) if args.get("k") else (len(chars[0]) if chars else None)
    if k is None:
        raise CliError("--k is required when no characters are given")
    topology = PrecompactTopology.on_free(k, chars)
    outcome = null_sequence(topology, budget)
    base = {
        "k": _s(k),
        "characters": [",".join(str(p) for p in c) for c in chars],
    }
    if isinstance(outcome, NotFound):
        base.update({"found": False, "reason": outcome.reason})
        return base, 2
    base.update(
        {
            "found": True,
            "sequence": outcome.sequence.describe(),
            "strategy": outcome.certificate.strategy,
            "certificate": _null_cert_payload(outcome.certificate.terms),
        }
    )
    return base, 0


def _run_witness(args, policy, budget):
    chars = parse_char_list(args.get("gens", "") or "")
    chi = parse_point_vector(args["chi"])
    k = len(chi)
    topology = PrecompactTopology.on_free(k, chars)
    delta = parse_fraction(args["delta"])
    outcome = find_witness(topology, chi, delta, budget)
    if isinstance(outcome, Exhausted):
        return {
            "found": False,
            "generators": [",".join(str(p) for p in c) for c in chars],
            "chi": ",".join(str(p) for p in chi),
            "delta": _fr(delta),
            "reason": outcome.reason,
            "candidates_tested": _s(outcome.candidates_tested),
        }, 2
    payload = _witness_payload(outcome, chars, chi)
    payload["found"] = True
    return payload, 0


def _run_gmem(args, policy, budget):
    chars = parse_char_list(args.get("gens", "") or "")
    chi = parse_point_vector(args["chi"])
    topology = PrecompactTopology.on_free(len(chi), chars)
    outcome = g_membership_experiment(topology, chi, budget)
    base = {
        "generators": [",".join(str(p) for p in c) for c in chars],
        "chi": ",".join(str(p) for p in chi),
    }
    if isinstance(outcome, NotInGClosure):
        base.update(
            {
                "outcome": "not_in_g_closure",
                "delta": _fr(outcome.delta),
                "witness": _witness_payload(outcome.witness, chars, chi),
            }
        )
        return base, 0
    base.update(
        {
            "outcome": "consistent_with_membership",
            "attempts": [
                {
                    "delta": _fr(d),
                    "reason": e.reason,
                    "candidates_tested": _s(e.candidates_tested),
                }
                for d, e in outcome.attempts
            ],
            "note": outcome.note,
        }
    )
    return base, 2


def _run_bds(args, policy, budget):
    alpha = parse_point(args["alpha"])
    probes = [parse_point(p) for p in (args["probes"].split(";") if args["probes"].strip() else [])]
    bound = int(args.get("multiple_bound") or 10)
    report = bds_experiment(alpha, probes, budget, bound)
    probe_rows = []
    all_decided = True
    for p, res in report.probes:
        if isinstance(res, NotInGClosure):
            probe_rows.append(
                {
                    "probe": str(p),
                    "outcome": "not_in_g_closure",
                    "delta": _fr(res.delta),
                    "witness": _witness_payload(res.witness, ((alpha,),), (p,)),
                }
            )
        else:
            all_decided = False
            probe_rows.append(
                {
                    "probe": str(p),
                    "outcome": "consistent_with_membership",
                    "attempts": [
                        {
                            "delta": _fr(d),
                            "reason": e.reason,
                            "candidates_tested": _s(e.candidates_tested),
                        }
                        for d, e in res.attempts
                    ],
                }
            )
    code = 0 if (report.inclusion_verified and all_decided) else 2
    return {
        "alpha": str(alpha),
        "multiple_bound": _s(bound),
        "multiples": [
            {"j": _s(j), "status": v.status, "member": v.member}
            for j, v in report.multiples
        ],
        "inclusion_verified": report.inclusion_verified,
        "probes": probe_rows,
        "note": report.note,
    }, code


_HANDLERS = {
    "dual": _run_dual,
    "closure": _run_closure,
    "radical": _run_radical,
    "snf": _run_snf,
    "tmem": _run_tmem,
    "smem": _run_smem,
    "profile": _run_profile,
    "nullseq": _run_nullseq,
    "witness": _run_witness,
    "gmem": _run_gmem,
    "bds": _run_bds,
}


# ---------------------------------------------------------------------------
# output formatting


def _human_verdict(v: dict, out: list[str]):
    status = v["status"]
    if status == "exact":
        head = "Exact In" if v["member"] else "Exact Out"
        out.append(f"{head}: {v['reason']}")
    elif status == "certified_up_to":
        out.append(f"CERTIFIED UP TO HORIZON {v['horizon']} (no claim beyond)")
        out.append(f"  {v['reason']}")
        out.append(f"  worst bound observed: {v['worst_bound']}")
    else:
        out.append(f"Undecided: {v['reason']}")


def _format_human(report: Report) -> str:
    out = [f"gclose {report.verb} (kernel {report.kernel_version})"]
    r = report.result
    verb = report.verb
    if verb in ("tmem", "smem"):
        out.append(f"sequence: {r['sequence']}  point: {r['point']}")
        _human_verdict(r["verdict"], out)
    elif verb == "profile":
        out.append(f"sequence: {r['sequence']}  denominators up to {r['max_den']}")
        out.append(f"admitted: {{{', '.join(r['admitted'])}}}")
        if r["flagged"]:
            out.append(f"flagged (not exact): {{{', '.join(r['flagged'])}}}")
        for e in r["entries"]:
            mark = (
                "in"
                if e["member"]
                else ("out" if e["status"] == "exact" else e["status"].upper())
            )
            out.append(f"  1/{e['q']}: {mark}")
    elif verb == "snf":
        out.append(f"D diagonal: ({', '.join(r['diagonal'])})")
        for name in ("U", "D", "V"):
            rows = ";".join(",".join(row) for row in r[name])
            out.append(f"{name} = {rows}")
    elif verb == "dual":
        out.append(f"presented group: {r['group']}")
    elif verb == "radical":
        gens = r["lattice_generators"]
        out.append(
            "radical: trivial"
            if r["is_trivial"]
            else "radical generators: " + "; ".join(",".join(g) for g in gens)
        )
    elif verb == "closure":
        out.append(f"ambient: {r['group']}")
        out.append(f"closed: {r['closed']}")
        if r["finite_generators"]:
            out.append("closure generators: " + "; ".join(r["finite_generators"]))
        for w in r["torus_directions"]:
            out.append(f"full circle factor along ({', '.join(w)})")
    elif verb == "nullseq":
        if r["found"]:
            out.append(f"null sequence: {r['sequence']}  (strategy {r['strategy']})")
            for tc in r["certificate"][:8]:
                out.append(
                    f"  n={tc['index']}: a_n=({', '.join(tc['term'])}), "
                    f"norms <= {tc['envelope']}"
                )
            if len(r["certificate"]) > 8:
                out.append(f"  ... {len(r['certificate'])} certified terms")
        else:
            out.append(f"NOT FOUND: {r['reason']} (no nonexistence claim)")
    elif verb == "witness":
        if r["found"]:
            out.append(
                f"witness: {r['sequence']}  delta={r['delta']}  strategy={r['strategy']}"
            )
            for tc in r["escape_certificate"][:6]:
                out.append(
                    f"  n={tc['index']}: a_n=({', '.join(tc['term'])}), "
                    f"escape norm >= {tc['threshold']}"
                )
            if len(r["escape_certificate"]) > 6:
                out.append(f"  ... {len(r['escape_certificate'])} certified terms")
        else:
            out.append(f"EXHAUSTED: {r['reason']} (asserts nothing)")
    elif verb == "gmem":
        if r["outcome"] == "not_in_g_closure":
            out.append(f"NOT in g-closure (witness at delta={r['delta']})")
            out.append(f"witness sequence: {r['witness']['sequence']}")
        else:
            out.append("consistent with membership (no witness at any threshold)")
            out.append(r["note"])
    elif verb == "bds":
        out.append(f"alpha: {r['alpha']}")
        out.append(
            f"multiples |j| <= {r['multiple_bound']} all annihilated: "
            f"{r['inclusion_verified']}"
        )
        for row in r["probes"]:
            if row["outcome"] == "not_in_g_closure":
                out.append(
                    f"  probe {row['probe']}: NOT in g-closure "
                    f"(delta={row['delta']}, {row['witness']['sequence']})"
                )
            else:
                out.append(f"  probe {row['probe']}: consistent with membership")
        out.append(r["note"])
    out.append(f"config: {json.dumps(report.config, sort_keys=True)}")
    out.append(f"[{report.timing_seconds:.3f}s] {report.note}")
    return "\n".join(out)


def _format_csv(report: Report) -> str:
    r = report.result
    if report.verb == "profile":
        lines = ["q,status,member,reason"]
        for e in r["entries"]:
            member = "" if e["member"] is None else str(e["member"]).lower()
            reason = '"' + e["reason"].replace('"', '""') + '"'
            lines.append(f"{e['q']},{e['status']},{member},{reason}")
        return "\n".join(lines)
    if report.verb == "bds":
        lines = ["kind,label,status,detail"]
        for row in r["multiples"]:
            member = "" if row["member"] is None else str(row["member"]).lower()
            lines.append(f"multiple,{row['j']},{row['status']},{member}")
        for row in r["probes"]:
            detail = row.get("delta", "")
            lines.append(f"probe,{row['probe']},{row['outcome']},{detail}")
        return "\n".join(lines)
    raise CliError(f"csv format is not available for verb {report.verb!r}")


# ---------------------------------------------------------------------------
# driver


def run(command: Command) -> tuple[Report, int]:
    """Dispatch a parsed command; returns the report and the exit code."""
    if command.verb not in _HANDLERS:
        raise CliError(f"unknown verb {command.verb!r}")
    policy, budget, echo = _resolve_config(command.policy)
    started = time.perf_counter()
    result, code = _HANDLERS[command.verb](command.arguments, policy, budget)
    elapsed = time.perf_counter() - started
    report = Report(
        SCHEMA_VERSION,
        __version__,
        command.verb,
        dict(command.arguments),
        echo,
        result,
        round(elapsed, 6),
        _NOTE,
    )
    return report, code


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(message)


def _build_parser() -> _ArgumentParser:
    parser = _ArgumentParser(prog="gclose", description=__doc__)
    sub = parser.add_subparsers(dest="verb", required=True)

    def common(p, budgeted=False):
        p.add_argument("--horizon", help="scan horizon (default 512)")
        p.add_argument("--tolerance", help="scan tolerance, e.g. 1/1048576 or 2^-20")
        if budgeted:
            p.add_argument("--budget", help="search budget 'max_terms,max_candidates'")
        p.add_argument("--format", choices=("json", "csv", "human"), default="human")
        p.add_argument("--output", help="write the report to this path")

    p = sub.add_parser("dual", help="structure of a finitely presented abelian group")
    p.add_argument("--relations", default="", help="relation rows, e.g. '2,0;0,3'")
    p.add_argument("--generators", required=True, help="number of generators")
    common(p)

    p = sub.add_parser("closure", help="closure of a character subgroup in the dual")
    p.add_argument("--group", required=True, help="ambient group, e.g. 'Z^2+Z/4'")
    p.add_argument("--gens", default="", help="characters 'coords;coords;...'")
    common(p)

    p = sub.add_parser("radical", help="von Neumann radical of a character topology")
    p.add_argument("--k", help="ambient rank (required if no characters)")
    p.add_argument("--chars", default="", help="character vectors 'pts;pts;...'")
    common(p)

    p = sub.add_parser("snf", help="Smith normal form with transforms")
    p.add_argument("--matrix", required=True, help="integer matrix 'a,b;c,d'")
    common(p)

    p = sub.add_parser("tmem", help="topological torsion membership on the circle")
    p.add_argument("--seq", required=True, help="sequence literal, e.g. geom:2")
    p.add_argument("--point", required=True, help="circle point, e.g. 1/3")
    common(p)

    p = sub.add_parser("smem", help="membership for a vector of circle points")
    p.add_argument("--seq", required=True)
    p.add_argument("--point", required=True, help="comma-separated points")
    common(p)

    p = sub.add_parser("profile", help="rational torsion profile of a sequence")
    p.add_argument("--seq", required=True)
    p.add_argument("--max-den", dest="max_den", required=True)
    common(p)

    p = sub.add_parser("nullseq", help="certified null sequence for a topology")
    p.add_argument("--k", help="ambient rank (required if no characters)")
    p.add_argument("--chars", default="")
    common(p, budgeted=True)

    p = sub.add_parser("witness", help="escape witness search")
    p.add_argument("--gens", default="", help="generators of H")
    p.add_argument("--chi", required=True, help="candidate character")
    p.add_argument("--delta", required=True, help="escape threshold in (0, 1/2]")
    common(p, budgeted=True)

    p = sub.add_parser("gmem", help="g-closure membership experiment")
    p.add_argument("--gens", default="")
    p.add_argument("--chi", required=True)
    common(p, budgeted=True)

    p = sub.add_parser("bds", help="countable-subgroup closedness experiment")
    p.add_argument("--alpha", required=True, help="quadratic irrational point")
    p.add_argument("--probes", required=True, help="probe points 'p;q;...'")
    p.add_argument("--multiple-bound", dest="multiple_bound", default="10")
    common(p, budgeted=True)

    return parser


_ARG_KEYS = {
    "dual": ("relations", "generators"),
    "closure": ("group", "gens"),
    "radical": ("k", "chars"),
    "snf": ("matrix",),
    "tmem": ("seq", "point"),
    "smem": ("seq", "point"),
    "profile": ("seq", "max_den"),
    "nullseq": ("k", "chars"),
    "witness": ("gens", "chi", "delta"),
    "gmem": ("gens", "chi"),
    "bds": ("alpha", "probes", "multiple_bound"),
}


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        ns = _build_parser().parse_args(argv)
        arguments = {
            key: getattr(ns, key)
            for key in _ARG_KEYS[ns.verb]
            if getattr(ns, key, None) is not None
        }
        policy = {
            "horizon": getattr(ns, "horizon", None),
            "tolerance": getattr(ns, "tolerance", None),
            "budget": getattr(ns, "budget", None),
        }
        command = Command(ns.verb, arguments, policy, ns.output, ns.format)
        report, code = run(command)
        if command.fmt == "json":
            text = report_to_json(report)
        elif command.fmt == "csv":
            text = _format_csv(report)
        else:
            text = _format_human(report)
        if command.output_path:
            with open(command.output_path, "w", encoding="utf-8") as fh:
                fh.write(text + "\n")
        else:
            print(text)
        return code
    except (ParseError, CliError) as exc:
        print(f"gclose: error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"gclose: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
