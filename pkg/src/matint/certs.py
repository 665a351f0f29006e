"""Proof certificates: data model, text format, and the independent checker.

A certificate is a replayable record: an ordered list of proof steps, each
removing a nonempty set of rules from the current system after verifying a
matrix-interpretation claim with exact arithmetic.  The checker shares no
state with the search; it only needs the certificate and the system.

Certificate text format (one step per block):

    matint-certificate 1
    fingerprint: <sha256 of the canonical SRS text>
    terminal: empty                # or: residual
    # residual certificates list the surviving rules:
    # residual-rule: SYM SYM -> SYM
    justification: <free text, one line, optional>

    step
    mode: relative                 # or: top-relative
    reversed: false
    flavor: natural                # or: arctic
    dim: 2
    remove: 0 3                    # strict rule indices in the step's input system
    symbol a
    matrix 1 1 / 0 0               # rows, row-major, '/' between rows
    vector 0 1                     # -inf denotes arctic minus infinity
    end

Parsing and serialization round-trip bit-exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import srs as srs_mod
from .interpret import (
    ARCTIC,
    NATURAL,
    RELATIVE,
    TOP_RELATIVE,
    ArcticAffine,
    Interpretation,
    NatAffine,
    StepClaim,
    verify_step,
)
from .srs import Rule, Srs, remove_rules, reverse_srs, top_eligible

FORMAT_HEADER = "matint-certificate 1"


class CertificateError(Exception):
    pass


@dataclass(frozen=True)
class ProofStep:
    """One rule-removal step.  Indices are relative to the step's input
    system; reversal preserves rule order, so they address the same rules
    in the reversed and unreversed systems."""

    removed: tuple[int, ...]
    mode: str
    reversed: bool
    interpretation: Interpretation
    forced_top: bool = False

    def claim(self, system: Srs) -> StepClaim:
        return StepClaim(system, frozenset(self.removed), self.mode,
                         self.reversed, self.interpretation)


@dataclass(frozen=True)
class Certificate:
    fingerprint: str
    steps: tuple[ProofStep, ...]
    terminal: str = "empty"        # "empty" | "residual"
    residual_rules: tuple[Rule, ...] = ()
    justification: str = ""
    provenance: dict = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class CertVerdict:
    ok: bool
    step: int | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def verify_certificate(cert: Certificate, system: Srs,
                       allow_forced_top: bool = False) -> CertVerdict:
    """Replay a certificate against a system, independently of any search.

    Checks, per step: the interpretation claim (exact arithmetic), and for
    top-relative steps that the removed rules are top-eligible in the
    step's (possibly reversed) input system; then removes the rules.  The
    terminal state must match the certificate's justification.
    """
    if cert.fingerprint != srs_mod.fingerprint(system):
        return CertVerdict(False, None, "system fingerprint mismatch")
    current = system
    for i, step in enumerate(cert.steps):
        if not step.removed:
            return CertVerdict(False, i, "empty removal set")
        if not all(0 <= r < len(current.rules) for r in step.removed):
            return CertVerdict(False, i, "removal index out of range")
        if step.mode == TOP_RELATIVE and not step.forced_top:
            eligible = top_eligible(reverse_srs(current) if step.reversed else current)
            if not set(step.removed) <= eligible:
                return CertVerdict(False, i, "removed rules are not top-eligible")
        elif step.mode == TOP_RELATIVE and not allow_forced_top:
            return CertVerdict(False, i, "forced top-eligibility not accepted")
        verdict = verify_step(step.claim(current))
        if not verdict:
            return CertVerdict(False, i, verdict.reason)
        current = remove_rules(current, step.removed)
    if cert.terminal == "empty":
        if current.rules:
            return CertVerdict(False, None,
                               f"{len(current.rules)} rules remain but terminal is 'empty'")
    elif cert.terminal == "residual":
        if current.rules != cert.residual_rules:
            return CertVerdict(False, None, "residual rules do not match")
    else:
        return CertVerdict(False, None, f"unknown terminal {cert.terminal!r}")
    return CertVerdict(True)


# ---------------------------------------------------------------------------
# Text format


def _fmt_entry(x) -> str:
    return "-inf" if x is None else str(x)


def _fmt_affine(a) -> tuple[str, str]:
    rows = " / ".join(" ".join(_fmt_entry(x) for x in row) for row in a.m)
    vec = " ".join(_fmt_entry(x) for x in a.v)
    return rows, vec


def serialize_certificate(cert: Certificate) -> str:
    lines = [FORMAT_HEADER, f"fingerprint: {cert.fingerprint}",
             f"terminal: {cert.terminal}"]
    for rule in cert.residual_rules:
        lines.append(f"residual-rule: {rule}")
    if cert.justification:
        lines.append(f"justification: {cert.justification}")
    for key in sorted(cert.provenance):
        lines.append(f"provenance: {key}={cert.provenance[key]}")
    for step in cert.steps:
        lines.append("")
        lines.append("step")
        lines.append(f"mode: {step.mode}")
        lines.append(f"reversed: {'true' if step.reversed else 'false'}")
        if step.forced_top:
            lines.append("forced-top: true")
        lines.append(f"flavor: {step.interpretation.flavor}")
        lines.append(f"dim: {step.interpretation.dim}")
        lines.append("remove: " + " ".join(str(i) for i in step.removed))
        for sym in sorted(step.interpretation.maps):
            rows, vec = _fmt_affine(step.interpretation.maps[sym])
            lines.append(f"symbol {sym}")
            lines.append(f"matrix {rows}")
            lines.append(f"vector {vec}")
        lines.append("end")
    return "\n".join(lines) + "\n"


def _parse_entry(tok: str, arctic: bool):
    if tok == "-inf":
        if not arctic:
            raise CertificateError("-inf in a natural interpretation")
        return None
    try:
        return int(tok)
    except ValueError:
        raise CertificateError(f"bad coefficient {tok!r}") from None


def parse_certificate(text: str) -> Certificate:
    lines = text.splitlines()
    if not lines or lines[0].strip() != FORMAT_HEADER:
        raise CertificateError("missing certificate header")
    fingerprint = ""
    terminal = "empty"
    residual: list[Rule] = []
    justification = ""
    provenance: dict = {}
    steps: list[ProofStep] = []

    i = 1
    n = len(lines)

    def kv(line: str) -> tuple[str, str]:
        if ":" not in line:
            raise CertificateError(f"expected 'key: value', got {line!r}")
        k, v = line.split(":", 1)
        return k.strip(), v.strip()

    while i < n:
        line = lines[i].strip()
        i += 1
        if not line:
            continue
        if line == "step":
            fields: dict[str, str] = {}
            maps: dict[str, tuple] = {}
            cur_sym = None
            while i < n:
                sline = lines[i].strip()
                i += 1
                if sline == "end":
                    break
                if not sline:
                    continue
                if sline.startswith("symbol "):
                    cur_sym = sline[len("symbol "):].strip()
                    maps[cur_sym] = [None, None]
                elif sline.startswith("matrix "):
                    if cur_sym is None:
                        raise CertificateError("matrix before any symbol")
                    maps[cur_sym][0] = sline[len("matrix "):]
                elif sline.startswith("vector "):
                    if cur_sym is None:
                        raise CertificateError("vector before any symbol")
                    maps[cur_sym][1] = sline[len("vector "):]
                else:
                    k, v = kv(sline)
                    fields[k] = v
            else:
                raise CertificateError("unterminated step block")
            try:
                mode = {"relative": RELATIVE, "top-relative": TOP_RELATIVE}[fields["mode"]]
                flavor = {"natural": NATURAL, "arctic": ARCTIC}[fields["flavor"]]
                dim = int(fields["dim"])
                rev = {"true": True, "false": False}[fields.get("reversed", "false")]
                removed = tuple(int(t) for t in fields["remove"].split())
            except KeyError as e:
                raise CertificateError(f"missing or bad step field: {e}") from None
            forced = fields.get("forced-top", "false") == "true"
            arctic = flavor == ARCTIC
            interp_maps = {}
            for sym, (mrows, vrow) in maps.items():
                if mrows is None or vrow is None:
                    raise CertificateError(f"symbol {sym!r} missing matrix or vector")
                m = tuple(tuple(_parse_entry(t, arctic) for t in row.split())
                          for row in mrows.split("/"))
                v = tuple(_parse_entry(t, arctic) for t in vrow.split())
                if len(v) != dim or len(m) != dim or any(len(r) != dim for r in m):
                    raise CertificateError(f"symbol {sym!r}: wrong shape for dim {dim}")
                interp_maps[sym] = (ArcticAffine if arctic else NatAffine)(m, v)
            steps.append(ProofStep(removed, mode, rev,
                                   Interpretation(flavor, dim, interp_maps), forced))
            continue
        k, v = kv(line)
        if k == "fingerprint":
            fingerprint = v
        elif k == "terminal":
            terminal = v
        elif k == "residual-rule":
            toks = v.split()
            arrow = toks.index("->")
            residual.append(Rule(tuple(toks[:arrow]), tuple(toks[arrow + 1:])))
        elif k == "justification":
            justification = v
        elif k == "provenance":
            pk, _, pv = v.partition("=")
            provenance[pk] = pv
        else:
            raise CertificateError(f"unknown field {k!r}")
    if not fingerprint:
        raise CertificateError("missing fingerprint")
    return Certificate(fingerprint, tuple(steps), terminal, tuple(residual),
                       justification, provenance)
