"""String rewriting systems: rules, rewrite steps, structural transforms.

Symbols are plain strings.  A symbol token must be nonempty, contain no
whitespace and no ``#``, and must not be the literal ``->``.
"""

from __future__ import annotations

import hashlib
import warnings
from collections import deque
from dataclasses import dataclass, field


class SrsError(Exception):
    pass


class SrsParseError(SrsError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


def check_symbol(name: str) -> str:
    if not name or name == "->" or "#" in name or any(c.isspace() for c in name):
        raise SrsError(f"invalid symbol token: {name!r}")
    return name


@dataclass(frozen=True)
class Rule:
    """One rewrite rule lhs -> rhs.  The lhs is nonempty; the rhs may be empty."""

    lhs: tuple[str, ...]
    rhs: tuple[str, ...]

    def __post_init__(self):
        if not self.lhs:
            raise SrsError("rule with empty lhs")
        for s in self.lhs + self.rhs:
            check_symbol(s)

    def __str__(self) -> str:
        return f"{' '.join(self.lhs)} -> {' '.join(self.rhs)}"


@dataclass(frozen=True)
class Srs:
    """An ordered list of rules plus an alphabet.

    Rule order is significant: certificates refer to rules by index.  The
    alphabet always contains every symbol occurring in a rule and may
    declare extra symbols.
    """

    rules: tuple[Rule, ...]
    alphabet: frozenset[str] = field(default=frozenset())

    def __post_init__(self):
        used = {s for r in self.rules for s in r.lhs + r.rhs}
        for s in self.alphabet:
            check_symbol(s)
        if not used <= self.alphabet:
            object.__setattr__(self, "alphabet", frozenset(self.alphabet) | used)

    def __len__(self) -> int:
        return len(self.rules)

    def sorted_alphabet(self) -> list[str]:
        return sorted(self.alphabet)


def make_srs(pairs, extra_symbols=()) -> Srs:
    rules = tuple(Rule(tuple(l), tuple(r)) for l, r in pairs)
    return Srs(rules, frozenset(extra_symbols))


def parse_srs(text: str) -> Srs:
    """Parse the plain-text SRS format.

    One rule per line: ``SYM SYM ... -> SYM ...``; tokens are whitespace
    separated; ``#`` starts a comment; blank lines are skipped.  An optional
    header line ``symbols: SYM SYM ...`` declares alphabet symbols that do
    not occur in any rule.  Duplicate rules produce a warning, not an error.
    """
    rules: list[Rule] = []
    declared: set[str] = set()
    seen: set[tuple] = set()
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("symbols:"):
            for tok in line[len("symbols:"):].split():
                try:
                    declared.add(check_symbol(tok))
                except SrsError as e:
                    raise SrsParseError(line_no, str(e)) from None
            continue
        toks = line.split()
        if toks.count("->") != 1:
            raise SrsParseError(line_no, "expected exactly one '->'")
        arrow = toks.index("->")
        lhs, rhs = toks[:arrow], toks[arrow + 1:]
        if not lhs:
            raise SrsParseError(line_no, "rule with empty lhs")
        try:
            rule = Rule(tuple(lhs), tuple(rhs))
        except SrsError as e:
            raise SrsParseError(line_no, str(e)) from None
        key = (rule.lhs, rule.rhs)
        if key in seen:
            warnings.warn(f"duplicate rule at line {line_no}: {rule}", stacklevel=2)
        seen.add(key)
        rules.append(rule)
    return Srs(tuple(rules), frozenset(declared))


def format_srs(srs: Srs) -> str:
    """Inverse of parse_srs, canonical form (declared-only symbols in a header)."""
    used = {s for r in srs.rules for s in r.lhs + r.rhs}
    extra = sorted(srs.alphabet - used)
    lines = []
    if extra:
        lines.append("symbols: " + " ".join(extra))
    lines.extend(str(r) for r in srs.rules)
    return "\n".join(lines) + "\n"


def fingerprint(srs: Srs) -> str:
    """SHA-256 over the canonical text plus the sorted alphabet."""
    payload = ",".join(srs.sorted_alphabet()) + "\n" + format_srs(srs)
    return hashlib.sha256(payload.encode()).hexdigest()


def successors(s, srs: Srs, top_only: bool = False) -> list[tuple[int, int, tuple[str, ...]]]:
    """All one-step rewrites of s, as (rule index, position, result).

    Deterministic order: rule index ascending, then position ascending.
    With top_only, only position-0 matches are reported.
    """
    s = tuple(s)
    for sym in s:
        if sym not in srs.alphabet:
            raise SrsError(f"unknown symbol {sym!r}")
    out = []
    n = len(s)
    for ri, rule in enumerate(srs.rules):
        l = rule.lhs
        k = len(l)
        limit = 1 if top_only else n - k + 1
        for pos in range(max(0, limit)):
            if s[pos:pos + k] == l:
                out.append((ri, pos, s[:pos] + rule.rhs + s[pos + k:]))
    return out


def reverse_srs(srs: Srs) -> Srs:
    """Reverse every rule side; alphabet and rule order unchanged."""
    return Srs(tuple(Rule(r.lhs[::-1], r.rhs[::-1]) for r in srs.rules), srs.alphabet)


def invert_srs(srs: Srs) -> Srs:
    """Swap lhs and rhs of every rule.  Requires every rhs nonempty."""
    for i, r in enumerate(srs.rules):
        if not r.rhs:
            raise SrsError(f"rule {i} has empty rhs; inversion would give an empty lhs")
    return Srs(tuple(Rule(r.rhs, r.lhs) for r in srs.rules), srs.alphabet)


def remove_rules(srs: Srs, indices) -> Srs:
    indices = set(indices)
    for i in indices:
        if not 0 <= i < len(srs.rules):
            raise IndexError(f"rule index {i} out of range")
    kept = tuple(r for i, r in enumerate(srs.rules) if i not in indices)
    return Srs(kept, srs.alphabet)


def top_eligible(srs: Srs) -> set[int]:
    """Rules of the form ``m s -> m t`` headed by a marker symbol.

    A marker occurs in rule sides only at position 0 and every rule
    preserves its occurrence count.  No rule's lhs can then straddle a
    marker occurrence inside a string, so an infinite sequence applying a
    marker-headed rule infinitely often projects onto a single marker
    block, where those applications are top rewrites.  Top termination of
    such a rule set relative to the system therefore implies its plain
    relative termination.
    """
    candidates = set()
    for r in srs.rules:
        if r.rhs and r.lhs[0] == r.rhs[0]:
            candidates.add(r.lhs[0])
    markers = set()
    for m in candidates:
        ok = True
        for r in srs.rules:
            for side in (r.lhs, r.rhs):
                if m in side[1:]:
                    ok = False
            if r.lhs.count(m) != r.rhs.count(m):
                ok = False
        if ok:
            markers.add(m)
    return {
        i
        for i, r in enumerate(srs.rules)
        if r.rhs and r.lhs[0] == r.rhs[0] and r.lhs[0] in markers
    }


@dataclass(frozen=True)
class ExploreResult:
    verdict: str  # "all_halt" | "long_run" | "budget"
    steps: int | None = None  # longest path length when all_halt
    visited: int = 0
    reason: str = ""


def bounded_explore(srs: Srs, start, max_steps: int, max_width: int) -> ExploreResult:
    """Breadth-first exploration of the rewrite graph from start.

    all_halt(n): every rewrite path from start reaches a normal form in at
    most n <= max_steps steps.  long_run: some path exceeds max_steps (a
    cycle counts).  budget: more than max_width distinct strings were
    reached first.  Budgets count distinct strings visited.
    """
    if max_steps <= 0 or max_width <= 0:
        raise ValueError("budgets must be positive")
    start = tuple(start)
    edges: dict[tuple, list[tuple]] = {}
    depth = {start: 0}
    queue = deque([start])
    while queue:
        s = queue.popleft()
        if depth[s] > max_steps:
            return ExploreResult("long_run", visited=len(depth),
                                 reason=f"string at depth {depth[s]}")
        succ = [t for _, _, t in successors(s, srs)]
        edges[s] = succ
        for t in succ:
            if t not in depth:
                if len(depth) >= max_width:
                    return ExploreResult("budget", visited=len(depth))
                depth[t] = depth[s] + 1
                queue.append(t)
    # Finite reachable graph: detect cycles, then take the longest path.
    color: dict[tuple, int] = {}  # 1 = on stack, 2 = done
    longest: dict[tuple, int] = {}

    def visit(node) -> bool:
        stack = [(node, iter(edges[node]))]
        color[node] = 1
        while stack:
            cur, it = stack[-1]
            advanced = False
            for nxt in it:
                c = color.get(nxt)
                if c == 1:
                    return False  # cycle
                if c is None:
                    color[nxt] = 1
                    stack.append((nxt, iter(edges[nxt])))
                    advanced = True
                    break
            if not advanced:
                longest[cur] = 1 + max((longest[t] for t in edges[cur]), default=0) \
                    if edges[cur] else 0
                color[cur] = 2
                stack.pop()
        return True

    if not visit(start):
        return ExploreResult("long_run", visited=len(depth), reason="cycle in rewrite graph")
    n = longest[start]
    if n > max_steps:
        return ExploreResult("long_run", visited=len(depth),
                             reason=f"longest path {n} exceeds {max_steps}")
    return ExploreResult("all_halt", steps=n, visited=len(depth))
