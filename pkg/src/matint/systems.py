"""Catalog of Collatz-style rewriting systems and their value semantics.

Every catalog entry carries the exact rule list in the source display
order.  Entries that use positional (mixed-base) digit strings also carry
per-symbol digit views giving each string a numeric value, the simulated
generalized Collatz function, and the partition into dynamic rules (which
apply the function) and auxiliary rules (which preserve the value).

All arithmetic is exact: values are Python ints, function cases are
Fractions.  Bottom (an undefined function case) is represented by None.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .srs import Srs, SrsError, make_srs, invert_srs, successors


class SemanticsError(Exception):
    pass


# ---------------------------------------------------------------------------
# Generalized Collatz functions


@dataclass(frozen=True)
class GeneralizedCollatzFunction:
    """Piecewise map n -> q_i n + r_i by residue class i mod d, or bottom.

    domain is one of "N", "N+", "Z", "odd" (odd positive integers).
    """

    name: str
    modulus: int
    cases: tuple[tuple[Fraction, Fraction] | None, ...]
    domain: str = "N+"

    def __post_init__(self):
        if self.modulus < 2 or len(self.cases) != self.modulus:
            raise SemanticsError("need one case per residue, modulus >= 2")
        for i, case in enumerate(self.cases):
            if case is None:
                continue
            q, r = case
            if (q * i + r).denominator != 1 or (q * self.modulus).denominator != 1:
                raise SemanticsError(f"case {i}: q*i+r and q*d must be integral")

    def in_domain(self, n: int) -> bool:
        if self.domain == "N":
            return n >= 0
        if self.domain == "N+":
            return n >= 1
        if self.domain == "odd":
            return n >= 1 and n % 2 == 1
        return True  # Z

    def apply(self, n: int) -> int | None:
        if not self.in_domain(n):
            raise SemanticsError(f"{n} outside domain {self.domain} of {self.name}")
        case = self.cases[n % self.modulus]
        if case is None:
            return None
        q, r = case
        out = q * n + r
        assert out.denominator == 1
        return int(out)


class SyracuseFunction:
    """n -> (3n+1) / 2^k with k maximal; odd domain.  Not expressible with
    finitely many residue cases, so it lives outside the GCF type."""

    name = "Syr"
    domain = "odd"

    def in_domain(self, n: int) -> bool:
        return n >= 1 and n % 2 == 1

    def apply(self, n: int) -> int | None:
        if not self.in_domain(n):
            raise SemanticsError(f"{n} outside odd domain")
        m = 3 * n + 1
        while m % 2 == 0:
            m //= 2
        return m


def gcf_apply(f, n: int) -> int | None:
    return f.apply(n)


REACHED_CYCLE = "reached_cycle_element"
REACHED_BOT = "reached_bot"
BUDGET = "budget"


def trajectory(f, n: int, max_iters: int = 1000, designated: int | None = 1):
    """Iterate f from n, exactly.

    Returns (iterates, verdict).  Stops at the designated element (pass
    None for bottom-convergent functions so only bottom stops iteration),
    at bottom, or when max_iters applications have been made.
    """
    if max_iters <= 0:
        raise ValueError("max_iters must be positive")
    seq = [n]
    if designated is not None and n == designated:
        return seq, REACHED_CYCLE
    for _ in range(max_iters):
        nxt = f.apply(seq[-1])
        if nxt is None:
            return seq, REACHED_BOT
        seq.append(nxt)
        if designated is not None and nxt == designated:
            return seq, REACHED_CYCLE
    return seq, BUDGET


# ---------------------------------------------------------------------------
# Digit views and string values


@dataclass(frozen=True)
class DigitView:
    """Meaning of one symbol: x -> a*x + b, a constant, or the identity."""

    kind: str  # "affine" | "const" | "identity"
    a: int = 0
    b: int = 0

    def apply(self, x: int) -> int:
        if self.kind == "affine":
            return self.a * x + self.b
        if self.kind == "const":
            return self.b
        return x


@dataclass(frozen=True)
class Views:
    """Digit views for one system: a left delimiter (constant), a right
    delimiter, and base-b digit symbols in between."""

    left: str
    right: str
    table: dict[str, DigitView]

    def digits(self, base: int) -> list[str]:
        """Digit symbols of one base, ordered by digit value."""
        out = [(dv.b, s) for s, dv in self.table.items()
               if dv.kind == "affine" and dv.a == base and s != self.right]
        return [s for _, s in sorted(out)]


def val(s, views: Views) -> int:
    """Value of a canonical string left-delim digits* right-delim."""
    s = tuple(s)
    if len(s) < 2 or s[0] != views.left or s[-1] != views.right:
        raise SemanticsError(f"non-canonical string {' '.join(s)!r}")
    acc = views.table[views.left].b
    for sym in s[1:-1]:
        dv = views.table.get(sym)
        if dv is None or dv.kind != "affine":
            raise SemanticsError(f"non-canonical string: bad digit {sym!r}")
        acc = dv.a * acc + dv.b
    return views.table[views.right].apply(acc)


def _digits_in_base(n: int, base: int) -> list[int]:
    out = []
    while n:
        out.append(n % base)
        n //= base
    out.reverse()
    return out or [0]


def encode_binary(n: int, views: Views) -> tuple[str, ...]:
    """Canonical binary string for n >= 1: the left delimiter stands for
    the leading 1, then the remaining binary digits, then the right
    delimiter."""
    if n < 1:
        raise SemanticsError("n must be >= 1")
    b = views.digits(2)
    bits = _digits_in_base(n, 2)[1:]
    return (views.left,) + tuple(b[d] for d in bits) + (views.right,)


def encode_ternary(n: int, views: Views) -> tuple[str, ...]:
    """Canonical ternary string for n >= 1.  A leading ternary 2 cannot be
    the left delimiter (which stands for 1), so it is replaced by the
    equal-value prefix: leading 1 followed by a binary 0."""
    if n < 1:
        raise SemanticsError("n must be >= 1")
    t = views.digits(3)
    ds = _digits_in_base(n, 3)
    if ds[0] == 1:
        mid: tuple[str, ...] = tuple(t[d] for d in ds[1:])
    else:
        b = views.digits(2)
        mid = (b[0],) + tuple(t[d] for d in ds[1:])
    return (views.left,) + mid + (views.right,)


def encode_full(n: int, base: int, views: Views) -> tuple[str, ...]:
    """All digits of n in one base; for systems whose left delimiter is the
    constant 0 and therefore absorbs no leading digit."""
    if n < 1:
        raise SemanticsError("n must be >= 1")
    d = views.digits(base)
    return (views.left,) + tuple(d[x] for x in _digits_in_base(n, base)) + (views.right,)


# ---------------------------------------------------------------------------
# Catalog entries


@dataclass(frozen=True)
class SystemEntry:
    name: str
    srs: Srs
    dynamic_rule_indices: frozenset[int]
    notes: str = ""
    views: Views | None = None
    function: GeneralizedCollatzFunction | None = None
    encoding: str = ""            # "binary" | "ternary" | "odd-binary" | "full3"
    designated: int | None = None  # value at which simulation is meant to stop
    stall_values: frozenset[int] = frozenset()  # legitimate extra dead ends
    stall_fn: object = None       # optional predicate for unbounded stall sets
    dynamic_iterations: dict[int, int] = field(default_factory=dict)

    def encode(self, n: int) -> tuple[str, ...]:
        if self.views is None:
            raise SemanticsError(f"system {self.name} has no digit views")
        if self.encoding == "binary":
            return encode_binary(n, self.views)
        if self.encoding == "ternary":
            return encode_ternary(n, self.views)
        if self.encoding == "odd-binary":
            if n < 3 or n % 2 == 0:
                raise SemanticsError("odd encoding needs odd n >= 3")
            return encode_binary((n - 1) // 2, self.views)
        if self.encoding == "full3":
            return encode_full(n, 3, self.views)
        raise SemanticsError(f"system {self.name} has no encoding")

    def domain_values(self, n_max: int):
        if self.encoding == "odd-binary":
            return range(3, n_max + 1, 2)
        return range(1, n_max + 1)

    def stall_ok(self, v: int) -> bool:
        """Is a normal form of value v a legitimate end of simulation?"""
        if v == self.designated or v in self.stall_values:
            return True
        if self.stall_fn is not None and self.stall_fn(v):
            return True
        if self.function is not None and self.function.in_domain(v):
            return self.function.apply(v) is None
        return False


def _affine_of_side(side, views: Views) -> tuple[int, int]:
    """(a, b) with value = a*x + b for a string prefix of value x followed
    by these symbols.  Sides of dynamic rules are digits then right delim."""
    a, b = 1, 0
    for sym in side:
        dv = views.table[sym]
        if dv.kind == "const":
            raise SemanticsError("left delimiter inside a dynamic rule side")
        if dv.kind == "identity":
            continue
        a, b = dv.a * a, dv.a * b + dv.b
    return a, b


def _dynamic_iterations(srs: Srs, dynamic, views: Views,
                        f: GeneralizedCollatzFunction, k_max: int = 8) -> dict[int, int]:
    """How many applications of f each dynamic rule performs.

    Derived symbolically: the lhs denotes a*x+b over the prefix value x;
    iterate f on that affine form (the residue class must be determined,
    possibly only up to cases that share one formula) until the rhs form
    is reached.
    """
    out = {}
    d = f.modulus
    for i in sorted(dynamic):
        rule = srs.rules[i]
        cur = (Fraction(_affine_of_side(rule.lhs, views)[0]),
               Fraction(_affine_of_side(rule.lhs, views)[1]))
        target = _affine_of_side(rule.rhs, views)
        k = 0
        while (cur[0], cur[1]) != (target[0], target[1]):
            k += 1
            if k > k_max:
                raise SemanticsError(f"rule {i}: no match within {k_max} iterations")
            a, b = cur
            if a.denominator != 1 or b.denominator != 1:
                raise SemanticsError(f"rule {i}: non-integral intermediate form")
            g = math.gcd(int(a), d)
            residues = [r for r in range(d) if r % g == int(b) % g] if g else [int(b) % d]
            case_set = {f.cases[r] for r in residues}
            if len(case_set) != 1:
                raise SemanticsError(f"rule {i}: residue class not determined")
            case = case_set.pop()
            if case is None:
                raise SemanticsError(f"rule {i}: hits bottom")
            q, r = case
            cur = (q * a, q * b + r)
        out[i] = k
    return out


def _std_views(right: str = "R", right_view: DigitView | None = None,
               left_const: int = 1, quinary: bool = False) -> Views:
    table = {
        "L": DigitView("const", b=left_const),
        right: right_view or DigitView("identity"),
        "b0": DigitView("affine", 2, 0),
        "b1": DigitView("affine", 2, 1),
        "t0": DigitView("affine", 3, 0),
        "t1": DigitView("affine", 3, 1),
        "t2": DigitView("affine", 3, 2),
    }
    if quinary:
        for i in range(5):
            table[f"q{i}"] = DigitView("affine", 5, i)
    return Views("L", right, table)


F2 = Fraction(1, 2)
F32 = Fraction(3, 2)
F13 = Fraction(1, 3)
F34 = Fraction(3, 4)

FUNC_C = GeneralizedCollatzFunction("C", 2, ((F2, Fraction(0)), (Fraction(3), Fraction(1))))
FUNC_T = GeneralizedCollatzFunction("T", 2, ((F2, Fraction(0)), (F32, F2)))
FUNC_W = GeneralizedCollatzFunction("W", 2, ((F32, Fraction(0)), None))
FUNC_F = GeneralizedCollatzFunction(
    "F", 6,
    ((F2, Fraction(0)), (F13, -F13), (F2, Fraction(0)),
     (F32, F2), (F13, -F13), (F32, F2)),
    domain="N")
FUNC_S = GeneralizedCollatzFunction(
    "S", 8,
    (None, (F34, Fraction(1, 4)), None, (F32, F2),
     None, (Fraction(1, 4), -Fraction(1, 4)), None, (F32, F2)),
    domain="odd")
FUNC_M = GeneralizedCollatzFunction("M", 4, ((F32, Fraction(0)), (F32, F2), (F32, Fraction(0)), None))
FUNC_B = GeneralizedCollatzFunction(
    "B", 3, ((Fraction(5, 3), Fraction(6)), (Fraction(5, 3), Fraction(22, 3)), None))
FUNC_H = GeneralizedCollatzFunction(
    "H", 8,
    ((F34, Fraction(0)), None, None, None,
     (F34, Fraction(0)), None, None, (Fraction(9, 8), Fraction(1, 8))))

FUNCTIONS = {
    "C": FUNC_C, "T": FUNC_T, "W": FUNC_W, "F": FUNC_F, "S": FUNC_S,
    "M": FUNC_M, "B": FUNC_B, "H": FUNC_H, "Syr": SyracuseFunction(),
}

# Bottom-convergent functions have no designated integer element.
BOT_CONVERGENT = {"W", "M", "B", "H"}


def builtin_function(name: str):
    """(function, designated element or None for bottom-convergent)."""
    try:
        f = FUNCTIONS[name]
    except KeyError:
        raise KeyError(f"unknown function {name!r}") from None
    return f, (None if name in BOT_CONVERGENT else 1)


# The mixed binary-ternary auxiliary rules: base swaps (A) and
# left-delimiter expansions (B).
_A_RULES = [
    ("b0 t0", "t0 b0"), ("b0 t1", "t0 b1"), ("b0 t2", "t1 b0"),
    ("b1 t0", "t1 b1"), ("b1 t1", "t2 b0"), ("b1 t2", "t2 b1"),
]
_B_RULES = [("L t0", "L b1"), ("L t1", "L b0 b0"), ("L t2", "L b0 b1")]
_X_RULES = _A_RULES + _B_RULES


def _mk(pairs) -> Srs:
    return make_srs([(l.split(), r.split()) for l, r in pairs])


def _entry(name, pairs, dynamic, notes, views=None, function=None,
           encoding="", designated=None, stalls=(), stall_fn=None) -> SystemEntry:
    srs = _mk(pairs)
    dyn = frozenset(dynamic)
    iters = {}
    if views is not None and function is not None and dyn:
        iters = _dynamic_iterations(srs, dyn, views, function)
    return SystemEntry(name, srs, dyn, notes, views, function, encoding,
                       designated, frozenset(stalls), stall_fn, iters)


def _catalog() -> dict[str, SystemEntry]:
    std = _std_views()
    entries = [
        _entry("Z",
               [("h 1 1", "1 h"),
                ("1 1 h _", "1 1 s _"), ("1 s", "s 1"), ("_ s", "_ h"),
                ("h 1 _", "t 1 1 _"), ("1 t", "t 1 1 1"), ("_ t", "_ h")],
               (), "unary Collatz machine; terminates iff the Collatz conjecture holds"),
        _entry("W",
               [("h 1 1", "1 h"), ("1 h _", "1 t _"),
                ("1 t", "t 1 1 1"), ("_ t", "_ h")],
               (), "unary simulation of n -> 3n/2 on evens; no automated proof known"),
        _entry("T",
               [("b0 R", "R"), ("b1 R", "t2 R")] + _X_RULES,
               (0, 1), "mixed binary-ternary Collatz system; terminating iff the "
               "Collatz conjecture holds",
               std, FUNC_T, "binary", designated=1),
        _entry("L",
               [("b0 R", "R"), ("b0 + R", "t0 + + R"),
                ("b0 + +", "+ b0"), ("+ t0", "t0 + + +"), ("b0 t0", "t0 b0"),
                ("L +", "L b0"), ("L t0", "L b0 +")],
               (0, 1), "hybrid unary/positional Collatz system"),
        _entry("Wprime",
               [("b0 R", "t0 R")] + _X_RULES,
               (0,), "mixed-base simulation of n -> 3n/2 on evens",
               std, FUNC_W, "binary"),
        _entry("Wsecond",
               [("b0 R", "t0 R"),
                ("b0 + +", "+ b0"), ("+ t0", "t0 + + +"), ("b0 t0", "t0 b0"),
                ("L +", "L b0"), ("L t0", "L b0 +")],
               (0,), "hybrid simulation of n -> 3n/2 on evens; no automated proof found"),
        _entry("F",
               [("t1 R", "R"), ("t0 b0 R", "t0 R"), ("t1 b0 R", "t1 R"),
                ("t1 b1 R", "t1 t2 R"), ("t2 b1 R", "t2 t2 R")] + _X_RULES,
               range(5), "Farkas' Collatz variant; proved terminating via 5-D arctic "
               "interpretations",
               std, FUNC_F, "ternary", designated=1, stalls=(2, 3, 5)),
        _entry("S",
               [("b0 b0 Ro", "t0 Ro"), ("b1 b0 Ro", "Ro"), ("b1 Ro", "t2 Ro")] + _X_RULES,
               (0, 1, 2), "accelerated odd-trajectory Collatz system",
               _std_views(right="Ro", right_view=DigitView("affine", 2, 1)),
               FUNC_S, "odd-binary", designated=1, stalls=(3, 5)),
        _entry("C-even4",
               [("b0 b0 R", "b0 R"), ("b1 b0 R", "b1 R"), ("b1 R", "t2 b0 R")] + _X_RULES,
               (0, 1, 2), "C with the even case split mod 4",
               std, FUNC_C, "binary", designated=1, stalls=(2,)),
        _entry("T-odd4",
               [("b0 R", "R"), ("b0 b1 R", "t1 b0 R"), ("b1 b1 R", "t2 b1 R")] + _X_RULES,
               (0, 1, 2), "T with the odd case split mod 4",
               std, FUNC_T, "binary", designated=1, stalls=(3,)),
        _entry("C-even8",
               [("b0 b0 b0 R", "b0 b0 R"), ("b0 b1 b0 R", "b0 b1 R"),
                ("b1 b0 b0 R", "b1 b0 R"), ("b1 b1 b0 R", "b1 b1 R"),
                ("b1 R", "t2 b0 R")] + _X_RULES,
               range(5), "C with the even case split mod 8",
               std, FUNC_C, "binary", designated=1, stalls=(2, 4, 6)),
        _entry("T-odd8",
               [("b0 R", "R"), ("b0 b0 b1 R", "t0 b1 b0 R"),
                ("b0 b1 b1 R", "t1 b0 b1 R"), ("b1 b0 b1 R", "t2 b0 b0 R"),
                ("b1 b1 b1 R", "t2 b1 b1 R")] + _X_RULES,
               range(5), "T with the odd case split mod 8",
               std, FUNC_T, "binary", designated=1, stalls=(3, 5, 7)),
        _entry("P",
               [("L B", "L A X"), ("A A X", "B X A"), ("A B", "B A"),
                ("X B", "A X"), ("A R", "A X R")],
               (), "Abelian sandpile model on a path; arctic showcase"),
        _entry("M",
               [("b0 R", "t0 R"), ("b0 b1 R", "t1 t0 R")] + _X_RULES,
               (0, 1), "Mahler's 3/2 problem: convergence rules out Z-numbers",
               std, FUNC_M, "binary", stalls=(1,)),
        _entry("BBprime",
               [("t0 R", "+ q0 + R"), ("t0 + R", "+ q0 + + + + R"),
                ("t0 + + +", "+ t0"), ("+ q0", "q0 + + + + +"), ("t0 q0", "q0 t0"),
                ("L + +", "L t0"), ("L q0", "L t0 + +")],
               (0, 1), "hybrid simulation of the BB-5 candidate's Collatz function"),
    ]

    bb_swaps = []
    for t in range(3):
        for q in range(5):
            v = 5 * t + q  # value of the pair over prefix 0: q(t(x)) = 15x + 5t + q
            bb_swaps.append((f"t{t} q{q}", f"q{v // 3} t{v % 3}"))
    bb_views = _std_views(left_const=0, quinary=True)
    bb_dynamic = [
        ("t0 t0 R", "q3 q1 R"), ("t0 t1 R", "q4 q1 R"),
        ("t0 t2 t0 R", "q2 q2 q4 R"), ("t0 t2 t1 R", "q2 q4 q1 R"),
        ("t1 t2 t1 R", "q4 q2 q4 R"), ("t1 t2 t2 t0 R", "q3 q3 q1 q4 R"),
        ("t0 t2 t2 t2 t0 R", "q1 q3 q4 q3 q1 R"),
        ("t1 t2 t2 t2 t0 R", "q3 q2 q1 q1 q4 R"),
    ]
    # A value v is stranded when no dynamic pattern can occur at the end of
    # its canonical string: the pattern of length L needs v = b mod 3^L and
    # at least L-1 leading digits above it (patterns starting with a zero
    # digit need a digit the canonical string does not have).
    bb_rows = []
    for lhs, _ in bb_dynamic:
        digits = lhs.split()[:-1]
        mod = 3 ** len(digits)
        b = 0
        for d in digits:
            b = 3 * b + int(d[1])
        bb_rows.append((mod, b, mod // 3 if digits[0] != "t0" else mod))

    def bb_stall_ok(v, rows=tuple(bb_rows)):
        return not any(v % mod == b and v >= floor for mod, b, floor in rows)

    entries.append(_entry(
        "BB",
        bb_dynamic + bb_swaps
        + [("L q0", "L t0"), ("L q1", "L t1"), ("L q2", "L t2"),
           ("L q3", "L t1 t0"), ("L q4", "L t1 t1")],
        range(8), "ternary-quinary simulation of the BB-5 candidate's function, "
        "accelerated; open challenge",
        bb_views, FUNC_B, "full3", stall_fn=bb_stall_ok))

    x = _mk(_X_RULES)
    inv_x = invert_srs(x)
    e_pairs = [("t0 R", "R"), ("t1 R", "R"), ("L R", "L R")]
    e_pairs += [(" ".join(r.lhs), " ".join(r.rhs)) for r in inv_x.rules]
    entries.append(_entry(
        "E", e_pairs, (),
        "ternary expansions of powers of two; local termination, catalog only"))

    return {e.name: e for e in entries}


CATALOG = _catalog()

_ALIASES = {
    "wprime": "Wprime", "w'": "Wprime", "w1": "Wprime",
    "wsecond": "Wsecond", "w''": "Wsecond", "w2": "Wsecond",
    "bbprime": "BBprime", "bb'": "BBprime",
    "ceven4": "C-even4", "c-even/4": "C-even4", "c-even4": "C-even4",
    "todd4": "T-odd4", "t-odd/4": "T-odd4", "t-odd4": "T-odd4",
    "ceven8": "C-even8", "c-even/8": "C-even8", "c-even8": "C-even8",
    "todd8": "T-odd8", "t-odd/8": "T-odd8", "t-odd8": "T-odd8",
}


def builtin_system(name: str) -> SystemEntry:
    key = name if name in CATALOG else _ALIASES.get(name.lower().replace("_", "-"))
    if key is None:
        exact = {k.lower(): k for k in CATALOG}
        key = exact.get(name.lower())
    if key is None or key not in CATALOG:
        raise KeyError(f"unknown system {name!r}; known: {', '.join(CATALOG)}")
    return CATALOG[key]


# ---------------------------------------------------------------------------
# Simulation and semantic checking


@dataclass
class SimStep:
    rule: int
    pos: int
    string: tuple[str, ...]
    value: int


@dataclass
class SimTrace:
    start: tuple[str, ...]
    start_value: int
    steps: list[SimStep]
    verdict: str  # "halted" | "budget"

    @property
    def values(self) -> list[int]:
        return [self.start_value] + [s.value for s in self.steps]


def _rightmost(succs):
    """The rightmost redex; ties broken by rule index ascending."""
    return max(succs, key=lambda t: (t[1], -t[0]))


def simulate(entry: SystemEntry, n: int, max_rewrites: int = 100000,
             start=None) -> SimTrace:
    """Deterministic rightmost-possible-rewrite run from the canonical
    encoding of n (or an explicit start string), tracking exact values."""
    if entry.views is None:
        raise SemanticsError(f"system {entry.name} has no digit views")
    first = tuple(start) if start is not None else entry.encode(n)
    start_value = val(first, entry.views)
    if start is None and start_value != n:
        raise SemanticsError(f"encode({n}) has value {start_value}")
    s = first
    steps: list[SimStep] = []
    for _ in range(max_rewrites):
        succs = successors(s, entry.srs)
        if not succs:
            return SimTrace(first, start_value, steps, "halted")
        ri, pos, t = _rightmost(succs)
        steps.append(SimStep(ri, pos, t, val(t, entry.views)))
        s = t
    return SimTrace(first, start_value, steps, "budget")


def dynamic_value_track(entry: SystemEntry, trace: SimTrace) -> list[int]:
    """Start value followed by the value after each dynamic-rule step."""
    out = [trace.start_value]
    out += [s.value for s in trace.steps if s.rule in entry.dynamic_rule_indices]
    return out


@dataclass
class Violation:
    kind: str
    value: int
    string: tuple[str, ...]
    rule: int | None
    detail: str

    def __str__(self):
        where = f" rule {self.rule}" if self.rule is not None else ""
        return f"[{self.kind}] value {self.value}{where} at {' '.join(self.string)}: {self.detail}"


@dataclass
class CheckReport:
    name: str
    n_max: int
    violations: list[Violation] = field(default_factory=list)
    budget_hits: list[int] = field(default_factory=list)
    values_checked: int = 0
    strings_checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations and not self.budget_hits

    def summary(self) -> str:
        state = "ok" if self.ok else f"{len(self.violations)} violations"
        if self.budget_hits:
            state += f", budget exceeded for {len(self.budget_hits)} start values"
        return (f"{self.name}: {state} ({self.values_checked} start values, "
                f"{self.strings_checked} strings)")


def _expected_dynamic(entry: SystemEntry, rule: int, v: int) -> int | None:
    k = entry.dynamic_iterations.get(rule, 1)
    cur: int | None = v
    for _ in range(k):
        if cur is None:
            return None
        cur = entry.function.apply(cur)
    return cur


def check_semantics(entry: SystemEntry, n_max: int,
                    per_value_budget: int = 50000) -> CheckReport:
    """Replay the simulation of every representable value in 1..n_max.

    At every reachable string, every one-step rewrite is checked: auxiliary
    rules must preserve the value, dynamic rules must apply the simulated
    function (its recorded number of iterations).  The run itself follows
    the rightmost strategy; it must end in a legitimate normal form.
    Strings already validated in an earlier run are not revisited.
    """
    if entry.views is None or entry.function is None:
        raise SemanticsError(f"system {entry.name} has no semantics to check")
    report = CheckReport(entry.name, n_max)
    seen: set[tuple[str, ...]] = set()
    views, srs, dyn = entry.views, entry.srs, entry.dynamic_rule_indices

    base = (views.left, views.right)
    try:
        base_val = val(base, views)
        if successors(base, srs):
            report.violations.append(Violation(
                "terminal-not-normal", base_val, base, None,
                "the bare-delimiter string has successors"))
    except SemanticsError:
        pass

    for v in entry.domain_values(n_max):
        report.values_checked += 1
        s = entry.encode(v)
        if val(s, views) != v:
            report.violations.append(Violation("encode", v, s, None,
                                               f"encode({v}) has value {val(s, views)}"))
            continue
        cur_v = v
        for _ in range(per_value_budget):
            if s in seen:
                break
            seen.add(s)
            report.strings_checked += 1
            succs = successors(s, srs)
            if not succs:
                if not entry.stall_ok(cur_v):
                    report.violations.append(Violation(
                        "premature-normal-form", cur_v, s, None,
                        "no rewrite applies but the simulated function continues"))
                break
            for ri, _pos, t in succs:
                tv = val(t, views)
                if ri in dyn:
                    expect = _expected_dynamic(entry, ri, cur_v)
                    if expect is None or tv != expect:
                        report.violations.append(Violation(
                            "dynamic-value", cur_v, s, ri,
                            f"step gives {tv}, function gives {expect}"))
                elif tv != cur_v:
                    report.violations.append(Violation(
                        "auxiliary-value", cur_v, s, ri,
                        f"value changed {cur_v} -> {tv}"))
            ri, _pos, s = _rightmost(succs)
            cur_v = val(s, views)
        else:
            report.budget_hits.append(v)
    return report


def check_bb_mappings(entry: SystemEntry | None = None) -> list[tuple[tuple[int, int], tuple[int, int]]]:
    """The affine mappings realized by the BB dynamic rules, as
    ((a, b), (c, d)) meaning a*n + b -> c*n + d over arbitrary prefixes."""
    entry = entry or builtin_system("BB")
    out = []
    for i in sorted(entry.dynamic_rule_indices):
        rule = entry.srs.rules[i]
        out.append((_affine_of_side(rule.lhs, entry.views),
                    _affine_of_side(rule.rhs, entry.views)))
    return out
