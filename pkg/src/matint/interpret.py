"""Exact natural and arctic matrix interpretation algebra.

A d-dimensional natural affine map is (M, v) with M a d x d matrix and v a
d-vector of nonnegative integers, denoting x |-> M x + v.  The arctic
variant works over max-plus with coefficients in Z plus minus-infinity,
denoting x |-> M (x) v in max-plus arithmetic.  Minus-infinity is
represented by None.  All arithmetic is arbitrary precision; the checker
never rounds or bounds.

Strings compose as [s] = [s1] o ... o [sn] (leftmost symbol outermost), so
for s = s1 s2 the map is x |-> M1 M2 x + (M1 v2 + v1).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .srs import Srs, reverse_srs

NATURAL = "natural"
ARCTIC = "arctic"
RELATIVE = "relative"
TOP_RELATIVE = "top-relative"

STRICT = "strict"
WEAK = "weak"
NONE = "none"

MINUS_INF = None  # arctic bottom


class InterpretationError(Exception):
    pass


@dataclass(frozen=True)
class NatAffine:
    m: tuple[tuple[int, ...], ...]
    v: tuple[int, ...]

    def __post_init__(self):
        d = len(self.v)
        if len(self.m) != d or any(len(row) != d for row in self.m):
            raise InterpretationError("inconsistent shapes")
        if any(x < 0 for row in self.m for x in row) or any(x < 0 for x in self.v):
            raise InterpretationError("natural coefficients must be nonnegative")

    @property
    def dim(self) -> int:
        return len(self.v)


@dataclass(frozen=True)
class ArcticAffine:
    m: tuple[tuple[int | None, ...], ...]
    v: tuple[int | None, ...]

    def __post_init__(self):
        d = len(self.v)
        if len(self.m) != d or any(len(row) != d for row in self.m):
            raise InterpretationError("inconsistent shapes")

    @property
    def dim(self) -> int:
        return len(self.v)


def nat_identity(d: int) -> NatAffine:
    return NatAffine(tuple(tuple(1 if i == j else 0 for j in range(d)) for i in range(d)),
                     (0,) * d)


def arctic_identity(d: int) -> ArcticAffine:
    return ArcticAffine(tuple(tuple(0 if i == j else None for j in range(d)) for i in range(d)),
                        (None,) * d)


@dataclass(frozen=True)
class Interpretation:
    """Per-symbol affine maps of one flavor and uniform dimension.

    search_bounds records the coefficient bounds used by the search that
    produced this interpretation (provenance only; never used in checks).
    """

    flavor: str
    dim: int
    maps: dict[str, NatAffine | ArcticAffine] = field(default_factory=dict)
    search_bounds: str = ""

    def __post_init__(self):
        want = NatAffine if self.flavor == NATURAL else ArcticAffine
        for sym, a in self.maps.items():
            if not isinstance(a, want) or a.dim != self.dim:
                raise InterpretationError(f"bad map for symbol {sym!r}")

    def __getitem__(self, sym: str):
        try:
            return self.maps[sym]
        except KeyError:
            raise InterpretationError(f"unmapped symbol {sym!r}") from None


def _amax(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return a if a >= b else b


def _atimes(a, b):
    if a is None or b is None:
        return None
    return a + b


def nat_compose(interp: Interpretation, s) -> NatAffine:
    """Affine map of a string under a natural interpretation."""
    if interp.flavor != NATURAL:
        raise InterpretationError("natural flavor required")
    d = interp.dim
    acc = nat_identity(d)
    rng = range(d)
    for sym in s:
        g = interp[sym]
        am, av = acc.m, acc.v
        m = tuple(tuple(sum(am[i][k] * g.m[k][j] for k in rng) for j in rng) for i in rng)
        v = tuple(sum(am[i][k] * g.v[k] for k in rng) + av[i] for i in rng)
        acc = NatAffine(m, v)
    return acc


def arctic_compose(interp: Interpretation, s) -> ArcticAffine:
    """Max-plus affine map of a string under an arctic interpretation."""
    if interp.flavor != ARCTIC:
        raise InterpretationError("arctic flavor required")
    d = interp.dim
    acc = arctic_identity(d)
    rng = range(d)
    for sym in s:
        g = interp[sym]
        am, av = acc.m, acc.v
        m = []
        v = []
        for i in rng:
            row = am[i]
            m.append(tuple(
                max((row[k] + g.m[k][j] for k in rng
                     if row[k] is not None and g.m[k][j] is not None), default=None)
                for j in rng))
            best = av[i]
            for k in rng:
                best = _amax(best, _atimes(row[k], g.v[k]))
            v.append(best)
        acc = ArcticAffine(tuple(m), tuple(v))
    return acc


def nat_compare(lhs: NatAffine, rhs: NatAffine) -> str:
    """Elementwise check: STRICT, WEAK, or NONE.

    Strict needs M_l >= M_r everywhere, first vector component strictly
    larger, the rest >=.  Weak needs >= everywhere.
    """
    if lhs.dim != rhs.dim:
        raise InterpretationError("dimension mismatch")
    if any(a < b for ra, rb in zip(lhs.m, rhs.m) for a, b in zip(ra, rb)):
        return NONE
    if any(a < b for a, b in zip(lhs.v, rhs.v)):
        return NONE
    return STRICT if lhs.v[0] > rhs.v[0] else WEAK


def _agg(a, b) -> bool:
    # x >> y: x > y over Z with -inf smallest, except -inf >> -inf holds.
    if b is None:
        return True
    return a is not None and a > b


def _ageq(a, b) -> bool:
    if b is None:
        return True
    return a is not None and a >= b


def arctic_compare(lhs: ArcticAffine, rhs: ArcticAffine, strict: bool) -> bool:
    if lhs.dim != rhs.dim:
        raise InterpretationError("dimension mismatch")
    cmp = _agg if strict else _ageq
    return (all(cmp(a, b) for ra, rb in zip(lhs.m, rhs.m) for a, b in zip(ra, rb))
            and all(cmp(a, b) for a, b in zip(lhs.v, rhs.v)))


EXTENDED = "extended"
WEAK_MONOTONE = "weak"
WEAK_TOP = "weak-top"


def nat_monotone(interp: Interpretation, required: str) -> bool:
    """Weak monotonicity is free for natural affine maps; extended
    monotonicity needs every top-left matrix entry >= 1."""
    if interp.flavor != NATURAL:
        raise InterpretationError("natural flavor required")
    if required == WEAK_MONOTONE:
        return True
    if required == EXTENDED:
        return all(a.m[0][0] >= 1 for a in interp.maps.values())
    raise ValueError(required)


def arctic_wellformed(interp: Interpretation, mode: str) -> bool:
    """Domain restriction making the arctic orders usable.

    weak-top: every symbol keeps the first coordinate finite, i.e.
    M[0][0] >= 0 or v[0] >= 0.  extended: additionally no negative finite
    entry anywhere (arctic naturals) and every vector is all minus-infinity.
    """
    if interp.flavor != ARCTIC:
        raise InterpretationError("arctic flavor required")
    for a in interp.maps.values():
        m00, v0 = a.m[0][0], a.v[0]
        if not ((m00 is not None and m00 >= 0) or (v0 is not None and v0 >= 0)):
            return False
    if mode == WEAK_TOP:
        return True
    if mode == EXTENDED:
        for a in interp.maps.values():
            if any(x is not None and x < 0 for row in a.m for x in row):
                return False
            if any(x is not None for x in a.v):
                return False
        return True
    raise ValueError(mode)


@dataclass(frozen=True)
class StepClaim:
    """One rule-removal claim: the rules in strict_indices decrease
    strictly under the interpretation and all others weakly, after
    reversing the system first when reversed is set."""

    srs: Srs
    strict_indices: frozenset[int]
    mode: str  # RELATIVE | TOP_RELATIVE
    reversed: bool
    interpretation: Interpretation

    def __post_init__(self):
        if not self.strict_indices:
            raise InterpretationError("strict set must be nonempty")
        if not all(0 <= i < len(self.srs.rules) for i in self.strict_indices):
            raise InterpretationError("strict index out of range")


@dataclass(frozen=True)
class StepVerdict:
    ok: bool
    reason: str = ""
    rule: int | None = None

    def __bool__(self) -> bool:
        return self.ok


def verify_step(claim: StepClaim) -> StepVerdict:
    """Check a claim against the monotone-algebra conditions.

    Relative mode requires an extended monotone algebra (natural: top-left
    entries >= 1; arctic: arctic naturals with all vectors -inf).
    Top-relative mode only needs the weak/well-formedness conditions.
    Every rule must compare at least weakly; the strict set strictly.
    """
    interp = claim.interpretation
    srs = reverse_srs(claim.srs) if claim.reversed else claim.srs
    missing = [s for s in srs.alphabet if s not in interp.maps]
    if missing:
        return StepVerdict(False, f"unmapped symbols: {sorted(missing)}")
    if claim.mode not in (RELATIVE, TOP_RELATIVE):
        return StepVerdict(False, f"unknown mode {claim.mode!r}")

    if interp.flavor == NATURAL:
        need = EXTENDED if claim.mode == RELATIVE else WEAK_MONOTONE
        if not nat_monotone(interp, need):
            return StepVerdict(False, f"natural interpretation is not {need} monotone")
    elif interp.flavor == ARCTIC:
        need = EXTENDED if claim.mode == RELATIVE else WEAK_TOP
        if not arctic_wellformed(interp, need):
            return StepVerdict(False, f"arctic interpretation is not well-formed for {need}")
    else:
        return StepVerdict(False, f"unknown flavor {interp.flavor!r}")

    for i, rule in enumerate(srs.rules):
        want_strict = i in claim.strict_indices
        if interp.flavor == NATURAL:
            rel = nat_compare(nat_compose(interp, rule.lhs), nat_compose(interp, rule.rhs))
            if rel == NONE or (want_strict and rel != STRICT):
                need_s = "strict" if want_strict else "weak"
                return StepVerdict(False, f"rule {i} ({rule}) compares {rel}, needs {need_s}", i)
        else:
            l = arctic_compose(interp, rule.lhs)
            r = arctic_compose(interp, rule.rhs)
            if want_strict:
                if not arctic_compare(l, r, strict=True):
                    return StepVerdict(False, f"rule {i} ({rule}) is not arctic-strict", i)
            elif not arctic_compare(l, r, strict=False):
                return StepVerdict(False, f"rule {i} ({rule}) is not arctic-weak", i)
    return StepVerdict(True)


def affine_to_linear(interp: Interpretation) -> Interpretation:
    """Lift a d-dimensional natural affine interpretation to the
    (d+1)-dimensional linear one with block matrix [[M, v], [0, 1]]."""
    if interp.flavor != NATURAL:
        raise InterpretationError("natural flavor required")
    d = interp.dim
    out = {}
    for sym, a in interp.maps.items():
        rows = [tuple(a.m[i]) + (a.v[i],) for i in range(d)]
        rows.append((0,) * d + (1,))
        out[sym] = NatAffine(tuple(rows), (0,) * (d + 1))
    return Interpretation(NATURAL, d + 1, out, interp.search_bounds)
