"""Parameter schedule, resonator coefficients, and the large-prime signs.

The resonator is the real multiplicative function r supported on odd
squarefree integers whose prime values live on two bands: a low band P- of
primes in [L^(5 pi/3), L^(7 pi/3)) carrying the oscillating weight

    r(p) = cos(log p / log L^2) * L / (sqrt(p) log p),

and a high band P+ of primes in [B/4, B] carrying tiny signed weights

    r(p) = eps_p / (sqrt(p) (log x)^2),

with eps_p chosen against the sign of a partial-sum functional.  Two modes
are supported: `asymptotic` derives every quantity from (a, D) alone, which
only produces a nonempty low band for astronomically large D (the band
first contains a prime once L^(5 pi/3) >= 2, i.e. roughly D >= 10^140);
`explicit` mode pins L, the bands, B, x, Z directly and is what every
desk-scale computation uses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from types import MappingProxyType

from . import arith

TWO_NINTHS = 2.0 / 9.0
E_E = math.exp(math.e)
BAND_LO_EXP = 5.0 * math.pi / 3.0
BAND_HI_EXP = 7.0 * math.pi / 3.0


class ParamsError(ValueError):
    """Invalid or infeasible parameter schedule."""


class SupportTooLarge(RuntimeError):
    """Support enumeration exceeded the configured entry cap."""


@dataclass(frozen=True)
class ResonatorParams:
    a: float | None
    D: float
    delta: float | None
    x: float
    Z: float
    Y: float
    L: float
    B: float
    pminus_lo: float
    pminus_hi: float
    mode: str

    def __post_init__(self):
        if not (self.pminus_lo < self.pminus_hi):
            raise ParamsError("pminus band is empty or reversed")
        if self.B / 4.0 < 2.0:
            raise ParamsError(f"B = {self.B}: need B/4 >= 2")
        if self.B > self.x * (1 + 1e-12):
            raise ParamsError(f"B = {self.B} exceeds x = {self.x}")
        if abs(self.Y - math.sqrt(self.Z / self.x)) > 1e-12 * max(1.0, self.Y):
            raise ParamsError("Y is inconsistent with sqrt(Z/x)")


def _minimal_asymptotic_D(a: float) -> float:
    # smallest D with Y = min(D^(delta/2), D^(a/4)) > e^e
    delta = TWO_NINTHS - a
    expo = min(delta / 2.0, a / 4.0)
    return math.exp(math.e / expo)


def build_params(D: float, a: float | None = None, mode: str = "asymptotic",
                 **overrides) -> ResonatorParams:
    """Derive the full schedule.

    Asymptotic mode needs 0 < a < 2/9 and produces L = sqrt(log Y loglog Y);
    explicit mode needs an L override and accepts pminus_lo, pminus_hi, B,
    x, Z overrides (x defaults to D^a when a is given, Z to min(x D^delta,
    x^(3/2)) when a is given, else x^(3/2); B defaults to x).
    """
    if D < 2:
        raise ParamsError(f"need D >= 2, got {D}")
    if mode not in ("asymptotic", "explicit"):
        raise ParamsError(f"unknown mode {mode!r}")
    unknown = set(overrides) - {"L", "pminus_lo", "pminus_hi", "B", "x", "Z"}
    if unknown:
        raise ParamsError(f"unknown overrides: {sorted(unknown)}")

    delta = None
    if a is not None:
        if not (0.0 < a < TWO_NINTHS):
            raise ParamsError(f"need 0 < a < 2/9, got a = {a}")
        delta = TWO_NINTHS - a

    if mode == "asymptotic":
        if a is None:
            raise ParamsError("asymptotic mode requires a")
        if overrides:
            raise ParamsError("asymptotic mode takes no overrides")
        x = D**a
        Z = min(x * D**delta, x**1.5)
        Y = math.sqrt(Z / x)
        if Y <= E_E:
            raise ParamsError(
                f"infeasible: Y = {Y:.6g} <= e^e; asymptotic mode needs "
                f"D >= {_minimal_asymptotic_D(a):.4g} at a = {a}"
            )
        L = math.sqrt(math.log(Y) * math.log(math.log(Y)))
        B = x
        return ResonatorParams(a, D, delta, x, Z, Y, L, B,
                               L**BAND_LO_EXP, L**BAND_HI_EXP, mode)

    if "L" not in overrides:
        raise ParamsError("explicit mode requires an L override")
    L = float(overrides["L"])
    x = float(overrides.get("x", D**a if a is not None else 0.0))
    if x <= 1:
        raise ParamsError("explicit mode requires x > 1 (override or via a)")
    if "Z" in overrides:
        Z = float(overrides["Z"])
    elif a is not None:
        Z = min(x * D**delta, x**1.5)
    else:
        Z = x**1.5
    Y = math.sqrt(Z / x)
    B = float(overrides.get("B", x))
    plo = float(overrides.get("pminus_lo", L**BAND_LO_EXP))
    phi_ = float(overrides.get("pminus_hi", L**BAND_HI_EXP))
    return ResonatorParams(a, D, delta, x, Z, Y, L, B, plo, phi_, mode)


# --- prime coefficient formulas ------------------------------------------

def r_minus(p: int, params: ResonatorParams) -> float:
    """Low-band coefficient; 0 outside [pminus_lo, pminus_hi)."""
    if not (params.pminus_lo <= p < params.pminus_hi):
        return 0.0
    lp = math.log(p)
    return math.cos(lp / math.log(params.L**2)) * params.L / (math.sqrt(p) * lp)


def r_plus(p: int, epsilon_p: int, params: ResonatorParams) -> float:
    """High-band coefficient eps_p / (sqrt(p) (log x)^2)."""
    if not (params.B / 4.0 <= p <= params.B):
        raise ParamsError(f"p = {p} outside the high band [{params.B/4}, {params.B}]")
    if epsilon_p not in (-1, 1):
        raise ParamsError(f"epsilon must be +-1, got {epsilon_p}")
    return epsilon_p / (math.sqrt(p) * math.log(params.x) ** 2)


@dataclass(frozen=True)
class SignState:
    """eps_p assignments together with the partial-sum values behind them."""

    epsilon: MappingProxyType
    s_values: MappingProxyType

    def __post_init__(self):
        for p, e in self.epsilon.items():
            if e * self.s_values[p] > 0:
                raise ParamsError(f"sign rule violated at p = {p}")


@dataclass(frozen=True)
class CoefficientTable:
    """Sparse resonator data: band primes, per-prime values, optional signs,
    and (after enumeration) the squarefree support up to Z."""

    params: ResonatorParams
    pminus: tuple[int, ...]
    pplus: tuple[int, ...]
    r_at_prime: MappingProxyType
    epsilon: MappingProxyType | None = None
    support: tuple[tuple[int, float], ...] | None = None

    def r(self, p: int) -> float:
        return self.r_at_prime.get(p, 0.0)

    def with_signs(self, signs: SignState) -> "CoefficientTable":
        vals = dict(self.r_at_prime)
        for p in self.pplus:
            vals[p] = r_plus(p, signs.epsilon[p], self.params)
        return replace(self, r_at_prime=MappingProxyType(vals),
                       epsilon=signs.epsilon)

    def with_support(self, cap: int = 10**7) -> "CoefficientTable":
        return replace(self, support=enumerate_support(self, cap=cap))


def build_table(params: ResonatorParams) -> CoefficientTable:
    """Sieve both bands and fill in the low-band values.

    When the bands overlap at desk scale, the low band wins: high-band
    primes already in P- are dropped from P+ so that r stays well defined.
    """
    pminus = tuple(int(p) for p in arith.primes_in(params.pminus_lo, params.pminus_hi))
    hi = math.nextafter(params.B, math.inf)
    pplus_all = arith.primes_in(max(2.0, params.B / 4.0), hi)
    pm = set(pminus)
    pplus = tuple(int(p) for p in pplus_all if int(p) not in pm)
    vals = {p: r_minus(p, params) for p in pminus}
    return CoefficientTable(params, pminus, pplus, MappingProxyType(vals))


def r_prime(p: int, table: CoefficientTable) -> float:
    """Denominator-side twist r'(p) = r(p) sqrt(p/(p+1))."""
    return table.r(p) * math.sqrt(p / (p + 1.0))


def r_tilde(p: int, table: CoefficientTable) -> float:
    """Numerator-side twist r~(p) = r(p) / ((1 + 1/p)(1 + r'(p)^2))."""
    rp = r_prime(p, table)
    return table.r(p) / ((1.0 + 1.0 / p) * (1.0 + rp * rp))


def b_weight(m: arith.FactoredInteger, l: arith.FactoredInteger,
             table: CoefficientTable) -> float:
    """Product over odd primes p | m with p not dividing l of

        (p/(p+1)) (1 + r_-(p)^2) / (1 + r_-(p)^2 p/(p+1));

    equals 1 on an empty index set.  Only the low band contributes a
    nontrivial numerator since r_- vanishes elsewhere.
    """
    lp = set(l.primes)
    out = 1.0
    for p, _ in m.factors:
        if p == 2 or p in lp:
            continue
        out *= b_prime_factor(p, table.params)
    return out


def b_prime_factor(p: int, params: ResonatorParams) -> float:
    rm = r_minus(p, params)
    r2 = rm * rm
    return (p / (p + 1.0)) * (1.0 + r2) / (1.0 + r2 * p / (p + 1.0))


def r_full(n: arith.FactoredInteger, table: CoefficientTable) -> float:
    """r(n): product of prime values on odd squarefree n, else 0."""
    if not n.is_squarefree or not n.is_odd:
        return 0.0
    out = 1.0
    for p, _ in n.factors:
        v = table.r(p)
        if v == 0.0:
            return 0.0
        out *= v
    return out


def assign_signs(table: CoefficientTable, s_evaluator) -> SignState:
    """eps_p = -sign(S(x/p)) for every high-band prime; ties go to +1.

    `s_evaluator` must compute the low-band partial-sum functional S(y)
    (it never touches high-band coefficients, so there is no circularity).
    """
    x = table.params.x
    eps = {}
    svals = {}
    for p in table.pplus:
        s = float(s_evaluator(x / p))
        svals[p] = s
        eps[p] = -1 if s > 0 else 1
    return SignState(MappingProxyType(eps), MappingProxyType(svals))


def enumerate_support(table: CoefficientTable, Z: float | None = None,
                      cap: int = 10**7) -> tuple[tuple[int, float], ...]:
    """All n <= Z that are products of distinct band primes, with r(n).

    Depth-first products with early cutoff; sorted by n.  High-band primes
    require signs to have been assigned.
    """
    params = table.params
    if Z is None:
        Z = params.Z
    primes = sorted(set(table.pminus) | set(table.pplus))
    for p in table.pplus:
        if p not in table.r_at_prime:
            raise ParamsError("high-band values missing: assign signs first")
    out = [(1, 1.0)]

    def rec(idx, n, val):
        if len(out) > cap:
            raise SupportTooLarge(
                f"support exceeds {cap} entries; shrink Z or the bands")
        for i in range(idx, len(primes)):
            p = primes[i]
            m = n * p
            if m > Z:
                break
            v = val * table.r_at_prime[p]
            if v != 0.0:
                out.append((m, v))
                rec(i + 1, m, v)

    rec(0, 1, 1.0)
    out.sort()
    return tuple(out)


def sum_rplus_squared(table: CoefficientTable) -> float:
    """sum over the high band of r(p)^2; small at any feasible schedule."""
    lx2 = math.log(table.params.x) ** 2
    return math.fsum(1.0 / (p * lx2 * lx2) for p in table.pplus)
