"""Exact sparse arithmetic: multivariate polynomials over the rationals and
rational functions whose denominators are products of coordinate differences.

Representation choices, shared by the whole engine:

* Scalars are `fractions.Fraction` (arbitrary precision, always reduced).
* A polynomial is a dict mapping exponent tuples to nonzero Fractions.
  With L position variables the tuple has length L + 2: slots 0..L-1 hold
  the exponents of x_1..x_L, slot L the coupling `lam`, slot L + 1 the
  trap strength `om`.  The zero polynomial is the empty dict.
* A denominator profile is a dict mapping ordered site pairs (j, k) with
  1 <= j < k <= L to positive integer exponents; it stands for the
  product of (x_j - x_k)**e over its entries.  Signs from reversed pairs
  are absorbed into the numerator.
* RationalFunction pairs a numerator polynomial with a profile and keeps
  itself canonical: the numerator is never divisible by an active
  difference factor, and zero is uniquely (empty dict, empty profile).

Difference factors are irreducible, so canonical form never needs a
general multivariate GCD: divisibility by the monic linear factor
(x_j - x_k) is decided exactly by the substitution x_j -> x_k, and the
quotient falls out of synthetic division.

Polynomial dicts are shared freely between values; no function in this
module mutates an argument.
"""

from __future__ import annotations

from fractions import Fraction
from operator import add as _add
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

from .errors import PoleEvaluationError, ShapeMismatchError

Exponent = Tuple[int, ...]
Poly = Dict[Exponent, Fraction]
DiffFactor = Tuple[int, int]
Profile = Dict[DiffFactor, int]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def lam_slot(npos: int) -> int:
    """Exponent-tuple slot of the coupling variable."""
    return npos


def om_slot(npos: int) -> int:
    """Exponent-tuple slot of the trap-strength variable."""
    return npos + 1


def nvars(npos: int) -> int:
    return npos + 2


def var_name(npos: int, slot: int) -> str:
    if slot < npos:
        return f"x{slot + 1}"
    if slot == npos:
        return "lam"
    return "om"


# ---------------------------------------------------------------------------
# polynomials


def poly_zero() -> Poly:
    return {}


def poly_const(npos: int, value) -> Poly:
    c = Fraction(value)
    if not c:
        return {}
    return {(0,) * nvars(npos): c}


def poly_var(npos: int, slot: int, power: int = 1) -> Poly:
    mono = [0] * nvars(npos)
    mono[slot] = power
    return {tuple(mono): _ONE}


def poly_add(a: Poly, b: Poly) -> Poly:
    if not a:
        return b
    if not b:
        return a
    out = dict(a)
    for mono, c in b.items():
        s = out.get(mono)
        if s is None:
            out[mono] = c
        else:
            s = s + c
            if s:
                out[mono] = s
            else:
                del out[mono]
    return out


def _poly_iadd(target: Poly, p: Poly) -> None:
    # in-place accumulate; only for locally owned dicts
    for mono, c in p.items():
        s = target.get(mono)
        if s is None:
            target[mono] = c
        else:
            s = s + c
            if s:
                target[mono] = s
            else:
                del target[mono]


def poly_neg(a: Poly) -> Poly:
    return {mono: -c for mono, c in a.items()}


def poly_sub(a: Poly, b: Poly) -> Poly:
    return poly_add(a, poly_neg(b))


def poly_scale(a: Poly, scalar) -> Poly:
    c = Fraction(scalar)
    if not c:
        return {}
    return {mono: v * c for mono, v in a.items()}


def poly_mul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return {}
    if len(a) > len(b):
        a, b = b, a
    out: Poly = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            mono = tuple(map(_add, ma, mb))
            c = ca * cb
            s = out.get(mono)
            if s is None:
                out[mono] = c
            else:
                s = s + c
                if s:
                    out[mono] = s
                else:
                    del out[mono]
    return out


def poly_pow(a: Poly, power: int) -> Poly:
    if power < 0:
        raise ValueError("negative polynomial power")
    out = None
    for _ in range(power):
        out = a if out is None else poly_mul(out, a)
    if out is None:
        # empty product needs a variable count; callers avoid power == 0
        raise ValueError("poly_pow with power 0 is ambiguous; use poly_const")
    return out


def poly_derivative(a: Poly, slot: int) -> Poly:
    out: Poly = {}
    for mono, c in a.items():
        e = mono[slot]
        if e:
            m = mono[:slot] + (e - 1,) + mono[slot + 1:]
            out[m] = out.get(m, _ZERO) + c * e
    return {m: c for m, c in out.items() if c}


def poly_substitute(a: Poly, bindings: Mapping[int, Fraction]) -> Poly:
    """Replace the variables in `bindings` (slot -> value) exactly."""
    if not bindings:
        return a
    out: Poly = {}
    for mono, c in a.items():
        value = c
        m = list(mono)
        for slot, v in bindings.items():
            e = m[slot]
            if e:
                value = value * Fraction(v) ** e
                m[slot] = 0
        if not value:
            continue
        key = tuple(m)
        s = out.get(key, _ZERO) + value
        if s:
            out[key] = s
        elif key in out:
            del out[key]
    return out


def poly_eval(a: Poly, point: Sequence[Fraction]) -> Fraction:
    total = _ZERO
    for mono, c in a.items():
        v = c
        for slot, e in enumerate(mono):
            if e:
                v = v * Fraction(point[slot]) ** e
        total += v
    return total


def poly_occupies(a: Poly, slot: int) -> bool:
    return any(mono[slot] for mono in a)


def _subst_equal_vars(a: Poly, vj: int, vk: int) -> Poly:
    """Substitute x_vj -> x_vk; the remainder modulo (x_vj - x_vk)."""
    out: Poly = {}
    for mono, c in a.items():
        e = mono[vj]
        if e:
            m = list(mono)
            m[vj] = 0
            m[vk] += e
            mono = tuple(m)
        s = out.get(mono)
        if s is None:
            out[mono] = c
        else:
            s = s + c
            if s:
                out[mono] = s
            else:
                del out[mono]
    return out


def _shift_var(a: Poly, slot: int) -> Poly:
    out: Poly = {}
    for mono, c in a.items():
        out[mono[:slot] + (mono[slot] + 1,) + mono[slot + 1:]] = c
    return out


def poly_divexact_diff(a: Poly, vj: int, vk: int):
    """Exact quotient of `a` by (x_vj - x_vk), or None if not divisible.

    vj and vk are exponent slots (0-based).  Divisibility is equivalent to
    the remainder `a|_{x_vj -> x_vk}` vanishing; the quotient then comes
    from synthetic division in x_vj.
    """
    if not a:
        return {}
    if _subst_equal_vars(a, vj, vk):
        return None
    buckets: Dict[int, Poly] = {}
    for mono, c in a.items():
        d = mono[vj]
        buckets.setdefault(d, {})[mono[:vj] + (0,) + mono[vj + 1:]] = c
    top = max(buckets)
    quotient: Poly = {}
    carry: Poly = {}
    for d in range(top, 0, -1):
        carry = poly_add(buckets.get(d, {}), _shift_var(carry, vk))
        for mono, c in carry.items():
            quotient[mono[:vj] + (d - 1,) + mono[vj + 1:]] = c
    return quotient


def poly_sorted_items(a: Poly) -> List[Tuple[Exponent, Fraction]]:
    """Canonical iteration order: graded, then lexicographic, largest first."""
    return sorted(a.items(), key=lambda kv: (sum(kv[0]), kv[0]), reverse=True)


def poly_render(a: Poly, npos: int) -> str:
    if not a:
        return "0"
    chunks: List[str] = []
    for mono, c in poly_sorted_items(a):
        parts = []
        for slot, e in enumerate(mono):
            if e == 1:
                parts.append(var_name(npos, slot))
            elif e > 1:
                parts.append(f"{var_name(npos, slot)}^{e}")
        body = "*".join(parts)
        if not body:
            text = str(c)
        elif c == 1:
            text = body
        elif c == -1:
            text = f"-{body}"
        else:
            text = f"{c}*{body}"
        chunks.append(text)
    out = chunks[0]
    for text in chunks[1:]:
        if text.startswith("-"):
            out += f" - {text[1:]}"
        else:
            out += f" + {text}"
    return out


# ---------------------------------------------------------------------------
# difference-factor helpers

_DIFF_POW_CACHE: Dict[Tuple[int, int, int, int], Poly] = {}


def diff_power(npos: int, j: int, k: int, power: int) -> Poly:
    """(x_j - x_k)**power as a polynomial; j < k are 1-based sites."""
    key = (npos, j, k, power)
    cached = _DIFF_POW_CACHE.get(key)
    if cached is None:
        base = poly_add(poly_var(npos, j - 1), poly_scale(poly_var(npos, k - 1), -1))
        cached = poly_pow(base, power)
        _DIFF_POW_CACHE[key] = cached
    return cached


def profile_render(den: Profile, npos: int) -> str:
    parts = []
    for (j, k) in sorted(den):
        e = den[(j, k)]
        base = f"(x{j}-x{k})"
        parts.append(base if e == 1 else f"{base}^{e}")
    return "*".join(parts)


# ---------------------------------------------------------------------------
# rational functions


class RationalFunction:
    """Canonical quotient of a polynomial by a product of differences."""

    __slots__ = ("npos", "num", "den")

    def __init__(self, npos: int, num: Poly, den: Profile | None = None, *,
                 _canonical: bool = False):
        den = den or {}
        if not _canonical:
            num, den = _canonicalize(num, {f: e for f, e in den.items() if e})
        self.npos = npos
        self.num = num
        self.den = den

    # constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, npos: int) -> "RationalFunction":
        return cls(npos, {}, {}, _canonical=True)

    @classmethod
    def const(cls, npos: int, value) -> "RationalFunction":
        return cls(npos, poly_const(npos, value), {}, _canonical=True)

    @classmethod
    def from_poly(cls, npos: int, p: Poly) -> "RationalFunction":
        # caller dicts may carry zero coefficients; the canonical form never does
        return cls(npos, {m: c for m, c in p.items() if c}, {},
                   _canonical=True)

    @classmethod
    def position(cls, npos: int, j: int) -> "RationalFunction":
        return cls(npos, poly_var(npos, j - 1), {}, _canonical=True)

    @classmethod
    def coupling(cls, npos: int) -> "RationalFunction":
        return cls(npos, poly_var(npos, lam_slot(npos)), {}, _canonical=True)

    @classmethod
    def trap(cls, npos: int) -> "RationalFunction":
        return cls(npos, poly_var(npos, om_slot(npos)), {}, _canonical=True)

    @classmethod
    def inverse_difference(cls, npos: int, j: int, k: int,
                           power: int = 1) -> "RationalFunction":
        """1 / (x_j - x_k)**power with the pair stored in sorted order."""
        if j == k:
            raise ValueError("difference factor needs distinct sites")
        sign = 1
        if j > k:
            j, k = k, j
            sign = (-1) ** power
        return cls(npos, poly_const(npos, sign), {(j, k): power},
                   _canonical=True)

    # predicates -----------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.num

    def __eq__(self, other) -> bool:
        return (isinstance(other, RationalFunction)
                and self.npos == other.npos
                and self.den == other.den
                and self.num == other.num)

    __hash__ = None  # type: ignore[assignment]

    def _check(self, other: "RationalFunction") -> None:
        if self.npos != other.npos:
            raise ShapeMismatchError(
                f"mixed variable tables: {self.npos} and {other.npos} positions")

    # arithmetic -----------------------------------------------------------

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(self.npos, poly_neg(self.num), self.den,
                                _canonical=True)

    def __add__(self, other: "RationalFunction") -> "RationalFunction":
        self._check(other)
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        if self.den == other.den:
            num = poly_add(self.num, other.num)
            if not num:
                return RationalFunction.zero(self.npos)
            return RationalFunction(self.npos, num, self.den)
        return rf_sum(self.npos, (self, other))

    def __sub__(self, other: "RationalFunction") -> "RationalFunction":
        return self + (-other)

    def __mul__(self, other) -> "RationalFunction":
        if not isinstance(other, RationalFunction):
            scalar = Fraction(other)
            if not scalar:
                return RationalFunction.zero(self.npos)
            return RationalFunction(self.npos, poly_scale(self.num, scalar),
                                    self.den, _canonical=True)
        self._check(other)
        if self.is_zero or other.is_zero:
            return RationalFunction.zero(self.npos)
        num = poly_mul(self.num, other.num)
        if not self.den and not other.den:
            return RationalFunction(self.npos, num, {}, _canonical=True)
        den = dict(self.den)
        for f, e in other.den.items():
            den[f] = den.get(f, 0) + e
        return RationalFunction(self.npos, num, den)

    def __rmul__(self, other) -> "RationalFunction":
        return self.__mul__(other)

    # calculus and evaluation ----------------------------------------------

    def derivative(self, j: int) -> "RationalFunction":
        """Partial derivative with respect to the position x_j (1-based)."""
        if not 1 <= j <= self.npos:
            raise ValueError(f"position index {j} out of range")
        slot = j - 1
        pieces: List[RationalFunction] = []
        dnum = poly_derivative(self.num, slot)
        if dnum:
            pieces.append(RationalFunction(self.npos, dnum, self.den))
        for (a, b), e in self.den.items():
            if a == j:
                orient = 1
            elif b == j:
                orient = -1
            else:
                continue
            den = dict(self.den)
            den[(a, b)] = e + 1
            pieces.append(RationalFunction(
                self.npos, poly_scale(self.num, -e * orient), den))
        return rf_sum(self.npos, pieces)

    def substitute(self, bindings: Mapping[int, Fraction]) -> "RationalFunction":
        """Bind variables (by slot) to exact rationals.

        Every denominator factor must be either fully bound or fully free;
        a bound factor that evaluates to zero raises PoleEvaluationError.
        """
        if not bindings:
            return self
        scalar = _ONE
        den: Profile = {}
        for (j, k), e in self.den.items():
            jb = j - 1 in bindings
            kb = k - 1 in bindings
            if jb and kb:
                value = Fraction(bindings[j - 1]) - Fraction(bindings[k - 1])
                if not value:
                    raise PoleEvaluationError(
                        f"binding makes (x{j}-x{k}) vanish")
                scalar *= value ** e
            elif jb or kb:
                raise ValueError(
                    f"difference factor (x{j}-x{k}) only partially bound")
            else:
                den[(j, k)] = e
        num = poly_substitute(self.num, bindings)
        if scalar != 1:
            num = poly_scale(num, _ONE / scalar)
        return RationalFunction(self.npos, num, den)

    def evaluate(self, point: Sequence[Fraction]) -> Fraction:
        """Exact value at a full point (positions, lam, om)."""
        if len(point) != nvars(self.npos):
            raise ShapeMismatchError(
                f"point has {len(point)} coordinates, expected {nvars(self.npos)}")
        value = poly_eval(self.num, point)
        for (j, k), e in self.den.items():
            d = Fraction(point[j - 1]) - Fraction(point[k - 1])
            if not d:
                raise PoleEvaluationError(f"(x{j}-x{k}) vanishes at the point")
            value /= d ** e
        return value

    # rendering -------------------------------------------------------------

    def render(self) -> str:
        num = poly_render(self.num, self.npos)
        if not self.den:
            return f"({num})"
        return f"({num}) / ({profile_render(self.den, self.npos)})"

    def __repr__(self) -> str:
        return f"RationalFunction[{self.render()}]"


def _canonicalize(num: Poly, den: Profile) -> Tuple[Poly, Profile]:
    num = {m: c for m, c in num.items() if c}
    if not num:
        return {}, {}
    if not den:
        return num, {}
    out: Profile = {}
    for factor in sorted(den):
        e = den[factor]
        vj, vk = factor[0] - 1, factor[1] - 1
        while e:
            if not (poly_occupies(num, vj) and poly_occupies(num, vk)):
                break
            q = poly_divexact_diff(num, vj, vk)
            if q is None:
                break
            num = q
            e -= 1
        if e:
            out[factor] = e
    return num, out


def rf_sum(npos: int, items: Iterable[RationalFunction]) -> RationalFunction:
    """Sum many rational functions with a single canonicalization pass."""
    live = [r for r in items if r.num]
    if not live:
        return RationalFunction.zero(npos)
    if len(live) == 1:
        return live[0]
    lcm: Profile = {}
    for r in live:
        if r.npos != npos:
            raise ShapeMismatchError("mixed variable tables in sum")
        for f, e in r.den.items():
            if e > lcm.get(f, 0):
                lcm[f] = e
    total: Poly = {}
    for r in live:
        p = r.num
        for f, e in lcm.items():
            d = e - r.den.get(f, 0)
            if d:
                p = poly_mul(p, diff_power(npos, f[0], f[1], d))
        _poly_iadd(total, p)
    if not total:
        return RationalFunction.zero(npos)
    return RationalFunction(npos, total, lcm)
