"""Noncommutative operators: rational-function coefficients, partial
derivatives, and matrix-unit spin words over L sites of dimension N.

An operator is stored in normal form as a dict mapping

    (derivative monomial, spin word)  ->  RationalFunction coefficient

where the derivative monomial is a length-L tuple of nonnegative orders
and a spin word is a site-sorted tuple of atoms (site, a, b), each atom a
matrix unit E^{ab} acting on that site.  An absent site acts as the
identity; the empty word is the identity on all sites.  Coefficients
always stand to the left of derivatives, maintained through the single
rewrite rule

    d_j . r  =  r . d_j + (dr/dx_j)

applied via the general Leibniz expansion when products are formed.
Same-site atoms contract by E^{ab} E^{cd} = delta_{bc} E^{ad}, and the
trace relation sum_a E^{aa} = 1 of the defining representation is imposed
by eliminating E^{NN}: stored words never contain an (site, N, N) atom.
Per site the surviving words {identity} + {E^{ab} : (a,b) != (N,N)} are a
basis of the full N x N matrix algebra, so normal forms are unique and
term-dict equality coincides with equality of the operators themselves.

Term dicts are never mutated after an Operator is constructed; arithmetic
builds fresh dicts, so equal operators compare equal regardless of the
order their terms were accumulated in.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product as _iproduct
from math import comb
from operator import add as _tadd
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .errors import ShapeMismatchError, TermBudgetError
from .exact import (Poly, RationalFunction, lam_slot, nvars, om_slot,
                    poly_var, rf_sum)

Deriv = Tuple[int, ...]
SpinAtom = Tuple[int, int, int]
SpinWord = Tuple[SpinAtom, ...]
TermKey = Tuple[Deriv, SpinWord]

_DEFAULT_TERM_CEILING = 500_000
_term_ceiling = _DEFAULT_TERM_CEILING


def set_term_ceiling(limit: int) -> None:
    """Cap the number of normal-form terms any single result may hold."""
    global _term_ceiling
    if limit < 1:
        raise ValueError("term ceiling must be positive")
    _term_ceiling = limit


def get_term_ceiling() -> int:
    return _term_ceiling


def _budget_check(count: int) -> None:
    if count > _term_ceiling:
        raise TermBudgetError(
            f"operator exceeded the term ceiling ({count} > {_term_ceiling}); "
            "raise it via set_term_ceiling or the --term-ceiling flag")


@dataclass(frozen=True)
class OpSpace:
    """Shape of an operator algebra: N spin states on each of L sites."""

    spin_dim: int
    sites: int

    def __post_init__(self):
        if self.spin_dim < 1 or self.sites < 1:
            raise ValueError("OpSpace needs positive spin dimension and sites")

    @property
    def zero_deriv(self) -> Deriv:
        return (0,) * self.sites


def _insert_atom(word: SpinWord, atom: SpinAtom) -> SpinWord:
    i = 0
    while i < len(word) and word[i][0] < atom[0]:
        i += 1
    return word[:i] + (atom,) + word[i:]


def reduce_word(spin_dim: int, word: SpinWord) -> List[Tuple[int, SpinWord]]:
    """Expand every E^{NN} atom through E^{NN} = 1 - sum_{c<N} E^{cc}.

    Returns signed reduced words; words free of E^{NN} pass through as a
    single +1 entry.
    """
    for i, atom in enumerate(word):
        if atom[1] == spin_dim and atom[2] == spin_dim:
            site = atom[0]
            rest = word[:i] + word[i + 1:]
            out: List[Tuple[int, SpinWord]] = []
            for sign, tail in reduce_word(spin_dim, rest):
                out.append((sign, tail))
                for c in range(1, spin_dim):
                    out.append((-sign, _insert_atom(tail, (site, c, c))))
            return out
    return [(1, word)]


def word_mul(spin_dim: int, left: SpinWord,
             right: SpinWord) -> List[Tuple[int, SpinWord]]:
    """Signed reduced components of a word product; empty when annihilated.

    Inputs must already be reduced; a fresh E^{NN} can then only arise from
    a same-site contraction, and gets expanded on the spot.
    """
    if not left:
        return [(1, right)]
    if not right:
        return [(1, left)]
    out: List[SpinAtom] = []
    i = j = 0
    nl, nr = len(left), len(right)
    hot = False
    while i < nl and j < nr:
        la = left[i]
        ra = right[j]
        if la[0] < ra[0]:
            out.append(la)
            i += 1
        elif la[0] > ra[0]:
            out.append(ra)
            j += 1
        else:
            if la[2] != ra[1]:
                return []
            if la[1] == spin_dim and ra[2] == spin_dim:
                hot = True
            out.append((la[0], la[1], ra[2]))
            i += 1
            j += 1
    out.extend(left[i:])
    out.extend(right[j:])
    word = tuple(out)
    if not hot:
        return [(1, word)]
    return reduce_word(spin_dim, word)


def word_sites(word: SpinWord) -> Tuple[int, ...]:
    return tuple(atom[0] for atom in word)


class Operator:
    """Normal-form operator over an OpSpace."""

    __slots__ = ("space", "terms")

    def __init__(self, space: OpSpace, terms: Mapping[TermKey, RationalFunction],
                 *, _trusted: bool = False):
        if _trusted:
            self.space = space
            self.terms = dict(terms) if not isinstance(terms, dict) else terms
            return
        clean: Dict[TermKey, RationalFunction] = {}
        for (deriv, raw), coeff in terms.items():
            if coeff.is_zero:
                continue
            if coeff.npos != space.sites:
                raise ShapeMismatchError("coefficient over a different site count")
            for sign, word in reduce_word(space.spin_dim, raw):
                key = (deriv, word)
                part = coeff if sign > 0 else -coeff
                prev = clean.get(key)
                clean[key] = part if prev is None else prev + part
        self.space = space
        self.terms = {k: v for k, v in clean.items() if not v.is_zero}

    # constructors -----------------------------------------------------------

    @classmethod
    def zero(cls, space: OpSpace) -> "Operator":
        return cls(space, {}, _trusted=True)

    @classmethod
    def identity(cls, space: OpSpace) -> "Operator":
        coeff = RationalFunction.const(space.sites, 1)
        return cls(space, {(space.zero_deriv, ()): coeff}, _trusted=True)

    @classmethod
    def from_coefficient(cls, space: OpSpace, coeff: RationalFunction) -> "Operator":
        if coeff.is_zero:
            return cls.zero(space)
        return cls(space, {(space.zero_deriv, ()): coeff}, _trusted=True)

    @classmethod
    def spin_unit(cls, space: OpSpace, site: int, a: int, b: int) -> "Operator":
        """Matrix unit E^{ab} acting on one site (E^{NN} arrives expanded)."""
        if not 1 <= site <= space.sites:
            raise ValueError(f"site {site} out of range")
        if not (1 <= a <= space.spin_dim and 1 <= b <= space.spin_dim):
            raise ValueError(f"spin indices ({a},{b}) out of range")
        one = RationalFunction.const(space.sites, 1)
        terms: Dict[TermKey, RationalFunction] = {}
        for sign, word in reduce_word(space.spin_dim, ((site, a, b),)):
            terms[(space.zero_deriv, word)] = one if sign > 0 else -one
        return cls(space, terms, _trusted=True)

    @classmethod
    def derivative_op(cls, space: OpSpace, site: int, order: int = 1) -> "Operator":
        if not 1 <= site <= space.sites:
            raise ValueError(f"site {site} out of range")
        deriv = tuple(order if s == site else 0
                      for s in range(1, space.sites + 1))
        coeff = RationalFunction.const(space.sites, 1)
        return cls(space, {(deriv, ()): coeff}, _trusted=True)

    @classmethod
    def position_op(cls, space: OpSpace, site: int, power: int = 1) -> "Operator":
        if not 1 <= site <= space.sites:
            raise ValueError(f"site {site} out of range")
        npos = space.sites
        coeff = RationalFunction.from_poly(
            npos, poly_var(npos, site - 1, power))
        return cls(space, {(space.zero_deriv, ()): coeff}, _trusted=True)

    # predicates --------------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def term_count(self) -> int:
        return len(self.terms)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Operator)
                and self.space == other.space
                and self.terms == other.terms)

    __hash__ = None  # type: ignore[assignment]

    def _check(self, other: "Operator") -> None:
        if self.space != other.space:
            raise ShapeMismatchError(
                f"mixed operator spaces: {self.space} and {other.space}")

    # arithmetic ---------------------------------------------------------------

    def __neg__(self) -> "Operator":
        return Operator(self.space, {k: -v for k, v in self.terms.items()},
                        _trusted=True)

    def __add__(self, other: "Operator") -> "Operator":
        self._check(other)
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        out = dict(self.terms)
        for key, coeff in other.terms.items():
            prev = out.get(key)
            if prev is None:
                out[key] = coeff
            else:
                s = prev + coeff
                if s.is_zero:
                    del out[key]
                else:
                    out[key] = s
        _budget_check(len(out))
        return Operator(self.space, out, _trusted=True)

    def __sub__(self, other: "Operator") -> "Operator":
        return self + (-other)

    def __mul__(self, other) -> "Operator":
        if isinstance(other, Operator):
            self._check(other)
            acc: Dict[TermKey, List[RationalFunction]] = {}
            _accumulate_product(self, other, False, acc)
            return _finalize(self.space, acc)
        return self.scaled(other)

    def __rmul__(self, other) -> "Operator":
        return self.scaled(other)

    def scaled(self, scalar) -> "Operator":
        """Multiply every coefficient by a Fraction or RationalFunction."""
        if isinstance(scalar, RationalFunction):
            if scalar.is_zero:
                return Operator.zero(self.space)
            out = {k: v * scalar for k, v in self.terms.items()}
            return Operator(self.space,
                            {k: v for k, v in out.items() if not v.is_zero},
                            _trusted=True)
        c = Fraction(scalar)
        if not c:
            return Operator.zero(self.space)
        return Operator(self.space, {k: v * c for k, v in self.terms.items()},
                        _trusted=True)

    # substitution and rendering ----------------------------------------------

    def substitute(self, bindings: Mapping[str, Fraction]) -> "Operator":
        """Bind the scalar parameters "lam" and/or "om" to exact rationals."""
        slots: Dict[int, Fraction] = {}
        npos = self.space.sites
        for name, value in bindings.items():
            if name == "lam":
                slots[lam_slot(npos)] = Fraction(value)
            elif name == "om":
                slots[om_slot(npos)] = Fraction(value)
            else:
                raise ValueError(f"unknown parameter {name!r}; "
                                 "positions stay symbolic in operators")
        if not slots:
            return self
        out: Dict[TermKey, RationalFunction] = {}
        for key, coeff in self.terms.items():
            c = coeff.substitute(slots)
            if not c.is_zero:
                out[key] = c
        return Operator(self.space, out, _trusted=True)

    def sorted_terms(self) -> List[Tuple[TermKey, RationalFunction]]:
        return sorted(self.terms.items(), key=lambda kv: kv[0])

    def render(self) -> str:
        """Deterministic text form: one `coeff * d-word * spin-word` per line."""
        if not self.terms:
            return "0"
        lines = []
        for (deriv, word), coeff in self.sorted_terms():
            dparts = [f"d{j + 1}" if e == 1 else f"d{j + 1}^{e}"
                      for j, e in enumerate(deriv) if e]
            dstr = "*".join(dparts) or "1"
            wparts = [f"E{site}[{a},{b}]" for (site, a, b) in word]
            wstr = "*".join(wparts) or "1"
            lines.append(f"{coeff.render()} * {dstr} * {wstr}")
        return "\n".join(lines)

    def __repr__(self) -> str:
        return f"Operator<{self.space.spin_dim},{self.space.sites}>({self.term_count} terms)"


# ---------------------------------------------------------------------------
# products


def _multi_derivative(r: RationalFunction, gamma: Deriv,
                      cache: Dict) -> RationalFunction:
    if not any(gamma):
        return r
    key = (id(r), gamma)
    hit = cache.get(key)
    if hit is not None:
        return hit
    for j, e in enumerate(gamma, start=1):
        if e:
            lower = gamma[:j - 1] + (e - 1,) + gamma[j:]
            prev = _multi_derivative(r, lower, cache)
            out = prev.derivative(j)
            break
    cache[key] = out
    return out


def _leibniz(alpha: Deriv, r: RationalFunction,
             cache: Dict) -> List[Tuple[Deriv, RationalFunction]]:
    """Expand d^alpha . r into sum of coeff(beta) * d^beta with beta <= alpha."""
    key = ("L", id(r), alpha)
    hit = cache.get(key)
    if hit is not None:
        return hit
    out: List[Tuple[Deriv, RationalFunction]] = []
    for beta in _iproduct(*(range(a + 1) for a in alpha)):
        gamma = tuple(a - b for a, b in zip(alpha, beta))
        rg = _multi_derivative(r, gamma, cache)
        if rg.is_zero:
            continue
        factor = 1
        for a, b in zip(alpha, beta):
            factor *= comb(a, b)
        out.append((beta, rg if factor == 1 else rg * factor))
    cache[key] = out
    return out


def _accumulate_product(left: Operator, right: Operator, negate: bool,
                        acc: Dict[TermKey, List[RationalFunction]]) -> None:
    if left.is_zero or right.is_zero:
        return
    zero_deriv = left.space.zero_deriv
    ndim = left.space.spin_dim
    by_deriv: Dict[Deriv, List[Tuple[SpinWord, RationalFunction]]] = {}
    for (deriv, word), coeff in left.terms.items():
        by_deriv.setdefault(deriv, []).append((word, coeff))
    cache: Dict = {}
    for (rderiv, rword), rcoeff in right.terms.items():
        for alpha, group in by_deriv.items():
            if alpha == zero_deriv:
                expansion = ((zero_deriv, rcoeff),)
            else:
                expansion = _leibniz(alpha, rcoeff, cache)
            for lword, lcoeff in group:
                words = word_mul(ndim, lword, rword)
                if not words:
                    continue
                for beta, rpart in expansion:
                    if beta == zero_deriv:
                        deriv = rderiv
                    else:
                        deriv = tuple(map(_tadd, beta, rderiv))
                    value = lcoeff * rpart
                    if negate:
                        value = -value
                    minus = None
                    for sign, word in words:
                        if sign > 0:
                            acc.setdefault((deriv, word), []).append(value)
                        else:
                            if minus is None:
                                minus = -value
                            acc.setdefault((deriv, word), []).append(minus)
        _budget_check(len(acc))


def _finalize(space: OpSpace, acc: Dict[TermKey, List[RationalFunction]]) -> Operator:
    npos = space.sites
    terms: Dict[TermKey, RationalFunction] = {}
    for key, items in acc.items():
        total = rf_sum(npos, items)
        if not total.is_zero:
            terms[key] = total
    _budget_check(len(terms))
    return Operator(space, terms, _trusted=True)


def commutator(a: Operator, b: Operator) -> Operator:
    """[a, b] with a single accumulation/canonicalization pass."""
    a._check(b)
    acc: Dict[TermKey, List[RationalFunction]] = {}
    _accumulate_product(a, b, False, acc)
    _accumulate_product(b, a, True, acc)
    return _finalize(a.space, acc)


def operator_sum(space: OpSpace, items: Iterable[Operator]) -> Operator:
    acc: Dict[TermKey, List[RationalFunction]] = {}
    for op in items:
        if op.space != space:
            raise ShapeMismatchError("mixed operator spaces in sum")
        for key, coeff in op.terms.items():
            acc.setdefault(key, []).append(coeff)
    return _finalize(space, acc)


# ---------------------------------------------------------------------------
# application to spin vectors (the evaluation oracle)

SpinBasis = Tuple[int, ...]
SpinVector = Dict[SpinBasis, RationalFunction]


def word_apply(word: SpinWord, basis: SpinBasis) -> Optional[SpinBasis]:
    """Image of a basis ket under a spin word, or None if annihilated."""
    state = list(basis)
    for (site, a, b) in word:
        if state[site - 1] != b:
            return None
        state[site - 1] = a
    return tuple(state)


def apply_operator(op: Operator, vec: SpinVector) -> SpinVector:
    """Apply an operator to a spin vector with rational-function amplitudes."""
    npos = op.space.sites
    acc: Dict[SpinBasis, List[RationalFunction]] = {}
    cache: Dict = {}
    for (deriv, word), coeff in op.terms.items():
        for basis, amp in vec.items():
            target = word_apply(word, basis)
            if target is None:
                continue
            value = _multi_derivative(amp, deriv, cache)
            if value.is_zero:
                continue
            acc.setdefault(target, []).append(coeff * value)
    out: SpinVector = {}
    for basis, items in acc.items():
        total = rf_sum(npos, items)
        if not total.is_zero:
            out[basis] = total
    return out


def vector_sub(npos: int, a: SpinVector, b: SpinVector) -> SpinVector:
    out: SpinVector = dict(a)
    for basis, amp in b.items():
        prev = out.get(basis)
        s = -amp if prev is None else prev - amp
        if s.is_zero:
            out.pop(basis, None)
        else:
            out[basis] = s
    return out


def vector_scale(vec: SpinVector, scalar) -> SpinVector:
    out: SpinVector = {}
    for basis, amp in vec.items():
        s = amp * scalar
        if not s.is_zero:
            out[basis] = s
    return out


def evaluate_vector(vec: SpinVector,
                    point: Sequence[Fraction]) -> Dict[SpinBasis, Fraction]:
    """Evaluate every amplitude at a full point; drops exact zeros."""
    out: Dict[SpinBasis, Fraction] = {}
    for basis, amp in vec.items():
        value = amp.evaluate(point)
        if value:
            out[basis] = value
    return out


def op_apply(op: Operator, amplitude: RationalFunction, basis: SpinBasis,
             point: Sequence[Fraction]) -> Dict[SpinBasis, Fraction]:
    """Apply `op` to the simple tensor amplitude(x) (x) basis and evaluate.

    Derivatives act symbolically on the amplitude before anything is
    evaluated, so the result is exact.
    """
    if len(basis) != op.space.sites:
        raise ShapeMismatchError("basis tuple length differs from site count")
    return evaluate_vector(apply_operator(op, {basis: amplitude}), point)
