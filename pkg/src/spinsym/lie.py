"""Orthogonal/symplectic structure in the matrix-unit presentation.

The algebra is fixed by an even/odd dimension N and a sign theta0:
theta0 = +1 selects so(N), theta0 = -1 selects sp(N) (N even).  Index
signs, the conjugate index, the signed generators

    F^{ab} = E^{ab} - theta_a theta_b E^{bar b, bar a}

the admissible index set, structure constants, and the invariant metric
with its exact inverse all live here.  Generators are provided both as
N x N Fraction matrices (for traces, rank and closure oracles) and as
site-local Operators.

All tables are exact, deterministic and cached per algebra.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Tuple

from .errors import SingularMetricError
from .operators import Operator, OpSpace

Pair = Tuple[int, int]
Row = Dict[Pair, Fraction]

_HALF = Fraction(1, 2)


@dataclass(frozen=True)
class AlgebraSpec:
    """so(N) for theta0 = +1, sp(N) for theta0 = -1 (N even)."""

    N: int
    theta0: int

    def __post_init__(self):
        if self.N < 2:
            raise ValueError("N must be at least 2")
        if self.theta0 not in (1, -1):
            raise ValueError("theta0 must be +1 or -1")
        if self.theta0 == -1 and self.N % 2:
            raise ValueError("theta0 = -1 requires even N")

    @property
    def family(self) -> str:
        return "so" if self.theta0 == 1 else "sp"

    def describe(self) -> str:
        return f"{self.family}({self.N})"


def theta(spec: AlgebraSpec, a: int) -> int:
    """Index sign: +1 on the first half (and everywhere for odd N)."""
    if not 1 <= a <= spec.N:
        raise ValueError(f"index {a} out of range for N={spec.N}")
    if spec.N % 2 or a <= spec.N // 2:
        return 1
    return spec.theta0


def conjugate_index(spec: AlgebraSpec, a: int) -> int:
    """The reflected index bar(a) = N + 1 - a."""
    if not 1 <= a <= spec.N:
        raise ValueError(f"index {a} out of range for N={spec.N}")
    return spec.N + 1 - a


@lru_cache(maxsize=None)
def basis(spec: AlgebraSpec) -> Tuple[Pair, ...]:
    """Admissible generator labels, lexicographically ordered.

    so(N) keeps (a, b) with bar(a) > b; sp(N) also keeps bar(a) = b.
    Sizes come out to N(N-1)/2 and N(N+1)/2 respectively.
    """
    out = []
    for a in range(1, spec.N + 1):
        abar = conjugate_index(spec, a)
        for b in range(1, spec.N + 1):
            if abar > b or (spec.theta0 == -1 and abar == b):
                out.append((a, b))
    return tuple(out)


def is_basis_pair(spec: AlgebraSpec, a: int, b: int) -> bool:
    abar = conjugate_index(spec, a)
    return abar > b or (spec.theta0 == -1 and abar == b)


def generator_matrix(spec: AlgebraSpec, a: int, b: int) -> Tuple[Tuple[Fraction, ...], ...]:
    """F^{ab} in the defining representation, defined on the full square."""
    n = spec.N
    rows = [[Fraction(0)] * n for _ in range(n)]
    rows[a - 1][b - 1] += 1
    sign = theta(spec, a) * theta(spec, b)
    rows[conjugate_index(spec, b) - 1][conjugate_index(spec, a) - 1] -= sign
    return tuple(tuple(r) for r in rows)


def generator_op(spec: AlgebraSpec, space: OpSpace, site: int,
                 a: int, b: int) -> Operator:
    """F^{ab} acting on one site of an operator space."""
    if space.spin_dim != spec.N:
        raise ValueError("operator space spin dimension differs from N")
    unit = Operator.spin_unit(space, site, a, b)
    sign = theta(spec, a) * theta(spec, b)
    mirror = Operator.spin_unit(space, site, conjugate_index(spec, b),
                                conjugate_index(spec, a))
    return unit - mirror.scaled(sign)


def _pair_weight(spec: AlgebraSpec, i: int, j: int) -> Fraction:
    # weight attached to a row label (e, f): 1 above the diagonal reflection,
    # 1/2 exactly on it (reachable only in the symplectic family)
    if i > j:
        return Fraction(1)
    if i == j:
        return _HALF
    raise ValueError("row label outside the admissible set")


def structure_row(spec: AlgebraSpec, ab: Pair, cd: Pair) -> Row:
    """Expansion of [F^{ab}, F^{cd}] over the admissible basis."""
    table = structure_table(spec)
    try:
        return table[(ab, cd)]
    except KeyError:
        raise ValueError(f"labels {ab}, {cd} not in the admissible set") from None


@lru_cache(maxsize=None)
def structure_table(spec: AlgebraSpec) -> Dict[Tuple[Pair, Pair], Row]:
    """All structure-constant rows, keyed by ordered basis label pairs."""
    pairs = basis(spec)
    th = {a: theta(spec, a) for a in range(1, spec.N + 1)}
    bar = {a: conjugate_index(spec, a) for a in range(1, spec.N + 1)}
    table: Dict[Tuple[Pair, Pair], Row] = {}
    for (a, b) in pairs:
        for (c, d) in pairs:
            row: Row = {}
            for (e, f) in pairs:
                value = Fraction(0)
                fbar = bar[f]
                ebar = bar[e]
                if b == c:
                    term = (1 if (a == e and d == f) else 0) \
                        - (th[a] * th[d] if (a == fbar and d == ebar) else 0)
                    value += term
                if a == d:
                    term = (1 if (b == f and c == e) else 0) \
                        - (th[b] * th[c] if (b == ebar and c == fbar) else 0)
                    value -= term
                if a == bar[c]:
                    term = (th[a] * th[b] if (b == ebar and d == f) else 0) \
                        - (th[c] * th[d] if (b == f and d == ebar) else 0)
                    value -= term
                if b == bar[d]:
                    term = (th[a] * th[b] if (a == fbar and c == e) else 0) \
                        - (th[c] * th[d] if (a == e and c == fbar) else 0)
                    value += term
                if value:
                    weighted = value * _pair_weight(spec, ebar, f)
                    if weighted:
                        row[(e, f)] = weighted
            table[((a, b), (c, d))] = row
    return table


# ---------------------------------------------------------------------------
# invariant metric


@dataclass(frozen=True)
class MetricTensor:
    """g^{ab,cd} = Tr(F^{ab} F^{cd}) / 2 over the basis, plus its inverse."""

    labels: Tuple[Pair, ...]
    matrix: Tuple[Tuple[Fraction, ...], ...]
    inverse: Tuple[Tuple[Fraction, ...], ...]

    def index(self, pair: Pair) -> int:
        return self.labels.index(pair)

    def entry(self, ab: Pair, cd: Pair) -> Fraction:
        return self.matrix[self.index(ab)][self.index(cd)]

    def inverse_entry(self, ab: Pair, cd: Pair) -> Fraction:
        return self.inverse[self.index(ab)][self.index(cd)]


def _mat_mul(a, b):
    n = len(a)
    return [[sum((a[i][k] * b[k][j] for k in range(n)), Fraction(0))
             for j in range(n)] for i in range(n)]


def _trace(m) -> Fraction:
    return sum((m[i][i] for i in range(len(m))), Fraction(0))


def invert_matrix(matrix: List[List[Fraction]]) -> List[List[Fraction]]:
    """Exact inverse by Gauss-Jordan elimination over the rationals."""
    n = len(matrix)
    work = [list(row) + [Fraction(1) if i == j else Fraction(0)
                         for j in range(n)] for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if work[r][col]), None)
        if pivot is None:
            raise SingularMetricError("bilinear form is singular")
        work[col], work[pivot] = work[pivot], work[col]
        scale = work[col][col]
        work[col] = [v / scale for v in work[col]]
        for r in range(n):
            if r != col and work[r][col]:
                factor = work[r][col]
                work[r] = [v - factor * w for v, w in zip(work[r], work[col])]
    return [row[n:] for row in work]


@lru_cache(maxsize=None)
def metric(spec: AlgebraSpec) -> MetricTensor:
    labels = basis(spec)
    mats = [generator_matrix(spec, a, b) for (a, b) in labels]
    size = len(labels)
    g = [[_trace(_mat_mul(mats[i], mats[j])) * _HALF for j in range(size)]
         for i in range(size)]
    inverse = invert_matrix(g)
    return MetricTensor(labels,
                        tuple(tuple(row) for row in g),
                        tuple(tuple(row) for row in inverse))


# ---------------------------------------------------------------------------
# raising and lowering basis-pair slots


@lru_cache(maxsize=None)
def lowered_adjoint_constants(spec: AlgebraSpec) -> Dict[Pair, Dict[Tuple[Pair, Pair], Fraction]]:
    """Rows with the second upper pair pulled down by the inverse metric.

    lowered[ab][(pq, ij)] carries the coefficient obtained from the plain
    row table by contracting its middle slot: sum_cd inv(pq,cd) * f[ab,cd][ij].
    """
    labels = basis(spec)
    g = metric(spec)
    table = structure_table(spec)
    out: Dict[Pair, Dict[Tuple[Pair, Pair], Fraction]] = {}
    for ab in labels:
        entry: Dict[Tuple[Pair, Pair], Fraction] = {}
        for p, pq in enumerate(labels):
            for c, cd in enumerate(labels):
                weight = g.inverse[p][c]
                if not weight:
                    continue
                for ij, value in table[(ab, cd)].items():
                    key = (pq, ij)
                    total = entry.get(key, Fraction(0)) + weight * value
                    if total:
                        entry[key] = total
                    elif key in entry:
                        del entry[key]
        out[ab] = entry
    return out


@lru_cache(maxsize=None)
def raised_constants(spec: AlgebraSpec) -> Dict[Tuple[Pair, Pair, Pair], Fraction]:
    """Fully raised rows: sum_pq f[ij,kl][pq] * g(pq,mn), keyed (ij,kl,mn)."""
    labels = basis(spec)
    g = metric(spec)
    table = structure_table(spec)
    out: Dict[Tuple[Pair, Pair, Pair], Fraction] = {}
    for ij in labels:
        for kl in labels:
            row = table[(ij, kl)]
            if not row:
                continue
            for m, mn in enumerate(labels):
                total = Fraction(0)
                for pq, value in row.items():
                    total += value * g.matrix[g.index(pq)][m]
                if total:
                    out[(ij, kl, mn)] = total
    return out


def restore_second_pair(spec: AlgebraSpec, ab: Pair) -> Dict[Tuple[Pair, Pair], Fraction]:
    """Raise the lowered middle slot back with the metric (round-trip check)."""
    labels = basis(spec)
    g = metric(spec)
    lowered = lowered_adjoint_constants(spec)[ab]
    out: Dict[Tuple[Pair, Pair], Fraction] = {}
    for (pq, ij), value in lowered.items():
        p = g.index(pq)
        for c, cd in enumerate(labels):
            weight = g.matrix[p][c]
            if not weight:
                continue
            key = (cd, ij)
            total = out.get(key, Fraction(0)) + value * weight
            if total:
                out[key] = total
            elif key in out:
                del out[key]
    return out
