"""Explicit polynomials for ``det T`` and ``gamma = alpha det T``.

At ``phi = pi/2`` the diagonal of T is just ``Z_k +- i Y_k`` and both
``det T`` and the numerator ``gamma`` of ``alpha`` are integer polynomials
in the ``2M - 1`` couplings.  At other phases the same polynomials hold in
the effective couplings ``Zt_k = 2 cos(phi) + Z_k``.

The tables below list every term for ``M = 2, 3`` and
for the low-order (weak-coupling) part of ``M = 4``.  They are checked
against the numerical functionals by exact coefficient extraction on an
integer grid (see :func:`coefficient_table`).
"""
from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping

import numpy as np

from . import kernels
from .errors import DegreeBoundExceeded, DimensionMismatch, UnsupportedM
from .lattice import LatticePotential, PhaseEnergy


@dataclass(frozen=True, eq=False)
class EffectiveCouplings:
    """``Zt_0 .. Zt_{M-1}`` (diagonal real parts incl. ``2 cos phi``) and ``Y_1 .. Y_{M-1}``."""

    Zt: np.ndarray
    Y: np.ndarray

    def __post_init__(self):
        Zt = np.asarray(self.Zt, dtype=float).reshape(-1)
        Y = np.asarray(self.Y, dtype=float).reshape(-1)
        if Zt.size == 0 or Y.size != Zt.size - 1:
            raise DimensionMismatch(f"need len(Y) == len(Zt) - 1, got {Zt.size}, {Y.size}")
        object.__setattr__(self, "Zt", Zt)
        object.__setattr__(self, "Y", Y)

    @property
    def M(self) -> int:
        return self.Zt.size

    @classmethod
    def from_potential(cls, pot: LatticePotential, phi: PhaseEnergy) -> "EffectiveCouplings":
        return cls(phi.two_cos + pot.Z, pot.Y)

    @classmethod
    def from_vector(cls, values, M) -> "EffectiveCouplings":
        """Inverse of :meth:`vector`: ``(Zt_0..Zt_{M-1}, Y_1..Y_{M-1})``."""
        values = np.asarray(values, dtype=float)
        return cls(values[:M], values[M:])

    def vector(self) -> np.ndarray:
        return np.concatenate([self.Zt, self.Y])

    def scaled(self, eps) -> "EffectiveCouplings":
        return EffectiveCouplings(eps * self.Zt, eps * self.Y)

    def values(self) -> dict:
        out = {f"Z{k}": self.Zt[k] for k in range(self.M)}
        out.update({f"Y{k}": self.Y[k - 1] for k in range(1, self.M)})
        return out

    def diagonal(self) -> np.ndarray:
        right = self.Zt.astype(complex)
        right[1:] += 1j * self.Y
        return np.concatenate([np.conj(right[:0:-1]), right])


def variable_names(M):
    return [f"Z{k}" for k in range(M)] + [f"Y{k}" for k in range(1, M)]


# -- closed-form polynomials ---------------------------------------------

_TERM = re.compile(r"([+-])\s*(\d*)\s*((?:[ZY]\d+(?:\^\d+)?\s*)*)")
_FACTOR = re.compile(r"([ZY]\d+)(?:\^(\d+))?")


def parse_polynomial(text):
    """``"Z0 Z1^2 - 2 Z1"`` -> ``[(1, {'Z0': 1, 'Z1': 2}), (-2, {'Z1': 1})]``."""
    text = text.strip()
    if not text.startswith(("+", "-")):
        text = "+" + text
    terms = []
    pos = 0
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse polynomial near {text[pos:]!r}")
        sign, coef, body = m.groups()
        c = int(coef) if coef else 1
        if not coef and not body.strip():
            raise ValueError(f"empty term in {text!r}")
        exps = {}
        for name, e in _FACTOR.findall(body):
            exps[name] = exps.get(name, 0) + (int(e) if e else 1)
        terms.append((-c if sign == "-" else c, exps))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return terms


CLOSED_FORMS = {
    2: {
        "det": "Z0 Z1^2 - 2 Z1 + Y1^2 Z0",
        "re_gamma": "Z0 Z1 - 1",
        "im_gamma": "-Z0 Y1",
    },
    3: {
        "det": ("Z0 Z1^2 Z2^2 - 2 Z0 Z1 Z2 - 2 Z1 Z2^2 + Y1^2 Z0 Z2^2 + 2 Z2"
                " + Y2^2 Z0 Z1^2 - 2 Y2^2 Z1 + Y2^2 Y1^2 Z0 + 2 Z0 Y1 Y2 + Z0"),
        "re_gamma": "Z0 Z1^2 Z2 - 2 Z1 Z2 + Y1^2 Z0 Z2 - Z1 Z0 + 1",
        "im_gamma": "-Z0 Z1^2 Y2 + 2 Z1 Y2 - Y1^2 Z0 Y2 - Y1 Z0",
    },
    # M = 4: low-order parts only; docs/m4_polynomials.md has the full expansion
    4: {
        "det": ("-2 Z3 - 2 Z1 + Y1^2 Z0 + 4 Z1 Z2 Z3 - 4 Z1 Y2 Y3 + Z1^2 Z0"
                " + 2 Y3^2 Z2 + 2 Y1 Z0 Y3 + 2 Z1 Z0 Z3 + Z3^2 Z0 + Y3^2 Z0"
                " + 2 Z3^2 Z2"),
        "re_gamma_2": "-1 + 2 Z2 Z3 + Z0 Z1 + Z0 Z3 + 2 Z2 Z1",
        "re_gamma_4": ("-2 Z0 Z1 Z2 Z3 + 2 Z0 Y1 Y2 Z3 - Z2 Y1^2 Z0"
                       " - 2 Z2^2 Z1 Z3 - Z2 Z1^2 Z0 - 2 Y2^2 Z1 Z3"),
        "im_gamma_2": "-2 Z2 Y3 + 2 Y2 Z1 - Z0 Y1 - Z0 Y3",
        "im_gamma_4": ("-Y2 Y1^2 Z0 - Y2 Z1^2 Z0 + 2 Y2^2 Z1 Y3"
                       " + 2 Z0 Z1 Z2 Y3 + 2 Z2^2 Z1 Y3 - 2 Z0 Y1 Y2 Y3"),
    },
}

CLOSED_FORM_TERMS = {M: {key: parse_polynomial(text) for key, text in table.items()}
                 for M, table in CLOSED_FORMS.items()}


def evaluate_terms(terms, ec: EffectiveCouplings) -> float:
    vals = ec.values()
    total = 0.0
    for coef, exps in terms:
        t = float(coef)
        for name, e in exps.items():
            t *= vals[name] ** e
        total += t
    return total


def _require(ec, allowed):
    if ec.M not in allowed:
        raise UnsupportedM(f"M={ec.M} not supported here (allowed: {sorted(allowed)})")


def det_polynomial(ec: EffectiveCouplings) -> float:
    """Closed form of ``det T`` for ``M = 2, 3``."""
    _require(ec, (2, 3))
    return evaluate_terms(CLOSED_FORM_TERMS[ec.M]["det"], ec)


def gamma_polynomial(ec: EffectiveCouplings) -> complex:
    """Closed form of ``gamma`` (numerator of ``alpha``) for ``M = 2, 3``."""
    _require(ec, (2, 3))
    t = CLOSED_FORM_TERMS[ec.M]
    return complex(evaluate_terms(t["re_gamma"], ec), evaluate_terms(t["im_gamma"], ec))


def weak_coupling_M4_det(ec: EffectiveCouplings) -> float:
    """Linear plus cubic part of ``det T`` at ``M = 4`` (12 monomials)."""
    _require(ec, (4,))
    return evaluate_terms(CLOSED_FORM_TERMS[4]["det"], ec)


def weak_coupling_M4_gamma(ec: EffectiveCouplings, order=2) -> complex:
    """Low-order part of ``gamma`` at ``M = 4``, through degree 2 or 4."""
    _require(ec, (4,))
    if order not in (2, 4):
        raise ValueError(f"order must be 2 or 4, got {order}")
    t = CLOSED_FORM_TERMS[4]
    re_, im_ = evaluate_terms(t["re_gamma_2"], ec), evaluate_terms(t["im_gamma_2"], ec)
    if order == 4:
        re_ += evaluate_terms(t["re_gamma_4"], ec)
        im_ += evaluate_terms(t["im_gamma_4"], ec)
    return complex(re_, im_)


# -- numerical functionals ------------------------------------------------

def det_numeric(ec: EffectiveCouplings) -> complex:
    """``det T`` by the continuant recurrence."""
    return complex(kernels.continuant(ec.diagonal())[0])


def gamma_numeric(ec: EffectiveCouplings) -> complex:
    """``gamma = alpha det T``: the continuant of the leading ``2M-2`` block.

    ``alpha = R[n-1, n-1]`` is that cofactor over ``det T``; computing the
    cofactor directly keeps ``gamma`` defined where ``det T = 0``.
    """
    d = ec.diagonal()
    if d.size == 1:
        return 1.0 + 0.0j
    return complex(kernels.continuant(d[:-1])[0])


# -- exact coefficient extraction -----------------------------------------

def _scaled_inverse_vandermonde(D):
    """Integer ``D! * V^-1`` for nodes ``0..D``; row j gives the x^j coefficient."""
    K = math.factorial(D)
    nodes = range(D + 1)
    W = [[0] * (D + 1) for _ in nodes]
    for k in nodes:
        # Lagrange basis polynomial l_k(x) = prod_{i != k} (x - i) / (k - i)
        poly = [Fraction(1)]
        for i in nodes:
            if i == k:
                continue
            nxt = [Fraction(0)] * (len(poly) + 1)
            for p, c in enumerate(poly):
                nxt[p + 1] += c / (k - i)
                nxt[p] -= c * i / (k - i)
            poly = nxt
        for j, c in enumerate(poly):
            v = c * K
            assert v.denominator == 1
            W[j][k] = int(v)
    return K, np.array(W, dtype=object)


def coefficient_table(f: Callable[[EffectiveCouplings], float], M, max_degree=2,
                      atol=None):
    """All monomial coefficients of the polynomial functional ``f``.

    ``f`` is sampled on the integer grid ``{0, .., max_degree + 1}`` in each
    of the ``2M - 1`` couplings; exact (integer-scaled) interpolation along
    every axis yields the coefficients.  The extra node per axis must
    interpolate to a zero top coefficient, otherwise the degree bound is
    wrong and :class:`DegreeBoundExceeded` is raised.

    When every sample is an integer the result is exact (``Fraction``
    values); otherwise float arithmetic is used and ``atol`` bounds the
    annihilation check.

    Returns
    -------
    dict
        ``{exponent tuple: coefficient}`` for the nonzero coefficients, with
        exponents ordered as :func:`variable_names`.
    """
    nvar = 2 * M - 1
    D = max_degree + 1
    grid = np.empty((D + 1,) * nvar, dtype=float)
    for idx in itertools.product(range(D + 1), repeat=nvar):
        grid[idx] = f(EffectiveCouplings.from_vector(idx, M))
    if not np.all(np.isfinite(grid)):
        raise ValueError("functional returned non-finite values on the grid")
    K, W = _scaled_inverse_vandermonde(D)
    rounded = np.rint(grid)
    exact = bool(np.all(rounded == grid)) and float(np.max(np.abs(grid), initial=0)) < 2.0 ** 52
    if exact:
        coef = rounded.astype(np.int64).astype(object)
        for axis in range(nvar):
            coef = np.moveaxis(np.tensordot(W, coef, axes=([1], [axis])), 0, axis)
        denom = K ** nvar
    else:
        coef = grid.copy()
        Wf = W.astype(float) / K
        for axis in range(nvar):
            coef = np.moveaxis(np.tensordot(Wf, coef, axes=([1], [axis])), 0, axis)
        denom = 1
        if atol is None:
            atol = 1e-9 * max(1.0, float(np.max(np.abs(grid))))

    table = {}
    for idx in itertools.product(range(D + 1), repeat=nvar):
        c = coef[idx]
        if exact:
            if c == 0:
                continue
            value = Fraction(int(c), denom)
        else:
            if abs(c) <= atol:
                continue
            value = float(c)
        if max(idx) == D:
            raise DegreeBoundExceeded(
                f"nonzero coefficient {value} for exponents {idx} beyond degree {max_degree}")
        table[idx] = value
    return table


def exponent_tuple(exponents: Mapping[str, int], M) -> tuple:
    names = variable_names(M)
    unknown = set(exponents) - set(names)
    if unknown:
        raise ValueError(f"unknown variables for M={M}: {sorted(unknown)}")
    return tuple(int(exponents.get(n, 0)) for n in names)


def extract_monomial_coefficient(f, exponents: Mapping[str, int], M, max_degree=2):
    """Coefficient of one monomial of ``f``, e.g. ``{"Z0": 1, "Z1": 2}``."""
    key = exponent_tuple(exponents, M)
    if max(key, default=0) > max_degree or min(key, default=0) < 0:
        raise ValueError(f"exponents {exponents} outside 0..{max_degree}")
    return table_lookup(coefficient_table(f, M, max_degree), key)


def table_lookup(table, key):
    value = table.get(key, 0)
    return float(value)


def terms_as_table(terms, M) -> dict:
    """Closed-form terms keyed like :func:`coefficient_table` (like terms merged)."""
    out = {}
    for coef, exps in terms:
        key = exponent_tuple(exps, M)
        out[key] = out.get(key, 0) + coef
    return {k: v for k, v in out.items() if v != 0}


# -- weak coupling order --------------------------------------------------

WEAK_EPS = (1 / 2, 1 / 4, 1 / 8, 1 / 16)


def truncation_slope(full, partial, ec: EffectiveCouplings, eps=WEAK_EPS):
    """Least-squares slope of ``log|full - partial|`` against ``log eps``.

    ``full`` and ``partial`` are evaluated on ``ec`` scaled by each ``eps``.
    Returns ``(slope, errors)``.
    """
    eps = np.asarray(eps, dtype=float)
    err = np.array([abs(full(ec.scaled(e)) - partial(ec.scaled(e))) for e in eps])
    if np.any(err == 0):
        raise ValueError("truncation error vanished exactly; choose generic couplings")
    slope = np.polyfit(np.log(eps), np.log(err), 1)[0]
    return float(slope), err
