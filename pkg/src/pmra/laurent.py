"""Finitely supported Laurent polynomials with complex coefficients.

A ``LaurentPoly`` is the exact representative of a trigonometric polynomial
on the circle, ``f(e^{2 pi i t}) = sum_k c_k e^{2 pi i k t}``.
"""
from __future__ import annotations

import cmath
import math
from typing import Iterable, Mapping

import numpy as np

PRUNE_TOL = 1e-14


class LaurentPoly:
    """Immutable mapping ``exponent -> complex coefficient``."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Mapping[int, complex] | None = None):
        clean = {}
        for k, c in (coeffs or {}).items():
            c = complex(c)
            if abs(c) >= PRUNE_TOL:
                clean[int(k)] = c
        self._coeffs = dict(sorted(clean.items()))

    @classmethod
    def monomial(cls, k: int, c: complex = 1.0) -> "LaurentPoly":
        return cls({k: c})

    @classmethod
    def constant(cls, c: complex) -> "LaurentPoly":
        return cls({0: c})

    @classmethod
    def from_list(cls, coeffs: Iterable[complex], start: int = 0) -> "LaurentPoly":
        """Build from a dense coefficient list whose first entry sits at ``start``."""
        return cls({start + i: c for i, c in enumerate(coeffs)})

    @property
    def coeffs(self) -> dict[int, complex]:
        return dict(self._coeffs)

    def __getitem__(self, k: int) -> complex:
        return self._coeffs.get(k, 0j)

    def support(self) -> list[int]:
        return list(self._coeffs)

    def is_zero(self) -> bool:
        return not self._coeffs

    def __add__(self, other):
        other = _coerce(other)
        out = dict(self._coeffs)
        for k, c in other._coeffs.items():
            out[k] = out.get(k, 0j) + c
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({k: -c for k, c in self._coeffs.items()})

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        out: dict[int, complex] = {}
        for j, a in self._coeffs.items():
            for k, b in other._coeffs.items():
                out[j + k] = out.get(j + k, 0j) + a * b
        return LaurentPoly(out)

    __rmul__ = __mul__

    def conj(self) -> "LaurentPoly":
        """Pointwise complex conjugate on the circle: ``c_k -> conj(c_{-k})``."""
        return LaurentPoly({-k: c.conjugate() for k, c in self._coeffs.items()})

    def __call__(self, t):
        """Evaluate at ``e^{2 pi i t}``; ``t`` may be a scalar or an array."""
        if np.ndim(t) == 0:
            return sum((c * cmath.exp(2j * math.pi * k * t) for k, c in self._coeffs.items()), 0j)
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape, dtype=complex)
        for k, c in self._coeffs.items():
            out += c * np.exp(2j * np.pi * k * t)
        return out

    def max_abs_coeff(self) -> float:
        return max((abs(c) for c in self._coeffs.values()), default=0.0)

    def close_to(self, other, eps: float = 1e-12) -> bool:
        return (self - _coerce(other)).max_abs_coeff() <= eps

    def distance(self, other) -> float:
        """Largest coefficient magnitude of ``self - other``."""
        return (self - _coerce(other)).max_abs_coeff()

    def __eq__(self, other):
        # structural equality; numerical comparison goes through close_to
        if not isinstance(other, (LaurentPoly, int, float, complex)):
            return NotImplemented
        return self._coeffs == _coerce(other)._coeffs

    def __hash__(self):
        return hash(tuple(self._coeffs.items()))

    def __repr__(self):
        if not self._coeffs:
            return "LaurentPoly(0)"
        terms = ", ".join(f"{k}: {c:.6g}" for k, c in self._coeffs.items())
        return f"LaurentPoly({{{terms}}})"

    def to_json(self) -> dict:
        return {"coeffs": [[k, c.real, c.imag] for k, c in self._coeffs.items()]}

    @classmethod
    def from_json(cls, obj: Mapping) -> "LaurentPoly":
        if not isinstance(obj, Mapping) or "coeffs" not in obj:
            raise ValueError("LaurentPoly JSON needs a 'coeffs' list")
        out: dict[int, complex] = {}
        for i, entry in enumerate(obj["coeffs"]):
            if len(entry) != 3:
                raise ValueError(f"coeffs[{i}]: expected [k, re, im], got {entry!r}")
            k, re, im = entry
            if int(k) != k:
                raise ValueError(f"coeffs[{i}]: exponent must be an integer")
            out[int(k)] = out.get(int(k), 0j) + complex(float(re), float(im))
        return cls(out)


def _coerce(x) -> LaurentPoly:
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, (int, float, complex, np.number)):
        return LaurentPoly.constant(complex(x))
    raise TypeError(f"cannot treat {type(x).__name__} as a LaurentPoly")


ZERO = LaurentPoly()
ONE = LaurentPoly.constant(1.0)
Z = LaurentPoly.monomial(1)


def lp_add(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    return f + g


def lp_mul(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    return f * g


def lp_conj(f: LaurentPoly) -> LaurentPoly:
    return f.conj()


def lp_eval(f: LaurentPoly, t: float) -> complex:
    return f(t)


def random_poly(rng: np.random.Generator, lo: int, hi: int) -> LaurentPoly:
    """Gaussian complex coefficients on every exponent in ``[lo, hi]``."""
    n = hi - lo + 1
    vals = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return LaurentPoly.from_list(vals, start=lo)
