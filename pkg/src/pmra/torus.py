"""Grid-level model of the quasi-periodic modules ``Y(q, a)`` over the 2-torus.

A ``TwistedFunction`` stores ``xi(z, t)`` for ``z = exp(2 pi i zi / z_res)`` and
``t = ti / t_res`` in ``[0, 1)``; other ``t`` are reached through
``xi(z, t - 1) = z^a xi(z, t)``. Inner products are ``C(T^2)``-valued and are
stored as ``(z_res, M)`` arrays sampled at the torus point ``(z, exp(2 pi i j / M))``.
The transfer operator for ``(w, y) -> (w^c, y^d)`` averages over preimages,
so it hands back a grid that is ``c`` times coarser in ``z`` and ``d`` times
coarser in the second coordinate. The adjoint ``T_m`` does the same.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .report import CheckResult

DEFAULT_EPS = 1e-10


@dataclass(frozen=True)
class TwistedParams:
    q: int
    a: int
    c: int
    d: int

    def __post_init__(self):
        if self.q < 1:
            raise ValueError("q must be a positive integer")
        if self.c < 2 or self.d < 2:
            raise ValueError("c and d must be integers >= 2")

    def filter_params(self) -> "TwistedParams":
        """Parameters of the module ``Y(1, (1 - cd) a)`` where filters live."""
        return TwistedParams(1, (1 - self.c * self.d) * self.a, self.c, self.d)

    @classmethod
    def parse(cls, text: str) -> "TwistedParams":
        parts = [int(p) for p in text.split(",")]
        if len(parts) != 4:
            raise ValueError("expected q,a,c,d")
        return cls(*parts)


@dataclass(frozen=True, eq=False)
class TwistedFunction:
    params: TwistedParams
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        if vals.ndim != 2:
            raise ValueError("values must be a 2-D (z_res, t_res) array")
        object.__setattr__(self, "values", vals)

    @property
    def z_res(self) -> int:
        return self.values.shape[0]

    @property
    def t_res(self) -> int:
        return self.values.shape[1]

    @property
    def q(self) -> int:
        return self.params.q

    @property
    def a(self) -> int:
        return self.params.a

    def check_grid(self) -> None:
        p = self.params
        if self.z_res % p.c:
            raise ValueError(f"z_res={self.z_res} is not divisible by c={p.c}")
        if self.t_res % (p.q * p.d):
            raise ValueError(f"t_res={self.t_res} is not divisible by q*d={p.q * p.d}")

    def z(self, zi) -> np.ndarray:
        return np.exp(2j * np.pi * np.asarray(zi) / self.z_res)

    def eval_index(self, zi, ti) -> np.ndarray:
        """``xi(z_zi, ti / t_res)`` for any integer ``ti``, unwinding the twist."""
        zi = np.mod(np.asarray(zi), self.z_res)
        ti = np.asarray(ti)
        n = np.floor_divide(ti, self.t_res)
        base = self.values[zi, ti - n * self.t_res]
        return base * self.z(zi) ** (-self.a * n)

    def to_json(self) -> dict:
        return {"q": self.q, "a": self.a, "z_res": self.z_res, "t_res": self.t_res,
                "values": [[v.real, v.imag] for v in self.values.ravel()]}

    @classmethod
    def from_json(cls, obj, c: int, d: int) -> "TwistedFunction":
        for key in ("q", "a", "z_res", "t_res", "values"):
            if key not in obj:
                raise ValueError(f"TwistedFunction JSON: missing field '{key}'")
        z_res, t_res = int(obj["z_res"]), int(obj["t_res"])
        vals = np.array(obj["values"], dtype=float)
        if vals.shape != (z_res * t_res, 2):
            raise ValueError(f"TwistedFunction JSON: values must be {z_res * t_res} [re, im] pairs")
        params = TwistedParams(int(obj["q"]), int(obj["a"]), c, d)
        return cls(params, (vals[:, 0] + 1j * vals[:, 1]).reshape(z_res, t_res))


def twisted_eval(xi: TwistedFunction, zi: int, ti: int) -> complex:
    """Value at ``z = exp(2 pi i zi / z_res)``, ``t = ti / t_res`` for any integer ``ti``."""
    if int(ti) != ti or int(zi) != zi:
        raise ValueError("t must lie on the extended grid")
    return complex(xi.eval_index(int(zi), int(ti)))


def random_twisted(params: TwistedParams, z_res: int, t_res: int, rng: np.random.Generator) -> TwistedFunction:
    vals = rng.standard_normal((z_res, t_res)) + 1j * rng.standard_normal((z_res, t_res))
    return TwistedFunction(params, vals)


def y_inner(xi: TwistedFunction, eta: TwistedFunction) -> np.ndarray:
    """``sum_{k<q} conj(xi(z, (t-k)/q)) eta(z, (t-k)/q)`` on the ``(z_res, t_res / q)`` torus grid."""
    if xi.values.shape != eta.values.shape or xi.q != eta.q:
        raise ValueError("grid mismatch")
    q = xi.q
    if xi.t_res % q:
        raise ValueError(f"t_res={xi.t_res} is not divisible by q={q}")
    M = xi.t_res // q
    zi = np.arange(xi.z_res)[:, None]
    j = np.arange(M)[None, :]
    out = np.zeros((xi.z_res, M), dtype=complex)
    for k in range(q):
        ti = j - k * M
        out += np.conj(xi.eval_index(zi, ti)) * eta.eval_index(zi, ti)
    return out


def torus_L(F: np.ndarray, c: int, d: int) -> np.ndarray:
    """``L(F)(w, y) = (1/cd) sum_{w'^c = w} sum_{y'^d = y} F(w', y')`` on the coarse grid."""
    Z, M = F.shape
    if Z % c or M % d:
        raise ValueError(f"torus grid {F.shape} is not divisible by (c, d) = ({c}, {d})")
    return F.reshape(c, Z // c, d, M // d).mean(axis=(0, 2))


def coarsen(F: np.ndarray, c: int, d: int) -> np.ndarray:
    """Restrict a torus sample array to the grid ``c`` and ``d`` times coarser."""
    return F[::c, ::d]


def twisted_S(m: TwistedFunction, xi: TwistedFunction) -> TwistedFunction:
    """``(S_m xi)(z, t) = m(z, t) xi(z^c, d t)`` on ``xi``'s grid."""
    vals = _S_values(m, xi, np.arange(xi.t_res))
    return TwistedFunction(xi.params, vals)


def _S_values(m: TwistedFunction, xi: TwistedFunction, ti: np.ndarray) -> np.ndarray:
    p = xi.params
    xi.check_grid()
    if m.values.shape != xi.values.shape:
        raise ValueError("filter and argument must share the grid")
    zi = np.arange(xi.z_res)[:, None]
    ti = np.asarray(ti)[None, :]
    return m.eval_index(zi, ti) * xi.eval_index(p.c * zi, p.d * ti)


def twisted_S_star(m: TwistedFunction, eta: TwistedFunction) -> TwistedFunction:
    """``T_m eta``: grid ``(z_res / c, t_res / d)``."""
    return TwistedFunction(eta.params, _T_values(m, eta, np.arange(eta.t_res // eta.params.d)))


def _T_values(m: TwistedFunction, eta: TwistedFunction, si: np.ndarray) -> np.ndarray:
    """``(1/cd) sum_{w^c=z} sum_{l<d} conj(m(w, (s-l)/d)) conj(z^{al}) eta(w, (s-l)/d)``.

    ``si`` indexes ``s = si d / t_res`` (coarse grid); any integer is allowed.
    """
    p = eta.params
    eta.check_grid()
    if m.values.shape != eta.values.shape:
        raise ValueError("filter and argument must share the grid")
    c, d, a = p.c, p.d, p.a
    Zc = eta.z_res // c
    Tn = eta.t_res
    zi = np.arange(Zc)[:, None]
    si = np.asarray(si)[None, :]
    z = np.exp(2j * np.pi * zi / Zc)
    out = np.zeros((Zc, si.shape[1]), dtype=complex)
    for j in range(c):
        wi = zi + j * Zc
        for l in range(d):
            ti = si - l * (Tn // d)
            out += np.conj(m.eval_index(wi, ti)) * np.conj(z ** (a * l)) * eta.eval_index(wi, ti)
    return out / (c * d)


def quasi_periodicity_S(m: TwistedFunction, xi: TwistedFunction) -> float:
    """``max |(S_m xi)(z, t-1) - z^a (S_m xi)(z, t)|`` from the formula at both ``t``."""
    ti = np.arange(xi.t_res)
    shifted = _S_values(m, xi, ti - xi.t_res)
    here = _S_values(m, xi, ti)
    z = xi.z(np.arange(xi.z_res))[:, None]
    return float(np.max(np.abs(shifted - z ** xi.a * here)))


def quasi_periodicity_T(m: TwistedFunction, eta: TwistedFunction) -> float:
    """``max |(T_m eta)(z, s-1) - z^a (T_m eta)(z, s)|`` on the coarse grid."""
    Tc = eta.t_res // eta.params.d
    si = np.arange(Tc)
    shifted = _T_values(m, eta, si - Tc)
    here = _T_values(m, eta, si)
    Zc = eta.z_res // eta.params.c
    z = np.exp(2j * np.pi * np.arange(Zc) / Zc)[:, None]
    return float(np.max(np.abs(shifted - z ** eta.a * here)))


def inner_L(m: TwistedFunction, n: TwistedFunction) -> np.ndarray:
    """``<m, n>_L`` for filters in ``Y(1, .)``; coarse ``(z_res/c, t_res/d)`` grid."""
    p = m.params
    return torus_L(y_inner(m, n), p.c, p.d)


def adjoint_defect(m: TwistedFunction, xi: TwistedFunction, eta: TwistedFunction) -> float:
    """``max |<S_m xi, eta>_L - <xi, T_m eta>|``."""
    p = xi.params
    lhs = torus_L(y_inner(twisted_S(m, xi), eta), p.c, p.d)
    T = twisted_S_star(m, eta)
    xi_c = TwistedFunction(p, coarsen(xi.values, p.c, p.d))
    rhs = y_inner(xi_c, T)
    return float(np.max(np.abs(lhs - rhs)))


def isometry_defect(m: TwistedFunction, xi: TwistedFunction) -> float:
    """``max |<S_m xi, S_m xi>_L - <xi, xi>|`` on the coarse grid."""
    p = xi.params
    S = twisted_S(m, xi)
    lhs = torus_L(y_inner(S, S), p.c, p.d)
    rhs = coarsen(y_inner(xi, xi), p.c, p.d)
    return float(np.max(np.abs(lhs - rhs)))


def multiplier_check(m: TwistedFunction, n: TwistedFunction, xi: TwistedFunction,
                     eps: float = DEFAULT_EPS) -> CheckResult:
    """``S_m^* S_n xi = <m, n>_L(z, t) xi(z, t)`` pointwise on the coarse grid."""
    p = xi.params
    lhs = twisted_S_star(m, twisted_S(n, xi)).values
    mult = inner_L(m, n)
    rhs = mult * coarsen(xi.values, p.c, p.d)
    err = float(np.max(np.abs(lhs - rhs)))
    return CheckResult.gate("multiplier", err, eps, None,
                            multiplier_min_real=float(mult.real.min()),
                            multiplier_max_imag=float(np.abs(mult.imag).max()))


def explicit_filter_a0(params: TwistedParams, z_res: int, t_res: int) -> TwistedFunction:
    """The untwisted filter ``m(z, t) = d^{-1/2} sum_{j<d} e^{2 pi i j t}`` in ``Y(1, 0)``.

    It is ``sqrt(cd)`` times ``m~(qt)`` with ``m~(y) = (d sqrt(c))^{-1} sum_j e^{2 pi i j y / q}``,
    the z-constant solution of ``sum_{w^c=z} sum_k |m~(w, t + kq/d)|^2 = 1``.
    """
    if params.a != 0:
        raise ValueError("an explicit filter is only available for a = 0")
    t = np.arange(t_res) / t_res
    row = sum(np.exp(2j * np.pi * j * t) for j in range(params.d)) / math.sqrt(params.d)
    return TwistedFunction(params.filter_params(), np.tile(row, (z_res, 1)))


def mtilde_residual(params: TwistedParams, t_res: int) -> float:
    """Residual of ``sum_{w^c=z} sum_k |m~(w, t + kq/d)|^2 = 1`` for the explicit ``m~``."""
    c, d, q = params.c, params.d, params.q
    t = np.arange(t_res) / t_res * q

    def mtilde(y):
        return sum(np.exp(2j * np.pi * j * y / q) for j in range(d)) / (d * math.sqrt(c))

    total = c * sum(np.abs(mtilde(t + k * q / d)) ** 2 for k in range(d))
    return float(np.max(np.abs(total - 1.0)))


def filter_condition_residual(m: TwistedFunction) -> float:
    return float(np.max(np.abs(inner_L(m, m) - 1.0)))


def verify_suite(params: TwistedParams, m: TwistedFunction, xi: TwistedFunction | None = None,
                 seed: int = 0, n_random: int = 10, z_res: int = 32, t_res: int = 128,
                 eps: float = DEFAULT_EPS) -> list[CheckResult]:
    """Filter condition, isometry, adjoint identity, multiplier and quasi-periodicity."""
    rng = np.random.default_rng(seed)
    if xi is not None:
        z_res, t_res = xi.z_res, xi.t_res
    if m.values.shape != (z_res, t_res):
        raise ValueError(f"filter grid {m.values.shape} does not match ({z_res}, {t_res})")
    samples = [xi] if xi is not None else []
    samples += [random_twisted(params, z_res, t_res, rng) for _ in range(n_random)]
    adj = qp_S = qp_T = iso = mult = 0.0
    for x in samples:
        eta = random_twisted(params, z_res, t_res, rng)
        adj = max(adj, adjoint_defect(m, x, eta))
        qp_S = max(qp_S, quasi_periodicity_S(m, x))
        qp_T = max(qp_T, quasi_periodicity_T(m, eta))
        iso = max(iso, isometry_defect(m, x))
        mult = max(mult, multiplier_check(m, m, x, eps).max_error)
    return [
        CheckResult.gate("filter_condition", filter_condition_residual(m), eps),
        CheckResult.gate("isometry", iso, eps),
        CheckResult.gate("adjoint_identity", adj, eps, None, vectors=len(samples)),
        CheckResult.gate("multiplier", mult, eps),
        CheckResult.gate("quasi_periodicity_S", qp_S, 1e-12),
        CheckResult.gate("quasi_periodicity_T", qp_T, 1e-12),
    ]
