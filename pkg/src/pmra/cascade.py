"""Scaling functions, dilation and the module basis on the line module Xi.

Functions on the real line are sampled on the grid ``t = n / G`` over an
integer window ``[t_min, t_max)`` and read as zero outside it. The
dilation ``(D xi)(t) = sqrt(N) xi(N t)`` is exact on such grids if the
resolution is multiplied by ``N``: grid index ``n`` of the output looks up
grid index ``n`` of the input. The inverse divides the resolution by ``N``.

All functions here live on the frequency side, like the infinite product
``prod_k N^{-1/2} m(e^{2 pi i t / N^k})`` they are built from.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .circle import DEFAULT_EPS, FilterBank
from .frames import fresh_words
from .report import CheckResult

CircleFn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class SampledLine:
    G: int
    t_min: int
    t_max: int
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        if self.t_max <= self.t_min:
            raise ValueError("empty window")
        if vals.shape != ((self.t_max - self.t_min) * self.G,):
            raise ValueError(f"expected {(self.t_max - self.t_min) * self.G} samples, got {vals.shape}")
        object.__setattr__(self, "values", vals)

    @property
    def step(self) -> float:
        return 1.0 / self.G

    @property
    def n0(self) -> int:
        return self.t_min * self.G

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.n0, self.t_max * self.G)

    @property
    def t(self) -> np.ndarray:
        return self.indices / self.G

    def at(self, n) -> np.ndarray:
        """Values at absolute grid indices ``n`` (``t = n / G``); zero off the window."""
        n = np.asarray(n)
        i = n - self.n0
        ok = (i >= 0) & (i < self.values.size)
        out = np.zeros(n.shape, dtype=complex)
        out[ok] = self.values[i[ok]]
        return out

    @classmethod
    def from_function(cls, f: CircleFn, G: int, t_min: int, t_max: int) -> "SampledLine":
        n = np.arange(t_min * G, t_max * G)
        return cls(G, t_min, t_max, np.asarray(f(n / G), dtype=complex))

    def widen(self, t_min: int, t_max: int) -> "SampledLine":
        t_min, t_max = min(t_min, self.t_min), max(t_max, self.t_max)
        n = np.arange(t_min * self.G, t_max * self.G)
        return SampledLine(self.G, t_min, t_max, self.at(n))

    def max_diff(self, other: "SampledLine") -> float:
        if self.G != other.G:
            raise ValueError("grid mismatch")
        lo, hi = min(self.t_min, other.t_min), max(self.t_max, other.t_max)
        n = np.arange(lo * self.G, hi * self.G)
        return float(np.max(np.abs(self.at(n) - other.at(n)), initial=0.0))

    def to_csv(self) -> str:
        lines = [f"{float(t)!r},{float(v.real)!r},{float(v.imag)!r}" for t, v in zip(self.t, self.values)]
        return "t,re,im\n" + "\n".join(lines) + "\n"


def indicator(lo: float, hi: float, G: int, t_min: int, t_max: int) -> SampledLine:
    """``chi_[lo, hi)`` sampled on the grid."""
    return SampledLine.from_function(lambda t: ((t >= lo) & (t < hi)).astype(complex), G, t_min, t_max)


def resample(xi: SampledLine, G: int) -> SampledLine:
    """Keep every ``xi.G / G``-th sample; exact restriction to a coarser grid."""
    if xi.G % G:
        raise ValueError(f"resolution {xi.G} is not a multiple of {G}")
    r = xi.G // G
    return SampledLine(G, xi.t_min, xi.t_max, xi.values[::r])


def cascade_product(m: CircleFn, N: int, K: int, G: int, t_min: int, t_max: int) -> SampledLine:
    """``P_K(t) = prod_{k=1}^K N^{-1/2} m(e^{2 pi i t / N^k})``."""
    if K < 1:
        raise ValueError("K must be >= 1")
    n = np.arange(t_min * G, t_max * G)
    out = np.ones(n.size, dtype=complex)
    for k in range(1, K + 1):
        out *= np.asarray(m(n / (G * N**k)), dtype=complex) / math.sqrt(N)
    return SampledLine(G, t_min, t_max, out)


def dilation_D(xi: SampledLine, N: int) -> SampledLine:
    """``(D xi)(t) = sqrt(N) xi(N t)``, returned at resolution ``N G``."""
    lo, hi = math.floor(xi.t_min / N), math.ceil(xi.t_max / N)
    G = xi.G * N
    n = np.arange(lo * G, hi * G)
    return SampledLine(G, lo, hi, math.sqrt(N) * xi.at(n))


def dilation_D_inv(xi: SampledLine, N: int) -> SampledLine:
    """``(D^{-1} xi)(t) = N^{-1/2} xi(t / N)``, returned at resolution ``G / N``."""
    if xi.G % N:
        raise ValueError(f"resolution {xi.G} is not divisible by N={N}; cannot invert the dilation")
    return SampledLine(xi.G // N, N * xi.t_min, N * xi.t_max, xi.values / math.sqrt(N))


def _translate_range(xi: SampledLine, eta: SampledLine) -> int:
    return max(abs(xi.t_min), abs(xi.t_max), abs(eta.t_min), abs(eta.t_max)) + 1


def xi_inner(xi: SampledLine, eta: SampledLine, Kmax: int | None = None) -> np.ndarray:
    """``t -> sum_{|k| <= Kmax} conj(xi(t-k)) eta(t-k)`` on the grid of ``[0, 1)``.

    With ``Kmax=None`` every translate meeting either window is summed, so the
    result is exact for window-supported data.
    """
    if xi.G != eta.G:
        raise ValueError(f"grid mismatch: {xi.G} vs {eta.G}")
    G = xi.G
    if Kmax is None:
        Kmax = _translate_range(xi, eta)
    i = np.arange(G)
    ks = np.arange(-Kmax, Kmax + 1)
    n = i[None, :] - ks[:, None] * G
    return np.sum(np.conj(xi.at(n)) * eta.at(n), axis=0)


def xi_action(xi: SampledLine, f: CircleFn) -> SampledLine:
    """``(xi . f)(t) = xi(t) f(e^{2 pi i t})``."""
    return SampledLine(xi.G, xi.t_min, xi.t_max, xi.values * np.asarray(f(xi.t), dtype=complex))


def circle_L_sampled(values: np.ndarray, N: int) -> np.ndarray:
    """Transfer operator on circle samples: length ``M`` in, length ``M / N`` out."""
    values = np.asarray(values)
    M = values.size
    if M % N:
        raise ValueError(f"{M} samples cannot be averaged over {N} preimages")
    return values.reshape(N, M // N).mean(axis=0)


def check_scaling_equation(phi: SampledLine, phi_next: SampledLine, m: CircleFn, N: int,
                           eps: float = 1e-12) -> list[CheckResult]:
    """Telescoping ``sqrt(N) P_{K+1}(N t) = m(e^{2 pi i t}) P_K(t)`` on every grid point of ``phi``.

    ``phi_next`` must cover ``N`` times the window of ``phi`` at the same
    resolution. The self-consistency defect ``sqrt(N) P_K(N t) - m P_K(t)``
    is reported as information only.
    """
    if phi.G != phi_next.G:
        raise ValueError("grid mismatch")
    if phi_next.t_min > N * phi.t_min or phi_next.t_max < N * phi.t_max:
        raise ValueError("phi_next must cover N times the window of phi")
    n = phi.indices
    mt = np.asarray(m(phi.t), dtype=complex)
    rhs = mt * phi.values
    tele = float(np.max(np.abs(math.sqrt(N) * phi_next.at(N * n) - rhs)))
    inside = (N * n >= phi.n0) & (N * n < phi.t_max * phi.G)
    self_def = float(np.max(np.abs(math.sqrt(N) * phi.at(N * n[inside]) - rhs[inside]), initial=0.0))
    return [CheckResult.gate("scaling_telescoping", tele, eps),
            CheckResult.info("scaling_self_defect", self_def, 1e-3)]


def half_band_lowpass(t) -> np.ndarray:
    """``sqrt(2) chi_[0, 1/2)`` of the fractional part: the filter of ``phi = chi_[0,1)``."""
    frac = np.mod(np.asarray(t, dtype=float), 1.0)
    return math.sqrt(2) * (frac < 0.5).astype(complex)


def qmf_partner_fn(m0: CircleFn) -> CircleFn:
    """``m1(z) = z conj(m0(-z))`` for filters given as functions of ``t``."""
    def m1(t):
        t = np.asarray(t, dtype=float)
        return np.exp(2j * np.pi * t) * np.conj(np.asarray(m0(t + 0.5), dtype=complex))
    return m1


def mother_wavelet(phi: SampledLine, m1: CircleFn) -> SampledLine:
    """``psi(t) = 2^{-1/2} phi(t/2) m1(e^{pi i t})`` (``N = 2``)."""
    return dilation_D_inv(xi_action(phi, m1), 2)


def word_function(word: Sequence[int], filters: Sequence[CircleFn], N: int) -> CircleFn:
    """``t -> prod_l m_{j_l}(e^{2 pi i N^{l-1} t})``."""
    def f(t):
        t = np.asarray(t, dtype=float)
        out = np.ones(t.shape, dtype=complex)
        for l, j in enumerate(word):
            out *= np.asarray(filters[j](N**l * t), dtype=complex)
        return out
    return f


def xi_basis(phi: SampledLine, filters: Sequence[CircleFn] | FilterBank, N: int | None, K: int
             ) -> list[tuple[tuple[int, ...], SampledLine]]:
    """``phi`` and ``D^{-k}(phi . prod_l alpha^{l-1}(m_{j_l}))`` for fresh words of length ``1..K``.

    Every element is returned at the common resolution ``phi.G / N^K``.
    """
    if isinstance(filters, FilterBank):
        N = filters.N
        filters = list(filters.filters)
    if N is None:
        raise ValueError("N is required for a plain list of filters")
    if phi.G % N**K:
        raise ValueError(f"resolution {phi.G} is not divisible by N^K = {N**K}")
    G = phi.G // N**K
    out = []
    for w in fresh_words(len(filters), K):
        elem = xi_action(phi, word_function(w, filters, N))
        for _ in range(len(w)):
            elem = dilation_D_inv(elem, N)
        out.append((w, resample(elem, G)))
    return out


def gram(elements: Sequence[SampledLine]) -> np.ndarray:
    """``(n, n, G)`` array of inner products ``<e_i, e_j>`` sampled on the circle."""
    n = len(elements)
    G = elements[0].G
    out = np.zeros((n, n, G), dtype=complex)
    for i in range(n):
        for j in range(n):
            out[i, j] = xi_inner(elements[i], elements[j])
    return out


def gram_defect(elements: Sequence[SampledLine]) -> float:
    g = gram(elements)
    eye = np.eye(len(elements))[:, :, None]
    return float(np.max(np.abs(g - eye)))


def check_dilation_isometry(xi: SampledLine, eta: SampledLine, N: int, eps: float = DEFAULT_EPS) -> CheckResult:
    """``L(<D xi, D eta>) = <xi, eta>`` on the circle grid of ``xi``."""
    lhs = circle_L_sampled(xi_inner(dilation_D(xi, N), dilation_D(eta, N)), N)
    rhs = xi_inner(xi, eta)
    return CheckResult.gate("dilation_isometry", float(np.max(np.abs(lhs - rhs))), eps)
