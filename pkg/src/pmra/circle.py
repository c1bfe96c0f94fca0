"""Exel's correspondence for the circle map ``z -> z^N``.

Everything is done on Laurent coefficients: ``alpha`` spreads exponents by a
factor ``N`` and the transfer operator ``L`` keeps only exponents divisible
by ``N`` and shrinks them back. Elements of ``M_{L^k}`` are plain
``LaurentPoly`` values paired with the inner product ``L^k(conj(f) g)``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .laurent import ONE, LaurentPoly
from .report import CheckResult

log = logging.getLogger(__name__)

DEFAULT_EPS = 1e-10

ORTHONORMAL, PARSEVAL, UNVERIFIED = "orthonormal", "parseval", "unverified"


@dataclass(frozen=True)
class CircleSystem:
    N: int

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 2:
            raise ValueError(f"scale factor must be an integer >= 2, got {self.N!r}")


@dataclass(frozen=True)
class FilterBank:
    system: CircleSystem
    filters: tuple[LaurentPoly, ...]
    kind: str = UNVERIFIED

    def __post_init__(self):
        object.__setattr__(self, "filters", tuple(self.filters))
        if not self.filters:
            raise ValueError("a filter bank needs at least the low-pass filter")
        if self.kind not in (ORTHONORMAL, PARSEVAL, UNVERIFIED):
            raise ValueError(f"unknown bank kind {self.kind!r}")

    @property
    def N(self) -> int:
        return self.system.N

    def __len__(self):
        return len(self.filters)

    def __getitem__(self, j: int) -> LaurentPoly:
        return self.filters[j]

    @property
    def lowpass(self) -> LaurentPoly:
        return self.filters[0]

    def to_json(self) -> dict:
        return {"N": self.N, "filters": [f.to_json() for f in self.filters]}

    @classmethod
    def from_json(cls, obj) -> "FilterBank":
        if "N" not in obj:
            raise ValueError("FilterBank JSON: missing field 'N'")
        if "filters" not in obj:
            raise ValueError("FilterBank JSON: missing field 'filters'")
        filters = []
        for i, f in enumerate(obj["filters"]):
            try:
                filters.append(LaurentPoly.from_json(f))
            except (ValueError, TypeError) as exc:
                raise ValueError(f"FilterBank JSON: filters[{i}]: {exc}") from exc
        return cls(CircleSystem(int(obj["N"])), filters)


def alpha(f: LaurentPoly, sys: CircleSystem) -> LaurentPoly:
    """``alpha(f)(z) = f(z^N)``."""
    return LaurentPoly({sys.N * k: c for k, c in f.coeffs.items()})


def alpha_k(f: LaurentPoly, sys: CircleSystem, k: int) -> LaurentPoly:
    return LaurentPoly({sys.N**k * j: c for j, c in f.coeffs.items()})


def transfer_L(f: LaurentPoly, sys: CircleSystem) -> LaurentPoly:
    """Average of ``f`` over the ``N`` preimages ``w^N = z``, in coefficient form."""
    N = sys.N
    return LaurentPoly({k // N: c for k, c in f.coeffs.items() if k % N == 0})


def transfer_Lk(f: LaurentPoly, sys: CircleSystem, k: int) -> LaurentPoly:
    if k < 1:
        raise ValueError("power of the transfer operator must be >= 1")
    M = sys.N**k
    return LaurentPoly({j // M: c for j, c in f.coeffs.items() if j % M == 0})


def inner_Lk(f: LaurentPoly, g: LaurentPoly, sys: CircleSystem, k: int = 1) -> LaurentPoly:
    """``<f, g>`` in ``M_{L^k}``; ``k = 0`` gives the plain ``C(T)`` inner product."""
    prod = f.conj() * g
    return prod if k == 0 else transfer_Lk(prod, sys, k)


def is_filter(m: LaurentPoly, sys: CircleSystem, eps: float = DEFAULT_EPS) -> bool:
    return inner_Lk(m, m, sys, 1).close_to(ONE, eps)


def lowpass_defect(m: LaurentPoly, sys: CircleSystem) -> float:
    """``|m(1) - sqrt(N)|``; only a warning-level property."""
    return abs(m(0.0) - np.sqrt(sys.N))


def qmf_partner(m0: LaurentPoly, sys: CircleSystem | None = None) -> LaurentPoly:
    """``m1(z) = z * conj(m0(-z))`` for ``N = 2``."""
    if sys is not None and sys.N != 2:
        raise ValueError("the quadrature-mirror partner is only defined for N = 2")
    return LaurentPoly({1 - k: c.conjugate() * (-1) ** (k % 2) for k, c in m0.coeffs.items()})


def monomial_basis(sys: CircleSystem) -> FilterBank:
    return FilterBank(sys, [LaurentPoly.monomial(j) for j in range(sys.N)], ORTHONORMAL)


def S_m(m: LaurentPoly, f: LaurentPoly, sys: CircleSystem) -> LaurentPoly:
    """The isometry ``a -> m . a`` of ``C(T)`` into ``M_L`` (right action is ``m alpha(a)``)."""
    return m * alpha(f, sys)


def S_m_star(m: LaurentPoly, g: LaurentPoly, sys: CircleSystem) -> LaurentPoly:
    return transfer_L(m.conj() * g, sys)


def check_orthonormal_bank(bank: FilterBank, eps: float = DEFAULT_EPS) -> CheckResult:
    worst, where = 0.0, None
    J = len(bank)
    for i in range(J):
        for j in range(J):
            target = ONE if i == j else LaurentPoly()
            err = inner_Lk(bank[i], bank[j], bank.system, 1).distance(target)
            if err > worst:
                worst, where = err, (i, j)
    witness = None if where is None else f"pair {where}"
    return CheckResult.gate("orthonormal_bank", worst, eps, witness if worst > eps else None,
                            worst_pair=list(where) if where else None)


def bank_frame_defect(bank: FilterBank, x: LaurentPoly) -> float:
    """Coefficient defect of ``<x,x> = sum_j <x,m_j><m_j,x>`` in ``M_L``."""
    sys = bank.system
    total = LaurentPoly()
    for m in bank.filters:
        c = inner_Lk(m, x, sys, 1)
        total = total + c.conj() * c
    return total.distance(inner_Lk(x, x, sys, 1))


def check_parseval_bank(bank: FilterBank, eps: float = DEFAULT_EPS) -> CheckResult:
    """Reconstruction on the module generators ``1, z, ..., z^{N-1}``.

    ``M_L`` is generated by the monomials; reconstruction is linear, so checking
    ``sum_j m_j alpha(<m_j, e>) = e`` on the monomials covers the whole module.
    """
    sys = bank.system
    worst, where = 0.0, None
    for j in range(sys.N):
        e = LaurentPoly.monomial(j)
        rec = LaurentPoly()
        for m in bank.filters:
            rec = rec + m * alpha(inner_Lk(m, e, sys, 1), sys)
        err = rec.distance(e)
        if err > worst:
            worst, where = err, f"z^{j}"
    return CheckResult.gate("parseval_bank", worst, eps, where if worst > eps else None)


def parseval_complete(m0: LaurentPoly, basis: FilterBank, eps: float = DEFAULT_EPS) -> FilterBank:
    """``{m0} + {(1 - S_{m0} S_{m0}^*) e_j}``; zero elements are kept so indices line up."""
    sys = basis.system
    if not is_filter(m0, sys, eps):
        raise ValueError("parseval_complete needs a filter: <m0, m0>_L != 1")
    if basis.kind != ORTHONORMAL:
        raise ValueError("parseval_complete needs an orthonormal generating basis")
    out = [m0]
    for e in basis.filters:
        out.append(e - S_m(m0, S_m_star(m0, e, sys), sys))
    return FilterBank(sys, out, PARSEVAL)


def verify_filter_bank(bank: FilterBank, eps: float = DEFAULT_EPS) -> list[CheckResult]:
    """The four standard checks run by ``circle verify-filter``."""
    sys = bank.system
    m0 = bank.lowpass
    out = [CheckResult.gate("filter_condition", inner_Lk(m0, m0, sys, 1).distance(ONE), eps)]
    lp = lowpass_defect(m0, sys)
    if lp > eps:
        log.warning("m0(1) = %s differs from sqrt(N); the filter is not low-pass", m0(0.0))
    out.append(CheckResult.info("lowpass_m0_at_1", lp, eps))
    ortho = check_orthonormal_bank(bank, eps)
    if ortho.passed:
        out.append(ortho)
    else:
        out.append(CheckResult.info(ortho.name, ortho.max_error, eps, ortho.witness, **ortho.detail))
    out.append(check_parseval_bank(bank, eps))
    return out


def classify_bank(bank: FilterBank, eps: float = DEFAULT_EPS) -> FilterBank:
    """Return the bank tagged ``orthonormal``, ``parseval`` or ``unverified``."""
    if check_orthonormal_bank(bank, eps).passed:
        kind = ORTHONORMAL
    elif check_parseval_bank(bank, eps).passed:
        kind = PARSEVAL
    else:
        kind = UNVERIFIED
    return FilterBank(bank.system, bank.filters, kind)


def haar_bank() -> FilterBank:
    s = 2**-0.5
    m0 = LaurentPoly({0: s, 1: s})
    return FilterBank(CircleSystem(2), [m0, qmf_partner(m0)], ORTHONORMAL)


def roots_average(f, N: int, t: float) -> complex:
    """Brute-force ``(1/N) sum_{w^N = z} f(w)`` at ``z = e^{2 pi i t}``; used as an oracle."""
    return sum(f((t + j) / N) for j in range(N)) / N


def sample_bank(bank: FilterBank, n: int = 256) -> np.ndarray:
    """``(n, 1 + 2J)`` array: ``t`` then ``re, im`` per filter; used for CSV dumps."""
    t = np.arange(n) / n
    cols = [t]
    for m in bank.filters:
        v = m(t)
        cols += [v.real, v.imag]
    return np.column_stack(cols)

