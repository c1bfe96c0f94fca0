"""Tensor words, level embeddings and truncated direct-limit frames on the circle.

A word ``(j_1, ..., j_k)`` stands for ``m_{j_1} (x) ... (x) m_{j_k}`` in the k-fold
tensor power of ``M_L``; under the product identification it becomes the
polynomial ``m_{j_1} alpha(m_{j_2}) ... alpha^{k-1}(m_{j_k})`` in ``M_{L^k}``.
The direct limit is never built: an element lives at a level and ``embed``
moves it up by prepending low-pass letters.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .circle import DEFAULT_EPS, FilterBank, alpha_k, inner_Lk
from .laurent import ONE, LaurentPoly, random_poly
from .report import CheckResult

GRID_POINTS = 256

Word = tuple[int, ...]


@dataclass(frozen=True)
class LevelElement:
    level: int
    poly: LaurentPoly

    def __post_init__(self):
        if self.level < 0:
            raise ValueError("level must be >= 0")


def is_fresh(word: Sequence[int]) -> bool:
    return len(word) == 0 or word[0] > 0


def word_to_poly(word: Sequence[int], bank: FilterBank) -> LevelElement:
    sys = bank.system
    poly = ONE
    for l, j in enumerate(word):
        if not 0 <= j < len(bank):
            raise IndexError(f"word letter {j} out of range for a bank of size {len(bank)}")
        poly = poly * alpha_k(bank[j], sys, l)
    return LevelElement(len(word), poly)


def embed(x: LevelElement, K: int, bank: FilterBank) -> LevelElement:
    """Apply ``T: n -> m_0 alpha(n)`` until ``x`` sits at level ``K``."""
    if K < x.level:
        raise ValueError(f"cannot embed a level-{x.level} element at lower level {K}")
    poly = x.poly
    sys = bank.system
    for _ in range(K - x.level):
        poly = bank.lowpass * alpha_k(poly, sys, 1)
    return LevelElement(K, poly)


def fresh_words(J: int, K: int) -> Iterator[Word]:
    """Fresh words of length ``0..K`` over ``range(J)`` in length-lexicographic order."""
    yield ()
    for k in range(1, K + 1):
        for first in range(1, J):
            for rest in itertools.product(range(J), repeat=k - 1):
                yield (first,) + rest


def frame_at_level(bank: FilterBank, K: int) -> list[tuple[Word, LevelElement]]:
    if K < 0:
        raise ValueError("K must be >= 0")
    return [(w, embed(word_to_poly(w, bank), K, bank)) for w in fresh_words(len(bank), K)]


def random_level_element(bank: FilterBank, K: int, rng: np.random.Generator) -> LevelElement:
    span = bank.N**K
    return LevelElement(K, random_poly(rng, -span, span))


def _same_level(frame: Sequence[LevelElement], x: LevelElement) -> int:
    K = x.level
    for i, f in enumerate(frame):
        if f.level != K:
            raise ValueError(f"frame element {i} is at level {f.level}, x is at level {K}")
    return K


def frame_coefficients(frame: Sequence[LevelElement], x: LevelElement, bank: FilterBank) -> list[LaurentPoly]:
    """``<x_j, x>`` in ``M_{L^K}`` for every frame element."""
    K = _same_level(frame, x)
    return [inner_Lk(f.poly, x.poly, bank.system, K) for f in frame]


def verify_frame_identity(frame: Sequence[LevelElement], x: LevelElement, bank: FilterBank,
                          eps: float = DEFAULT_EPS) -> CheckResult:
    """``<x,x> = sum_j <x,x_j><x_j,x>`` plus the partial-sum bound ``s_F <= <x,x>``.

    Each summand is pointwise non-negative, so bounding every prefix sum in
    enumeration order bounds the partial sum of every subset.
    """
    K = _same_level(frame, x)
    sys = bank.system
    t = np.arange(GRID_POINTS) / GRID_POINTS
    xx = inner_Lk(x.poly, x.poly, sys, K)
    xx_vals = xx(t).real
    total = LaurentPoly()
    running = np.zeros(GRID_POINTS)
    worst_partial, worst_term = 0.0, 0.0
    for c in frame_coefficients(frame, x, bank):
        term = c.conj() * c
        total = total + term
        vals = term(t)
        worst_term = max(worst_term, float(np.max(-vals.real, initial=0.0)), float(np.max(np.abs(vals.imag))))
        running = running + vals.real
        worst_partial = max(worst_partial, float(np.max(running - xx_vals)))
    identity_err = total.distance(xx)
    err = max(identity_err, worst_partial, worst_term)
    return CheckResult.gate("frame_identity", err, eps, None,
                            level=K, identity_defect=identity_err, partial_sum_excess=worst_partial,
                            signed_defect=float(np.max(xx_vals - running)))


def verify_reconstruction(frame: Sequence[LevelElement], x: LevelElement, bank: FilterBank,
                          eps: float = DEFAULT_EPS) -> CheckResult:
    """``x = sum_j x_j . <x_j, x>`` with the level-K action ``f . a = f alpha^K(a)``."""
    K = _same_level(frame, x)
    rec = LaurentPoly()
    for f, c in zip(frame, frame_coefficients(frame, x, bank)):
        rec = rec + f.poly * alpha_k(c, bank.system, K)
    return CheckResult.gate("reconstruction", rec.distance(x.poly), eps, None, level=K)


def complement_check(bank: FilterBank, K: int, eps: float = DEFAULT_EPS) -> CheckResult:
    """Fresh words of length ``k < K`` (embedded at K) against fresh words of length ``K``."""
    frame = frame_at_level(bank, K)
    lower = [(w, e) for w, e in frame if len(w) < K]
    top = [(w, e) for w, e in frame if len(w) == K]
    worst, where = 0.0, None
    for wl, el in lower:
        for wt, et in top:
            err = inner_Lk(el.poly, et.poly, bank.system, K).max_abs_coeff()
            if err > worst:
                worst, where = err, f"{wl} vs {wt}"
    return CheckResult.gate("complement_orthogonality", worst, eps, where if worst > eps else None, level=K)


def check_level_orthonormal(bank: FilterBank, K: int, eps: float = DEFAULT_EPS) -> CheckResult:
    """Pairwise orthonormality of ``frame_at_level(bank, K)`` in ``M_{L^K}``."""
    frame = frame_at_level(bank, K)
    worst, where = 0.0, None
    for (wa, a), (wb, b) in itertools.product(frame, repeat=2):
        target = ONE if wa == wb else LaurentPoly()
        err = inner_Lk(a.poly, b.poly, bank.system, K).distance(target)
        if err > worst:
            worst, where = err, f"{wa} vs {wb}"
    return CheckResult.gate("level_orthonormal", worst, eps, where if worst > eps else None, level=K)


def frame_suite(bank: FilterBank, K: int, seed: int, n_vectors: int = 20,
                eps: float = DEFAULT_EPS) -> list[CheckResult]:
    """Frame identity and reconstruction on seeded random vectors at level ``K``."""
    rng = np.random.default_rng(seed)
    frame = [e for _, e in frame_at_level(bank, K)]
    worst_id, worst_rec = 0.0, 0.0
    for _ in range(n_vectors):
        x = random_level_element(bank, K, rng)
        worst_id = max(worst_id, verify_frame_identity(frame, x, bank, eps).max_error)
        worst_rec = max(worst_rec, verify_reconstruction(frame, x, bank, eps).max_error)
    return [
        CheckResult.gate("frame_identity", worst_id, eps, None, level=K, vectors=n_vectors, frame_size=len(frame)),
        CheckResult.gate("reconstruction", worst_rec, eps, None, level=K, vectors=n_vectors),
        complement_check(bank, K, eps),
    ]
