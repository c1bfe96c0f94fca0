"""Acceptance criteria 1-10, each at its stated tolerance.

Every test emits one ``ACCEPTANCE <n> PASS|FAIL`` line through the terminal
reporter (visible without ``-s``) and then asserts.
"""
import math
import time

import numpy as np
import pytest

from pmra import cascade as cx
from pmra import graph as gr
from pmra import torus
from pmra.circle import (
    CircleSystem, alpha, check_orthonormal_bank, haar_bank, monomial_basis,
    parseval_complete, transfer_L, transfer_Lk,
)
from pmra.frames import frame_at_level, random_level_element, verify_frame_identity, verify_reconstruction
from pmra.laurent import LaurentPoly, random_poly

pytestmark = pytest.mark.acceptance

S3 = math.sqrt(3)
D4 = LaurentPoly({k: h / (4 * math.sqrt(2)) for k, h in enumerate([1 + S3, 3 + S3, 3 - S3, 1 - S3])})
GRID = np.arange(256) / 256


@pytest.fixture
def announce(request):
    tr = request.config.pluginmanager.getplugin("terminalreporter")

    def emit(n, ok, text):
        line = f"ACCEPTANCE {n:2d} {'PASS' if ok else 'FAIL'}: {text}"
        if tr is not None:
            tr.write_line("")
            tr.write_line(line)
        else:
            print(line)
        return ok

    return emit


def sup(f):
    return float(np.max(np.abs(f(GRID)), initial=0.0))


def test_1_transfer_identity(announce):
    t0 = time.perf_counter()
    rng = np.random.default_rng(1)
    worst = 0.0
    for N in (2, 3, 4):
        sys = CircleSystem(N)
        for _ in range(100):
            f, g = random_poly(rng, -10, 10), random_poly(rng, -10, 10)
            diff = transfer_L(f * alpha(g, sys), sys) - transfer_L(f, sys) * g
            worst = max(worst, diff.max_abs_coeff(), sup(diff))
    dt = time.perf_counter() - t0
    ok = worst <= 1e-12 and dt < 1.0
    assert announce(1, ok, f"transfer identity max defect {worst:.2e} (tol 1e-12), {dt:.2f}s (< 1s)")


def test_2_Lk_closed_form(announce):
    rng = np.random.default_rng(2)
    circ = 0.0
    for N in (2, 3, 4):
        sys = CircleSystem(N)
        for k in range(1, 6):
            for _ in range(10):
                f = random_poly(rng, -N**k * 2, N**k * 2)
                it = f
                for _ in range(k):
                    it = transfer_L(it, sys)
                circ = max(circ, transfer_Lk(f, sys, k).distance(it))
    g1 = gr.example_graph_g1()
    graph = 0.0
    for k in range(1, 6):
        for d in (1, 3, 6):
            f = gr.random_cylinder(g1, d, rng)
            graph = max(graph, gr.graph_Lk(f, k).distance(gr.graph_Lk_iterated(f, k)))
    ok = max(circ, graph) <= 1e-12
    assert announce(2, ok, f"L^k closed form vs iteration, k<=5: circle {circ:.2e}, graph G1 {graph:.2e} (tol 1e-12)")


def test_3_orthonormal_banks(announce):
    haar = check_orthonormal_bank(haar_bank(), 1e-12)
    mono = [check_orthonormal_bank(monomial_basis(CircleSystem(N)), 1e-12) for N in range(2, 6)]
    ok = haar.passed and all(r.passed for r in mono)
    worst = max(r.max_error for r in mono)
    assert announce(3, ok, f"Haar orthonormality {haar.max_error:.2e}, monomial N=2..5 {worst:.2e} (tol 1e-12)")


def test_4_word_frame_exactness(announce):
    t0 = time.perf_counter()
    bank = haar_bank()
    frame = [e for _, e in frame_at_level(bank, 4)]
    rng = np.random.default_rng(4)
    xs = [random_level_element(bank, 4, rng) for _ in range(20)]
    ident = max(verify_frame_identity(frame, x, bank, 1e-10).max_error for x in xs)
    recon = max(verify_reconstruction(frame, x, bank, 1e-10).max_error for x in xs)
    deletions_fail = True
    min_defect = math.inf
    for i in range(len(frame)):
        r = verify_frame_identity(frame[:i] + frame[i + 1:], xs[0], bank, 1e-10)
        deletions_fail &= (not r.passed) and r.detail["signed_defect"] > 0
        min_defect = min(min_defect, r.detail["signed_defect"])
    dt = time.perf_counter() - t0
    ok = ident <= 1e-10 and recon <= 1e-10 and deletions_fail and dt < 2.0
    assert announce(4, ok, f"K=4 frame identity {ident:.2e}, reconstruction {recon:.2e} (tol 1e-10); "
                           f"all {len(frame)} deletions fail, min defect {min_defect:.2e}; {dt:.2f}s (< 2s)")


def test_5_parseval_not_orthonormal(announce):
    bank = parseval_complete(haar_bank()[0], monomial_basis(CircleSystem(2)))
    frame = [e for _, e in frame_at_level(bank, 2)]
    rng = np.random.default_rng(5)
    ident = max(verify_frame_identity(frame, random_level_element(bank, 2, rng), bank, 1e-10).max_error
                for _ in range(20))
    ortho = check_orthonormal_bank(bank, 1e-10)
    ok = ident <= 1e-10 and not ortho.passed and bool(ortho.witness)
    assert announce(5, ok, f"Parseval frame identity {ident:.2e} (tol 1e-10); "
                           f"orthonormality fails with witness {ortho.witness!r}")


def test_6_cascade_telescoping(announce):
    banks = {"Haar": (haar_bank()[0], 2), "D4": (D4, 2), "N=3": (LaurentPoly({0: 1, 1: 1, 2: 1}) * (1 / S3), 3)}
    worst = {}
    for name, (m, N) in banks.items():
        assert transfer_L(m.conj() * m, CircleSystem(N)).distance(LaurentPoly({0: 1})) <= 1e-12
        w = 0.0
        for K in range(1, 21):
            phi = cx.cascade_product(m, N, K, 256, -8, 8)
            nxt = cx.cascade_product(m, N, K + 1, 256, -8 * N, 8 * N)
            w = max(w, cx.check_scaling_equation(phi, nxt, m, N, 1e-12)[0].max_error)
        worst[name] = w
    ok = max(worst.values()) <= 1e-12
    txt = ", ".join(f"{k} {v:.2e}" for k, v in worst.items())
    assert announce(6, ok, f"telescoping over K=1..20, window [-8,8], G=256: {txt} (tol 1e-12)")


def test_7_exact_haar_xi_basis(announce):
    phi = cx.indicator(0, 1, 256, -4, 4)
    filters = [cx.half_band_lowpass, cx.qmf_partner_fn(cx.half_band_lowpass)]
    basis = cx.xi_basis(phi, filters, 2, 2)
    words = [w for w, _ in basis]
    defect = cx.gram_defect([e for _, e in basis])
    ok = defect <= 1e-10 and len(basis) == 4
    assert announce(7, ok, f"phi = chi_[0,1) basis {words}: Gram defect {defect:.2e} (tol 1e-10)")


def test_8_cascade_unit_norm_informational(announce):
    phi = cx.cascade_product(haar_bank()[0], 2, 18, 256, -65, 65)
    err = float(np.max(np.abs(cx.xi_inner(phi, phi, 64) - 1)))
    ok = err <= 1e-2
    assert announce(8, ok, f"[informational] Haar cascade K=18, sum_|k|<=64 |phi(t-k)|^2 - 1: {err:.2e} (tol 1e-2)")


def test_9_graph_g1(announce):
    t0 = time.perf_counter()
    g = gr.example_graph_g1()
    bank = gr.example_bank_g1(g)
    w = bank.filter_weights()
    cons = gr.weight_consistency(w, 4, 1e-12)
    m2 = bank.filters()[1]
    p2 = gr.graph_inner_L(m2, m2).distance(gr.projection_p(g, 2))
    roi = gr.resolution_of_identity(bank, 3, 1e-12)
    # past-depth-2 windows span every cylinder with past depth <= 2
    frame = [c for f in (1, 2, 3) for c in gr.graph_frame(bank, 2, future=f, eps=1e-10)]
    inter = [gr.intertwine_check(w, k, eps=1e-12) for k in range(3)]
    dt = time.perf_counter() - t0
    ok = (cons.passed and p2 <= 1e-12 and roi.passed and all(c.passed for c in frame)
          and all(c.passed for c in inter) and dt < 5.0)
    assert announce(9, ok, f"G1 weight consistency {cons.max_error:.2e}, <m2,m2>_L - p2 {p2:.2e}, "
                           f"resolution of identity {roi.max_error:.2e}, frame K=2 (future 1..3) "
                           f"{max(c.max_error for c in frame):.2e}, intertwining k<=2 "
                           f"{max(c.max_error for c in inter):.2e}; {dt:.2f}s (< 5s)")


def test_10_twisted_torus(announce):
    t0 = time.perf_counter()
    p = torus.TwistedParams(1, 0, 2, 2)
    m = torus.explicit_filter_a0(p, 32, 128)
    filt = max(torus.filter_condition_residual(m), torus.mtilde_residual(p, 128))
    rng = np.random.default_rng(10)
    iso = adj = 0.0
    for _ in range(10):
        xi = torus.random_twisted(p, 32, 128, rng)
        eta = torus.random_twisted(p, 32, 128, rng)
        iso = max(iso, torus.multiplier_check(m, m, xi).max_error, torus.isometry_defect(m, xi))
        adj = max(adj, torus.adjoint_defect(m, xi, eta))
    dt = time.perf_counter() - t0
    ok = filt <= 1e-12 and iso <= 1e-10 and adj <= 1e-10 and dt < 5.0
    assert announce(10, ok, f"a=0 q=1 c=d=2: filter residual {filt:.2e} (tol 1e-12), S*S - id {iso:.2e}, "
                            f"adjoint {adj:.2e} (tol 1e-10); {dt:.2f}s (< 5s)")
