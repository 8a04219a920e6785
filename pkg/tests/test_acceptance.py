"""Acceptance gate: ten numbered criteria covering structure construction,
geodesic synthesis, and the measure contraction verdicts.

Each test prints one PASS/FAIL line so the gate can be read off a plain
pytest run; the assertions carry the binding tolerances.
"""

import contextlib
import subprocess
import sys

import numpy as np
import pytest

from htcarnot import (
    Covector,
    GroupPoint,
    catalog_names,
    catalog_structure,
    check_f_inequality,
    check_g_inequality,
    contraction_ratio,
    cut_time,
    default_box,
    distortion_coefficient,
    exp_map,
    geodesic_dimension,
    jacobian,
    l_of_v,
    log_map,
    mcp_report,
    sharpness_witness,
)
from htcarnot.randomness import generator

from conftest import seeded_covectors
from test_exp_map import flow_endpoint
from test_jacobian import fd_determinant


@contextlib.contextmanager
def criterion(capsys, num: int, label: str):
    ok = False
    try:
        yield
        ok = True
    finally:
        with capsys.disabled():
            print(f"{'PASS' if ok else 'FAIL'}  criterion {num:2d}: {label}",
                  flush=True)


ALL_GROUPS = [catalog_structure(name) for name in catalog_names()]


def test_criterion_01_structure_validity(capsys):
    with criterion(capsys, 1, "defining relation residual <= 1e-12, 100 pairs per group"):
        for sc in ALL_GROUPS:
            rng = generator(stream=1)
            s2 = sc.S @ sc.S
            for _ in range(100):
                v = rng.standard_normal(sc.corank)
                w = rng.standard_normal(sc.corank)
                lv, lw = l_of_v(sc, v), l_of_v(sc, w)
                residual = lv @ lw + lw @ lv + 2.0 * float(v @ w) * s2
                assert np.max(np.abs(residual)) <= 1e-12


def test_criterion_02_exponential_cross_check(capsys):
    with criterion(capsys, 2, "Heisenberg endpoints match the Hamiltonian flow to 1e-8"):
        heis = catalog_structure("heisenberg3")
        half = exp_map(heis, Covector([1.0, 0.0], [np.pi]))
        assert half.x == pytest.approx([0.0, 2.0 / np.pi], abs=1e-15)
        assert half.z[0] == pytest.approx(1.0 / (2.0 * np.pi), abs=1e-16)
        full = exp_map(heis, Covector([1.0, 0.0], [2.0 * np.pi]))
        assert np.linalg.norm(full.x) <= 1e-12
        for v in (np.pi, 2.0 * np.pi):
            got = exp_map(heis, Covector([1.0, 0.0], [v])).as_vector()
            ref = flow_endpoint(heis, np.array([1.0, 0.0]), np.array([v]))
            assert np.max(np.abs(got - ref)) <= 1e-8


def test_criterion_03_jacobian_oracle(capsys):
    with criterion(capsys, 3, "Jacobian vs finite differences (rel 1e-6), limit to 1e-10"):
        for sc in ALL_GROUPS:
            for u, v in seeded_covectors(sc, 50, stream=6, vmax_frac=0.9):
                lam = Covector(u, v)
                assert jacobian(sc, lam) == pytest.approx(
                    fd_determinant(sc, lam), rel=1e-6)
            u = np.linspace(0.6, 1.4, sc.rank)
            su2 = float(np.sum((sc.s_diag * u) ** 2))
            target = (su2 / 12.0) ** sc.corank
            tiny = 1e-9 * np.ones(sc.corank) / np.sqrt(sc.corank)
            assert jacobian(sc, Covector(u, tiny)) == pytest.approx(
                target, rel=1e-10)


def test_criterion_04_synthesis_round_trip(capsys):
    with criterion(capsys, 4, "log(exp) round trip <= 1e-9 on 200 covectors per group"):
        for sc in ALL_GROUPS:
            for u, v in seeded_covectors(sc, 200, stream=5):
                lam = Covector(u, v)
                back = log_map(sc, exp_map(sc, lam))
                assert np.linalg.norm(back.as_vector() - lam.as_vector()) <= 1e-9


def test_criterion_05_contraction_inequality(capsys):
    with criterion(capsys, 5, "measure ratio >= t^(k+3p) on default boxes"):
        expected_n = {"heisenberg3": 5, "htype4x3": 13,
                      "contact12": 7, "degenerate-corank1": 7}
        for name in catalog_names():
            sc = catalog_structure(name)
            n = geodesic_dimension(sc.spec)
            assert n == expected_n[name]
            if sc.corank == 1:
                assert n == sc.rank + 3
            box = default_box(sc)
            for i in range(1, 10):
                t = i / 10.0
                ratio = contraction_ratio(sc, box, t, 8)
                assert ratio >= t**n * (1.0 - 1e-9)


def test_criterion_06_sharpness_witness(capsys):
    with criterion(capsys, 6, "witness box beats t^(k+3p-0.5) on every group"):
        for sc in ALL_GROUPS:
            box, report = sharpness_witness(sc, 0.5)
            assert report.passed
            assert all(r < th for r, th in zip(report.ratios, report.thresholds))


def test_criterion_07_scalar_profile_inequalities(capsys):
    with criterion(capsys, 7, "profile inequalities hold at N=3, flagged at N=2.9"):
        t_grid = np.linspace(0.0, 1.0, 101)
        xg = np.linspace(0.0, np.pi, 102)[1:-1]
        xf = np.linspace(0.0, 2.0 * np.pi, 102)[1:-1]
        for check, xs in ((check_g_inequality, xg), (check_f_inequality, xf)):
            good = check(t_grid, xs, 3.0)
            assert good.pairs_checked >= 10_000
            assert good.passed and good.min_slack >= -1e-14
            flagged = check(t_grid, xs, 2.9)
            assert not flagged.passed and flagged.violations > 0


def test_criterion_08_negative_curvature_reduction(capsys):
    with criterion(capsys, 8, "distortion <= t^N sampled; K=-1 verdicts pass"):
        rng = generator(stream=12)
        for _ in range(1000):
            K = -(10.0 ** rng.uniform(-2, 2))
            N = rng.uniform(1.1, 10.0)
            t = rng.uniform(0.0, 1.0)
            d = 10.0 ** rng.uniform(-3, 2)
            assert distortion_coefficient(K, N, t, d) <= t**N
        for sc in ALL_GROUPS:
            n = float(geodesic_dimension(sc.spec))
            report = mcp_report(sc, -1.0, n, default_box(sc),
                                [i / 10.0 for i in range(1, 10)], 8)
            assert report.passed


def test_criterion_09_abnormal_degenerate_regime(capsys):
    with criterion(capsys, 9, "kernel directions stay straight; product splitting"):
        deg = catalog_structure("degenerate-corank1")
        heis = catalog_structure("heisenberg3")
        u_ker = np.array([0.7, -1.2, 0.0, 0.0])  # kernel spans coords 0,1
        rng = generator(stream=9)
        for _ in range(20):
            v = rng.uniform(-6.0, 6.0, size=1)
            pt = exp_map(deg, Covector(u_ker, v))
            assert np.max(np.abs(pt.x - u_ker)) <= 1e-12
            assert np.max(np.abs(pt.z)) <= 1e-12
            assert cut_time(deg, Covector(u_ker, v)) == np.inf
        for _ in range(20):
            u = rng.standard_normal(4)
            v = rng.uniform(-5.0, 5.0, size=1)
            full = exp_map(deg, Covector(u, v))
            factor = exp_map(heis, Covector(u[2:], v))
            assert np.max(np.abs(full.x[:2] - u[:2])) <= 1e-12
            assert np.max(np.abs(full.x[2:] - factor.x)) <= 1e-12
            assert np.max(np.abs(full.z - factor.z)) <= 1e-12


def test_criterion_10_cli_determinism(capsys, tmp_path):
    with criterion(capsys, 10, "mcp command output byte-identical across runs/workers"):
        def run(out, workers):
            res = subprocess.run(
                [sys.executable, "-m", "htcarnot.cli", "mcp",
                 "--group", "contact12", "--K", "-1", "--t-grid", "0.2,0.5,0.8",
                 "--quad", "6", "--workers", str(workers), "--out", str(out)],
                capture_output=True, text=True,
            )
            assert res.returncode == 0
            return out.read_bytes()

        first = run(tmp_path / "a.csv", 1)
        second = run(tmp_path / "b.csv", 1)
        fourway = run(tmp_path / "c.csv", 4)
        assert first == second == fourway
