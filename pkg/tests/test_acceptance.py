"""Acceptance gate: twelve pass/fail criteria covering the full pipeline.

Each test checks one criterion at its stated tolerance and prints a single
PASS line (visible with -s or on failure).  Everything here is either an
exact identity, an explicit-constant inequality, or an agreement between
two independently implemented routes.
"""

import json
import math

import numpy as np
import pytest

from reslab import analytic, arith, charsums, cli, resonator, sieve


def _report(line: str) -> None:
    print(line)


class TestAcceptance:
    def test_01_kronecker_euler_oracle(self):
        """kronecker agrees with the Euler criterion for every odd prime
        n < 2000 and every |m| < 2000 (exhaustive)."""
        primes = [int(p) for p in arith.primes_in(3.0, 2000.0)]
        for p in primes:
            e = (p - 1) // 2
            for m in range(-1999, 2000):
                want = pow(m % p, e, p)
                want = -1 if want == p - 1 else want
                assert arith.kronecker(m, p) == want, (m, p)
        _report(f"PASS criterion 1: kronecker == Euler criterion on "
                f"{len(primes)} odd primes x 3999 values of m")

    def test_02_orthogonality(self):
        """Square-branch character average matches (3/pi^2) D prod p/(p+1)
        to 2% at D = 10^5 and 0.7% at D = 10^6."""
        worst = {1e5: 0.0, 1e6: 0.0}
        for D, tol in ((1e5, 0.02), (1e6, 0.007)):
            for n in (1, 9, 25, 225):
                exact, main, err = charsums.orthogonality_check(n, D)
                rel = abs(err) / main
                worst[D] = max(worst[D], rel)
                assert rel <= tol, (D, n, rel)
        _report(f"PASS criterion 2: orthogonality rel err "
                f"{worst[1e5]:.2e} @ 1e5, {worst[1e6]:.2e} @ 1e6")

    def test_03_pigeonhole_exactness(self, small_params, small_table):
        """min_d <= N/Den on every scan, and the d-outer numerator equals
        the l1 l2-outer triple-sum oracle to 1e-9 on a tiny instance."""
        kernel = charsums.PartialSumKernel(small_table)
        signs = resonator.assign_signs(small_table, kernel.S)
        rep = charsums.pigeonhole_extract(small_params, small_table, signs,
                                          workers=1)
        assert rep.extremal_value <= rep.ratio + 1e-9 * abs(rep.ratio)
        triple = charsums.numerator_exact_triple(small_params, small_table)
        assert abs(rep.N - triple) <= 1e-9
        _report(f"PASS criterion 3: pigeonhole holds "
                f"({rep.extremal_value:.6f} <= {rep.ratio:.6f}); "
                f"triple-sum gap {abs(rep.N - triple):.2e}")

    def test_04_sigma1_sign_and_flips(self):
        """Sigma_1 <= 0 after sign assignment, and flipping any single
        eps_p cannot decrease it (10-prime high band)."""
        params = resonator.build_params(
            10**6, mode="explicit", L=2.0, x=212.0, B=212.0, Z=212.0**1.5)
        bare = resonator.build_table(params)
        assert len(bare.pplus) == 10
        kernel0 = charsums.PartialSumKernel(bare)
        signs = resonator.assign_signs(bare, kernel0.S)
        table = bare.with_signs(signs)
        kernel = charsums.PartialSumKernel(table)
        s1 = charsums.sigma1(params, table, signs, kernel)
        assert s1 <= 0.0
        lx2 = math.log(params.x) ** 2
        terms = {p: signs.epsilon[p] * kernel0.S(params.x / p) / p
                 for p in bare.pplus}
        manual = 2.0 / lx2 * math.fsum(terms.values())
        assert s1 == pytest.approx(manual, rel=1e-12)
        for p in bare.pplus:
            flipped = manual - 4.0 / lx2 * terms[p]
            assert flipped >= manual - 1e-15, p
        _report(f"PASS criterion 4: Sigma_1 = {s1:.6e} <= 0 and all "
                f"{len(bare.pplus)} single-sign flips raise it")

    def test_05_sigma2_identity(self, desk_params, desk_kernel):
        """Sigma_2 equals S(x) to 1e-12 relative."""
        s2 = charsums.sigma2(desk_params, desk_kernel)
        sx = desk_kernel.S(desk_params.x)
        assert s2 == pytest.approx(sx, rel=1e-12)
        _report(f"PASS criterion 5: Sigma_2 = S(x) = {s2!r}")

    def test_06_factorization(self, desk_table):
        """|F_direct - zeta G H| within the combined certificates at 12
        grid points with Re(s) in [0.05, 1]."""
        grid = (0.05, 0.1 + 0.5j, 0.2 + 2.0j, 0.3, 0.3 - 2.0j, 0.5,
                0.5 + 1.0j, 0.75 + 4.0j, 1.0, 1.0 + 1.0j, 0.6 - 3.0j,
                0.9 + 10.0j)
        worst = 0.0
        for s in grid:
            fd = analytic.F_direct(s, desk_table)
            fb, cert = analytic.F_factored_bounded(s, desk_table)
            gap = abs(fd.value - fb)
            assert gap <= fd.tail + cert + 1e-6, s
            worst = max(worst, gap - fd.tail - cert)
        _report(f"PASS criterion 6: factorization holds at 12 points "
                f"(worst uncovered gap {worst:.2e} <= 1e-6)")

    def test_07_contour_equivalence(self, three_prime_table,
                                    three_prime_kernel):
        """S_via_contour matches the direct lattice sum within its
        certificate at y in {2, 5, 10}."""
        gaps = []
        for y in (2.0, 5.0, 10.0):
            cv = analytic.S_via_contour(y, three_prime_table)
            gap = abs(cv.value - three_prime_kernel.S(y))
            assert gap <= cv.err_estimate, y
            gaps.append(gap)
        _report(f"PASS criterion 7: contour route agrees at y = 2, 5, 10 "
                f"(gaps {', '.join(f'{g:.1e}' for g in gaps)})")

    def test_08_trig_inequality(self):
        """min of (2 cos t + 1) cos t over [5 pi/6, 7 pi/6] equals
        (3 - sqrt 3)/2 to 1e-9, attained at both endpoints."""
        lo, hi = 5 * math.pi / 6, 7 * math.pi / 6
        grid = np.linspace(lo, hi, 100001)
        vals = np.array([analytic.trig_product(float(t)) for t in grid])
        assert float(vals.min()) >= analytic.TRIG_MIN - 1e-9
        assert analytic.trig_product(lo) == pytest.approx(
            analytic.TRIG_MIN, abs=1e-9)
        assert analytic.trig_product(hi) == pytest.approx(
            analytic.TRIG_MIN, abs=1e-9)
        assert analytic.TRIG_MIN == pytest.approx(
            (3 - math.sqrt(3)) / 2, abs=1e-15)
        _report(f"PASS criterion 8: trig minimum {vals.min():.10f} >= "
                f"(3 - sqrt 3)/2 = {analytic.TRIG_MIN:.10f}, "
                f"attained at both endpoints")

    def test_09_gallagher(self):
        """100 seeded random Dirichlet polynomials (20 per sigma on the
        five-point grid) satisfy the sieve inequality; worst ratio frozen."""
        worst = 0.0
        for sigma in sieve.SIGMA_GRID:
            rep = sieve.sieve_inequality_check(20, 12345, sigma=sigma)
            assert rep.worst_ratio <= 1.0, sigma
            worst = max(worst, rep.worst_ratio)
        assert worst == pytest.approx(0.014132289335614414, rel=1e-10)
        _report(f"PASS criterion 9: sieve inequality holds on 100 trials "
                f"(worst lhs/(C rhs) = {worst:.6f})")

    def test_10_afe_cross_check(self):
        """afe_central_value agrees with the partial-summation oracle to
        1e-6 for every valid d with 8d <= 10^4; all values >= -1e-6."""
        ds = [d for d in range(1, 1251, 2) if arith.is_squarefree(d)]
        worst = 0.0
        vmin = math.inf
        for d in ds:
            v = charsums.afe_central_value(d).value
            o = charsums.dirichlet_l_half(d)
            worst = max(worst, abs(v - o))
            vmin = min(vmin, v)
            assert abs(v - o) <= 1e-6, d
            assert v >= -1e-6, d
        _report(f"PASS criterion 10: AFE vs oracle on {len(ds)} "
                f"discriminants (worst gap {worst:.2e}, min value "
                f"{vmin:.2e})")

    def test_11_desk_negativity_exhibit(self, tmp_path, monkeypatch):
        """The D = 10^6 exhibit run finds a negative extremal truncated
        sum <= N/Den, bit-identically across worker counts."""
        cfg_text = ("mode = explicit\nD = 1000000\nL = 2\nx = 200\n"
                    "B = 200\nZ = 2828.42712474619\n")
        reports = []
        for w in ("1", "2"):
            outdir = tmp_path / f"out{w}"
            cfgp = tmp_path / f"run{w}.cfg"
            cfgp.write_text(cfg_text + f"outdir = {outdir}\n")
            monkeypatch.setenv("RESLAB_WORKERS", w)
            assert cli.main(["--config", str(cfgp), "ratio"]) == cli.EXIT_PASS
            reports.append(
                (outdir / "ratio_report.json").read_bytes().replace(
                    f"out{w}".encode(), b"out#"))
        assert reports[0] == reports[1]
        rep = json.loads(reports[0])
        res = rep["results"]
        assert res["extremal_value"] < 0.0
        assert res["extremal_value"] <= res["ratio"]
        _report(f"PASS criterion 11: d* = {res['extremal_d']} with sum "
                f"{res['extremal_value']:.6f} < 0 <= ratio "
                f"{res['ratio']:.6f}; reports bit-identical for 1 and 2 "
                f"workers")

    def test_12_derivative_bound(self):
        """|y dS/dy| <= C_phi S*(y) at 20 random y on each of 5 random
        kernels (exact inequality, allowing only float roundoff)."""
        rng = np.random.default_rng(2024)
        checked = 0
        for _ in range(5):
            lo = float(rng.uniform(8.0, 14.0))
            hi = float(rng.uniform(lo + 4.0, lo + 12.0))
            params = resonator.build_params(
                10**6, mode="explicit", L=math.e, x=30.0, B=30.0, Z=150.0,
                pminus_lo=lo, pminus_hi=hi)
            bare = resonator.build_table(params)
            kernel0 = charsums.PartialSumKernel(bare)
            table = bare.with_signs(resonator.assign_signs(bare, kernel0.S))
            kernel = charsums.PartialSumKernel(table)
            for y in np.exp(rng.uniform(math.log(1.5), math.log(120.0), 20)):
                lhs, rhs = charsums.derivative_bound_check(float(y), kernel)
                assert lhs <= rhs + 1e-12, (lo, hi, y)
                checked += 1
        _report(f"PASS criterion 12: |y dS/dy| <= C_phi S*(y) at "
                f"{checked} (kernel, y) pairs")
