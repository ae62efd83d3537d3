#!/usr/bin/env python3
"""Regenerate the frozen reference values used by the C++ test suites.

Every number here is produced by methods independent of the library:
closed-form square-barrier solutions with mpmath root-finding at 50 digits,
numpy/scipy lattice sums, and Gauss-Legendre quadrature.  Tests pin these
values with explicit margins; rerun this script to audit them.

Usage: python scripts/make_reference_values.py [scattering] [lattice] [identity]
(no arguments = all sections).
"""

import sys

import mpmath as mp
import numpy as np
from scipy import integrate, optimize
from scipy.fft import dctn

TWO_PI = 2 * np.pi


# ---------------------------------------------------------------------------
# Section 1: square-barrier scattering (mpmath, 50 digits).
# Interior solution sinh(kt r)/kt with kt = sqrt(V0/2 - lam), trigonometric
# exterior, characteristic equation u'(R) = u(R)/R solved by bracketing.

mp.mp.dps = 50


def scatt_length(V0, R0):
    k = mp.sqrt(V0 / 2)
    return R0 - mp.tanh(k * R0) / k


def neumann_lambda(V0, R0, R):
    """Smallest positive eigenvalue of -u'' + (V/2)u = lam u, u(0)=0, u'(R)=u(R)/R."""
    a = scatt_length(V0, R0)

    def mismatch(lam):
        kt = mp.sqrt(V0 / 2 - lam)
        k = mp.sqrt(lam)
        u0 = mp.sinh(kt * R0) / kt
        du0 = mp.cosh(kt * R0)
        d = R - R0
        uR = u0 * mp.cos(k * d) + du0 / k * mp.sin(k * d)
        duR = -u0 * k * mp.sin(k * d) + du0 * mp.cos(k * d)
        return duR - uR / R

    guess = 3 * a / R**3 * (1 + mp.mpf(9) / 5 * a / R)
    lo, hi = guess / 2, guess * 2
    assert mismatch(lo) * mismatch(hi) < 0, (lo, hi)
    lam = mp.findroot(mismatch, (lo, hi), solver="anderson")
    assert 0 < lam < V0 / 2
    return lam


def profile(V0, R0, R, lam):
    """(scale s, kt, k) with u(r) = s sinh(kt r)/kt inside, normalized u(R) = R."""
    kt = mp.sqrt(V0 / 2 - lam)
    k = mp.sqrt(lam)
    u0 = mp.sinh(kt * R0) / kt
    du0 = mp.cosh(kt * R0)
    d = R - R0
    uR = u0 * mp.cos(k * d) + du0 / k * mp.sin(k * d)
    return R / uR, kt, k


def u_of_r(r, R0, s, kt, k):
    if r <= R0:
        return s * mp.sinh(kt * r) / kt
    u0 = s * mp.sinh(kt * R0) / kt
    du0 = s * mp.cosh(kt * R0)
    d = r - R0
    return u0 * mp.cos(k * d) + du0 / k * mp.sin(k * d)


def int_Vf(V0, R0, R, lam):
    """integral of V f over R^3 = 4 pi V0 int_0^R0 u(r) r dr."""
    s, kt, k = profile(V0, R0, R, lam)
    val = mp.quad(lambda r: u_of_r(r, R0, s, kt, k) * r, [0, R0])
    return 4 * mp.pi * V0 * val


def w_hat(q, V0, R0, R, lam):
    """Radial FT of w = 1 - u/r on [0, R]: (4 pi / q) int_0^R (r - u) sin(qr) dr."""
    s, kt, k = profile(V0, R0, R, lam)
    pieces = int(q * (R - R0) / 3) + 1
    nodes = [0, R0] + [R0 + j * (R - R0) / pieces for j in range(1, pieces + 1)]
    val = mp.quad(lambda r: (r - u_of_r(r, R0, s, kt, k)) * mp.sin(q * r), nodes)
    return 4 * mp.pi / q * val


def w_hat0(V0, R0, R, lam):
    s, kt, k = profile(V0, R0, R, lam)
    val = mp.quad(lambda r: (1 - u_of_r(r, R0, s, kt, k) / r) * r * r, [0, R0, R])
    return 4 * mp.pi * val


def g_of_q(q, V0, R0, R, lam):
    """(V f)^ at radial argument q > 0: (4 pi / q) V0 int_0^R0 u(r) sin(qr) dr."""
    s, kt, k = profile(V0, R0, R, lam)
    val = mp.quad(lambda r: V0 * u_of_r(r, R0, s, kt, k) * mp.sin(q * r), [0, R0])
    return 4 * mp.pi / q * val


def show(tag, x, digits=22):
    print(f"{tag} = {mp.nstr(x, digits)}")


def section_scattering():
    print("== square barrier V0=2, R0=1 (default potential) ==")
    show("a(2,1)", scatt_length(2, 1))
    a = scatt_length(2, 1)
    for R in [25, 50, 100, 200]:
        lam = neumann_lambda(2, 1, R)
        show(f"lambda(2,1,R={R})", lam)
        show(f"intVf(2,1,R={R})", int_Vf(2, 1, R, lam))
        dev1 = lam * R**3 / (3 * a) / (1 + mp.mpf(9) / 5 * a / R) - 1
        dev2 = int_Vf(2, 1, R, lam) - 8 * mp.pi * a * (1 + mp.mpf(3) / 2 * a / R)
        show(f"  large-box dev_i(R={R})", dev1, 8)
        show(f"  large-box dev_ii(R={R})", dev2, 8)

    print("== hard-sphere-like: V0=1e6, R0=1 ==")
    show("a(1e6,1)", scatt_length(mp.mpf(10) ** 6, 1))

    print("== square barrier V0=50, R0=0.4 (acceptance-ladder potential) ==")
    show("a(50,0.4)", scatt_length(50, mp.mpf("0.4")))
    for N in [10, 20, 40]:
        R = N * mp.mpf("0.25")
        lam = neumann_lambda(50, mp.mpf("0.4"), R)
        show(f"lambda(50,0.4,R={R})", lam)
        show(f"intVf(50,0.4,R={R})", int_Vf(50, mp.mpf("0.4"), R, lam))
        show(f"what0(50,0.4,R={R})", w_hat0(50, mp.mpf("0.4"), R, lam))

    print("== eta/g spot values, V0=50 R0=0.4 at N=20 (R=5) ==")
    N, R = 20, mp.mpf(5)
    lam = neumann_lambda(50, mp.mpf("0.4"), R)
    for n2 in [1, 4, 25, 100, 400, 3600]:
        p = 2 * mp.pi * mp.sqrt(n2)
        eta = -w_hat(p / N, 50, mp.mpf("0.4"), R, lam) / N**2
        show(f"eta(n2={n2}, N=20)", eta)
    for n2 in [1, 25, 400, 3600]:
        p = 2 * mp.pi * mp.sqrt(n2)
        show(f"g(n2={n2}, N=20)", g_of_q(p / N, 50, mp.mpf("0.4"), R, lam))


# ---------------------------------------------------------------------------
# Section 2: lattice sums, the cube constant, and the third-order ladders.


def sum_inv_n4(K):
    """sum over Z^3 \\ {0}, |n| <= K, of |n|^-4, plus the integral tail 4 pi / K."""
    rng = np.arange(-K, K + 1)
    Y, Z = np.meshgrid(rng, rng, indexing="ij")
    yz2 = (Y**2 + Z**2).ravel()
    s = 0.0
    for x in rng:
        n2 = x * x + yz2
        n2 = n2[(n2 > 0) & (n2 <= K * K)].astype(float)
        s += (1.0 / (n2**2)).sum()
    return s + 4 * np.pi / K


def elambda_study(Mmax, window=8):
    """S(M) = sum over the cube max|n_i| <= M, n != 0, of cos|n|/n^2, by layers;
    estimate = 2 - windowed mean, band = half the window spread."""
    S = np.zeros(Mmax + 1)
    acc = 0.0
    for M in range(1, Mmax + 1):
        rng = np.arange(-M, M + 1)
        faces = []
        X, Y = np.meshgrid(rng, rng, indexing="ij")
        for sgn in (M, -M):
            faces.append(np.stack([np.full(X.size, sgn), X.ravel(), Y.ravel()], axis=1))
        inner = np.arange(-(M - 1), M)
        if inner.size:
            Xi, Yi = np.meshgrid(inner, rng, indexing="ij")
            for sgn in (M, -M):
                faces.append(np.stack([Xi.ravel(), np.full(Xi.size, sgn), Yi.ravel()], axis=1))
            Xi, Yi = np.meshgrid(inner, inner, indexing="ij")
            for sgn in (M, -M):
                faces.append(np.stack([Xi.ravel(), Yi.ravel(), np.full(Xi.size, sgn)], axis=1))
        layer = np.concatenate(faces, axis=0)
        n2 = (layer.astype(float) ** 2).sum(axis=1)
        acc += (np.cos(np.sqrt(n2)) / n2).sum()
        S[M] = acc
    est = np.full(Mmax + 1, np.nan)
    band = np.full(Mmax + 1, np.nan)
    for M in range(window, Mmax + 1):
        w = S[M - window + 1 : M + 1]
        est[M] = 2 - w.mean()
        band[M] = (w.max() - w.min()) / 2
    return S, est, band


def ball_points(K):
    rng = np.arange(-K, K + 1)
    X, Y, Z = np.meshgrid(rng, rng, rng, indexing="ij")
    pts = np.stack([X.ravel(), Y.ravel(), Z.ravel()], axis=1)
    n2 = (pts**2).sum(axis=1)
    keep = (n2 > 0) & (n2 <= K * K)
    return pts[keep], n2[keep]


def raw_sum_S(N):
    """sum over r, v in 2 pi Z^3 \\ 0, |r|,|v| <= N, of
    (r.v - v^2)/((r^2+v^2+r.v) r^2 v^4); equals (2 pi)^-6 times the same sum
    in integer coordinates with n2 <= floor((N/2pi)^2).  The mesh must reach
    ceil(sqrt(n2max)), not floor(N/2pi): shells between floor(N/2pi)^2 and
    (N/2pi)^2 belong to the domain."""
    n2max = int(np.floor((N / TWO_PI) ** 2))
    K = int(np.ceil(np.sqrt(n2max)))
    rng = np.arange(-K, K + 1)
    X, Y, Z = np.meshgrid(rng, rng, rng, indexing="ij")
    pts = np.stack([X.ravel(), Y.ravel(), Z.ravel()], axis=1)
    n2 = (pts**2).sum(axis=1)
    keep = (n2 > 0) & (n2 <= n2max)
    pts, n2 = pts[keep].astype(float), n2[keep].astype(float)
    dots = pts @ pts.T
    m2, v2 = n2[:, None], n2[None, :]
    kern = (dots - v2) / ((m2 + v2 + dots) * m2 * v2 * v2)
    return kern.sum() / TWO_PI**6


def angular_closed_form(r, v):
    D = r * r + v * v
    x = r * v
    return 2.0 - (D + v * v) / x * np.log((D + x) / (D - x))


def raw_integral_I(N, n=240):
    """(2 pi)^-6 int over 2 pi <= |r|,|v| <= N of the same kernel
    = 8 pi^2 (2 pi)^-6 int int r/v * angular_closed_form(r,v) dr dv,
    Gauss-Legendre in log coordinates (smooth integrand)."""
    x, wx = np.polynomial.legendre.leggauss(n)
    lo, hi = np.log(TWO_PI), np.log(N)
    t = 0.5 * (hi - lo) * x + 0.5 * (hi + lo)
    w = 0.5 * (hi - lo) * wx
    R, V = np.exp(t)[:, None], np.exp(t)[None, :]
    W = w[:, None] * w[None, :]
    val = (W * R * (1.0 / V) * angular_closed_form(R, V)).sum()
    return 8 * np.pi**2 * val / TWO_PI**6


def fit_c_logN(Ns, vals):
    x = np.log(np.array(Ns, float))
    A = np.stack([x, np.ones_like(x)], axis=1)
    sol, *_ = np.linalg.lstsq(A, np.array(vals, float), rcond=None)
    return sol[0], sol[1]


def section_lattice():
    print("== sum |n|^-4 over Z^3 \\ 0 (with integral tail) ==")
    for K in [50, 100, 200, 400]:
        print(f"  K={K}: {sum_inv_n4(K):.10f}")

    print("== cube constant study (window=8) ==")
    S, est, band = elambda_study(400)
    first = 6 * np.cos(1) + 6 * np.cos(np.sqrt(2)) + 8 / 3 * np.cos(np.sqrt(3))
    print(f"  S(1) = {S[1]:.10f}  (closed form {first:.10f})")
    for M in [50, 100, 200, 400]:
        print(f"  M={M}: est={est[M]:.8f} band={band[M]:.8f}")
    print(f"  band(200) <= 0.5*band(100)? {band[200] <= 0.5 * band[100]}")
    print(f"  |est(200)-est(100)| = {abs(est[200] - est[100]):.8f} vs band(100) {band[100]:.8f}")

    print("== third-order raw sums S(N) vs integrals I(N) ==")
    diffs = []
    for N in [8, 16, 32, 48]:
        S_N, I_N = raw_sum_S(N), raw_integral_I(N)
        diffs.append(abs(S_N - I_N))
        print(f"  N={N}: S={S_N:.10f} I={I_N:.10f} |S-I|={abs(S_N - I_N):.10f}")
    print(f"  max/min gap ratio = {max(diffs) / min(diffs):.3f}  (acceptance gate wants <= 3)")

    print("== third-order constant: integral ladder and log fit ==")
    const_exact = -64 * np.pi * (4 * np.pi / 3 - np.sqrt(3))
    Ns = [128, 256, 512, 1024, 2048]
    vals = []
    for N in Ns:
        I_N = raw_integral_I(N)
        scaled = 1024 * np.pi**4 * I_N
        vals.append(scaled)
        print(f"  N={N}: I={I_N:.12f} scaled={scaled:.8f}")
    c, d = fit_c_logN(Ns, vals)
    print(f"  fit: c={c:.6f} d={d:.6f}")
    print(f"  closed form = {const_exact:.6f};  c - closed = {c - const_exact:.6f}")
    print(f"  |c - (-493.87)| = {abs(c + 493.87):.4f}  (acceptance gate wants <= 5)")


# ---------------------------------------------------------------------------
# Section 3: order-one constant identity ladder (V0=50, R0=0.4, ell=0.25).
# eta/g from the closed-form radial solutions; double sums by DCT-I
# cross-correlation, validated against a brute-force loop at K=3.

V0B, R0B, ELL = 50.0, 0.4, 0.25


def neumann_np(R):
    def mismatch(lam):
        kt = np.sqrt(V0B / 2 - lam)
        k = np.sqrt(lam)
        u0, du0 = np.sinh(kt * R0B) / kt, np.cosh(kt * R0B)
        d = R - R0B
        uR = u0 * np.cos(k * d) + du0 / k * np.sin(k * d)
        duR = -u0 * k * np.sin(k * d) + du0 * np.cos(k * d)
        return duR - uR / R

    kq = np.sqrt(V0B / 2)
    a = R0B - np.tanh(kq * R0B) / kq
    guess = 3 * a / R**3
    lam = optimize.brentq(mismatch, 0.2 * guess, 5 * guess, xtol=1e-300, rtol=8.9e-16)
    kt = np.sqrt(V0B / 2 - lam)
    k = np.sqrt(lam)
    u0, du0 = np.sinh(kt * R0B) / kt, np.cosh(kt * R0B)
    d = R - R0B
    uR = u0 * np.cos(k * d) + du0 / k * np.sin(k * d)
    return lam, kt, k, R / uR


def what_np(q, R, kt, k, s):
    """Radial FT of w = 1 - u/r on [0, R] for arrays q > 0, fully closed form."""
    q = np.asarray(q, float)
    T1 = (np.sin(q * R) - q * R * np.cos(q * R)) / q**2
    T2 = (s / kt) * (kt * np.cosh(kt * R0B) * np.sin(q * R0B)
                     - q * np.sinh(kt * R0B) * np.cos(q * R0B)) / (kt**2 + q**2)
    U0, dU0 = s * np.sinh(kt * R0B) / kt, s * np.cosh(kt * R0B)
    qp, qm = q + k, q - k

    def F_cos(r):
        return -0.5 * (np.cos(qp * r - k * R0B) / qp + np.cos(qm * r + k * R0B) / qm)

    def F_sin(r):
        return 0.5 * (np.sin(qm * r + k * R0B) / qm - np.sin(qp * r - k * R0B) / qp)

    T3 = U0 * (F_cos(R) - F_cos(R0B)) + dU0 / k * (F_sin(R) - F_sin(R0B))
    return 4 * np.pi / q * (T1 - T2 - T3)


def what0_np(R, kt, k, s):
    def u(r):
        if r <= R0B:
            return s * np.sinh(kt * r) / kt
        U0, dU0 = s * np.sinh(kt * R0B) / kt, s * np.cosh(kt * R0B)
        return U0 * np.cos(k * (r - R0B)) + dU0 / k * np.sin(k * (r - R0B))

    val, _ = integrate.quad(lambda r: (r - u(r)) * r, 0, R, points=[R0B], limit=200)
    return 4 * np.pi * val


def g_rad_np(q, kt, s):
    q = np.asarray(q, float)
    T2 = (s / kt) * (kt * np.cosh(kt * R0B) * np.sin(q * R0B)
                     - q * np.sinh(kt * R0B) * np.cos(q * R0B)) / (kt**2 + q**2)
    return 4 * np.pi / q * V0B * T2


def vhat_np(z):
    """FT of the bare barrier: 4 pi V0 (sin zR0 - zR0 cos zR0)/z^3."""
    z = np.asarray(z, float)
    out = np.empty_like(z)
    small = z < 1e-8
    out[small] = 4 * np.pi * V0B * R0B**3 / 3
    zz = z[~small]
    out[~small] = 4 * np.pi * V0B * (np.sin(zz * R0B) - zz * R0B * np.cos(zz * R0B)) / zz**3
    return out


def shell_counts(n2max):
    K = int(np.floor(np.sqrt(n2max)))
    rng = np.arange(-K, K + 1)
    Y, Z = np.meshgrid(rng, rng, indexing="ij")
    yz2 = (Y**2 + Z**2).ravel()
    cnt = np.zeros(n2max + 1, dtype=np.int64)
    for x in rng:
        n2 = x * x + yz2
        n2 = n2[n2 <= n2max]
        cnt += np.bincount(n2, minlength=n2max + 1)
    cnt[0] -= 1
    return cnt


def dct_pair_sum(kappa_rad, A_rad, B_rad, K):
    """sum over p, q in ball(K) \\ 0 of kappa(|p-q|) A(|p|) B(|q|) (integer norms);
    equals the |p+q| version by q -> -q symmetry for radial tables."""
    M = 2 * K
    j = np.arange(M + 1)
    J2 = j[:, None, None] ** 2 + j[None, :, None] ** 2 + j[None, None, :] ** 2
    r = np.sqrt(J2.astype(float))
    kap = kappa_rad(r)
    A = np.where((J2 > 0) & (J2 <= K * K), A_rad(r), 0.0)
    B = np.where((J2 > 0) & (J2 <= K * K), B_rad(r), 0.0)
    del J2, r
    kap_h = dctn(kap, type=1)
    A_h = dctn(A, type=1)
    B_h = dctn(B, type=1)
    w = np.full(M + 1, 2.0)
    w[0] = w[M] = 1.0
    W = w[:, None, None] * w[None, :, None] * w[None, None, :]
    return (W * kap_h * A_h * B_h).sum() / (2 * M) ** 3


def brute_pair_sum(kappa_rad, A_rad, B_rad, K, plus=False):
    rng = np.arange(-K, K + 1)
    X, Y, Z = np.meshgrid(rng, rng, rng, indexing="ij")
    pts = np.stack([X.ravel(), Y.ravel(), Z.ravel()], axis=1)
    n2 = (pts**2).sum(axis=1)
    keep = (n2 > 0) & (n2 <= K * K)
    pts, n2 = pts[keep], n2[keep]
    r = np.sqrt(n2.astype(float))
    A, B = A_rad(r), B_rad(r)
    tot = 0.0
    for i in range(len(pts)):
        d = pts + pts[i] if plus else pts - pts[i]
        s = np.sqrt((d**2).sum(axis=1).astype(float))
        tot += (kappa_rad(s) * B * A[i]).sum()
    return tot


def identity_check(N, K):
    R = N * ELL
    lam, kt, k, s = neumann_np(R)
    n2max = K * K
    cnt = shell_counts(n2max)
    n2 = np.nonzero(cnt)[0]
    n2 = n2[n2 > 0]
    c = cnt[n2].astype(float)
    p = TWO_PI * np.sqrt(n2.astype(float))
    p2 = p * p

    eta = -what_np(p / N, R, kt, k, s) / N**2
    eta0 = -what0_np(R, kt, k, s) / N**2
    g = g_rad_np(p / N, kt, s)
    vh = vhat_np(p / N)
    vh0 = vhat_np(np.array([0.0]))[0]

    ch2, sh2 = np.cosh(2 * eta), np.sinh(2 * eta)
    Ft = (p2 + g) * ch2 + g * sh2
    Gt = (p2 + g) * sh2 + g * ch2
    tau = 0.5 * np.arctanh(-Gt / Ft)
    mu = eta + tau
    sg, gm = np.sinh(mu), np.cosh(mu)
    F = np.sqrt(p2 * p2 + 2 * g * p2)

    def radial_fn(vals):
        table = np.zeros(n2max + 1)
        table[n2] = vals
        def fn(rnorm):
            idx = np.clip(np.rint(rnorm * rnorm).astype(int), 0, n2max)
            return table[idx]
        return fn

    kap = lambda rnorm: vhat_np(TWO_PI * rnorm / N)
    sgm = sg * gm
    chsh = np.cosh(eta) * np.sinh(eta)
    sg2 = sg * sg

    pair_sgsg = dct_pair_sum(kap, radial_fn(sgm), radial_fn(sgm), K)
    pair_chsh = dct_pair_sum(kap, radial_fn(chsh), radial_fn(chsh), K)
    pair_eta_s2 = dct_pair_sum(kap, radial_fn(eta), radial_fn(sg2), K)

    S = lambda arr: (c * arr).sum()

    cgn = ((N - 1) / 2 * vh0
           + S(p2 * sg2 + vh * (sgm + sg2))
           + 1.0 / (2 * N) * pair_sgsg
           + 1.0 / N * S(p2 * eta * eta + 0.5 * (g - vh) * eta)
           - 1.0 / N * (vh0 * eta0 + S(vh * eta)) * S(sg2))
    lhs = cgn + 1.0 / N * (S(vh * eta) * S(sg2) + pair_eta_s2)

    sh_e, ch_e = np.sinh(eta), np.cosh(eta)
    ctj = ((N - 1) / 2 * vh0
           + S(p2 * sh_e**2 + vh * ch_e * sh_e + g * sh_e**2)
           + 1.0 / (2 * N) * pair_chsh
           + 1.0 / N * S(p2 * eta * eta + 0.5 * (g - vh) * eta))
    half_sum = 0.5 * S(-Gt * Gt / (F + Ft))  # stable form of 1/2 sum(-Ft + sqrt(Ft^2-Gt^2))
    rhs = ctj + half_sum

    diag = {
        "max|gamma^2-sigma^2-1|": np.abs(gm * gm - sg * sg - 1).max(),
        "max|G|/F": np.abs(2 * p2 * gm * sg + g * (gm + sg) ** 2).max() / F.min(),
        "max rel F": np.abs((p2 * (gm * gm + sg * sg) + g * (gm + sg) ** 2 - F) / F).max(),
        "min Ft-p2/2": (Ft - p2 / 2).min(),
        "max|Gt|-Ft": (np.abs(Gt) - Ft).max(),
        "max|tau|p4": (np.abs(tau) * p2 * p2).max(),
    }
    return lhs, rhs, lhs - rhs, diag


def section_identity():
    print("== DCT pair-sum validation at K=3 ==")
    kap = lambda r: np.cos(r) / (1 + r * r)
    A = lambda r: 1.0 / (1 + r**4)
    B = lambda r: np.exp(-0.3 * r)
    bf = brute_pair_sum(kap, A, B, 3, plus=False)
    dv = dct_pair_sum(kap, A, B, 3)
    print(f"  brute = {bf:.15f}  dct = {dv:.15f}  rel err = {abs(dv - bf) / abs(bf):.2e}")

    print("== identity ladder, K = 3N ==")
    diffs = {}
    for N in [10, 20, 40]:
        lhs, rhs, diff, diag = identity_check(N, 3 * N)
        diffs[N] = diff
        print(f"  N={N} K={3 * N}: lhs={lhs:.10f} rhs={rhs:.10f} diff={diff:.3e}")
        if N == 20:
            for key, val in diag.items():
                print(f"    {key} = {val:.3e}")
    print(f"  |diff(40)|/|diff(10)| = {abs(diffs[40] / diffs[10]):.3f}  "
          f"(acceptance gate wants <= 0.5)")


SECTIONS = {
    "scattering": section_scattering,
    "lattice": section_lattice,
    "identity": section_identity,
}


if __name__ == "__main__":
    picked = sys.argv[1:] or list(SECTIONS)
    unknown = [p for p in picked if p not in SECTIONS]
    if unknown:
        sys.exit(f"unknown section(s) {unknown}; choose from {list(SECTIONS)}")
    for name in picked:
        print(f"---- {name} ----")
        SECTIONS[name]()
