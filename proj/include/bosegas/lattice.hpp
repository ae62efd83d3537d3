#pragma once

// Summation engine for the momentum lattice 2pi Z^3: shell tables, octahedral
// symmetry reduction, deterministic compensated reductions, tail estimates,
// and a separable-kernel double-sum fast path built on DCT-I.

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <vector>

#include <fftw3.h>

#include "bosegas/numerics.hpp"
#include "bosegas/potential.hpp"

namespace bosegas {

using LatticeVec = std::array<int, 3>;

inline std::int64_t norm2(const LatticeVec& v) {
    return static_cast<std::int64_t>(v[0]) * v[0] + static_cast<std::int64_t>(v[1]) * v[1] +
           static_cast<std::int64_t>(v[2]) * v[2];
}

inline std::int64_t dot(const LatticeVec& a, const LatticeVec& b) {
    return static_cast<std::int64_t>(a[0]) * b[0] + static_cast<std::int64_t>(a[1]) * b[1] +
           static_cast<std::int64_t>(a[2]) * b[2];
}

inline LatticeVec add(const LatticeVec& a, const LatticeVec& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

// ---------------------------------------------------------------------------

struct Shell {
    std::int64_t n2 = 0;
    std::int64_t count = 0;
};

struct SummationResult {
    double value = 0.0;
    double comp_bound = 0.0;
    double tail_estimate = 0.0;
    double cutoff = 0.0;  // momentum magnitude 2*pi*K
    std::int64_t n_terms = 0;
    bool warning = false;
};

// Ball decomposition of 2pi Z^3 \ {0}: squared integer norms n2 <= K^2 with
// representation counts. The origin is excluded (count_by_n2[0] == 0).
struct ShellTable {
    int K = 0;
    std::vector<std::int64_t> count_by_n2;  // size K*K + 1
    std::vector<Shell> shells;              // occupied shells, ascending n2
    std::int64_t total_points = 0;
};

inline constexpr int shell_table_max_K = 2048;

inline ShellTable build_shells(int K) {
    if (K < 1) throw std::invalid_argument("build_shells: K >= 1 required");
    if (K > shell_table_max_K)
        throw std::invalid_argument("build_shells: K exceeds the memory guard (2048)");
    ShellTable t;
    t.K = K;
    const std::int64_t n2max = static_cast<std::int64_t>(K) * K;
    t.count_by_n2.assign(n2max + 1, 0);
    // one octant with mirror weights 2^{#nonzero coordinates}
    for (int x = 0; x <= K; ++x) {
        const std::int64_t x2 = static_cast<std::int64_t>(x) * x;
        if (x2 > n2max) break;
        const std::int64_t wx = x == 0 ? 1 : 2;
        for (int y = 0; y <= K; ++y) {
            const std::int64_t xy2 = x2 + static_cast<std::int64_t>(y) * y;
            if (xy2 > n2max) break;
            const std::int64_t wxy = wx * (y == 0 ? 1 : 2);
            for (int z = 0; z <= K; ++z) {
                const std::int64_t n2 = xy2 + static_cast<std::int64_t>(z) * z;
                if (n2 > n2max) break;
                t.count_by_n2[n2] += wxy * (z == 0 ? 1 : 2);
            }
        }
    }
    t.count_by_n2[0] = 0;
    for (std::int64_t n2 = 1; n2 <= n2max; ++n2)
        if (t.count_by_n2[n2] > 0) {
            t.shells.push_back({n2, t.count_by_n2[n2]});
            t.total_points += t.count_by_n2[n2];
        }
    return t;
}

// ---------------------------------------------------------------------------
// Single radial sums  sum_{p in 2pi Z^3, 0 < |p| <= 2 pi K} f(|p|).

struct Tail {
    enum class Kind { none, power_law, oscillatory } kind = Kind::none;
    double exponent = 0.0;  // f ~ c q^-exponent beyond the cutoff

    static Tail none() { return {}; }
    static Tail power_law(double k) { return {Kind::power_law, k}; }
    static Tail oscillatory() { return {Kind::oscillatory, 0.0}; }
};

inline SummationResult sum_radial(const std::function<double(double)>& f, int K,
                                  Tail tail = Tail::none(), int threads = 1,
                                  const ShellTable* table = nullptr) {
    ShellTable local;
    if (!table) {
        local = build_shells(K);
        table = &local;
    }
    if (table->K < K) throw std::invalid_argument("sum_radial: shell table smaller than K");
    const std::int64_t n2max = static_cast<std::int64_t>(K) * K;
    std::vector<const Shell*> used;
    used.reserve(table->shells.size());
    for (const auto& s : table->shells)
        if (s.n2 <= n2max) used.push_back(&s);

    const auto total = chunked_sum(
        used.size(), 256,
        [&](std::size_t i) {
            const Shell& s = *used[i];
            return static_cast<double>(s.count) * f(two_pi * std::sqrt(static_cast<double>(s.n2)));
        },
        threads);

    SummationResult r;
    r.value = total.value;
    r.comp_bound = total.comp_bound;
    r.cutoff = two_pi * K;
    for (const auto* s : used) r.n_terms += s->count;
    switch (tail.kind) {
        case Tail::Kind::none:
            r.tail_estimate = 0.0;
            break;
        case Tail::Kind::power_law: {
            // integral comparison: 4pi/(2pi)^3 int_Q^inf c q^{2-k} dq with
            // c matched to f at the cutoff Q = 2 pi K
            if (tail.exponent <= 3.0)
                throw std::invalid_argument("sum_radial: power-law tail needs exponent > 3");
            const double Q = two_pi * K;
            r.tail_estimate = f(Q) * Q * Q * Q / (2.0 * pi * pi * (tail.exponent - 3.0));
            break;
        }
        case Tail::Kind::oscillatory:
            r.tail_estimate = std::numeric_limits<double>::quiet_NaN();
            break;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Octahedral fundamental domain: representatives x >= y >= z >= 0 of the
// 48-element signed-permutation group, with orbit sizes.

inline std::int64_t orbit_size(const LatticeVec& v) {
    const int x = v[0], y = v[1], z = v[2];
    std::int64_t perms;
    if (x == y && y == z) perms = 1;
    else if (x == y || y == z || x == z) perms = 3;
    else perms = 6;
    std::int64_t signs = 1;
    for (const int c : {x, y, z})
        if (c != 0) signs *= 2;
    return perms * signs;
}

template <class Fn>
inline void for_each_wedge_rep_n2(std::int64_t n2max, Fn&& fn) {
    const int K = static_cast<int>(std::floor(std::sqrt(static_cast<double>(n2max)) + 0.5));
    for (int x = 1; x <= K; ++x)
        for (int y = 0; y <= x; ++y) {
            if (static_cast<std::int64_t>(x) * x + static_cast<std::int64_t>(y) * y > n2max) break;
            for (int z = 0; z <= y; ++z) {
                const LatticeVec v{x, y, z};
                if (norm2(v) > n2max) break;
                fn(v, orbit_size(v));
            }
        }
}

template <class Fn>
inline void for_each_wedge_rep(int K, Fn&& fn) {
    for_each_wedge_rep_n2(static_cast<std::int64_t>(K) * K, std::forward<Fn>(fn));
}

inline std::vector<LatticeVec> ball_points_n2(std::int64_t n2max) {
    // lexicographic enumeration; order is part of the determinism contract
    std::vector<LatticeVec> pts;
    const int K = static_cast<int>(std::floor(std::sqrt(static_cast<double>(n2max)) + 0.5));
    for (int x = -K; x <= K; ++x)
        for (int y = -K; y <= K; ++y)
            for (int z = -K; z <= K; ++z) {
                const LatticeVec v{x, y, z};
                const std::int64_t n2 = norm2(v);
                if (n2 > 0 && n2 <= n2max) pts.push_back(v);
            }
    return pts;
}

inline std::vector<LatticeVec> ball_points(int K) {
    return ball_points_n2(static_cast<std::int64_t>(K) * K);
}

// ---------------------------------------------------------------------------
// General double sums  sum_{r,v in ball(K) \ 0} F(r, v).
//
// With symmetry on, F must be invariant under the diagonal octahedral action
// (true for integrands built from |r|, |v|, r.v and radial factors); the
// outer sum then runs over wedge representatives with orbit multiplicities.
// Chunking is per outer point and combination is sequential in enumeration
// order, so results are bit-identical for any thread count.

template <class F>
inline SummationResult sum_pairs_n2(F&& f, std::int64_t n2max, bool symmetry = true,
                                    int threads = 1) {
    const std::vector<LatticeVec> inner = ball_points_n2(n2max);
    std::vector<LatticeVec> outer;
    std::vector<std::int64_t> mult;
    if (symmetry) {
        for_each_wedge_rep_n2(n2max, [&](const LatticeVec& v, std::int64_t m) {
            outer.push_back(v);
            mult.push_back(m);
        });
    } else {
        outer = inner;
        mult.assign(outer.size(), 1);
    }

    std::vector<Compensated> partial(outer.size());
    parallel_for(outer.size(), threads, [&](std::size_t i) {
        const LatticeVec r = outer[i];
        Compensated acc;
        for (const auto& v : inner) acc.add(f(r, v));
        acc.sum *= static_cast<double>(mult[i]);
        acc.comp *= static_cast<double>(mult[i]);
        acc.comp_mag *= static_cast<double>(mult[i]);
        partial[i] = acc;
    });

    Compensated total;
    double comp_mag = 0.0;
    for (const auto& p : partial) {
        total.add(p.value());
        comp_mag += p.comp_mag;
    }
    SummationResult r;
    r.value = total.value();
    r.comp_bound = comp_mag + total.comp_mag;
    r.cutoff = two_pi * std::sqrt(static_cast<double>(n2max));
    r.n_terms = static_cast<std::int64_t>(inner.size()) * static_cast<std::int64_t>(inner.size());
    return r;
}

template <class F>
inline SummationResult sum_pairs(F&& f, int K, bool symmetry = true, int threads = 1) {
    return sum_pairs_n2(std::forward<F>(f), static_cast<std::int64_t>(K) * K, symmetry, threads);
}

// Diagonal-invariance probe for the symmetry contract: evaluates F on a few
// random octahedral images of sample pairs and returns the worst mismatch.
template <class F>
inline double sum_pairs_invariance_probe(F&& f, int K, unsigned seed = 12345) {
    const std::vector<LatticeVec> pts = ball_points(K);
    if (pts.empty()) return 0.0;
    std::uint64_t state = seed * 6364136223846793005ull + 1442695040888963407ull;
    const auto rnd = [&state](std::size_t mod) {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        return static_cast<std::size_t>((state >> 33) % mod);
    };
    double worst = 0.0;
    for (int trial = 0; trial < 64; ++trial) {
        const LatticeVec r = pts[rnd(pts.size())];
        const LatticeVec v = pts[rnd(pts.size())];
        int perm[3] = {0, 1, 2};
        std::swap(perm[0], perm[rnd(3)]);
        std::swap(perm[1], perm[1 + rnd(2)]);
        int sgn[3] = {rnd(2) ? 1 : -1, rnd(2) ? 1 : -1, rnd(2) ? 1 : -1};
        const auto apply = [&](const LatticeVec& a) {
            return LatticeVec{sgn[0] * a[perm[0]], sgn[1] * a[perm[1]], sgn[2] * a[perm[2]]};
        };
        worst = std::max(worst, std::abs(f(r, v) - f(apply(r), apply(v))));
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Separable-kernel double sums
//   S = sum_{p,q in ball(K) \ 0} kappa(|p -+ q|) A(|p|) B(|q|)
// via three-dimensional DCT-I. Writing the even extension of the cube
// [0, M]^3 (M = 2K) makes the lattice cross-correlation diagonal:
//   S = (2M)^-3 sum_{k in [0,M]^3} W(k) kappa^(k) A^(k) B^(k),
// with W(k) the product of per-axis weights w(0)=w(M)=1, else 2. The +q and
// -q variants coincide because the ball and all tables are even. Radial
// values are passed as tables indexed by squared integer norm: kappa up to
// 12 K^2, A and B up to K^2 (zero-padded beyond the ball automatically).

namespace detail {
inline std::mutex& fftw_plan_mutex() {
    static std::mutex m;
    return m;
}

inline void dct1_3d_inplace(std::vector<double>& a, int n) {
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex());
        plan = fftw_plan_r2r_3d(n, n, n, a.data(), a.data(), FFTW_REDFT00, FFTW_REDFT00,
                                FFTW_REDFT00, FFTW_ESTIMATE);
    }
    if (!plan) throw std::runtime_error("fftw plan failed");
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex());
        fftw_destroy_plan(plan);
    }
}
}  // namespace detail

inline SummationResult separable_pair_sum(const std::vector<double>& kappa_by_n2,
                                          const std::vector<double>& a_by_n2,
                                          const std::vector<double>& b_by_n2, int K,
                                          int threads = 1) {
    if (K < 1) throw std::invalid_argument("separable_pair_sum: K >= 1 required");
    const int M = 2 * K;
    const int n = M + 1;
    const std::size_t total = static_cast<std::size_t>(n) * n * n;
    const std::int64_t ball_n2 = static_cast<std::int64_t>(K) * K;
    if (kappa_by_n2.size() < static_cast<std::size_t>(12) * K * K + 1)
        throw std::invalid_argument("separable_pair_sum: kappa table too short (needs 12K^2+1)");
    if (a_by_n2.size() < static_cast<std::size_t>(ball_n2) + 1 ||
        b_by_n2.size() < static_cast<std::size_t>(ball_n2) + 1)
        throw std::invalid_argument("separable_pair_sum: radial table too short (needs K^2+1)");

    const auto fill = [&](std::vector<double>& arr, const std::vector<double>& table,
                          bool ball_only) {
        arr.assign(total, 0.0);
        std::size_t idx = 0;
        for (int x = 0; x < n; ++x) {
            const std::int64_t x2 = static_cast<std::int64_t>(x) * x;
            for (int y = 0; y < n; ++y) {
                const std::int64_t xy2 = x2 + static_cast<std::int64_t>(y) * y;
                for (int z = 0; z < n; ++z, ++idx) {
                    const std::int64_t n2 = xy2 + static_cast<std::int64_t>(z) * z;
                    if (ball_only && (n2 == 0 || n2 > ball_n2)) continue;
                    arr[idx] = table[static_cast<std::size_t>(n2)];
                }
            }
        }
    };

    std::vector<double> ka, aa, bb;
    fill(ka, kappa_by_n2, false);
    detail::dct1_3d_inplace(ka, n);
    fill(aa, a_by_n2, true);
    detail::dct1_3d_inplace(aa, n);
    fill(bb, b_by_n2, true);
    detail::dct1_3d_inplace(bb, n);

    const double norm = 1.0 / (8.0 * static_cast<double>(M) * M * M);
    const auto weight1d = [M](int k) { return (k == 0 || k == M) ? 1.0 : 2.0; };
    const auto total_sum = chunked_sum(
        total, 1 << 15,
        [&](std::size_t idx) {
            const int z = static_cast<int>(idx % n);
            const int y = static_cast<int>((idx / n) % n);
            const int x = static_cast<int>(idx / (static_cast<std::size_t>(n) * n));
            const double w = weight1d(x) * weight1d(y) * weight1d(z);
            return w * ka[idx] * aa[idx] * bb[idx];
        },
        threads);

    SummationResult r;
    r.value = total_sum.value * norm;
    r.comp_bound = total_sum.comp_bound * norm;
    r.cutoff = two_pi * K;
    std::int64_t ball_count = 0;
    for (int x = -K; x <= K; ++x)
        for (int y = -K; y <= K; ++y)
            for (int z = -K; z <= K; ++z) {
                const std::int64_t n2 = static_cast<std::int64_t>(x) * x +
                                        static_cast<std::int64_t>(y) * y +
                                        static_cast<std::int64_t>(z) * z;
                if (n2 > 0 && n2 <= ball_n2) ++ball_count;
            }
    r.n_terms = ball_count * ball_count;
    return r;
}

// Brute-force reference for the same quantity (tests and small cutoffs).
inline double pair_sum_brute(const std::function<double(double)>& kappa,
                             const std::function<double(double)>& A,
                             const std::function<double(double)>& B, int K, bool plus) {
    const auto pts = ball_points(K);
    Compensated acc;
    for (const auto& p : pts) {
        const double ap = A(std::sqrt(static_cast<double>(norm2(p))));
        for (const auto& q : pts) {
            const LatticeVec d = plus ? add(p, q) : LatticeVec{p[0] - q[0], p[1] - q[1], p[2] - q[2]};
            acc.add(kappa(std::sqrt(static_cast<double>(norm2(d)))) * ap *
                    B(std::sqrt(static_cast<double>(norm2(q)))));
        }
    }
    return acc.value();
}

// ---------------------------------------------------------------------------
// Cube partial sums  S(M) = sum_{0 < |n|_inf <= M} g(n)  for conditionally
// convergent series (the torus constant); enumerated layer by layer in a
// fixed order. g is supplied as a table over squared norms.

inline std::vector<double> cube_layer_sums(int M_max,
                                           const std::function<double(double)>& g_of_n2) {
    if (M_max < 0) throw std::invalid_argument("cube_layer_sums: M >= 0 required");
    std::vector<double> value_by_n2(static_cast<std::size_t>(3) * M_max * M_max + 1, 0.0);
    for (std::size_t n2 = 1; n2 < value_by_n2.size(); ++n2)
        value_by_n2[n2] = g_of_n2(static_cast<double>(n2));

    std::vector<double> S(M_max + 1, 0.0);
    Compensated acc;
    for (int M = 1; M <= M_max; ++M) {
        // layer max(|x|,|y|,|z|) = M, via octant weights
        Compensated layer;
        for (int x = 0; x <= M; ++x) {
            const std::int64_t wx = x == 0 ? 1 : 2;
            for (int y = 0; y <= M; ++y) {
                const std::int64_t wxy = wx * (y == 0 ? 1 : 2);
                const bool face_xy = (x == M || y == M);
                const std::int64_t xy2 =
                    static_cast<std::int64_t>(x) * x + static_cast<std::int64_t>(y) * y;
                for (int z = 0; z <= M; ++z) {
                    if (!face_xy && z != M) continue;
                    const std::int64_t w = wxy * (z == 0 ? 1 : 2);
                    layer.add(static_cast<double>(w) *
                              value_by_n2[static_cast<std::size_t>(xy2) +
                                          static_cast<std::int64_t>(z) * z]);
                }
            }
        }
        acc.add(layer.value());
        S[M] = acc.value();
    }
    return S;
}

}  // namespace bosegas
