#pragma once

// Two-body scattering input for the many-body expansion: the scattering
// length of a compactly supported radial potential, the lowest eigenvalue of
// the Neumann-type boundary problem on a ball of radius N*ell, the momentum
// profile eta used to renormalize the interaction, and a residual check of
// the truncated lattice equation that eta solves.

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_odeiv2.h>

#include "bosegas/lattice.hpp"
#include "bosegas/numerics.hpp"
#include "bosegas/potential.hpp"

namespace bosegas {

namespace detail {

struct RadialOdeParams {
    const RadialPotential* potential;
    double lambda;
};

inline int radial_ode_rhs(double r, const double y[], double dydr[], void* params) {
    const auto* p = static_cast<const RadialOdeParams*>(params);
    dydr[0] = y[1];
    dydr[1] = (0.5 * (*p->potential)(r) - p->lambda) * y[0];
    return GSL_SUCCESS;
}

// Integrates -u'' + (V/2) u = lambda u on [0, R0] with u(0)=0, u'(0)=1,
// rescaling (u, u') every segment so that strong barriers (kappa R0 of
// several hundred) neither overflow nor lose the ratio u/u'. Returns the
// endpoint pair in an arbitrary positive scale; if record is non-null, the
// raw values and cumulative log-scales at the requested nodes are stored.
struct ScaledEndpoint {
    double u = 0.0;
    double du = 0.0;
};

inline ScaledEndpoint integrate_inside(const RadialPotential& V, double lambda,
                                       const std::vector<double>* nodes = nullptr,
                                       std::vector<double>* raw_u = nullptr,
                                       std::vector<double>* log_scale = nullptr) {
    ensure_gsl_quiet();
    const double R0 = V.radius;
    RadialOdeParams params{&V, lambda};
    gsl_odeiv2_system sys{radial_ode_rhs, nullptr, 2, &params};
    gsl_odeiv2_driver* drv = gsl_odeiv2_driver_alloc_y_new(&sys, gsl_odeiv2_step_rkf45,
                                                           R0 / 1000.0, 1e-14, 1e-13);
    if (!drv) throw std::runtime_error("ode driver allocation failed");

    constexpr int segments = 32;
    double y[2] = {0.0, 1.0};
    double r = 0.0;
    double log_accum = 0.0;  // log of the factor divided out so far
    std::size_t next_node = 0;

    const auto record_until = [&](double r_target) {
        if (!nodes) return;
        while (next_node < nodes->size() && (*nodes)[next_node] <= r_target + 1e-15 * R0) {
            const double rn = std::min((*nodes)[next_node], R0);
            if (rn > r) {
                const int status = gsl_odeiv2_driver_apply(drv, &r, rn, y);
                if (status != GSL_SUCCESS)
                    throw std::runtime_error("radial ode integration failed");
            }
            raw_u->push_back(y[0]);
            log_scale->push_back(log_accum);
            ++next_node;
        }
    };

    for (int s = 1; s <= segments; ++s) {
        const double r_end = R0 * s / segments;
        record_until(r_end);
        if (r < r_end) {
            const int status = gsl_odeiv2_driver_apply(drv, &r, r_end, y);
            if (status != GSL_SUCCESS) throw std::runtime_error("radial ode integration failed");
        }
        const double m = std::max(std::abs(y[0]), std::abs(y[1]));
        if (m > 1e40) {
            y[0] /= m;
            y[1] /= m;
            log_accum += std::log(m);
            gsl_odeiv2_driver_reset(drv);
        }
    }
    gsl_odeiv2_driver_free(drv);
    if (nodes && raw_u->size() != nodes->size())
        throw std::runtime_error("radial ode recording missed nodes");
    ScaledEndpoint e{y[0], y[1]};
    if (log_scale) log_scale->push_back(log_accum);  // scale at R0, for reconstruction
    return e;
}

}  // namespace detail

// Scattering length from the zero-energy solution: a = R0 - u(R0)/u'(R0).
inline double scattering_length(const RadialPotential& V) {
    V.validate();
    if (V.is_zero()) return 0.0;
    const auto end = detail::integrate_inside(V, 0.0);
    if (!(end.du > 0.0))
        throw std::domain_error("scattering_length: zero-energy solution has a node at the edge");
    return V.radius - end.u / end.du;
}

// ---------------------------------------------------------------------------

struct ScatteringSolution {
    RadialPotential potential;
    double N = 0.0;
    double ell = 0.0;
    double R = 0.0;       // ball radius N * ell
    double a = 0.0;       // scattering length of the potential
    double lambda = 0.0;  // lowest eigenvalue of the Neumann-type problem
    std::vector<double> r_grid;
    std::vector<double> u_grid;  // normalized so u(R) = R
    std::vector<double> w_grid;  // w = 1 - u/r

    double u_at_R0 = 0.0;  // matching data for the closed-form outer region
    double du_at_R0 = 0.0;
    double du_at_0 = 0.0;
    double vf_integral = 0.0;  // 4 pi int_0^R0 V(r) u(r) r dr

    std::shared_ptr<const CubicSpline> u_inside;

    double u(double r) const {
        if (r < 0.0) throw std::domain_error("radial coordinate must be nonnegative");
        const double R0 = potential.radius;
        if (r <= R0) return (*u_inside)(std::min(r, u_inside->x_max()));
        const double s = r - R0;
        if (lambda == 0.0) return u_at_R0 + du_at_R0 * s;  // free continuation (V = 0)
        const double k = std::sqrt(lambda);
        return u_at_R0 * std::cos(k * s) + du_at_R0 / k * std::sin(k * s);
    }

    double w(double r) const {
        if (r >= R) return 0.0;
        if (r < 1e-12 * R) return 1.0 - du_at_0;
        return 1.0 - u(r) / r;
    }
};

// Lowest eigenvalue and normalized profile of
//   -u'' + (V/2) u = lambda u  on [0, N ell],  u(0) = 0,  u'(R) = u(R)/R,
// normalized by u(R) = R, so that f = u/r equals 1 at the boundary. Inside
// the support the equation is integrated numerically; outside it the solution
// is a pure trigonometric wave and is continued in closed form.
inline ScatteringSolution solve_neumann(const RadialPotential& V, double N, double ell) {
    V.validate();
    if (!(N > 0.0) || !(ell > 0.0))
        throw std::invalid_argument("solve_neumann: N and ell must be positive");
    const double R = N * ell;
    if (!V.is_zero() && R < 5.0 * V.radius)
        throw std::invalid_argument("solve_neumann: box too small, requires N*ell >= 5*R0");

    ScatteringSolution sol;
    sol.potential = V;
    sol.N = N;
    sol.ell = ell;
    sol.R = R;
    sol.a = scattering_length(V);
    const double R0 = V.radius;

    if (V.is_zero()) {
        // Free problem: u(r) = r satisfies the boundary conditions with
        // lambda = 0, so f = 1 and w = 0 identically.
        sol.lambda = 0.0;
        const double top = std::max(R0, R);
        const std::vector<double> nodes{0.0, 0.25 * top, 0.5 * top, 0.75 * top, top};
        sol.u_inside = std::make_shared<CubicSpline>(nodes, nodes);
        sol.u_at_R0 = std::max(R0, 0.0);
        sol.du_at_R0 = 1.0;
        sol.du_at_0 = 1.0;
        sol.r_grid = {0.0, 0.5 * R, R};
        sol.u_grid = sol.r_grid;
        sol.w_grid = {0.0, 0.0, 0.0};
        sol.vf_integral = 0.0;
        return sol;
    }

    // Mismatch of the outer boundary condition as a function of lambda; the
    // arbitrary inner scale is positive, so sign changes are preserved.
    const auto mismatch = [&](double lambda) {
        const auto e = detail::integrate_inside(V, lambda);
        const double k = std::sqrt(lambda);
        const double s = R - R0;
        const double uR = e.u * std::cos(k * s) + e.du / k * std::sin(k * s);
        const double duR = -e.u * k * std::sin(k * s) + e.du * std::cos(k * s);
        return duR - uR / R;
    };

    if (!(sol.a > 0.0))
        throw std::invalid_argument("solve_neumann: requires a positive scattering length");
    const double guess = 3.0 * sol.a / (R * R * R);
    double lo = guess / 5.0, hi = 10.0 * guess;
    double flo = mismatch(lo), fhi = mismatch(hi);
    for (int widen = 0; widen < 8 && flo * fhi > 0.0; ++widen) {
        lo /= 4.0;
        hi *= 4.0;
        flo = mismatch(lo);
        fhi = mismatch(hi);
    }
    if (flo * fhi > 0.0) throw std::runtime_error("solve_neumann: eigenvalue not bracketed");
    sol.lambda = find_root(mismatch, lo, hi, 1e-14);

    // Inner grid clustered toward both ends, outer grid logarithmic.
    std::vector<double> inner_nodes;
    constexpr int n_inner = 400;
    inner_nodes.reserve(n_inner + 1);
    for (int i = 0; i <= n_inner; ++i) {
        const double t = static_cast<double>(i) / n_inner;
        inner_nodes.push_back(R0 * t * t * (3.0 - 2.0 * t));
    }
    inner_nodes.front() = 0.0;
    inner_nodes.back() = R0;

    std::vector<double> raw_u, log_scale;
    const auto end = detail::integrate_inside(V, sol.lambda, &inner_nodes, &raw_u, &log_scale);
    const double log_final = log_scale.back();  // scale at R0
    log_scale.pop_back();

    // Normalize so that u(R) = R.
    const double k = std::sqrt(sol.lambda);
    const double span = R - R0;
    const double uR_raw = end.u * std::cos(k * span) + end.du / k * std::sin(k * span);
    if (!(uR_raw != 0.0)) throw std::runtime_error("solve_neumann: boundary value vanished");
    const double log_norm = std::log(R / std::abs(uR_raw));
    const double sign_norm = uR_raw > 0.0 ? 1.0 : -1.0;

    std::vector<double> u_inner(inner_nodes.size());
    for (std::size_t i = 0; i < inner_nodes.size(); ++i) {
        const double lg = log_scale[i] - log_final + log_norm;
        u_inner[i] = lg < -700.0 ? 0.0 : sign_norm * raw_u[i] * std::exp(lg);
    }
    sol.u_at_R0 = sign_norm * end.u * std::exp(log_norm);
    sol.du_at_R0 = sign_norm * end.du * std::exp(log_norm);
    {
        const double lg0 = log_scale.front() - log_final + log_norm;
        sol.du_at_0 = lg0 < -700.0 ? 0.0 : sign_norm * std::exp(lg0);
    }
    sol.u_inside = std::make_shared<CubicSpline>(inner_nodes, u_inner);

    sol.r_grid = inner_nodes;
    sol.u_grid = u_inner;
    constexpr int n_outer = 600;
    const double ratio = R / R0;
    for (int j = 1; j <= n_outer; ++j) {
        const double r = R0 * std::pow(ratio, static_cast<double>(j) / n_outer);
        sol.r_grid.push_back(r);
        sol.u_grid.push_back(sol.u(r));
    }
    sol.w_grid.resize(sol.r_grid.size());
    for (std::size_t i = 0; i < sol.r_grid.size(); ++i)
        sol.w_grid[i] = sol.w(sol.r_grid[i]);

    sol.vf_integral =
        4.0 * pi *
        integrate([&](double r) { return V(r) * sol.u(r) * r; }, 0.0, R0, 0.0, 1e-12);
    return sol;
}

// 4 pi int V(r) f(r) r^2 dr with f = u/r; tends to 8 pi a as the box grows.
inline double integral_Vf(const ScatteringSolution& sol) { return sol.vf_integral; }

// Fourier transform of V*f restricted to the support, evaluated at radial
// frequency x (this is the renormalized coupling before momentum rescaling).
inline double vf_hat(const ScatteringSolution& sol, double x) {
    return fourier_radial([&](double r) { return sol.potential(r) * sol.u(r) / r; },
                          sol.potential.radius, x, 1e-11);
}

// Fourier transform of the boundary-layer profile w = (1 - u/r) 1_{r <= R}.
// The eigenvalue equation gives the closed form
//   w^(x) = (lambda chi_R^(x) - (V f)^(x)/2) / (lambda - x^2),
// whose singularity at x^2 = lambda is removable; near it we fall back to
// direct quadrature of w.
inline double w_hat_identity(const ScatteringSolution& sol, double x) {
    const double chi = ball_indicator_hat(sol.R, x);
    return (sol.lambda * chi - 0.5 * vf_hat(sol, x)) / (sol.lambda - x * x);
}

inline double w_hat_direct(const ScatteringSolution& sol, double x) {
    return fourier_radial([&](double r) { return sol.w(r); }, sol.R, x, 1e-10);
}

inline double w_hat(const ScatteringSolution& sol, double x) {
    if (sol.potential.is_zero()) return 0.0;
    if (std::abs(x * x - sol.lambda) < 0.5 * sol.lambda) return w_hat_direct(sol, x);
    return w_hat_identity(sol, x);
}

// ---------------------------------------------------------------------------

// Radial function sampled on an ascending grid with cubic interpolation
// inside and a power-law continuation value * (q_max/q)^tail_exponent above.
struct RadialProfile {
    std::vector<double> grid;
    std::vector<double> values;
    double tail_exponent = 0.0;
    std::shared_ptr<const CubicSpline> spline;

    static RadialProfile from_samples(std::vector<double> grid_in, std::vector<double> values_in,
                                      double tail_exponent_in) {
        RadialProfile p;
        p.grid = std::move(grid_in);
        p.values = std::move(values_in);
        p.tail_exponent = tail_exponent_in;
        if (p.grid.size() < 4 || p.grid.size() != p.values.size())
            throw std::invalid_argument("RadialProfile: need matching grids of at least 4 nodes");
        p.spline = std::make_shared<CubicSpline>(p.grid, p.values);
        return p;
    }

    double operator()(double q) const {
        if (q < grid.front())
            throw std::domain_error("RadialProfile: evaluated below its grid");
        if (q <= grid.back()) return (*spline)(q);
        return values.back() * std::pow(grid.back() / q, tail_exponent);
    }
};

// Zero-momentum value of the eta family (the mean of w; the lattice shells
// never touch it, but the convolutions and the order-one constants do).
inline double eta_zero(const ScatteringSolution& sol) {
    if (sol.potential.is_zero()) return 0.0;  // w = 0, so its mean is too
    return -(ball_indicator_hat(sol.R, 0.0) - sol.vf_integral / (2.0 * sol.lambda)) /
           (sol.N * sol.N);
}

// Momentum profile eta(q) = -w^(q/N) / N^2, sampled on a hybrid grid: 64
// points per decade, refined so the oscillation of w^ (period 2 pi / ell in
// q) is always sampled at least ten times per period.
inline RadialProfile eta_profile(const ScatteringSolution& sol, double q_max = 0.0) {
    if (q_max <= 0.0) q_max = two_pi * (6.0 * sol.N + 2.0);
    const double q_min = 2.0;
    if (q_max < 8.0 * q_min) q_max = 8.0 * q_min;
    const double period = two_pi / sol.ell;
    const double log_step = std::pow(10.0, 1.0 / 64.0);

    std::vector<double> grid;
    for (double q = q_min; q < q_max; q = std::min(q * log_step, q + period / 10.0))
        grid.push_back(q);
    grid.push_back(q_max);

    std::vector<double> values(grid.size());
    const double n2 = sol.N * sol.N;
    for (std::size_t i = 0; i < grid.size(); ++i)
        values[i] = -w_hat(sol, grid[i] / sol.N) / n2;
    return RadialProfile::from_samples(std::move(grid), std::move(values), 4.0);
}

// ---------------------------------------------------------------------------

// Residual of the truncated momentum-space equation satisfied by eta at the
// lattice point p (integer coordinates), with the convolution restricted to
// the ball of cutoff K. Converges to zero as K grows.
inline double scattering_residual(const ScatteringSolution& sol, const LatticeVec& p, int K,
                                  const RadialProfile* eta = nullptr) {
    RadialProfile local;
    if (!eta) {
        local = eta_profile(sol, two_pi * (2.0 * K + std::sqrt(static_cast<double>(norm2(p))) + 2.0));
        eta = &local;
    }
    const std::int64_t p_n2 = norm2(p);
    if (p_n2 == 0) throw std::invalid_argument("scattering_residual: p must be nonzero");

    const std::int64_t n2max = static_cast<std::int64_t>(K) * K;
    std::vector<double> eta_by_n2(n2max + 1, 0.0);
    for (std::int64_t n2 = 1; n2 <= n2max; ++n2)
        eta_by_n2[n2] = (*eta)(two_pi * std::sqrt(static_cast<double>(n2)));

    // kernels on squared distances up to max |p - q|^2
    const double p_norm = std::sqrt(static_cast<double>(p_n2));
    const auto d_max = static_cast<std::int64_t>(
        std::ceil((p_norm + K + 1.0) * (p_norm + K + 1.0)));
    std::vector<double> vhat_by_n2(d_max + 1), chi_by_n2(d_max + 1);
    for (std::int64_t n2 = 0; n2 <= d_max; ++n2) {
        const double q_phys = two_pi * std::sqrt(static_cast<double>(n2));
        vhat_by_n2[n2] = v_hat(sol.potential, q_phys / sol.N);
        chi_by_n2[n2] = ball_indicator_hat(sol.ell, q_phys);
    }

    // q = 0 carries eta_0 (the mean of w); the shell table starts at 1
    Compensated conv_v, conv_chi;
    const double eta0 = eta_zero(sol);
    conv_v.add(vhat_by_n2[p_n2] * eta0);
    conv_chi.add(chi_by_n2[p_n2] * eta0);
    for (int x = -K; x <= K; ++x)
        for (int y = -K; y <= K; ++y)
            for (int z = -K; z <= K; ++z) {
                const LatticeVec q{x, y, z};
                const std::int64_t q_n2 = norm2(q);
                if (q_n2 == 0 || q_n2 > n2max) continue;
                const LatticeVec d{p[0] - x, p[1] - y, p[2] - z};
                const std::int64_t d_n2 = norm2(d);
                const double eq = eta_by_n2[q_n2];
                conv_v.add(vhat_by_n2[d_n2] * eq);
                conv_chi.add(chi_by_n2[d_n2] * eq);
            }

    const double p_phys2 = two_pi * two_pi * static_cast<double>(p_n2);
    const double eta_p = (*eta)(two_pi * p_norm);
    return p_phys2 * eta_p + 0.5 * vhat_by_n2[p_n2] + conv_v.value() / (2.0 * sol.N) -
           sol.N * sol.N * sol.N * sol.lambda * chi_by_n2[p_n2] -
           sol.lambda * sol.N * sol.N * conv_chi.value();
}

// Maximum residual over a set of shells, with one eta profile shared across
// the evaluations.
inline double scattering_residual(const ScatteringSolution& sol,
                                  const std::vector<LatticeVec>& p_shells, int K) {
    if (p_shells.empty())
        throw std::invalid_argument("scattering_residual: empty shell list");
    std::int64_t max_n2 = 1;
    for (const LatticeVec& p : p_shells) max_n2 = std::max(max_n2, norm2(p));
    const RadialProfile eta = eta_profile(
        sol, two_pi * (2.0 * K + std::sqrt(static_cast<double>(max_n2)) + 2.0));
    double worst = 0.0;
    for (const LatticeVec& p : p_shells)
        worst = std::max(worst, std::abs(scattering_residual(sol, p, K, &eta)));
    return worst;
}

}  // namespace bosegas
