#pragma once

// Interaction potentials: spherically symmetric, nonnegative, compactly
// supported profiles and their radial Fourier transforms.

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bosegas/numerics.hpp"

namespace bosegas {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

enum class PotentialKind { square_barrier, smooth_bump, tabulated };

inline std::string to_string(PotentialKind k) {
    switch (k) {
        case PotentialKind::square_barrier: return "square_barrier";
        case PotentialKind::smooth_bump: return "smooth_bump";
        case PotentialKind::tabulated: return "tabulated";
    }
    return "?";
}

struct RadialPotential {
    PotentialKind kind = PotentialKind::square_barrier;
    double v0 = 0.0;      // amplitude
    double radius = 1.0;  // support radius R0
    // (r, V(r)) samples for the tabulated kind; strictly increasing r
    std::vector<std::pair<double, double>> samples;

    static RadialPotential square(double v0, double r0) {
        return {PotentialKind::square_barrier, v0, r0, {}};
    }
    // V0 * (1 - (r/R0)^2)^3 on [0, R0]: C^2 at the support boundary
    static RadialPotential bump(double v0, double r0) {
        return {PotentialKind::smooth_bump, v0, r0, {}};
    }
    static RadialPotential tabulated(std::vector<std::pair<double, double>> pts) {
        RadialPotential v;
        v.kind = PotentialKind::tabulated;
        v.samples = std::move(pts);
        v.v0 = 0.0;
        for (const auto& [r, val] : v.samples) v.v0 = std::max(v.v0, val);
        v.radius = v.samples.empty() ? 0.0 : v.samples.back().first;
        return v;
    }

    bool is_zero() const { return v0 == 0.0; }

    double operator()(double r) const {
        if (r < 0.0) r = -r;
        switch (kind) {
            case PotentialKind::square_barrier:
                return r <= radius ? v0 : 0.0;
            case PotentialKind::smooth_bump: {
                if (r >= radius) return 0.0;
                const double t = 1.0 - (r / radius) * (r / radius);
                return v0 * t * t * t;
            }
            case PotentialKind::tabulated: {
                if (samples.empty() || r >= samples.back().first) return 0.0;
                if (r <= samples.front().first) return samples.front().second;
                auto it = std::lower_bound(samples.begin(), samples.end(), r,
                                           [](const auto& s, double x) { return s.first < x; });
                const auto& [r1, v1] = *it;
                const auto& [r0, vlo] = *(it - 1);
                const double t = (r - r0) / (r1 - r0);
                return vlo + t * (v1 - vlo);
            }
        }
        return 0.0;
    }

    void validate() const {
        if (radius <= 0.0 && !is_zero())
            throw std::invalid_argument("potential: support radius must be positive");
        if (v0 < 0.0) throw std::invalid_argument("potential: amplitude must be nonnegative");
        if (kind == PotentialKind::tabulated) {
            for (std::size_t i = 0; i < samples.size(); ++i) {
                if (samples[i].second < 0.0)
                    throw std::invalid_argument("potential: negative tabulated value");
                if (i > 0 && samples[i].first <= samples[i - 1].first)
                    throw std::invalid_argument("potential: table radii must increase strictly");
            }
        }
    }

    // 4pi int V r^2 dr  (the q = 0 transform)
    double integral_r2() const {
        if (is_zero()) return 0.0;
        switch (kind) {
            case PotentialKind::square_barrier:
                return 4.0 * pi * v0 * radius * radius * radius / 3.0;
            default:
                return 4.0 * pi *
                       integrate([this](double r) { return (*this)(r)*r * r; }, 0.0, radius,
                                 0.0, 1e-12);
        }
    }

    // int V^3 r^2 dr (finite for every admissible bounded profile)
    double cube_integral() const {
        if (is_zero()) return 0.0;
        return integrate(
            [this](double r) {
                const double v = (*this)(r);
                return v * v * v * r * r;
            },
            0.0, radius, 0.0, 1e-10);
    }
};

// ---------------------------------------------------------------------------
// 3D radial Fourier transform of a radial function supported on [0, R]:
//   (4 pi / q) int_0^R f(r) r sin(qr) dr,   q=0 -> 4 pi int f r^2 dr.
// Switches to a Filon-type rule once qR is large.

inline double fourier_radial(const std::function<double(double)>& f, double support,
                             double q, double epsrel = 1e-10) {
    if (support <= 0.0) return 0.0;
    q = std::abs(q);
    if (q < 1e-12)
        return 4.0 * pi * integrate([&](double r) { return f(r) * r * r; }, 0.0, support,
                                    0.0, epsrel);
    if (q * support <= 50.0)
        return 4.0 * pi / q *
               integrate([&](double r) { return f(r) * r * std::sin(q * r); }, 0.0, support,
                         0.0, epsrel);
    return 4.0 * pi / q *
           integrate_oscillatory([&](double r) { return f(r) * r; }, 0.0, support, q, true,
                                 1e-13, epsrel);
}

// Transform of the ball indicator of radius ell (closed form).
inline double ball_indicator_hat(double ell, double q) {
    q = std::abs(q);
    if (q * ell < 5e-2) {
        // series keeps full precision through the q^3 cancellation, which
        // costs the closed form ~x^-2 digits near the origin
        const double x2 = q * ell * q * ell;
        return 4.0 * pi * ell * ell * ell *
               (1.0 / 3.0 + x2 * (-1.0 / 30.0 + x2 * (1.0 / 840.0 - x2 / 45360.0)));
    }
    return 4.0 * pi * (std::sin(ell * q) - ell * q * std::cos(ell * q)) / (q * q * q);
}

// V-hat through quadrature, for any kind. Kept separate so the closed-form
// fast path below can be validated against it.
inline double v_hat_quadrature(const RadialPotential& V, double q, double epsrel = 1e-10) {
    if (V.is_zero()) return 0.0;
    return fourier_radial([&](double r) { return V(r); }, V.radius, q, epsrel);
}

inline double v_hat(const RadialPotential& V, double q) {
    if (V.is_zero()) return 0.0;
    if (V.kind == PotentialKind::square_barrier)
        return V.v0 * ball_indicator_hat(V.radius, q);
    return v_hat_quadrature(V, q);
}

}  // namespace bosegas
