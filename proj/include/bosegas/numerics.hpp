#pragma once

// Shared numerical kernels: compensated reductions with a deterministic
// chunked combine, GSL quadrature/spline/root wrappers, a small thread pool,
// linear least squares and a content hash.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>
#include <gsl/gsl_interp.h>
#include <gsl/gsl_roots.h>
#include <gsl/gsl_spline.h>

namespace bosegas {

inline void ensure_gsl_quiet() {
    static const auto once = [] {
        gsl_set_error_handler_off();
        return true;
    }();
    (void)once;
}

// ---------------------------------------------------------------------------
// Compensated summation (Neumaier variant of Kahan).

struct Compensated {
    double sum = 0.0;
    double comp = 0.0;        // running correction
    double comp_mag = 0.0;    // accumulated |correction| magnitude

    void add(double x) {
        const double t = sum + x;
        const double c = (std::abs(sum) >= std::abs(x)) ? (sum - t) + x : (x - t) + sum;
        comp += c;
        comp_mag += std::abs(c);
        sum = t;
    }
    double value() const { return sum + comp; }
};

// Runs fn(i) for i in [0, n) on up to `threads` workers. Tasks must touch
// disjoint state; scheduling order is unspecified, so determinism has to come
// from how results are combined, not from here.
inline void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
    const std::size_t workers = std::min<std::size_t>(std::max(threads, 1), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
                if (i >= n) return;
                fn(i);
            }
        });
    }
    for (auto& t : pool) t.join();
}

struct ChunkedTotal {
    double value = 0.0;
    double comp_bound = 0.0;
};

// Deterministic parallel reduction: fixed-size chunks, each summed with
// Neumaier compensation, partials combined sequentially in chunk order.
// The chunk layout does not depend on the thread count, so the result is
// bit-identical for any `threads`.
inline ChunkedTotal chunked_sum(std::size_t n_terms, std::size_t chunk,
                                const std::function<double(std::size_t)>& term,
                                int threads = 1) {
    if (n_terms == 0) return {};
    chunk = std::max<std::size_t>(chunk, 1);
    const std::size_t n_chunks = (n_terms + chunk - 1) / chunk;
    std::vector<Compensated> partial(n_chunks);
    parallel_for(n_chunks, threads, [&](std::size_t c) {
        const std::size_t lo = c * chunk;
        const std::size_t hi = std::min(lo + chunk, n_terms);
        Compensated acc;
        for (std::size_t i = lo; i < hi; ++i) acc.add(term(i));
        partial[c] = acc;
    });
    Compensated total;
    double comp_mag = 0.0;
    for (const auto& p : partial) {
        total.add(p.value());
        comp_mag += p.comp_mag;
    }
    return {total.value(), comp_mag + total.comp_mag};
}

// ---------------------------------------------------------------------------
// Quadrature (GSL adaptive Gauss-Kronrod and friends).

namespace detail {
inline double gsl_fn_trampoline(double x, void* p) {
    return (*static_cast<const std::function<double(double)>*>(p))(x);
}

struct Workspace {
    gsl_integration_workspace* w;
    explicit Workspace(std::size_t n) : w(gsl_integration_workspace_alloc(n)) {
        if (!w) throw std::bad_alloc();
    }
    ~Workspace() { gsl_integration_workspace_free(w); }
    Workspace(const Workspace&) = delete;
    Workspace& operator=(const Workspace&) = delete;
};
}  // namespace detail

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double epsabs = 0.0, double epsrel = 1e-10, std::size_t limit = 400) {
    ensure_gsl_quiet();
    detail::Workspace ws(limit);
    gsl_function gf{&detail::gsl_fn_trampoline, const_cast<std::function<double(double)>*>(&f)};
    double result = 0.0, abserr = 0.0;
    const int status = gsl_integration_qag(&gf, a, b, epsabs, epsrel, limit,
                                           GSL_INTEG_GAUSS61, ws.w, &result, &abserr);
    if (status == GSL_EDIVERGE) throw QuadratureError("divergent transform");
    if (status != GSL_SUCCESS && status != GSL_EROUND && status != GSL_EMAXITER)
        throw QuadratureError(std::string("quadrature failed: ") + gsl_strerror(status));
    return result;
}

inline double integrate_to_inf(const std::function<double(double)>& f, double a,
                               double epsabs = 0.0, double epsrel = 1e-10,
                               std::size_t limit = 400) {
    ensure_gsl_quiet();
    detail::Workspace ws(limit);
    gsl_function gf{&detail::gsl_fn_trampoline, const_cast<std::function<double(double)>*>(&f)};
    double result = 0.0, abserr = 0.0;
    const int status = gsl_integration_qagiu(&gf, a, epsabs, epsrel, limit, ws.w,
                                             &result, &abserr);
    if (status == GSL_EDIVERGE) throw QuadratureError("divergent transform");
    if (status != GSL_SUCCESS && status != GSL_EROUND && status != GSL_EMAXITER)
        throw QuadratureError(std::string("quadrature failed: ") + gsl_strerror(status));
    return result;
}

// integral of f(x)*sin(omega x) (or cos) over [a, b] for strongly oscillatory
// omega; uses the Chebyshev-moment method (Filon-type).
inline double integrate_oscillatory(const std::function<double(double)>& f, double a, double b,
                                    double omega, bool use_sine = true,
                                    double epsabs = 1e-12, double epsrel = 1e-10,
                                    std::size_t limit = 600) {
    ensure_gsl_quiet();
    detail::Workspace ws(limit);
    gsl_integration_qawo_table* table = gsl_integration_qawo_table_alloc(
        omega, b - a, use_sine ? GSL_INTEG_SINE : GSL_INTEG_COSINE, 40);
    if (!table) throw std::bad_alloc();
    gsl_function gf{&detail::gsl_fn_trampoline, const_cast<std::function<double(double)>*>(&f)};
    double result = 0.0, abserr = 0.0;
    const int status = gsl_integration_qawo(&gf, a, epsabs, epsrel, limit, ws.w, table,
                                            &result, &abserr);
    gsl_integration_qawo_table_free(table);
    if (status != GSL_SUCCESS && status != GSL_EROUND && status != GSL_EMAXITER)
        throw QuadratureError(std::string("oscillatory quadrature failed: ") + gsl_strerror(status));
    return result;
}

// ---------------------------------------------------------------------------
// Cubic spline on a strictly increasing grid.

class CubicSpline {
  public:
    CubicSpline(std::span<const double> x, std::span<const double> y) {
        if (x.size() != y.size() || x.size() < 4)
            throw std::invalid_argument("spline needs >= 4 matching nodes");
        ensure_gsl_quiet();
        x_.assign(x.begin(), x.end());
        y_.assign(y.begin(), y.end());
        spline_ = gsl_spline_alloc(gsl_interp_cspline, x_.size());
        accel_ = gsl_interp_accel_alloc();
        if (!spline_ || !accel_) throw std::bad_alloc();
        if (gsl_spline_init(spline_, x_.data(), y_.data(), x_.size()) != GSL_SUCCESS)
            throw std::invalid_argument("spline grid must be strictly increasing");
    }
    ~CubicSpline() {
        if (spline_) gsl_spline_free(spline_);
        if (accel_) gsl_interp_accel_free(accel_);
    }
    CubicSpline(const CubicSpline&) = delete;
    CubicSpline& operator=(const CubicSpline&) = delete;

    double operator()(double x) const {
        // accel cache is per-spline; guard for shared use across threads
        std::lock_guard<std::mutex> lock(mu_);
        return gsl_spline_eval(spline_, x, accel_);
    }
    double derivative(double x) const {
        std::lock_guard<std::mutex> lock(mu_);
        return gsl_spline_eval_deriv(spline_, x, accel_);
    }
    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }

  private:
    std::vector<double> x_, y_;
    gsl_spline* spline_ = nullptr;
    gsl_interp_accel* accel_ = nullptr;
    mutable std::mutex mu_;
};

// ---------------------------------------------------------------------------
// Bracketed root find (Brent).

inline double find_root(const std::function<double(double)>& f, double lo, double hi,
                        double epsrel = 1e-14, int max_iter = 200) {
    ensure_gsl_quiet();
    gsl_function gf{&detail::gsl_fn_trampoline, const_cast<std::function<double(double)>*>(&f)};
    gsl_root_fsolver* s = gsl_root_fsolver_alloc(gsl_root_fsolver_brent);
    if (!s) throw std::bad_alloc();
    if (gsl_root_fsolver_set(s, &gf, lo, hi) != GSL_SUCCESS) {
        gsl_root_fsolver_free(s);
        throw std::invalid_argument("root not bracketed");
    }
    double root = lo;
    for (int i = 0; i < max_iter; ++i) {
        if (gsl_root_fsolver_iterate(s) != GSL_SUCCESS) break;
        root = gsl_root_fsolver_root(s);
        const double a = gsl_root_fsolver_x_lower(s);
        const double b = gsl_root_fsolver_x_upper(s);
        if (gsl_root_test_interval(a, b, 0.0, epsrel) == GSL_SUCCESS) break;
    }
    gsl_root_fsolver_free(s);
    return root;
}

// ---------------------------------------------------------------------------
// Least squares straight line y = c*x + d.

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double max_residual = 0.0;
};

inline LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit needs >= 2 matching points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double det = n * sxx - sx * sx;
    if (std::abs(det) < 1e-12 * n * sxx)
        throw std::invalid_argument("degenerate design matrix");
    LineFit fit;
    fit.slope = (n * sxy - sx * sy) / det;
    fit.intercept = (sxx * sy - sx * sxy) / det;
    for (std::size_t i = 0; i < x.size(); ++i)
        fit.max_residual = std::max(fit.max_residual,
                                    std::abs(y[i] - fit.slope * x[i] - fit.intercept));
    return fit;
}

// ---------------------------------------------------------------------------
// FNV-1a content hash (for reproducibility stamps in the CLI output).

inline std::uint64_t fnv1a(std::string_view data) {
    std::uint64_t h = 1469598103934665603ull;
    for (const char c : data) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace bosegas
