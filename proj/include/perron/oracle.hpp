#ifndef PERRON_ORACLE_HPP
#define PERRON_ORACLE_HPP

// Classical reference solvers used to cross-check the excursion-based methods.

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "perron/core.hpp"
#include "perron/error.hpp"
#include "perron/rng.hpp"

namespace perron {

struct EigenEstimate {
    double value = 0.0;
    std::vector<double> left_vector;
    std::size_t iterations = 0;
    bool converged = false;
};

namespace detail {

inline std::vector<double> apply(const PositiveMatrix &a, std::span<const double> x, bool from_left)
{
    const std::size_t d = a.dim();
    std::vector<double> y(d, 0.0);
    if (from_left) {
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t k = 0; k < d; ++k) y[k] += x[j] * a(j, k);
    } else {
        for (std::size_t j = 0; j < d; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < d; ++k) s += a(j, k) * x[k];
            y[j] = s;
        }
    }
    return y;
}

/// Stops once the Collatz-Wielandt bracket min_k y_k/v_k <= lambda <= max_k y_k/v_k
/// is within tol and the L1 step of v is below tol or has stopped shrinking
/// (the rounding floor when |gamma_2| is close to lambda).
inline EigenEstimate power_method(const PositiveMatrix &a, double tol, std::size_t max_iter, bool from_left)
{
    if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tol must be positive");
    const std::size_t d = a.dim();
    tol = std::max(tol, 1e-15);

    EigenEstimate e;
    std::vector<double> v(d, 1.0 / static_cast<double>(d));
    double previous_change = std::numeric_limits<double>::infinity();
    for (std::size_t it = 1; it <= max_iter; ++it) {
        std::vector<double> y = apply(a, v, from_left);
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
            lo = std::min(lo, y[k] / v[k]);
            hi = std::max(hi, y[k] / v[k]);
        }
        // v sums to one, so the L1 growth is the Rayleigh-type estimate
        const double value = pairwise_sum(y);
        double change = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
            y[k] /= value;
            change += std::abs(y[k] - v[k]);
        }
        v = std::move(y);
        if (hi - lo <= tol * value && (change <= tol || change >= previous_change)) {
            e.value = value;
            e.left_vector = std::move(v);
            e.iterations = it;
            e.converged = true;
            return e;
        }
        previous_change = change;
    }
    throw Error(ErrorKind::NoConvergence,
                "power iteration did not converge in " + std::to_string(max_iter) + " iterations");
}

inline double dot(std::span<const double> x, std::span<const double> y) noexcept
{
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) s += x[k] * y[k];
    return s;
}

inline double norm2(std::span<const double> x) noexcept { return std::sqrt(dot(x, x)); }

} // namespace detail

/// Dominant eigenvalue and L1-normalised left eigenvector: v <- vA from the uniform start.
inline EigenEstimate power_iteration(const PositiveMatrix &a, double tol, std::size_t max_iter = 100000)
{
    return detail::power_method(a, tol, max_iter, true);
}

/// Right Perron vector (Av = lambda v), L1-normalised; stored in left_vector.
inline EigenEstimate right_power_iteration(const PositiveMatrix &a, double tol, std::size_t max_iter = 100000)
{
    return detail::power_method(a, tol, max_iter, false);
}

struct SubdominantOptions {
    std::size_t max_iter = 20000;
    /// Iterations without a Cauchy ratio before trying the two-term recurrence fit.
    std::size_t oscillation_check = 500;
    std::size_t window = 50;
};

/// Largest modulus among the eigenvalues other than `lambda`.
///
/// The power method runs on x -> xA - lambda (x.h)/(mu.h) mu, where h is the
/// right Perron vector; this removes the dominant pair and leaves the rest of
/// the spectrum untouched. A real subdominant eigenvalue makes the growth
/// ratio Cauchy. A complex pair makes it oscillate; then the iterates obey
/// x_{k+2} = p x_{k+1} + q x_k, whose characteristic roots are fitted by
/// least squares, and failing that the modulus is taken from the mean growth
/// rate over the last window of iterations.
inline double subdominant_modulus(const PositiveMatrix &a, double lambda, std::span<const double> mu, double tol,
                                  const SubdominantOptions &opts = {})
{
    const std::size_t d = a.dim();
    if (d == 1) return 0.0;
    if (mu.size() != d) throw Error(ErrorKind::InvalidArgument, "eigenvector length does not match the matrix");

    const EigenEstimate right = right_power_iteration(a, std::max(tol, 1e-15));
    const std::vector<double> &h = right.left_vector;
    const double mu_h = detail::dot(mu, h);

    const auto deflated = [&](std::span<const double> x) {
        std::vector<double> y = detail::apply(a, x, true);
        const double c = lambda * detail::dot(x, h) / mu_h;
        for (std::size_t k = 0; k < d; ++k) y[k] -= c * mu[k];
        return y;
    };
    const auto project = [&](std::vector<double> &x) {
        const double c = detail::dot(x, h) / mu_h;
        for (std::size_t k = 0; k < d; ++k) x[k] -= c * mu[k];
    };

    // fixed pseudo-random start, so no eigen-direction is missed by symmetry
    SplitMix64 rng(0x5EEDULL);
    std::vector<double> x(d);
    for (double &v : x) v = rng.uniform() - 0.5;
    project(x);
    double nx = detail::norm2(x);
    if (nx == 0.0) return 0.0;
    for (double &v : x) v /= nx;

    const double noise_floor = 1e-13 * lambda;
    std::vector<double> log_ratio;
    log_ratio.reserve(opts.max_iter);
    std::vector<double> prev_x; // unnormalised predecessor of x, in x's scale
    double previous = std::numeric_limits<double>::quiet_NaN();
    double previous_fit = std::numeric_limits<double>::quiet_NaN();
    int cauchy_hits = 0;

    for (std::size_t it = 1; it <= opts.max_iter; ++it) {
        std::vector<double> y = deflated(x);
        project(y); // suppresses dominant-direction rounding drift
        const double r = detail::norm2(y);
        if (r == 0.0) return 0.0;
        log_ratio.push_back(std::log(r));

        if (std::abs(r - previous) <= tol * r || (r < noise_floor && previous < noise_floor)) {
            if (++cauchy_hits >= 3) return r;
        } else {
            cauchy_hits = 0;
        }

        if (it >= opts.oscillation_check && !prev_x.empty()) {
            // least squares for y = p x + q x_prev, with x_prev scaled so that x = x_prev A'
            const double a11 = detail::dot(x, x), a12 = detail::dot(x, prev_x), a22 = detail::dot(prev_x, prev_x);
            const double b1 = detail::dot(x, y), b2 = detail::dot(prev_x, y);
            const double det = a11 * a22 - a12 * a12;
            if (det > 1e-20 * a11 * a22) {
                const double q = (a11 * b2 - a12 * b1) / det;
                const double p = (b1 * a22 - b2 * a12) / det;
                double resid = 0.0;
                for (std::size_t k = 0; k < d; ++k) {
                    const double e = y[k] - p * x[k] - q * prev_x[k];
                    resid += e * e;
                }
                // dominant root modulus of t^2 - p t - q
                const double disc = p * p + 4.0 * q;
                const double fit = disc < 0.0 ? std::sqrt(-q) : 0.5 * (std::abs(p) + std::sqrt(disc));
                if (std::sqrt(resid) <= 1e-8 * r && std::abs(fit - previous_fit) <= 1e-10 * fit)
                    return fit;
                previous_fit = fit;
            }
        }

        previous = r;
        prev_x = x;
        for (double &v : prev_x) v /= r;
        for (std::size_t k = 0; k < d; ++k) x[k] = y[k] / r;
    }

    const std::size_t w = std::min(opts.window, log_ratio.size());
    double mean = 0.0;
    for (std::size_t k = log_ratio.size() - w; k < log_ratio.size(); ++k) mean += log_ratio[k];
    return std::exp(mean / static_cast<double>(w));
}

/// (z + z^2 + ... + z^n) / n for |z| <= 1, via (z - z^{n+1}) / (n (1 - z)).
inline std::complex<double> cesaro_geometric(std::complex<double> z, std::uint64_t n)
{
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "n must be at least 1");
    if (std::abs(z) > 1.0 + 1e-12) throw Error(ErrorKind::DomainError, "|z| must not exceed 1");
    if (z == std::complex<double>(1.0, 0.0)) return {1.0, 0.0};
    const double nn = static_cast<double>(n);
    const std::complex<double> zn1 = std::pow(z, static_cast<double>(n + 1));
    return (z - zn1) / (nn * (1.0 - z));
}

} // namespace perron

#endif // PERRON_ORACLE_HPP
