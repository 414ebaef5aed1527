#ifndef PERRON_SERIES_HPP
#define PERRON_SERIES_HPP

/**
 * Deterministic evaluation of the first-return generating function
 *
 *     phi_i(lambda) = sum_{k>=1} c_k lambda^{-k},
 *
 * where c_k is the total A-weight of the length-k paths i -> i that avoid i
 * at every intermediate step. c_1 = A(i,i) and, for k >= 2,
 * c_k = u B^{k-2} v with u the off-anchor part of row i, v the off-anchor
 * part of column i and B the principal submatrix without i.  The series
 * converges exactly for lambda > rho(B), and the unique root of
 * phi_i(lambda) = 1 is the Perron eigenvalue of A.
 */

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "perron/core.hpp"
#include "perron/error.hpp"

namespace perron {

enum class Method { series, montecarlo, oracle };

inline constexpr std::string_view to_string(Method m) noexcept
{
    switch (m) {
    case Method::series:     return "series";
    case Method::montecarlo: return "mc";
    case Method::oracle:     return "oracle";
    }
    return "unknown";
}

struct SeriesOptions {
    /// Terms accumulated one at a time; longer sums switch to block doubling.
    std::size_t direct_terms = 2048;
    std::size_t max_terms = std::size_t{1} << 52;
    /// Geometric tail ratio is capped at safety * rho/lambda.
    double safety = 1.05;
    /// lambda <= rho * (1 + divergence_margin) is treated as divergent.
    double divergence_margin = 1e-9;
    double radius_tol = 1e-13;
    std::size_t radius_max_iter = 1000000;
};

struct PhiValue {
    double value = 0.0;
    bool divergent = false;
    double truncation_error_bound = 0.0;
    std::size_t terms_used = 0;
};

struct PerronResult {
    double lambda = 0.0;
    std::vector<double> mu;
    std::vector<double> per_anchor_lambda;
    std::vector<std::vector<double>> per_anchor_mu;
    double residual = 0.0;
    Method method = Method::series;

    std::vector<double> radius_estimates;
    std::vector<std::size_t> terms_used;
};

namespace detail {

/// Running compensated (Neumaier) sum.
struct CompensatedSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double x) noexcept
    {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            carry += (sum - t) + x;
        else
            carry += (x - t) + sum;
        sum = t;
    }
    double value() const noexcept { return sum + carry; }
};

/// x <- x B for a dense square B stored row-major.
inline void left_multiply(std::span<const double> x, std::span<const double> b, std::size_t n, std::span<double> out)
{
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        const double xj = x[j];
        const double *row = b.data() + j * n;
        for (std::size_t k = 0; k < n; ++k) out[k] += xj * row[k];
    }
}

/// Ratio for the geometric tail: the observed ratio, floored at the asymptotic
/// rate rho/lambda and capped at safety * rho/lambda when that cap is below 1.
inline double tail_ratio(double observed, double asymptotic, double safety) noexcept
{
    double r = std::max(observed, asymptotic);
    const double cap = safety * asymptotic;
    if (cap < 1.0) r = std::min(r, cap);
    return r;
}

inline double geometric_tail(double last_term, double r) noexcept
{
    return r < 1.0 ? last_term * r / (1.0 - r) : std::numeric_limits<double>::infinity();
}

using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline Eigen::Map<const RowMajorMatrix> as_eigen(std::span<const double> b, std::size_t n)
{
    return {b.data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)};
}

/// Spectral radius of a positive square matrix, stopped when the Collatz-Wielandt
/// bounds min_j (xB)_j/x_j <= rho <= max_j (xB)_j/x_j agree to relative accuracy
/// tol. After a short run of plain power steps the iterate is refined by
/// Wielandt steps x <- x (sI - B)^{-1} with s just above the upper bound, which
/// keeps x positive and converges fast even when |gamma_2| is close to rho.
inline double positive_spectral_radius(std::span<const double> b, std::size_t n, double tol, std::size_t max_iter)
{
    if (n == 0) return 0.0;
    if (n == 1) return b[0];
    tol = std::max(tol, 64 * std::numeric_limits<double>::epsilon());
    constexpr std::size_t power_steps = 32;

    const auto bm = as_eigen(b, n);
    const auto size = static_cast<Eigen::Index>(n);
    Eigen::RowVectorXd x = Eigen::RowVectorXd::Constant(size, 1.0 / static_cast<double>(n));
    for (std::size_t it = 0; it < max_iter; ++it) {
        const Eigen::RowVectorXd y = x * bm;
        const double lo = (y.array() / x.array()).minCoeff();
        const double hi = (y.array() / x.array()).maxCoeff();
        if (hi - lo <= tol * lo) return 0.5 * (lo + hi);
        if (it >= power_steps) {
            const double shift = hi + std::max(hi - lo, 4 * std::numeric_limits<double>::epsilon() * hi);
            const RowMajorMatrix shifted = shift * RowMajorMatrix::Identity(size, size) - bm;
            const Eigen::VectorXd z = shifted.transpose().partialPivLu().solve(x.transpose());
            if (z.allFinite() && (z.array() > 0.0).all()) {
                x = z.transpose() / z.sum();
                continue;
            }
        }
        x = y / y.sum();
    }
    throw Error(ErrorKind::NoConvergence, "power iteration on the principal submatrix did not converge");
}

/// Partial sums N = sum_{m<n} P^m for n = 1, 2, 4, ... by doubling
/// (N_{2n} = N_n + P^n N_n). `done(N, P^n, n)` ends the loop; n never exceeds
/// `max_n`.
template <class Done>
void neumann_doubling(const Eigen::MatrixXd &p, std::size_t max_n, Done &&done)
{
    Eigen::MatrixXd sum = Eigen::MatrixXd::Identity(p.rows(), p.cols());
    Eigen::MatrixXd power = p;
    for (std::size_t n = 1;; n *= 2) {
        if (done(sum, power, n)) return;
        if (n > max_n / 2)
            throw Error(ErrorKind::TailNotGeometric,
                        "series tail still above tolerance after " + std::to_string(n) + " terms");
        sum += power * sum;
        power = power * power;
    }
}

/// Terms needed before a geometric tail with ratio r drops below tol.
inline double predicted_terms(double r, double tol) noexcept
{
    if (!(r < 1.0)) return std::numeric_limits<double>::infinity();
    if (r <= 0.0) return 1.0;
    return std::log(tol * (1.0 - r)) / std::log(r);
}

} // namespace detail

/// rho(B) for B = A without row/column i; 0 when d = 1.
inline double convergence_radius(const PositiveMatrix &a, std::size_t i, double tol,
                                 std::size_t max_iter = SeriesOptions{}.radius_max_iter)
{
    if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tol must be positive");
    const PrincipalSubmatrix b = principal_submatrix(a, i);
    return detail::positive_spectral_radius(b.entries, b.dim, tol, max_iter);
}

/// Lazily extended first-return coefficient sequence for one anchor state.
///
/// Coefficients are held as logarithms; the running row vector u B^{k-2} is
/// kept L1-normalised with its scale tracked separately, so neither powers of
/// B nor raw c_k for large k are ever formed.
class ReturnSeries {
public:
    ReturnSeries(const PositiveMatrix &a, std::size_t anchor, const SeriesOptions &opts = {})
        : anchor_(anchor), opts_(opts)
    {
        a.require_index(anchor);
        sub_ = principal_submatrix(a, anchor);
        radius_ = detail::positive_spectral_radius(sub_.entries, sub_.dim, opts.radius_tol, opts.radius_max_iter);

        log_coeffs_.push_back(std::log(a(anchor, anchor)));
        const std::size_t n = sub_.dim;
        if (n == 0) return;
        running_.resize(n);
        into_.resize(n);
        scratch_.resize(n);
        for (std::size_t j = 0; j < n; ++j) {
            running_[j] = a(anchor, sub_.parent_index(j));
            into_[j] = a(sub_.parent_index(j), anchor);
        }
        row_ = running_;
        const double s = pairwise_sum(running_);
        for (double &x : running_) x /= s;
        log_scale_ = std::log(s);
        push_coefficient();
    }

    std::size_t anchor() const noexcept { return anchor_; }
    std::size_t order() const noexcept { return log_coeffs_.size(); }
    /// d = 1: the only first-return path is the self-loop.
    bool single_term() const noexcept { return sub_.dim == 0; }
    double radius_estimate() const noexcept { return radius_; }
    const PrincipalSubmatrix &submatrix() const noexcept { return sub_; }
    const SeriesOptions &options() const noexcept { return opts_; }

    /// k is 1-based.
    double log_coefficient(std::size_t k) const { return log_coeffs_.at(k - 1); }
    double coefficient(std::size_t k) const { return std::exp(log_coefficient(k)); }
    std::vector<double> coefficients() const
    {
        std::vector<double> c(log_coeffs_.size());
        for (std::size_t k = 0; k < c.size(); ++k) c[k] = std::exp(log_coeffs_[k]);
        return c;
    }

    /// Ensures at least `k` coefficients (only one exists when d = 1).
    void extend(std::size_t k)
    {
        if (single_term()) return;
        while (log_coeffs_.size() < k) {
            detail::left_multiply(running_, sub_.entries, sub_.dim, scratch_);
            const double s = pairwise_sum(scratch_);
            for (std::size_t j = 0; j < sub_.dim; ++j) running_[j] = scratch_[j] / s;
            log_scale_ += std::log(s);
            push_coefficient();
        }
    }

    bool diverges_at(double lambda) const noexcept
    {
        return !single_term() && lambda <= radius_ * (1.0 + opts_.divergence_margin);
    }

    /// phi(lambda) with geometric tail extrapolation. Summation stops early,
    /// returning the partial sum, once it exceeds `stop_above`.
    PhiValue evaluate(double lambda, double tol, double stop_above = std::numeric_limits<double>::infinity())
    {
        if (!(lambda > 0.0)) throw Error(ErrorKind::InvalidArgument, "lambda must be positive");
        if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tol must be positive");

        PhiValue out;
        if (diverges_at(lambda)) {
            out.divergent = true;
            out.value = std::numeric_limits<double>::infinity();
            out.truncation_error_bound = std::numeric_limits<double>::infinity();
            return out;
        }

        const double log_lambda = std::log(lambda);
        const double first = std::exp(log_coeffs_[0] - log_lambda);
        out.terms_used = 1;
        out.value = first;
        if (single_term()) return out;

        const double asymptotic = radius_ / lambda;
        const std::size_t direct_cap = std::min(opts_.direct_terms, opts_.max_terms);
        if (detail::predicted_terms(asymptotic, tol) <= static_cast<double>(direct_cap) &&
            evaluate_direct(lambda, log_lambda, tol, stop_above, direct_cap, out))
            return out;
        if (direct_cap >= opts_.max_terms)
            throw Error(ErrorKind::TailNotGeometric, "series tail still above tolerance after " +
                                                         std::to_string(opts_.max_terms) + " terms");
        evaluate_doubling(lambda, first, tol, stop_above, out);
        return out;
    }

private:
    bool evaluate_direct(double lambda, double log_lambda, double tol, double stop_above, std::size_t cap,
                         PhiValue &out)
    {
        const double asymptotic = radius_ / lambda;
        detail::CompensatedSum sum;
        double prev = out.value;
        sum.add(prev);
        for (std::size_t k = 2; k <= cap; ++k) {
            extend(k);
            const double term = std::exp(log_coeffs_[k - 1] - static_cast<double>(k) * log_lambda);
            sum.add(term);
            out.terms_used = k;
            if (sum.value() > stop_above) {
                out.value = sum.value();
                out.truncation_error_bound = std::numeric_limits<double>::infinity();
                return true;
            }
            const double tail = detail::geometric_tail(term, detail::tail_ratio(term / prev, asymptotic, opts_.safety));
            if (tail <= tol) {
                out.value = sum.value() + tail;
                out.truncation_error_bound = tail;
                return true;
            }
            prev = term;
        }
        return false;
    }

    void evaluate_doubling(double lambda, double first, double tol, double stop_above, PhiValue &out)
    {
        const auto n = static_cast<Eigen::Index>(sub_.dim);
        const Eigen::MatrixXd p = detail::as_eigen(sub_.entries, sub_.dim) / lambda;
        Eigen::RowVectorXd u(n);
        Eigen::VectorXd v(n);
        for (Eigen::Index j = 0; j < n; ++j) {
            u[j] = row_[static_cast<std::size_t>(j)] / lambda;
            v[j] = into_[static_cast<std::size_t>(j)] / lambda;
        }
        const double asymptotic = radius_ / lambda;
        double prev_next = u * v;
        std::size_t prev_n = 0;

        // N = sum_{m<n} P^m covers the terms k = 2..n+1; u P^n v is term n+2.
        detail::neumann_doubling(p, opts_.max_terms - 1, [&](const Eigen::MatrixXd &sum, const Eigen::MatrixXd &power,
                                                             std::size_t terms) {
            const double partial = first + u * sum * v;
            const double next = u * power * v;
            out.terms_used = terms + 1;
            if (partial > stop_above) {
                out.value = partial;
                out.truncation_error_bound = std::numeric_limits<double>::infinity();
                return true;
            }
            const double observed = std::pow(next / prev_next, 1.0 / static_cast<double>(terms - prev_n));
            const double r = detail::tail_ratio(observed, asymptotic, opts_.safety);
            const double tail = r < 1.0 ? next / (1.0 - r) : std::numeric_limits<double>::infinity();
            if (tail <= tol) {
                out.value = partial + tail;
                out.truncation_error_bound = tail;
                return true;
            }
            prev_next = next;
            prev_n = terms;
            return false;
        });
    }

    void push_coefficient()
    {
        double dot = 0.0;
        for (std::size_t j = 0; j < sub_.dim; ++j) dot += running_[j] * into_[j];
        log_coeffs_.push_back(log_scale_ + std::log(dot));
    }

    std::size_t anchor_;
    SeriesOptions opts_;
    PrincipalSubmatrix sub_;
    double radius_ = 0.0;

    std::vector<double> log_coeffs_;
    std::vector<double> running_;
    std::vector<double> into_;
    std::vector<double> row_;
    std::vector<double> scratch_;
    double log_scale_ = 0.0;
};

/// c_1..c_K for anchor i (a single coefficient when d = 1).
inline ReturnSeries first_return_coefficients(const PositiveMatrix &a, std::size_t i, std::size_t order,
                                              const SeriesOptions &opts = {})
{
    if (order < 1) throw Error(ErrorKind::InvalidArgument, "series order must be at least 1");
    ReturnSeries s(a, i, opts);
    s.extend(order);
    return s;
}

inline PhiValue phi_eval(const PositiveMatrix &a, std::size_t i, double lambda, double tol,
                         const SeriesOptions &opts = {})
{
    ReturnSeries s(a, i, opts);
    return s.evaluate(lambda, tol);
}

/// Root of phi_i(lambda) = 1 by bisection on [min S, max S].
///
/// For lambda = max S every path weight prod S(X_n)/lambda is at most 1, so
/// phi <= 1; for lambda = min S every weight is at least 1, so phi >= 1.
inline double solve_lambda_anchor(ReturnSeries &series, std::span<const double> row_sums, double tol)
{
    if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tol must be positive");
    double lo = *std::min_element(row_sums.begin(), row_sums.end());
    double hi = *std::max_element(row_sums.begin(), row_sums.end());
    if (lo == hi) {
        lo -= tol * lo;
        hi += tol * hi;
    }

    // Inner truncation is tighter than tol so the sign decisions near the root are sharp.
    const double inner_tol = tol * 1e-2;
    // Partial sums above this are certainly above 1; no need to finish them.
    const double stop_above = 1.0 + 1e3 * tol;
    const auto phi = [&](double lambda) {
        const PhiValue v = series.evaluate(lambda, inner_tol, stop_above);
        return v.value;
    };

    const double phi_lo = phi(lo);
    const double phi_hi = phi(hi);
    if (phi_lo < 1.0 - tol || phi_hi > 1.0 + tol)
        throw Error(ErrorKind::BracketFailure, "phi(" + std::to_string(lo) + ") = " + std::to_string(phi_lo) +
                                                   ", phi(" + std::to_string(hi) + ") = " + std::to_string(phi_hi) +
                                                   " do not bracket 1");
    if (phi_lo == 1.0) return lo;
    if (phi_hi == 1.0) return hi;

    double best = hi, best_gap = std::abs(phi_hi - 1.0);
    if (std::isfinite(phi_lo) && std::abs(phi_lo - 1.0) < best_gap) {
        best = lo;
        best_gap = std::abs(phi_lo - 1.0);
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = lo + 0.5 * (hi - lo);
        if (!(mid > lo && mid < hi)) break;
        const double f = phi(mid);
        if (std::abs(f - 1.0) < best_gap) {
            best = mid;
            best_gap = std::abs(f - 1.0);
        }
        if (f == 1.0) break;
        if (f > 1.0)
            lo = mid;
        else
            hi = mid;
    }
    return best;
}

inline double solve_lambda_anchor(const PositiveMatrix &a, std::size_t i, double tol, const SeriesOptions &opts = {})
{
    ReturnSeries s(a, i, opts);
    return solve_lambda_anchor(s, a.row_sums(), tol);
}

/// mu_i(j): total lambda-discounted weight of i-avoiding paths from i to j,
/// with mu_i(i) = 1. `radius` is rho(B) for the same anchor.
inline std::vector<double> mu_anchor(const PositiveMatrix &a, std::size_t i, double lambda, double tol, double radius,
                                     const SeriesOptions &opts = {}, std::size_t *terms_used = nullptr)
{
    a.require_index(i);
    if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tol must be positive");
    const std::size_t d = a.dim();
    std::vector<double> mu(d, 0.0);
    mu[i] = 1.0;
    if (terms_used) *terms_used = 0;
    if (d == 1) return mu;
    if (lambda <= radius * (1.0 + opts.divergence_margin))
        throw Error(ErrorKind::Divergent, "lambda " + std::to_string(lambda) +
                                              " is inside the convergence radius " + std::to_string(radius));

    const PrincipalSubmatrix b = principal_submatrix(a, i);
    const std::size_t n = b.dim;
    const double asymptotic = radius / lambda;
    const std::size_t direct_cap = std::min(opts.direct_terms, opts.max_terms);

    if (detail::predicted_terms(asymptotic, tol) <= static_cast<double>(direct_cap)) {
        std::vector<double> y(n), next(n);
        std::vector<detail::CompensatedSum> acc(n);
        for (std::size_t j = 0; j < n; ++j) {
            y[j] = a(i, b.parent_index(j)) / lambda;
            acc[j].add(y[j]);
        }
        double prev_mass = pairwise_sum(y);
        for (std::size_t step = 2; step <= direct_cap; ++step) {
            detail::left_multiply(y, b.entries, n, next);
            for (std::size_t j = 0; j < n; ++j) {
                y[j] = next[j] / lambda;
                acc[j].add(y[j]);
            }
            const double mass = pairwise_sum(y);
            double total = 1.0;
            for (const auto &c : acc) total += c.value();

            const double r = detail::tail_ratio(mass / prev_mass, asymptotic, opts.safety);
            if (detail::geometric_tail(mass, r) <= tol * total || mass == 0.0) {
                if (terms_used) *terms_used = step;
                const double extrapolate = r < 1.0 ? r / (1.0 - r) : 0.0;
                for (std::size_t j = 0; j < n; ++j) mu[b.parent_index(j)] = acc[j].value() + y[j] * extrapolate;
                return mu;
            }
            prev_mass = mass;
        }
    }
    if (direct_cap >= opts.max_terms)
        throw Error(ErrorKind::TailNotGeometric,
                    "eigenvector series did not settle after " + std::to_string(opts.max_terms) + " terms");

    // (u/lambda) sum_{m<n} (B/lambda)^m covers terms 1..n; (u/lambda) (B/lambda)^n is term n+1.
    const Eigen::MatrixXd p = detail::as_eigen(b.entries, n) / lambda;
    Eigen::RowVectorXd u(static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j) u[static_cast<Eigen::Index>(j)] = a(i, b.parent_index(j)) / lambda;
    double prev_mass = u.sum();
    std::size_t prev_n = 0;
    detail::neumann_doubling(p, opts.max_terms, [&](const Eigen::MatrixXd &sum, const Eigen::MatrixXd &power,
                                                    std::size_t terms) {
        const Eigen::RowVectorXd partial = u * sum;
        const Eigen::RowVectorXd next = u * power;
        const double mass = next.sum();
        const double observed = std::pow(mass / prev_mass, 1.0 / static_cast<double>(terms - prev_n));
        const double r = detail::tail_ratio(observed, asymptotic, opts.safety);
        const double extrapolate = r < 1.0 ? 1.0 / (1.0 - r) : std::numeric_limits<double>::infinity();
        if (mass * extrapolate > tol * (1.0 + partial.sum()) && mass != 0.0) {
            prev_mass = mass;
            prev_n = terms;
            return false;
        }
        if (terms_used) *terms_used = terms;
        for (std::size_t j = 0; j < n; ++j) {
            const auto e = static_cast<Eigen::Index>(j);
            mu[b.parent_index(j)] = partial[e] + next[e] * extrapolate;
        }
        return true;
    });
    return mu;
}

inline std::vector<double> mu_anchor(const PositiveMatrix &a, std::size_t i, double lambda, double tol,
                                     const SeriesOptions &opts = {})
{
    return mu_anchor(a, i, lambda, tol, convergence_radius(a, i, opts.radius_tol, opts.radius_max_iter), opts);
}

/// max_k |(mu A)(k) - lambda mu(k)| / lambda.
inline double eigen_residual(const PositiveMatrix &a, double lambda, std::span<const double> mu)
{
    const std::size_t d = a.dim();
    std::vector<double> col(d);
    double worst = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
        for (std::size_t j = 0; j < d; ++j) col[j] = mu[j] * a(j, k);
        worst = std::max(worst, std::abs(pairwise_sum(col) - lambda * mu[k]));
    }
    return worst / lambda;
}

inline std::vector<double> normalized_l1(std::vector<double> v)
{
    const double s = pairwise_sum(v);
    for (double &x : v) x /= s;
    return v;
}

/// Perron eigenvalue and probability-normalised left eigenvector from every anchor.
inline PerronResult perron_pair(const PositiveMatrix &a, double tol, const SeriesOptions &opts = {})
{
    if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tol must be positive");
    const std::size_t d = a.dim();
    PerronResult out;
    out.method = Method::series;
    out.per_anchor_lambda.resize(d);
    out.per_anchor_mu.resize(d);
    out.radius_estimates.resize(d);
    out.terms_used.resize(d);

    for (std::size_t i = 0; i < d; ++i) {
        ReturnSeries series(a, i, opts);
        const double lambda_i = solve_lambda_anchor(series, a.row_sums(), tol);
        std::size_t mu_terms = 0;
        auto mu_i = mu_anchor(a, i, lambda_i, tol, series.radius_estimate(), opts, &mu_terms);
        out.per_anchor_lambda[i] = lambda_i;
        out.per_anchor_mu[i] = normalized_l1(std::move(mu_i));
        out.radius_estimates[i] = series.radius_estimate();
        out.terms_used[i] = std::max(series.order(), mu_terms);
    }

    out.lambda = pairwise_sum(out.per_anchor_lambda) / static_cast<double>(d);
    const auto [lo, hi] = std::minmax_element(out.per_anchor_lambda.begin(), out.per_anchor_lambda.end());
    if (*hi - *lo > 10.0 * tol * out.lambda)
        throw Error(ErrorKind::AnchorDisagreement, "per-anchor eigenvalues span [" + std::to_string(*lo) + ", " +
                                                       std::to_string(*hi) + "]");
    out.mu = out.per_anchor_mu.front();
    out.residual = eigen_residual(a, out.lambda, out.mu);
    return out;
}

} // namespace perron

#endif // PERRON_SERIES_HPP
