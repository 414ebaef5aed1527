#ifndef PERRON_MONTECARLO_HPP
#define PERRON_MONTECARLO_HPP

/**
 * Monte Carlo estimators built on excursions of the chain with transition
 * matrix M(i,j) = A(i,j)/S(i), started at an anchor i and stopped at the
 * first return tau to i:
 *
 *     phi_i(lambda) = E_i[ prod_{n<tau} S(X_n)/lambda ]
 *     mu_i(j)       = E_i[ sum_{n<tau} 1{X_n = j} prod_{k<n} S(X_k)/lambda ]
 *
 * Draw s under seed `seed` always uses sample_stream(seed, s), so results are
 * bit-identical for any thread count.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <thread>
#include <vector>

#include "perron/core.hpp"
#include "perron/error.hpp"
#include "perron/rng.hpp"
#include "perron/series.hpp"

namespace perron {

inline constexpr std::uint64_t default_horizon = 100000;

struct ExcursionRecord {
    std::size_t anchor = 0;
    std::uint64_t tau = 0;
    /// Visits to each state at times 0..tau-1.
    std::vector<std::uint64_t> occupation;
    /// sum_{n<tau} 1{X_n = j} prod_{k<n} S(X_k)/lambda; empty unless a lambda was supplied.
    std::vector<double> visit_weights;
    bool truncated = false;

    /// log of prod_{n<tau} S(X_n)/lambda, summed per state so that S = lambda gives exactly 0.
    double log_weight(std::span<const double> log_row_sums, double log_lambda) const noexcept
    {
        double lw = 0.0;
        for (std::size_t j = 0; j < occupation.size(); ++j)
            if (occupation[j] != 0) lw += static_cast<double>(occupation[j]) * (log_row_sums[j] - log_lambda);
        return lw;
    }

    double weight_at(std::span<const double> row_sums, double lambda) const
    {
        std::vector<double> log_s(row_sums.size());
        for (std::size_t j = 0; j < row_sums.size(); ++j) log_s[j] = std::log(row_sums[j]);
        return std::exp(log_weight(log_s, std::log(lambda)));
    }
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t n_samples = 0;
    std::uint64_t seed = 0;
    double truncated_fraction = 0.0;
    /// Every sample identical; std_error = 0 is exact rather than estimated.
    bool degenerate_variance = false;
    /// lambda within 10% of rho(B): weights are heavy-tailed and std_error is unreliable.
    bool heavy_tail_warning = false;
};

struct McRoot {
    double lambda = 0.0;
    double ci_halfwidth = 0.0;
    /// phi-hat at the root, with its sampling error.
    McEstimate phi;
    double derivative = 0.0;
    double radius = 0.0;
};

namespace detail {

inline unsigned resolve_threads(unsigned threads, std::uint64_t work) noexcept
{
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::uint64_t>(threads, std::max<std::uint64_t>(work, 1)));
}

/// Runs fn(begin, end) over contiguous chunks of [0, n).
template <class Fn>
void parallel_chunks(std::uint64_t n, unsigned threads, Fn &&fn)
{
    threads = resolve_threads(threads, n);
    if (threads == 1) {
        fn(std::uint64_t{0}, n);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    const std::uint64_t chunk = (n + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        const std::uint64_t b = t * chunk, e = std::min(n, b + chunk);
        if (b >= e) break;
        pool.emplace_back([&fn, b, e] { fn(b, e); });
    }
}

struct ExcursionScratch {
    std::span<std::uint64_t> occupation;
    std::span<double> visit_weights; // empty: not tracked
};

/// One excursion from `anchor`; returns (tau, truncated).
inline std::pair<std::uint64_t, bool> run_excursion(const StochasticKernel &m, std::span<const double> log_s,
                                                    std::size_t anchor, SplitMix64 &rng, std::uint64_t horizon,
                                                    double log_lambda, ExcursionScratch out)
{
    const bool track = !out.visit_weights.empty();
    std::size_t x = anchor;
    out.occupation[anchor] += 1;
    double running = 0.0;
    if (track) {
        out.visit_weights[anchor] += 1.0;
        running = log_s[anchor] - log_lambda;
    }
    for (std::uint64_t step = 1;; ++step) {
        x = m.next(x, rng.uniform());
        if (x == anchor) return {step, false};
        if (step == horizon) return {step, true};
        out.occupation[x] += 1;
        if (track) {
            out.visit_weights[x] += std::exp(running);
            running += log_s[x] - log_lambda;
        }
    }
}

inline std::vector<double> log_values(std::span<const double> s)
{
    std::vector<double> out(s.size());
    for (std::size_t j = 0; j < s.size(); ++j) out[j] = std::log(s[j]);
    return out;
}

/// Mean and standard error with pairwise reductions (order-independent of threading).
inline McEstimate summarize(std::span<const double> samples, std::uint64_t seed, std::uint64_t truncated)
{
    McEstimate e;
    e.n_samples = samples.size();
    e.seed = seed;
    e.truncated_fraction = samples.empty() ? 0.0 : static_cast<double>(truncated) / static_cast<double>(samples.size());
    if (samples.empty()) return e;
    const double n = static_cast<double>(samples.size());
    e.mean = pairwise_sum(samples) / n;
    e.degenerate_variance = std::all_of(samples.begin(), samples.end(), [&](double w) { return w == samples[0]; });
    if (e.degenerate_variance) {
        e.mean = samples[0];
        return e;
    }
    if (samples.size() > 1) {
        std::vector<double> sq(samples.size());
        for (std::size_t s = 0; s < samples.size(); ++s) sq[s] = (samples[s] - e.mean) * (samples[s] - e.mean);
        e.std_error = std::sqrt(pairwise_sum(sq) / (n - 1.0) / n);
    }
    return e;
}

inline void check_sampling_args(std::uint64_t n, std::uint64_t horizon)
{
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "sample count must be at least 1");
    if (horizon < 1) throw Error(ErrorKind::InvalidArgument, "horizon must be at least 1");
}

/// Occupation counts of n excursions, stored row-major (n x d).
struct ExcursionSample {
    std::size_t dim = 0;
    std::vector<std::uint64_t> occupation;
    std::vector<std::uint64_t> tau;
    std::uint64_t truncated = 0;

    std::span<const std::uint64_t> counts(std::size_t s) const noexcept
    {
        return std::span<const std::uint64_t>(occupation).subspan(s * dim, dim);
    }
};

inline ExcursionSample draw_excursions(const PositiveMatrix &a, std::size_t i, std::uint64_t n, std::uint64_t seed,
                                       std::uint64_t horizon, unsigned threads)
{
    const StochasticKernel m = normalize(a);
    const auto log_s = log_values(a.row_sums());
    ExcursionSample out;
    out.dim = a.dim();
    out.occupation.assign(n * out.dim, 0);
    out.tau.assign(n, 0);
    std::vector<std::uint8_t> truncated(n, 0);
    parallel_chunks(n, threads, [&](std::uint64_t b, std::uint64_t e) {
        for (std::uint64_t s = b; s < e; ++s) {
            SplitMix64 rng = sample_stream(seed, s);
            ExcursionScratch scratch{std::span<std::uint64_t>(out.occupation).subspan(s * out.dim, out.dim), {}};
            const auto [tau, trunc] = run_excursion(m, log_s, i, rng, horizon, 0.0, scratch);
            out.tau[s] = tau;
            truncated[s] = trunc;
        }
    });
    out.truncated = static_cast<std::uint64_t>(std::count(truncated.begin(), truncated.end(), 1));
    return out;
}

inline double sample_log_weight(std::span<const std::uint64_t> counts, std::span<const double> log_s,
                                double log_lambda) noexcept
{
    double lw = 0.0;
    for (std::size_t j = 0; j < counts.size(); ++j)
        if (counts[j] != 0) lw += static_cast<double>(counts[j]) * (log_s[j] - log_lambda);
    return lw;
}

} // namespace detail

/// Simulates X_0 = i until the first return to i or `horizon` steps.
/// Visit weights are accumulated only when `lambda` is given.
inline ExcursionRecord simulate_excursion(const StochasticKernel &m, std::span<const double> row_sums, std::size_t i,
                                          SplitMix64 &rng, std::uint64_t horizon = default_horizon,
                                          std::optional<double> lambda = std::nullopt)
{
    if (i >= m.dim()) throw Error(ErrorKind::IndexOutOfRange, "anchor outside the state space");
    if (horizon < 1) throw Error(ErrorKind::InvalidArgument, "horizon must be at least 1");
    if (lambda && !(*lambda > 0.0)) throw Error(ErrorKind::InvalidArgument, "lambda must be positive");

    ExcursionRecord rec;
    rec.anchor = i;
    rec.occupation.assign(m.dim(), 0);
    if (lambda) rec.visit_weights.assign(m.dim(), 0.0);
    const auto log_s = detail::log_values(row_sums);
    const auto [tau, truncated] = detail::run_excursion(m, log_s, i, rng, horizon, lambda ? std::log(*lambda) : 0.0,
                                                        {rec.occupation, rec.visit_weights});
    rec.tau = tau;
    rec.truncated = truncated;
    return rec;
}

/// E[ prod_{n<tau} S(X_n)/lambda ] for the excursion weight under A' = D_S A
/// evaluated at lambda^2, i.e. the second moment of the phi-estimator's
/// summand. +infinity when lambda^2 is inside that series' convergence radius.
inline double excursion_weight_second_moment(const PositiveMatrix &a, std::size_t i, double lambda, double tol = 1e-12)
{
    const std::size_t d = a.dim();
    std::vector<double> e(a.entries().begin(), a.entries().end());
    for (std::size_t x = 0; x < d; ++x)
        for (std::size_t y = 0; y < d; ++y) e[x * d + y] *= a.row_sums()[x];
    ReturnSeries s(PositiveMatrix(d, std::move(e)), i);
    const PhiValue v = s.evaluate(lambda * lambda, tol);
    return v.divergent ? std::numeric_limits<double>::infinity() : v.value;
}

inline McEstimate mc_phi(const PositiveMatrix &a, std::size_t i, double lambda, std::uint64_t n, std::uint64_t seed,
                         std::uint64_t horizon = default_horizon, unsigned threads = 0)
{
    a.require_index(i);
    detail::check_sampling_args(n, horizon);
    if (!(lambda > 0.0)) throw Error(ErrorKind::InvalidArgument, "lambda must be positive");

    const auto sample = detail::draw_excursions(a, i, n, seed, horizon, threads);
    const auto log_s = detail::log_values(a.row_sums());
    const double log_lambda = std::log(lambda);
    std::vector<double> w(n);
    for (std::uint64_t s = 0; s < n; ++s) w[s] = std::exp(detail::sample_log_weight(sample.counts(s), log_s, log_lambda));

    McEstimate e = detail::summarize(w, seed, sample.truncated);
    e.heavy_tail_warning = lambda < 1.1 * convergence_radius(a, i, 1e-12);
    return e;
}

/// Sample-average root of phi-hat(lambda) = 1 with common random numbers: the
/// excursions are drawn once, which makes phi-hat a deterministic, strictly
/// decreasing function of lambda.
inline McRoot mc_solve_lambda(const PositiveMatrix &a, std::size_t i, std::uint64_t n, std::uint64_t seed, double tol,
                              std::uint64_t horizon = default_horizon, unsigned threads = 0)
{
    a.require_index(i);
    detail::check_sampling_args(n, horizon);
    if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tol must be positive");

    const auto sample = detail::draw_excursions(a, i, n, seed, horizon, threads);
    const auto log_s = detail::log_values(a.row_sums());
    std::vector<double> w(n);

    // log w_s(lambda) = sum_j n_j log S_j - tau log lambda. With constant S the
    // per-state form below is used instead, which is exactly 0 at lambda = S.
    const bool constant = a.constant_row_sums();
    std::vector<double> log_prod(n);
    for (std::uint64_t s = 0; s < n; ++s) log_prod[s] = detail::sample_log_weight(sample.counts(s), log_s, 0.0);

    const auto weights_at = [&](double lambda) {
        const double ll = std::log(lambda);
        if (constant) {
            for (std::uint64_t s = 0; s < n; ++s)
                w[s] = std::exp(detail::sample_log_weight(sample.counts(s), log_s, ll));
        } else {
            for (std::uint64_t s = 0; s < n; ++s) w[s] = std::exp(log_prod[s] - static_cast<double>(sample.tau[s]) * ll);
        }
        return std::span<const double>(w);
    };
    const auto phi_hat = [&](double lambda) { return pairwise_sum(weights_at(lambda)) / static_cast<double>(n); };

    McRoot root;
    root.radius = convergence_radius(a, i, 1e-12);
    double lo = a.min_row_sum(), hi = a.max_row_sum();

    const auto finish = [&](double lambda, bool exact) {
        root.lambda = lambda;
        root.phi = detail::summarize(weights_at(lambda), seed, sample.truncated);
        root.phi.heavy_tail_warning = lambda < 1.1 * root.radius;
        if (exact || root.phi.std_error == 0.0) return root;
        const double h = 1e-6 * lambda;
        root.derivative = (phi_hat(lambda + h) - phi_hat(lambda - h)) / (2.0 * h);
        root.ci_halfwidth = root.phi.std_error / std::abs(root.derivative);
        return root;
    };

    const double phi_lo = phi_hat(lo);
    if (phi_lo == 1.0) return finish(lo, true);
    const double phi_hi = phi_hat(hi);
    if (phi_hi == 1.0) return finish(hi, true);
    if (lo == hi) {
        lo -= tol * lo;
        hi += tol * hi;
    }
    // pathwise bounds hold up to rounding in log()
    constexpr double slack = 1e-12;
    if (phi_lo < 1.0 - slack || phi_hi > 1.0 + slack)
        throw Error(ErrorKind::BracketFailure, "sample-average phi does not bracket 1 on [min S, max S]");

    for (int it = 0; it < 200 && hi - lo > tol * lo; ++it) {
        const double mid = lo + 0.5 * (hi - lo);
        if (!(mid > lo && mid < hi)) break;
        const double f = phi_hat(mid);
        if (f == 1.0) return finish(mid, false);
        (f > 1.0 ? lo : hi) = mid;
    }
    return finish(lo + 0.5 * (hi - lo), false);
}

/// Componentwise estimate of mu_i at `lambda`. Component i is exactly 1.
inline std::vector<McEstimate> mc_mu(const PositiveMatrix &a, std::size_t i, double lambda, std::uint64_t n,
                                     std::uint64_t seed, std::uint64_t horizon = default_horizon, unsigned threads = 0)
{
    a.require_index(i);
    detail::check_sampling_args(n, horizon);
    if (!(lambda > 0.0)) throw Error(ErrorKind::InvalidArgument, "lambda must be positive");

    const std::size_t d = a.dim();
    const StochasticKernel m = normalize(a);
    const auto log_s = detail::log_values(a.row_sums());
    const double log_lambda = std::log(lambda);

    // component-major so each component's samples are contiguous for the reduction
    std::vector<double> visits(d * n, 0.0);
    std::vector<std::uint8_t> truncated(n, 0);
    detail::parallel_chunks(n, threads, [&](std::uint64_t b, std::uint64_t e) {
        std::vector<std::uint64_t> occ(d);
        std::vector<double> vw(d);
        for (std::uint64_t s = b; s < e; ++s) {
            std::fill(occ.begin(), occ.end(), 0);
            std::fill(vw.begin(), vw.end(), 0.0);
            SplitMix64 rng = sample_stream(seed, s);
            const auto [tau, trunc] = detail::run_excursion(m, log_s, i, rng, horizon, log_lambda, {occ, vw});
            truncated[s] = trunc;
            for (std::size_t j = 0; j < d; ++j) visits[j * n + s] = vw[j];
        }
    });
    const auto n_trunc = static_cast<std::uint64_t>(std::count(truncated.begin(), truncated.end(), 1));
    const bool heavy = lambda < 1.1 * convergence_radius(a, i, 1e-12);

    std::vector<McEstimate> out(d);
    for (std::size_t j = 0; j < d; ++j) {
        out[j] = detail::summarize(std::span<const double>(visits).subspan(j * n, n), seed, n_trunc);
        out[j].heavy_tail_warning = heavy;
    }
    return out;
}

/// Mean first-return time E_i[tau_i] under M.
inline McEstimate mc_return_time(const StochasticKernel &m, std::size_t i, std::uint64_t n, std::uint64_t seed,
                                 std::uint64_t horizon = default_horizon, unsigned threads = 0)
{
    if (i >= m.dim()) throw Error(ErrorKind::IndexOutOfRange, "anchor outside the state space");
    detail::check_sampling_args(n, horizon);
    const std::vector<double> unit(m.dim(), 0.0);
    std::vector<double> tau(n);
    std::vector<std::uint8_t> truncated(n, 0);
    detail::parallel_chunks(n, threads, [&](std::uint64_t b, std::uint64_t e) {
        std::vector<std::uint64_t> occ(m.dim());
        for (std::uint64_t s = b; s < e; ++s) {
            std::fill(occ.begin(), occ.end(), 0);
            SplitMix64 rng = sample_stream(seed, s);
            const auto [t, trunc] = detail::run_excursion(m, unit, i, rng, horizon, 0.0, {occ, {}});
            tau[s] = static_cast<double>(t);
            truncated[s] = trunc;
        }
    });
    return detail::summarize(tau, seed, static_cast<std::uint64_t>(std::count(truncated.begin(), truncated.end(), 1)));
}

} // namespace perron

#endif // PERRON_MONTECARLO_HPP
