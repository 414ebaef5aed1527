#ifndef PERRON_APP_HPP
#define PERRON_APP_HPP

// Run configuration, dispatch, cross-method checks and the JSON report format
// shared by the `perron` tool and its tests.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "perron/core.hpp"
#include "perron/corpus.hpp"
#include "perron/error.hpp"
#include "perron/montecarlo.hpp"
#include "perron/oracle.hpp"
#include "perron/series.hpp"

namespace perron {

inline constexpr const char *report_schema = "perron-chain/1";

enum class RunMethod { series, mc, oracle, check };

inline std::string_view to_string(RunMethod m) noexcept
{
    switch (m) {
    case RunMethod::series: return "series";
    case RunMethod::mc:     return "mc";
    case RunMethod::oracle: return "oracle";
    case RunMethod::check:  return "check";
    }
    return "unknown";
}

struct RunConfig {
    std::string input_path;
    MatrixFormat format = MatrixFormat::automatic;
    RunMethod method = RunMethod::series;
    double tol = 1e-10;
    std::uint64_t seed = 0;
    std::uint64_t n_samples = 100000;
    std::uint64_t horizon = default_horizon;
    /// 0-based; empty means every anchor.
    std::optional<std::size_t> anchor;
    bool timings = false;
    unsigned threads = 0;

    void validate() const
    {
        if (!(tol > 0.0) || !std::isfinite(tol)) throw Error(ErrorKind::InvalidArgument, "--tol must be positive");
        if (n_samples < 1) throw Error(ErrorKind::InvalidArgument, "--n must be at least 1");
        if (horizon < 1) throw Error(ErrorKind::InvalidArgument, "--horizon must be at least 1");
    }
};

struct CheckOutcome {
    std::string name;
    bool passed = false;
    double value = 0.0;
    double threshold = 0.0;
};

struct McAnchorRun {
    std::size_t anchor = 0;
    McRoot root;
};

struct McBundle {
    std::size_t anchor = 0; // anchor reported as the primary estimate
    std::vector<McAnchorRun> per_anchor;
    std::vector<McEstimate> mu_raw;
    std::vector<double> mu;
    std::vector<double> mu_stderr;
    /// E[w^2] at the estimated root; infinite means the CI is not meaningful.
    double second_moment = 0.0;

    const McRoot &primary() const
    {
        for (const auto &r : per_anchor)
            if (r.anchor == anchor) return r.root;
        return per_anchor.front().root;
    }
};

struct OracleBundle {
    EigenEstimate estimate;
    double subdominant = 0.0;
};

struct RunReport {
    RunMethod method = RunMethod::series;
    std::size_t dim = 0;
    std::optional<PerronResult> series;
    std::optional<McBundle> mc;
    std::optional<OracleBundle> oracle;
    std::vector<CheckOutcome> checks;
    std::uint64_t seed = 0;
    std::uint64_t n_samples = 0;
    std::uint64_t horizon = 0;

    bool emit_timings = false;
    std::vector<std::pair<std::string, double>> timings_ms;

    bool passed() const
    {
        for (const auto &c : checks)
            if (!c.passed) return false;
        return true;
    }
};

// Thresholds of the cross-method check suite.
struct CheckThresholds {
    double oracle_lambda_rel = 1e-8;
    double oracle_mu_abs = 1e-7;
    double anchor_lambda_rel = 1e-8;
    double anchor_mu_abs = 1e-8;
    double residual = 1e-8;
    double dominance_margin = 1e-9;
    double mc_sigmas = 4.0;
};

namespace detail {

class PhaseTimer {
public:
    explicit PhaseTimer(RunReport &report) : report_(report) {}
    template <class Fn>
    auto operator()(const std::string &phase, Fn &&fn)
    {
        const auto t0 = std::chrono::steady_clock::now();
        auto out = fn();
        const auto t1 = std::chrono::steady_clock::now();
        report_.timings_ms.emplace_back(phase, std::chrono::duration<double, std::milli>(t1 - t0).count());
        return out;
    }

private:
    RunReport &report_;
};

inline std::vector<std::size_t> anchors_for(const RunConfig &cfg, std::size_t d)
{
    if (cfg.anchor) return {*cfg.anchor};
    std::vector<std::size_t> all(d);
    for (std::size_t i = 0; i < d; ++i) all[i] = i;
    return all;
}

/// Anchor whose excursion weight has the smallest second moment at lambda(i);
/// the first anchor on ties, including when every variance is infinite.
template <class LambdaAt>
std::size_t lowest_variance_anchor(const PositiveMatrix &a, const std::vector<std::size_t> &anchors, LambdaAt &&lambda_at)
{
    std::size_t best = anchors.front();
    double best_moment = std::numeric_limits<double>::infinity();
    for (std::size_t i : anchors) {
        const double m = excursion_weight_second_moment(a, i, lambda_at(i));
        if (m < best_moment) {
            best = i;
            best_moment = m;
        }
    }
    return best;
}

inline McBundle run_mc(const PositiveMatrix &a, const RunConfig &cfg, const std::vector<std::size_t> &anchors)
{
    McBundle b;
    for (std::size_t i : anchors)
        b.per_anchor.push_back({i, mc_solve_lambda(a, i, cfg.n_samples, cfg.seed, cfg.tol, cfg.horizon, cfg.threads)});
    b.anchor = lowest_variance_anchor(a, anchors, [&](std::size_t i) {
        for (const auto &r : b.per_anchor)
            if (r.anchor == i) return r.root.lambda;
        return b.per_anchor.front().root.lambda;
    });

    const McRoot &root = b.primary();
    b.mu_raw = mc_mu(a, b.anchor, root.lambda, cfg.n_samples, cfg.seed, cfg.horizon, cfg.threads);
    double total = 0.0;
    for (const auto &e : b.mu_raw) total += e.mean;
    for (const auto &e : b.mu_raw) {
        b.mu.push_back(e.mean / total);
        b.mu_stderr.push_back(e.std_error / total);
    }
    b.second_moment = excursion_weight_second_moment(a, b.anchor, root.lambda);
    return b;
}

inline double max_abs_diff(std::span<const double> x, std::span<const double> y)
{
    double m = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) m = std::max(m, std::abs(x[k] - y[k]));
    return m;
}

} // namespace detail

/// Largest componentwise spread across the per-anchor normalised eigenvectors.
inline double anchor_mu_spread(const PerronResult &r)
{
    double worst = 0.0;
    const std::size_t d = r.mu.size();
    for (std::size_t k = 0; k < d; ++k) {
        double lo = r.per_anchor_mu[0][k], hi = lo;
        for (const auto &m : r.per_anchor_mu) {
            lo = std::min(lo, m[k]);
            hi = std::max(hi, m[k]);
        }
        worst = std::max(worst, hi - lo);
    }
    return worst;
}

inline double anchor_lambda_spread(const PerronResult &r)
{
    const auto [lo, hi] = std::minmax_element(r.per_anchor_lambda.begin(), r.per_anchor_lambda.end());
    return (*hi - *lo) / r.lambda;
}

/// Cross-method agreement checks on a completed check run.
inline std::vector<CheckOutcome> evaluate_checks(const PerronResult &series, const OracleBundle &oracle,
                                                 const McBundle &mc, double tol, const CheckThresholds &t = {})
{
    std::vector<CheckOutcome> out;
    const double lambda = series.lambda;
    const auto add = [&](std::string name, double value, double threshold, bool strict = false) {
        out.push_back({std::move(name), strict ? value < threshold : value <= threshold, value, threshold});
    };
    add("series_vs_oracle_lambda", std::abs(lambda - oracle.estimate.value) / oracle.estimate.value,
        t.oracle_lambda_rel);
    add("series_vs_oracle_mu", detail::max_abs_diff(series.mu, oracle.estimate.left_vector), t.oracle_mu_abs);
    add("anchor_lambda_spread", anchor_lambda_spread(series), t.anchor_lambda_rel);
    add("anchor_mu_spread", anchor_mu_spread(series), t.anchor_mu_abs);
    add("eigen_residual", series.residual, t.residual);
    add("strict_dominance", oracle.subdominant, lambda * (1.0 - t.dominance_margin), true);
    const McRoot &root = mc.primary();
    // series error floor keeps exact (ci = 0) Monte Carlo roots comparable
    add("mc_within_ci", std::abs(root.lambda - lambda),
        std::max(t.mc_sigmas * root.ci_halfwidth, 10.0 * tol * lambda));
    return out;
}

inline RunReport run(const PositiveMatrix &a, const RunConfig &cfg)
{
    cfg.validate();
    if (cfg.anchor) a.require_index(*cfg.anchor);

    RunReport report;
    report.method = cfg.method;
    report.dim = a.dim();
    report.emit_timings = cfg.timings;
    report.seed = cfg.seed;
    report.n_samples = cfg.n_samples;
    report.horizon = cfg.horizon;
    detail::PhaseTimer timed(report);

    const bool want_series = cfg.method == RunMethod::series || cfg.method == RunMethod::check;
    const bool want_oracle = cfg.method == RunMethod::oracle || cfg.method == RunMethod::check;
    const bool want_mc = cfg.method == RunMethod::mc || cfg.method == RunMethod::check;

    if (want_series) report.series = timed("series", [&] { return perron_pair(a, cfg.tol); });
    if (want_oracle) {
        report.oracle = timed("oracle", [&] {
            OracleBundle o;
            o.estimate = power_iteration(a, std::min(cfg.tol, 1e-12));
            o.estimate.left_vector = normalized_l1(o.estimate.left_vector);
            o.subdominant = subdominant_modulus(a, o.estimate.value, o.estimate.left_vector, 1e-12);
            return o;
        });
    }
    if (want_mc) {
        // the check suite samples from one anchor, the one with the smallest weight variance
        auto anchors = detail::anchors_for(cfg, a.dim());
        if (cfg.method == RunMethod::check && anchors.size() > 1)
            anchors = {detail::lowest_variance_anchor(a, anchors, [&](std::size_t) { return report.series->lambda; })};
        report.mc = timed("mc", [&] { return detail::run_mc(a, cfg, anchors); });
    }
    if (cfg.method == RunMethod::check) report.checks = evaluate_checks(*report.series, *report.oracle, *report.mc, cfg.tol);
    return report;
}

inline std::string read_file(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::ParseError, "cannot open input file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline RunReport run(const RunConfig &cfg)
{
    cfg.validate();
    return run(parse_matrix(read_file(cfg.input_path), cfg.format), cfg);
}

namespace detail {

using ojson = nlohmann::ordered_json;

inline ojson estimate_json(const McEstimate &e)
{
    ojson j;
    j["mean"] = e.mean;
    j["stderr"] = e.std_error;
    j["n_samples"] = e.n_samples;
    j["seed"] = e.seed;
    j["truncated_fraction"] = e.truncated_fraction;
    j["degenerate_variance"] = e.degenerate_variance;
    j["heavy_tail_warning"] = e.heavy_tail_warning;
    return j;
}

inline ojson series_json(const PerronResult &r)
{
    ojson j;
    j["lambda"] = r.lambda;
    j["mu"] = r.mu;
    j["per_anchor_lambda"] = r.per_anchor_lambda;
    j["residual"] = r.residual;
    j["diagnostics"] = {{"radius_estimates", r.radius_estimates}, {"terms_used", r.terms_used}};
    return j;
}

inline ojson mc_json(const McBundle &b, const RunReport &report)
{
    const McRoot &root = b.primary();
    ojson j;
    j["lambda"] = root.lambda;
    j["ci_halfwidth"] = root.ci_halfwidth;
    j["mu"] = b.mu;
    j["mu_stderr"] = b.mu_stderr;
    j["anchor"] = b.anchor + 1;
    j["seed"] = report.seed;
    j["n_samples"] = report.n_samples;
    j["horizon"] = report.horizon;
    j["stderr"] = root.phi.std_error;
    j["truncated_fraction"] = root.phi.truncated_fraction;
    j["heavy_tail_warning"] = root.phi.heavy_tail_warning;
    j["variance_finite"] = std::isfinite(b.second_moment);
    if (std::isfinite(b.second_moment)) j["weight_second_moment"] = b.second_moment;
    ojson per = ojson::array();
    for (const auto &r : b.per_anchor) {
        ojson e;
        e["anchor"] = r.anchor + 1;
        e["lambda"] = r.root.lambda;
        e["ci_halfwidth"] = r.root.ci_halfwidth;
        e["stderr"] = r.root.phi.std_error;
        e["truncated_fraction"] = r.root.phi.truncated_fraction;
        e["heavy_tail_warning"] = r.root.phi.heavy_tail_warning;
        e["radius_estimate"] = r.root.radius;
        per.push_back(std::move(e));
    }
    j["per_anchor"] = std::move(per);
    return j;
}

inline ojson oracle_json(const OracleBundle &o)
{
    ojson j;
    j["lambda"] = o.estimate.value;
    j["mu"] = o.estimate.left_vector;
    j["iterations"] = o.estimate.iterations;
    j["subdominant_modulus"] = o.subdominant;
    return j;
}

inline ojson checks_json(const std::vector<CheckOutcome> &checks)
{
    ojson arr = ojson::array();
    for (const auto &c : checks) {
        ojson e;
        e["name"] = c.name;
        e["passed"] = c.passed;
        e["value"] = c.value;
        e["threshold"] = c.threshold;
        arr.push_back(std::move(e));
    }
    return arr;
}

inline void append(ojson &into, const ojson &part)
{
    for (const auto &[k, v] : part.items()) into[k] = v;
}

/// Recursively asserts that no emitted number is NaN or infinite.
inline void require_finite(const ojson &j)
{
    if (j.is_number_float() && !std::isfinite(j.get<double>()))
        throw Error(ErrorKind::DomainError, "report contains a non-finite number");
    if (j.is_structured())
        for (const auto &v : j) require_finite(v);
}

} // namespace detail

inline nlohmann::ordered_json report_json(const RunReport &report)
{
    detail::ojson j;
    j["schema"] = report_schema;
    switch (report.method) {
    case RunMethod::series: detail::append(j, detail::series_json(*report.series)); break;
    case RunMethod::mc:     detail::append(j, detail::mc_json(*report.mc, report)); break;
    case RunMethod::oracle: detail::append(j, detail::oracle_json(*report.oracle)); break;
    case RunMethod::check: {
        j["lambda"] = report.series->lambda;
        j["mu"] = report.series->mu;
        j["passed"] = report.passed();
        j["checks"] = detail::checks_json(report.checks);
        j["series"] = detail::series_json(*report.series);
        j["oracle"] = detail::oracle_json(*report.oracle);
        j["mc"] = detail::mc_json(*report.mc, report);
        break;
    }
    }
    j["method"] = to_string(report.method);
    j["d"] = report.dim;
    if (report.emit_timings) {
        detail::ojson t;
        for (const auto &[phase, ms] : report.timings_ms) t[phase] = ms;
        j["timings_ms"] = std::move(t);
    }
    detail::require_finite(j);
    return j;
}

/// Single-line JSON; same report gives the same bytes.
inline std::string emit_report(const RunReport &report) { return report_json(report).dump(); }

/// Single-line JSON error object.
inline std::string emit_error(const Error &e)
{
    detail::ojson j;
    j["schema"] = report_schema;
    j["error"] = to_string(e.kind());
    j["message"] = e.detail();
    if (e.has_position()) {
        j["row"] = e.row();
        j["col"] = e.col();
    }
    return j.dump();
}

inline std::string emit_error(std::string_view kind, const std::string &message)
{
    detail::ojson j;
    j["schema"] = report_schema;
    j["error"] = kind;
    j["message"] = message;
    return j.dump();
}

struct CorpusCheck {
    std::vector<RunReport> reports;
    bool passed() const
    {
        for (const auto &r : reports)
            if (!r.passed()) return false;
        return true;
    }
};

inline CorpusCheck run_corpus_check(RunConfig cfg, std::uint64_t seed = corpus_seed, std::size_t count = corpus_size)
{
    cfg.method = RunMethod::check;
    CorpusCheck out;
    for (std::size_t k = 0; k < count; ++k) out.reports.push_back(run(corpus_matrix(k, seed), cfg));
    return out;
}

inline std::string emit_corpus_report(const CorpusCheck &c, std::uint64_t seed = corpus_seed)
{
    detail::ojson j;
    j["schema"] = report_schema;
    j["method"] = "check";
    j["corpus_seed"] = seed;
    j["matrices"] = c.reports.size();
    j["passed"] = c.passed();
    detail::ojson results = detail::ojson::array();
    for (std::size_t k = 0; k < c.reports.size(); ++k) {
        const auto &r = c.reports[k];
        detail::ojson e;
        e["index"] = k;
        e["d"] = r.dim;
        e["passed"] = r.passed();
        e["lambda"] = r.series->lambda;
        e["checks"] = detail::checks_json(r.checks);
        results.push_back(std::move(e));
    }
    j["results"] = std::move(results);
    detail::require_finite(j);
    return j.dump();
}

} // namespace perron

#endif // PERRON_APP_HPP
