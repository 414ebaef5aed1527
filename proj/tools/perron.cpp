// perron: Perron eigenpair of a positive matrix from first-return excursions.
//
//   perron solve --input m.csv [--method series|mc|oracle|check] ...
//   perron check --input m.csv | --corpus
//   perron corpus --out DIR
//
// Exit codes: 0 success, 1 input/validation error, 2 solver error, 3 check failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "perron/perron.hpp"

namespace {

enum ExitCode { ok = 0, input_error = 1, solver_error = 2, check_failure = 3 };

perron::MatrixFormat parse_format(const std::string &s)
{
    if (s == "csv") return perron::MatrixFormat::csv;
    if (s == "json") return perron::MatrixFormat::json;
    if (s == "auto") return perron::MatrixFormat::automatic;
    throw perron::Error(perron::ErrorKind::InvalidArgument, "unknown format '" + s + "'");
}

perron::RunMethod parse_method(const std::string &s)
{
    if (s == "series") return perron::RunMethod::series;
    if (s == "mc") return perron::RunMethod::mc;
    if (s == "oracle") return perron::RunMethod::oracle;
    if (s == "check") return perron::RunMethod::check;
    throw perron::Error(perron::ErrorKind::InvalidArgument, "unknown method '" + s + "'");
}

std::uint64_t parse_seed(const std::string &s, const char *origin)
{
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(s, &used, 0);
        if (used == s.size()) return v;
    } catch (const std::exception &) {
    }
    throw perron::Error(perron::ErrorKind::InvalidArgument, std::string("cannot read seed from ") + origin);
}

struct Options {
    std::string input;
    std::string format = "auto";
    std::string method = "series";
    double tol = 1e-10;
    std::optional<std::string> seed;
    std::uint64_t n = 100000;
    std::uint64_t horizon = perron::default_horizon;
    std::optional<std::size_t> anchor;
    bool timings = false;
    unsigned threads = 0;
    bool corpus = false;
    std::string out_dir;
};

perron::RunConfig make_config(const Options &o)
{
    perron::RunConfig cfg;
    cfg.input_path = o.input;
    cfg.format = parse_format(o.format);
    cfg.method = parse_method(o.method);
    cfg.tol = o.tol;
    if (o.seed) {
        cfg.seed = parse_seed(*o.seed, "--seed");
    } else if (const char *env = std::getenv("PERRON_SEED"); env && *env) {
        cfg.seed = parse_seed(env, "PERRON_SEED");
    }
    cfg.n_samples = o.n;
    cfg.horizon = o.horizon;
    if (o.anchor) {
        if (*o.anchor < 1) throw perron::Error(perron::ErrorKind::IndexOutOfRange, "--anchor is 1-based");
        cfg.anchor = *o.anchor - 1;
    }
    cfg.timings = o.timings;
    cfg.threads = o.threads;
    cfg.validate();
    return cfg;
}

void add_run_options(CLI::App *cmd, Options &o)
{
    cmd->add_option("--input", o.input, "Matrix file (CSV or JSON)");
    cmd->add_option("--format", o.format, "csv, json or auto")->capture_default_str();
    cmd->add_option("--tol", o.tol, "Solver tolerance")->capture_default_str();
    cmd->add_option("--seed", o.seed, "Monte Carlo seed (falls back to PERRON_SEED, then 0)");
    cmd->add_option("--n", o.n, "Monte Carlo excursions")->capture_default_str();
    cmd->add_option("--horizon", o.horizon, "Excursion step cap")->capture_default_str();
    cmd->add_option("--anchor", o.anchor, "Anchor state, 1-based (default: all)");
    cmd->add_option("--threads", o.threads, "Sampling threads, 0 = hardware")->capture_default_str();
    cmd->add_flag("--timings", o.timings, "Include wall-clock timings in the report");
}

int write_corpus(const std::string &dir)
{
    std::filesystem::create_directories(dir);
    for (std::size_t k = 0; k < perron::corpus_size; ++k) {
        const auto path = std::filesystem::path(dir) / ("corpus_" + std::to_string(k) + ".json");
        std::ofstream(path) << perron::emit_matrix(perron::corpus_matrix(k)) << '\n';
    }
    return ok;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Perron eigenpair of a positive matrix via Markov chain excursions"};
    app.require_subcommand(1);

    Options opts;
    auto *solve = app.add_subcommand("solve", "Compute the Perron eigenvalue and left eigenvector");
    add_run_options(solve, opts);
    solve->add_option("--method", opts.method, "series, mc, oracle or check")->capture_default_str();

    auto *check = app.add_subcommand("check", "Run the cross-method consistency suite");
    add_run_options(check, opts);
    check->add_flag("--corpus", opts.corpus, "Check the built-in corpus instead of --input");

    auto *corpus = app.add_subcommand("corpus", "Write the built-in validation corpus as JSON files");
    corpus->add_option("--out", opts.out_dir, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        std::cerr << perron::emit_error("UsageError", e.what()) << '\n';
        return input_error;
    }

    try {
        if (corpus->parsed()) return write_corpus(opts.out_dir);

        if (check->parsed()) opts.method = "check";
        const perron::RunConfig cfg = make_config(opts);

        if (check->parsed() && opts.corpus) {
            const auto result = perron::run_corpus_check(cfg);
            std::cout << perron::emit_corpus_report(result) << '\n';
            return result.passed() ? ok : check_failure;
        }
        if (cfg.input_path.empty()) throw perron::Error(perron::ErrorKind::InvalidArgument, "--input is required");

        const perron::RunReport report = perron::run(cfg);
        const std::string text = perron::emit_report(report);
        std::cout << text << '\n';
        return report.passed() ? ok : check_failure;
    } catch (const perron::Error &e) {
        std::cerr << perron::emit_error(e) << '\n';
        return perron::is_input_error(e.kind()) ? input_error : solver_error;
    } catch (const std::exception &e) {
        std::cerr << perron::emit_error("InternalError", e.what()) << '\n';
        return solver_error;
    }
}
