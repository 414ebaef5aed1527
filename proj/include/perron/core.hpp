#ifndef PERRON_CORE_HPP
#define PERRON_CORE_HPP

/**
 * Dense positive matrices, their row sums and the stochastic kernel
 * M(i,j) = A(i,j) / S(i) that drives the auxiliary Markov chain.
 *
 * Indices are 0-based in the API. Anything shown to a user (error
 * messages, positions) is 1-based.
 */

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "perron/error.hpp"

namespace perron {

/// Pairwise (tree) summation; error grows as O(log n) instead of O(n).
inline double pairwise_sum(std::span<const double> x)
{
    constexpr std::size_t block = 8;
    if (x.size() <= block) {
        double s = 0.0;
        for (double v : x) s += v;
        return s;
    }
    const std::size_t half = x.size() / 2;
    return pairwise_sum(x.first(half)) + pairwise_sum(x.subspan(half));
}

class PositiveMatrix {
public:
    /// Row-major entries; throws on any non-finite or non-positive entry.
    PositiveMatrix(std::size_t dim, std::vector<double> entries)
        : dim_(dim), entries_(std::move(entries))
    {
        if (dim_ == 0)
            throw Error(ErrorKind::NonSquare, "matrix must have at least one row");
        if (entries_.size() != dim_ * dim_)
            throw Error(ErrorKind::NonSquare, "expected " + std::to_string(dim_ * dim_) +
                                                  " entries, got " + std::to_string(entries_.size()));
        for (std::size_t i = 0; i < dim_; ++i) {
            for (std::size_t j = 0; j < dim_; ++j) {
                const double a = entries_[i * dim_ + j];
                if (!std::isfinite(a))
                    throw Error(ErrorKind::NonFinite, "non-finite entry at " + position(i, j), i + 1, j + 1);
                if (!(a > 0.0))
                    throw Error(ErrorKind::NonPositiveEntry, "entry " + format_entry(a) + " at " + position(i, j) +
                                                                 " is not strictly positive",
                                i + 1, j + 1);
            }
        }
        row_sums_.resize(dim_);
        for (std::size_t i = 0; i < dim_; ++i) {
            row_sums_[i] = pairwise_sum(row(i));
            if (!std::isfinite(row_sums_[i]))
                throw Error(ErrorKind::NonFinite, "sum of row " + std::to_string(i + 1) + " overflows");
        }
    }

    static PositiveMatrix from_rows(const std::vector<std::vector<double>> &rows)
    {
        const std::size_t d = rows.size();
        std::vector<double> flat;
        flat.reserve(d * d);
        for (std::size_t i = 0; i < d; ++i) {
            if (rows[i].size() != d)
                throw Error(ErrorKind::NonSquare, "row " + std::to_string(i + 1) + " has " +
                                                      std::to_string(rows[i].size()) + " entries, expected " +
                                                      std::to_string(d));
            flat.insert(flat.end(), rows[i].begin(), rows[i].end());
        }
        return PositiveMatrix(d, std::move(flat));
    }

    std::size_t dim() const noexcept { return dim_; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return entries_[i * dim_ + j]; }
    std::span<const double> row(std::size_t i) const noexcept
    {
        return std::span<const double>(entries_).subspan(i * dim_, dim_);
    }
    std::span<const double> entries() const noexcept { return entries_; }
    std::span<const double> row_sums() const noexcept { return row_sums_; }

    double min_entry() const noexcept { return *std::min_element(entries_.begin(), entries_.end()); }
    double max_entry() const noexcept { return *std::max_element(entries_.begin(), entries_.end()); }
    double min_row_sum() const noexcept { return *std::min_element(row_sums_.begin(), row_sums_.end()); }
    double max_row_sum() const noexcept { return *std::max_element(row_sums_.begin(), row_sums_.end()); }

    bool constant_row_sums() const noexcept { return min_row_sum() == max_row_sum(); }

    PositiveMatrix scaled(double c) const
    {
        std::vector<double> e(entries_);
        for (double &v : e) v *= c;
        return PositiveMatrix(dim_, std::move(e));
    }

    PositiveMatrix transposed() const
    {
        std::vector<double> e(entries_.size());
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = 0; j < dim_; ++j) e[j * dim_ + i] = entries_[i * dim_ + j];
        return PositiveMatrix(dim_, std::move(e));
    }

    std::vector<std::vector<double>> to_rows() const
    {
        std::vector<std::vector<double>> rows(dim_);
        for (std::size_t i = 0; i < dim_; ++i) rows[i].assign(row(i).begin(), row(i).end());
        return rows;
    }

    void require_index(std::size_t i) const
    {
        if (i >= dim_)
            throw Error(ErrorKind::IndexOutOfRange,
                        "state " + std::to_string(i + 1) + " outside 1.." + std::to_string(dim_));
    }

private:
    static std::string position(std::size_t i, std::size_t j)
    {
        return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
    }
    static std::string format_entry(double a)
    {
        return nlohmann::json(a).dump();
    }

    std::size_t dim_;
    std::vector<double> entries_;
    std::vector<double> row_sums_;
};

/// S(i) = sum_j A(i,j).
inline std::vector<double> row_sums(const PositiveMatrix &a)
{
    return {a.row_sums().begin(), a.row_sums().end()};
}

/// Row-stochastic transition matrix with a per-row cumulative table for sampling.
class StochasticKernel {
public:
    explicit StochasticKernel(const PositiveMatrix &a) : dim_(a.dim()), probs_(a.dim() * a.dim()), cdf_(probs_.size())
    {
        const auto s = a.row_sums();
        for (std::size_t i = 0; i < dim_; ++i) {
            auto p = std::span<double>(probs_).subspan(i * dim_, dim_);
            for (std::size_t j = 0; j < dim_; ++j) p[j] = a(i, j) / s[i];
            // second pass removes the rounding left by the division
            const double total = pairwise_sum(p);
            for (double &v : p) v /= total;

            double acc = 0.0;
            for (std::size_t j = 0; j < dim_; ++j) {
                acc += p[j];
                cdf_[i * dim_ + j] = acc;
            }
            cdf_[i * dim_ + dim_ - 1] = 1.0;
        }
    }

    std::size_t dim() const noexcept { return dim_; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return probs_[i * dim_ + j]; }
    std::span<const double> row(std::size_t i) const noexcept
    {
        return std::span<const double>(probs_).subspan(i * dim_, dim_);
    }

    /// Next state from `state` given u uniform in [0,1).
    std::size_t next(std::size_t state, double u) const noexcept
    {
        const auto c = std::span<const double>(cdf_).subspan(state * dim_, dim_);
        const auto it = std::upper_bound(c.begin(), c.end(), u);
        return std::min<std::size_t>(static_cast<std::size_t>(it - c.begin()), dim_ - 1);
    }

    PositiveMatrix as_matrix() const { return PositiveMatrix(dim_, probs_); }

private:
    std::size_t dim_;
    std::vector<double> probs_;
    std::vector<double> cdf_;
};

inline StochasticKernel normalize(const PositiveMatrix &a) { return StochasticKernel(a); }

/// A with row and column `removed` deleted; surviving states keep their order.
struct PrincipalSubmatrix {
    std::size_t parent_dim = 0;
    std::size_t removed_index = 0;
    std::size_t dim = 0;
    std::vector<double> entries;

    double operator()(std::size_t j, std::size_t k) const noexcept { return entries[j * dim + k]; }

    /// Index in the parent matrix of submatrix state j.
    std::size_t parent_index(std::size_t j) const noexcept { return j < removed_index ? j : j + 1; }
};

inline PrincipalSubmatrix principal_submatrix(const PositiveMatrix &a, std::size_t removed)
{
    a.require_index(removed);
    PrincipalSubmatrix b;
    b.parent_dim = a.dim();
    b.removed_index = removed;
    b.dim = a.dim() - 1;
    b.entries.reserve(b.dim * b.dim);
    for (std::size_t j = 0; j < b.dim; ++j)
        for (std::size_t k = 0; k < b.dim; ++k) b.entries.push_back(a(b.parent_index(j), b.parent_index(k)));
    return b;
}

enum class MatrixFormat { csv, json, automatic };

namespace detail {

inline std::string_view trim(std::string_view s)
{
    const auto not_space = [](char c) { return c != ' ' && c != '\t' && c != '\r' && c != '\n'; };
    while (!s.empty() && !not_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && !not_space(s.back())) s.remove_suffix(1);
    return s;
}

inline double parse_double(std::string_view field, std::size_t line, std::size_t column)
{
    std::string_view t = trim(field);
    if (!t.empty() && t.front() == '+') t.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (t.empty() || ec == std::errc::invalid_argument || ptr != t.data() + t.size())
        throw Error(ErrorKind::ParseError, "cannot read '" + std::string(trim(field)) + "' as a number at (" +
                                               std::to_string(line) + "," + std::to_string(column) + ")");
    if (ec == std::errc::result_out_of_range) {
        // from_chars leaves value untouched on range errors
        value = std::strtod(std::string(t).c_str(), nullptr);
    }
    return value;
}

inline std::vector<std::vector<double>> parse_csv(std::string_view text)
{
    std::vector<std::vector<double>> rows;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto eol = text.find('\n');
        std::string_view line = text.substr(0, eol);
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
        ++line_no;
        if (trim(line).empty()) continue;

        std::vector<double> row;
        std::size_t col = 0;
        while (true) {
            const auto comma = line.find(',');
            row.push_back(parse_double(line.substr(0, comma), line_no, ++col));
            if (comma == std::string_view::npos) break;
            line.remove_prefix(comma + 1);
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw Error(ErrorKind::ParseError, "no matrix rows found");
    return rows;
}

inline std::vector<std::vector<double>> parse_json(std::string_view text)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw Error(ErrorKind::ParseError, e.what());
    }
    if (!doc.is_object() || !doc.contains("rows") || !doc["rows"].is_array())
        throw Error(ErrorKind::ParseError, "expected an object with a \"rows\" array");

    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < doc["rows"].size(); ++i) {
        const auto &r = doc["rows"][i];
        if (!r.is_array()) throw Error(ErrorKind::ParseError, "row " + std::to_string(i + 1) + " is not an array");
        std::vector<double> row;
        for (std::size_t j = 0; j < r.size(); ++j) {
            if (!r[j].is_number())
                throw Error(ErrorKind::ParseError, "entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                                       ") is not a number");
            row.push_back(r[j].get<double>());
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw Error(ErrorKind::ParseError, "no matrix rows found");
    if (doc.contains("d")) {
        if (!doc["d"].is_number_integer() || doc["d"].get<long long>() != static_cast<long long>(rows.size()))
            throw Error(ErrorKind::NonSquare, "\"d\" does not match the number of rows");
    }
    return rows;
}

} // namespace detail

/// Reads a matrix from CSV (one row per line) or JSON ({"d":n,"rows":[...]}).
inline PositiveMatrix parse_matrix(std::string_view text, MatrixFormat format = MatrixFormat::automatic)
{
    if (format == MatrixFormat::automatic) {
        const auto t = detail::trim(text);
        format = (!t.empty() && t.front() == '{') ? MatrixFormat::json : MatrixFormat::csv;
    }
    return PositiveMatrix::from_rows(format == MatrixFormat::json ? detail::parse_json(text)
                                                                  : detail::parse_csv(text));
}

inline nlohmann::ordered_json to_json(const PositiveMatrix &a)
{
    nlohmann::ordered_json doc;
    doc["d"] = a.dim();
    doc["rows"] = a.to_rows();
    return doc;
}

/// JSON text; doubles are written in shortest round-trip form, so parse_matrix restores them bit-exactly.
inline std::string emit_matrix(const PositiveMatrix &a) { return to_json(a).dump(); }

} // namespace perron

#endif // PERRON_CORE_HPP
