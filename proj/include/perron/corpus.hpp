#ifndef PERRON_CORPUS_HPP
#define PERRON_CORPUS_HPP

#include <cmath>
#include <cstdint>
#include <vector>

#include "perron/core.hpp"
#include "perron/rng.hpp"

namespace perron {

/// Seed of the fixed validation corpus. Changing it changes every corpus-based test.
inline constexpr std::uint64_t corpus_seed = 0x50455252'4F4E0001ULL;
inline constexpr std::size_t corpus_size = 50;
inline constexpr std::size_t corpus_max_dim = 20;

/// Matrix k has dimension 1 + k mod 20 and entries log-uniform in [1e-3, 1e3].
inline PositiveMatrix corpus_matrix(std::size_t k, std::uint64_t seed = corpus_seed)
{
    const std::size_t d = 1 + k % corpus_max_dim;
    SplitMix64 rng = sample_stream(seed, k);
    const double lo = std::log(1e-3), span = std::log(1e3) - std::log(1e-3);
    std::vector<double> e(d * d);
    for (double &v : e) v = std::exp(lo + span * rng.uniform());
    return PositiveMatrix(d, std::move(e));
}

inline std::vector<PositiveMatrix> generate_corpus(std::uint64_t seed = corpus_seed, std::size_t count = corpus_size)
{
    std::vector<PositiveMatrix> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) out.push_back(corpus_matrix(k, seed));
    return out;
}

} // namespace perron

#endif // PERRON_CORPUS_HPP
