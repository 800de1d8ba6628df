#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace ich {

using Rng = std::mt19937_64;

Rng make_rng(std::uint64_t seed);

/// Derives an independent, reproducible stream from a base seed plus a tag
/// and counters, e.g. (seed, "augment", epoch, study hash, slice index).
/// The same inputs always yield the same stream, on any platform.
Rng derive_rng(std::uint64_t seed, std::string_view tag, std::uint64_t a = 0,
               std::uint64_t b = 0, std::uint64_t c = 0);

std::uint64_t hash64(std::string_view s);

// Distribution helpers are hand-rolled so that sequences do not depend on
// the standard library implementation.
double uniform01(Rng& rng);                              // [0,1)
double uniform(Rng& rng, double lo, double hi);
double normal(Rng& rng, double mean = 0.0, double sigma = 1.0);
std::uint64_t uniform_index(Rng& rng, std::uint64_t n);  // [0, n)
double gamma_sample(Rng& rng, double alpha);
double beta_sample(Rng& rng, double alpha, double beta);

template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(uniform_index(rng, i));
        std::swap(v[i - 1], v[j]);
    }
}

}  // namespace ich
