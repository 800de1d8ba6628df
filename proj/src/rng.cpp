#include "ich/rng.hpp"

#include <cmath>
#include <numbers>

#include "ich/errors.hpp"

namespace ich {

namespace {
// splitmix64, the usual way to expand one seed into several.
std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}
}  // namespace

Rng make_rng(std::uint64_t seed) { return Rng(seed); }

std::uint64_t hash64(std::string_view s) {
    std::uint64_t h = 14695981039346656037ull;  // FNV-1a
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

Rng derive_rng(std::uint64_t seed, std::string_view tag, std::uint64_t a, std::uint64_t b,
               std::uint64_t c) {
    std::uint64_t x = seed;
    x ^= hash64(tag);
    std::uint64_t h = splitmix64(x);
    x ^= a + 0x9e3779b97f4a7c15ull;
    h ^= splitmix64(x);
    x ^= b + 0x7f4a7c159e3779b9ull;
    h ^= splitmix64(x);
    x ^= c + 0x2545f4914f6cdd1dull;
    h ^= splitmix64(x);
    return Rng(h);
}

double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform(Rng& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

double normal(Rng& rng, double mean, double sigma) {
    // Box-Muller; draws two uniforms per call, no state kept.
    double u1 = uniform01(rng);
    double u2 = uniform01(rng);
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    double r = std::sqrt(-2.0 * std::log(u1));
    return mean + sigma * r * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
    if (n == 0) throw RangeError("uniform_index: empty range");
    // Rejection sampling to avoid modulo bias.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

double gamma_sample(Rng& rng, double alpha) {
    if (alpha <= 0.0) throw ConfigError("gamma_sample: alpha must be > 0");
    if (alpha < 1.0) {
        // Boost trick: Gamma(a) = Gamma(a+1) * U^(1/a).
        double u = uniform01(rng);
        if (u <= 0.0) u = 0x1.0p-53;
        return gamma_sample(rng, alpha + 1.0) * std::pow(u, 1.0 / alpha);
    }
    // Marsaglia-Tsang squeeze method.
    const double d = alpha - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = normal(rng);
        double v = 1.0 + c * x;
        if (v <= 0.0) continue;
        v = v * v * v;
        double u = uniform01(rng);
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (u <= 0.0) u = 0x1.0p-53;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

double beta_sample(Rng& rng, double alpha, double beta) {
    double x = gamma_sample(rng, alpha);
    double y = gamma_sample(rng, beta);
    return x / (x + y);
}

}  // namespace ich
