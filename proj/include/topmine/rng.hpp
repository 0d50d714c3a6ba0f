#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace topmine {

// Seeded generator with hand-rolled variate mappings. std::* distributions
// are not bit-stable across standard libraries, and reproducibility of
// sampler trajectories and on-disk artifacts requires draws that depend only
// on the mt19937_64 stream.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, n); n >= 1.
    std::uint32_t uniform_int(std::uint32_t n) {
        return static_cast<std::uint32_t>(uniform01() * static_cast<double>(n)) % n;
    }

    // Standard normal via Box-Muller.
    double normal() {
        double u1 = uniform01();
        double u2 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    // Marsaglia-Tsang gamma(shape, 1).
    double gamma(double shape) {
        if (shape < 1.0) {
            double u = uniform01();
            while (u <= 0.0) u = uniform01();
            return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
        }
        double d = shape - 1.0 / 3.0;
        double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x = normal();
            double v = 1.0 + c * x;
            if (v <= 0.0) continue;
            v = v * v * v;
            double u = uniform01();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    std::vector<double> dirichlet(std::span<const double> alpha) {
        std::vector<double> out(alpha.size());
        double sum = 0.0;
        for (std::size_t i = 0; i < alpha.size(); ++i) {
            out[i] = gamma(alpha[i]);
            sum += out[i];
        }
        if (sum <= 0.0) {
            for (auto& v : out) v = 1.0 / static_cast<double>(out.size());
            return out;
        }
        for (auto& v : out) v /= sum;
        return out;
    }

private:
    std::mt19937_64 engine_;
};

// Draws an index from unnormalized log weights using a single uniform u.
// Max-subtraction keeps long products of per-token factors from underflowing.
inline std::uint32_t sample_from_logits(std::span<const double> logits, double u) {
    double mx = logits[0];
    for (double v : logits)
        if (v > mx) mx = v;
    double total = 0.0;
    for (double v : logits) total += std::exp(v - mx);
    double target = u * total;
    double cum = 0.0;
    for (std::size_t k = 0; k + 1 < logits.size(); ++k) {
        cum += std::exp(logits[k] - mx);
        if (target < cum) return static_cast<std::uint32_t>(k);
    }
    return static_cast<std::uint32_t>(logits.size() - 1);
}

// Same contract for plain non-negative weights.
inline std::uint32_t sample_from_weights(std::span<const double> weights, double u) {
    double total = 0.0;
    for (double v : weights) total += v;
    double target = u * total;
    double cum = 0.0;
    for (std::size_t k = 0; k + 1 < weights.size(); ++k) {
        cum += weights[k];
        if (target < cum) return static_cast<std::uint32_t>(k);
    }
    return static_cast<std::uint32_t>(weights.size() - 1);
}

}  // namespace topmine
