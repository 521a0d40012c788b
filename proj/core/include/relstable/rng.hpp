#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>

namespace relstable {

// Deterministic random stream keyed by (seed, stream_id). Identical keys
// reproduce identical draws; the variate transforms are implemented here so
// the sequence does not depend on the standard library's distribution
// implementations.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id)
        : seed_(seed), stream_id_(stream_id) {
        std::seed_seq seq{
            static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
            static_cast<std::uint32_t>(stream_id), static_cast<std::uint32_t>(stream_id >> 32),
            0x9e3779b9u};
        eng_.seed(seq);
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    std::uint64_t next64() { return eng_(); }

    // Uniform on the open interval (0, 1).
    double uniform01() {
        for (;;) {
            const double u = static_cast<double>(next64() >> 11) * 0x1.0p-53;
            if (u > 0.0) return u;
        }
    }

    double exponential() { return -std::log(uniform01()); }

    // Standard normal via the Marsaglia polar method with a cached spare.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        for (;;) {
            const double a = 2.0 * uniform01() - 1.0;
            const double b = 2.0 * uniform01() - 1.0;
            const double s = a * a + b * b;
            if (s > 0.0 && s < 1.0) {
                const double f = std::sqrt(-2.0 * std::log(s) / s);
                spare_ = b * f;
                has_spare_ = true;
                return a * f;
            }
        }
    }

    void normal_fill(std::span<double> out) {
        for (double& v : out) v = normal();
    }

    // Uniform direction on S^{d-1}; the d = 1 case is a random sign.
    void unit_vector(std::span<double> out) {
        if (out.size() == 1) {
            out[0] = uniform01() < 0.5 ? -1.0 : 1.0;
            return;
        }
        for (;;) {
            double s = 0.0;
            for (double& v : out) {
                v = normal();
                s += v * v;
            }
            if (s > 1e-30) {
                const double inv = 1.0 / std::sqrt(s);
                for (double& v : out) v *= inv;
                return;
            }
        }
    }

    // Exact Poisson draw; large means split by infinite divisibility.
    int poisson(double mean) {
        if (!(mean >= 0.0)) return 0;
        int total = 0;
        while (mean > 30.0) {
            total += poisson_knuth(0.5 * mean);
            mean *= 0.5;
        }
        return total + poisson_knuth(mean);
    }

private:
    int poisson_knuth(double mean) {
        const double limit = std::exp(-mean);
        int k = 0;
        double prod = uniform01();
        while (prod > limit) {
            ++k;
            prod *= uniform01();
        }
        return k;
    }

    std::uint64_t seed_ = 0, stream_id_ = 0;
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace relstable
