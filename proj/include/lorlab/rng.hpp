#pragma once

#include <cstdint>
#include <random>

namespace lorlab {

// Seedable random stream with a platform-independent mapping to doubles.
// std::uniform_real_distribution is implementation defined, so we convert
// raw 64-bit draws ourselves: the top 53 bits scaled into [0,1).
//
// Stream layout is part of the file-format contract: consumers that document
// "k draws per item" (e.g. sprinkling draws exactly two doubles per point,
// in point order) stay reproducible across platforms and versions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform in [0,1).
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    std::uint64_t bits() { return engine_(); }

    // Uniform integer in [0, n).
    std::size_t index(std::size_t n) {
        return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace lorlab
