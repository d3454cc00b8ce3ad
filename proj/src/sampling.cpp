#include "sparsedct/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace sparsedct {

namespace {

// Top 53 bits of the raw output mapped to [0,1); keeps signals reproducible
// from the seed without depending on std::uniform_real_distribution.
double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform draw from the half-open interval (lo, hi].
double uniform_left_open(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * (1.0 - unit_uniform(rng));
}

}  // namespace

SpectrumSource::SpectrumSource(Signal spectrum) : values_(std::move(spectrum)) {
    require_signal(values_, "spectrum");
    level_ = level_of_length(values_.size());
    seen_.assign(values_.size(), 0);
}

double SpectrumSource::read(std::size_t index) {
    if (index >= values_.size()) {
        throw std::out_of_range("SpectrumSource: index " + std::to_string(index) +
                                " out of range for length " + std::to_string(values_.size()));
    }
    ++total_;
    if (!seen_[index]) {
        seen_[index] = 1;
        ++distinct_;
    }
    return values_[index];
}

void SpectrumSource::reset_counts() {
    std::fill(seen_.begin(), seen_.end(), std::uint8_t{0});
    total_ = 0;
    distinct_ = 0;
}

SpectrumSource counting_source(Signal spectrum) { return SpectrumSource(std::move(spectrum)); }

Signal generate_signal(const SignalSpec& spec) {
    if (spec.level < 0 || spec.level > 40) {
        throw std::invalid_argument("generate_signal: level out of range");
    }
    const std::size_t n = std::size_t{1} << spec.level;
    const std::size_t m = spec.support_length;
    if (m == 0 || m > n) {
        throw std::invalid_argument("generate_signal: support length must be in [1, 2^level]");
    }
    if (!(spec.epsilon_floor >= 0.0) || spec.epsilon_floor >= 10.0) {
        throw std::invalid_argument("generate_signal: epsilon_floor must be in [0, 10)");
    }
    std::mt19937_64 rng(spec.seed);
    std::size_t mu;
    if (spec.mu.has_value()) {
        mu = *spec.mu;
        if (mu > n - m) {
            throw std::invalid_argument("generate_signal: mu out of range");
        }
    } else {
        mu = static_cast<std::size_t>(rng() % (n - m + 1));
    }

    Signal x(n, 0.0);
    x[mu] = uniform_left_open(rng, spec.epsilon_floor, 10.0);
    if (m > 1) {
        x[mu + m - 1] = uniform_left_open(rng, spec.epsilon_floor, 10.0);
    }
    for (std::size_t l = mu + 1; l + 1 < mu + m; ++l) {
        x[l] = uniform_left_open(rng, 0.0, 10.0);
    }
    if (m >= 3) {
        // zero a uniformly chosen subset of at most floor((m-2)/2) interior entries
        const std::size_t interior = m - 2;
        const std::size_t max_zeros = interior / 2;
        const std::size_t zeros = static_cast<std::size_t>(rng() % (max_zeros + 1));
        std::vector<std::size_t> idx(interior);
        for (std::size_t i = 0; i < interior; ++i) idx[i] = mu + 1 + i;
        for (std::size_t i = 0; i < zeros; ++i) {
            const std::size_t pick = i + static_cast<std::size_t>(rng() % (interior - i));
            std::swap(idx[i], idx[pick]);
            x[idx[i]] = 0.0;
        }
    }
    return x;
}

Signal add_noise(const Signal& spectrum, const NoiseSpec& noise) {
    require_signal(spectrum, "spectrum");
    if (std::isinf(noise.snr_db) && noise.snr_db > 0.0) {
        return spectrum;
    }
    if (!std::isfinite(noise.snr_db)) {
        throw std::invalid_argument("add_noise: snr_db must be finite or +inf");
    }
    double signal_norm_sq = 0.0;
    for (double v : spectrum) signal_norm_sq += v * v;
    if (signal_norm_sq == 0.0) {
        throw std::invalid_argument("add_noise: zero spectrum with finite SNR");
    }

    std::mt19937_64 rng(noise.seed);
    Signal eta(spectrum.size());
    double eta_norm_sq = 0.0;
    for (double& e : eta) {
        e = 2.0 * unit_uniform(rng) - 1.0;
        eta_norm_sq += e * e;
    }
    if (eta_norm_sq == 0.0) {
        throw std::runtime_error("add_noise: degenerate zero noise draw");
    }
    const double scale =
        std::sqrt(signal_norm_sq / eta_norm_sq) * std::pow(10.0, -noise.snr_db / 20.0);
    Signal out = spectrum;
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] += scale * eta[k];
    }
    return out;
}

}  // namespace sparsedct
