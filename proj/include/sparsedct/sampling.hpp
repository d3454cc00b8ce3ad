#pragma once

#include <cstdint>
#include <optional>

#include "sparsedct/signal.hpp"

namespace sparsedct {

/// Name of the generator behind generate_signal/add_noise, recorded in run
/// manifests: mt19937_64 with the top 53 bits mapped to [0,1).
inline constexpr const char* kRngAlgorithm = "mt19937_64/53-bit";

/// Read access to the entries of a spectrum x^II with access counting.
/// Counters are not synchronized; use one source per recovery run (each
/// benchmark trial owns its own source).
class SpectrumSource {
public:
    explicit SpectrumSource(Signal spectrum);

    /// Entry at `index`, recorded in both counters. Out of range throws.
    double read(std::size_t index);

    std::size_t size() const { return values_.size(); }
    int level() const { return level_; }

    std::uint64_t total_reads() const { return total_; }
    std::uint64_t distinct_reads() const { return distinct_; }
    void reset_counts();

    const Signal& backing() const { return values_; }

private:
    Signal values_;
    std::vector<std::uint8_t> seen_;
    std::uint64_t total_ = 0;
    std::uint64_t distinct_ = 0;
    int level_ = 0;
};

SpectrumSource counting_source(Signal spectrum);

struct NoiseSpec {
    double snr_db;  // +infinity leaves the spectrum untouched
    std::uint64_t seed;
};

/// Random test-signal description: length 2^level, support length m starting
/// at mu (drawn uniformly when absent). Endpoint entries are drawn from
/// (epsilon_floor, 10], interior entries from (0, 10] with at most
/// floor((m-2)/2) of them zeroed.
struct SignalSpec {
    int level;
    std::size_t support_length;
    std::optional<std::size_t> mu;
    double epsilon_floor;
    std::uint64_t seed;
};

/// All entries nonnegative, so the endpoint non-cancellation condition holds.
Signal generate_signal(const SignalSpec& spec);

/// spectrum + eta with eta i.i.d. uniform on [-1,1], rescaled so that
/// 20*log10(||spectrum||_2 / ||eta||_2) equals snr_db. A zero spectrum with
/// finite SNR is invalid.
Signal add_noise(const Signal& spectrum, const NoiseSpec& noise);

}  // namespace sparsedct
