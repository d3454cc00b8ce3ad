#pragma once

#include <optional>

#include "sparsedct/signal.hpp"

namespace sparsedct {

class SpectrumSource;

/// Support bookkeeping for a level-j vector: the smallest interval
/// [mu, nu] containing every entry with |x_k| > eps. Interior entries may
/// still be zero.
struct SupportInfo {
    std::size_t mu;
    std::size_t length;
    std::size_t nu;  // mu + length - 1, stored because both ends are used everywhere
    int level;

    SupportInfo(std::size_t mu, std::size_t length, int level);
};

struct PeriodizedSignal {
    int level = 0;
    Signal values;
    std::optional<SupportInfo> support;
};

/// Half-length vector x^(j) from x^(j+1): first half plus reversed second
/// half, y_k = x_k + x_{2^{j+1}-1-k}. Length-1 input is invalid.
Signal reflect_periodize(const Signal& x);

/// Iterated reflect_periodize down to length 2^level.
Signal periodize_to_level(const Signal& x, int level);

/// Periodization of x to `level` together with its support at threshold
/// `epsilon`.
PeriodizedSignal make_periodized(const Signal& x, int level, double epsilon);

/// The length-2^level vector sqrt(2)^(J-level) * (xhat_{2^(J-level) k})_k,
/// which equals the DCT-II of the level-`level` reflected periodization.
/// Reads exactly 2^level spectrum entries.
Signal subsample_spectrum(SpectrumSource& spectrum, int source_level, int target_level);

/// First/last index with |x_k| > epsilon, or empty when no entry exceeds it.
std::optional<SupportInfo> detect_support(const Signal& x, double epsilon);

}  // namespace sparsedct
