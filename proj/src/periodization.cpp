#include "sparsedct/periodization.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "sparsedct/sampling.hpp"

namespace sparsedct {

SupportInfo::SupportInfo(std::size_t mu_, std::size_t length_, int level_)
    : mu(mu_), length(length_), nu(mu_ + length_ - 1), level(level_) {
    const std::size_t n = std::size_t{1} << level;
    if (length == 0 || length > n || mu > n - length) {
        throw std::invalid_argument("SupportInfo: interval [" + std::to_string(mu) + ", " +
                                    std::to_string(mu + length - 1) +
                                    "] does not fit in level " + std::to_string(level));
    }
}

Signal reflect_periodize(const Signal& x) {
    require_signal(x, "x");
    const std::size_t n = x.size();
    if (n < 2) {
        throw std::invalid_argument("reflect_periodize: length must be at least 2");
    }
    const std::size_t h = n / 2;
    Signal out(h);
    for (std::size_t k = 0; k < h; ++k) {
        out[k] = x[k] + x[n - 1 - k];
    }
    return out;
}

Signal periodize_to_level(const Signal& x, int level) {
    require_signal(x, "x");
    const int source = level_of_length(x.size());
    if (level < 0 || level > source) {
        throw std::invalid_argument("periodize_to_level: level " + std::to_string(level) +
                                    " out of range [0, " + std::to_string(source) + "]");
    }
    Signal out = x;
    for (int j = source; j > level; --j) {
        out = reflect_periodize(out);
    }
    return out;
}

PeriodizedSignal make_periodized(const Signal& x, int level, double epsilon) {
    PeriodizedSignal p;
    p.level = level;
    p.values = periodize_to_level(x, level);
    p.support = detect_support(p.values, epsilon);
    return p;
}

Signal subsample_spectrum(SpectrumSource& spectrum, int source_level, int target_level) {
    if (source_level != spectrum.level()) {
        throw std::invalid_argument("subsample_spectrum: source level mismatch");
    }
    if (target_level < 0 || target_level > source_level) {
        throw std::invalid_argument("subsample_spectrum: target level out of range");
    }
    const std::size_t stride = std::size_t{1} << (source_level - target_level);
    const double scale = pow_sqrt2(source_level - target_level);
    Signal out(std::size_t{1} << target_level);
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] = scale * spectrum.read(k * stride);
    }
    return out;
}

std::optional<SupportInfo> detect_support(const Signal& x, double epsilon) {
    require_signal(x, "x");
    if (!(epsilon >= 0.0)) {
        throw std::invalid_argument("detect_support: epsilon must be nonnegative");
    }
    const int level = level_of_length(x.size());
    std::size_t first = x.size();
    std::size_t last = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (std::abs(x[k]) > epsilon) {
            if (first == x.size()) first = k;
            last = k;
        }
    }
    if (first == x.size()) return std::nullopt;
    return SupportInfo(first, last - first + 1, level);
}

}  // namespace sparsedct
