#include "sparsedct/recovery.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

#include "sparsedct/transforms.hpp"

namespace sparsedct {

namespace {

constexpr double kPi = std::numbers::pi;

int ceil_log2(std::size_t m) {
    int k = 0;
    while ((std::size_t{1} << k) < m) ++k;
    return k;
}

// cos(numerator * pi / 2^exp) with the integer numerator reduced modulo the
// period first; keeps arguments small for high levels. Safe for exp <= 62.
double cos_dyadic(std::uint64_t numerator, int exp) {
    const std::uint64_t period = std::uint64_t{1} << (exp + 1);  // cos period is 2pi
    const std::uint64_t r = numerator & (period - 1);
    return std::cos(static_cast<double>(r) * kPi / static_cast<double>(std::uint64_t{1} << exp));
}

// (u^0)^II at odd index 2k0+1 of the level-(j+1) DCT-II, computed from the
// support entries alone: (1/sqrt(2^j)) * sum_l cos((2k0+1)(2(mu+l)+1)pi/2^(j+2)) x_l.
double candidate_odd_coefficient(const IterationState& state, std::size_t k0) {
    const int j = state.level;
    const std::uint64_t a = 2 * static_cast<std::uint64_t>(k0) + 1;
    double acc = 0.0;
    for (std::size_t l = 0; l < state.values.size(); ++l) {
        const std::uint64_t b = 2 * static_cast<std::uint64_t>(state.support.mu + l) + 1;
        acc += cos_dyadic(a * b, j + 2) * state.values[l];
    }
    return acc / pow_sqrt2(j);
}

IterationState restate(int level, std::size_t mu, std::vector<double> values,
                       LevelBranch branch) {
    IterationState next{level, SupportInfo(mu, values.size(), level), std::move(values), branch};
    return next;
}

}  // namespace

std::string RecoveryStats::branches_string() const {
    std::string s;
    s.reserve(branches.size());
    for (LevelBranch b : branches) s.push_back(static_cast<char>(b));
    return s;
}

int start_level(std::size_t support_bound) {
    if (support_bound == 0) {
        throw std::invalid_argument("start_level: support bound must be positive");
    }
    return ceil_log2(support_bound) + 1;
}

OddSample find_nonzero_odd_entry(SpectrumSource& spectrum, int level, std::size_t m_j) {
    if (m_j == 0) {
        throw std::invalid_argument("find_nonzero_odd_entry: empty support");
    }
    const int big_j = spectrum.level();
    if (level < 0 || level >= big_j) {
        throw std::invalid_argument("find_nonzero_odd_entry: level must be below log2(N)");
    }
    const std::size_t stride = std::size_t{1} << (big_j - level - 1);
    const double scale = pow_sqrt2(big_j - level - 1);
    OddSample best{0, 0.0};
    for (std::size_t k = 0; k < m_j; ++k) {
        const double value = scale * spectrum.read(stride * (2 * k + 1));
        if (k == 0 || std::abs(value) > std::abs(best.alpha)) {
            best = {k, value};
        }
    }
    return best;
}

IterationState no_collision_step(const IterationState& state, SpectrumSource& spectrum) {
    const int j = state.level;
    const std::size_t half = std::size_t{1} << j;
    const auto [k0, alpha] = find_nonzero_odd_entry(spectrum, j, state.support.length);
    const double u0 = candidate_odd_coefficient(state, k0);
    if (std::abs(u0 - alpha) < std::abs(u0 + alpha)) {
        return restate(j + 1, state.support.mu, state.values, LevelBranch::KeepFirstHalf);
    }
    std::vector<double> reversed(state.values.rbegin(), state.values.rend());
    const std::size_t mu = 2 * half - state.support.length - state.support.mu;
    return restate(j + 1, mu, std::move(reversed), LevelBranch::ReflectSecondHalf);
}

CollisionWindow make_collision_window(const IterationState& state) {
    const int j = state.level;
    const std::size_t half = std::size_t{1} << j;
    const std::size_t m_tilde = half - state.support.mu;
    const int k_tilde = ceil_log2(m_tilde) + 1;
    if (k_tilde > j) {
        throw std::logic_error("collision window exceeds half-length (K~ > j)");
    }
    const std::size_t w = std::size_t{1} << (k_tilde - 1);
    std::vector<double> z(w, 0.0);
    const std::size_t lo = half - w;  // window [2^j - 2^(K~-1), 2^j - 1]
    for (std::size_t k = 0; k < w; ++k) {
        const std::size_t idx = lo + k;
        if (idx >= state.support.mu && idx <= state.support.nu) {
            z[k] = state.values[idx - state.support.mu];
        }
    }
    return CollisionWindow{m_tilde, k_tilde, std::move(z)};
}

std::optional<IterationState> collision_step(const IterationState& state,
                                             SpectrumSource& spectrum, double epsilon) {
    const int j = state.level;
    const int big_j = spectrum.level();
    if (j >= big_j) {
        throw std::invalid_argument("collision_step: level must be below log2(N)");
    }
    auto window = make_collision_window(state);
    const int k_tilde = window.k_tilde;
    const std::size_t w = std::size_t{1} << (k_tilde - 1);

    // b0_p, b1_p: spectrum at 2^(J-K~)(2p+1) +- 2^(J-j-1)
    const std::size_t base_stride = std::size_t{1} << (big_j - k_tilde);
    const std::size_t offset = std::size_t{1} << (big_j - j - 1);
    const double scale = pow_sqrt2(big_j - j - 1);
    std::vector<double> diff(w);  // J (b0 - b1), reversal applied on the fly
    for (std::size_t p = 0; p < w; ++p) {
        const std::size_t center = base_stride * (2 * p + 1);
        const double b0 = scale * spectrum.read(center + offset);
        const double b1 = scale * spectrum.read(center - offset);
        diff[w - 1 - p] = b0 - b1;
    }

    std::vector<double> t = dct4_fast(diff);

    // z0 = (1/2)(sqrt(2^(j-K~)) (-1)^(2^(j-K~)) J diag(c~) D C4 J (b0-b1) + z)
    const double sign = (j == k_tilde) ? -1.0 : 1.0;
    const double factor = 0.5 * sign * pow_sqrt2(j - k_tilde);
    const std::size_t half = std::size_t{1} << j;
    std::vector<double> z0(w);
    for (std::size_t k = 0; k < w; ++k) {
        const std::size_t kr = w - 1 - k;  // outer reversal
        const double c_tilde = 1.0 / std::cos((2.0 * static_cast<double>(kr) + 1.0) * kPi /
                                              (4.0 * static_cast<double>(half)));
        const double d = (kr % 2 == 0) ? 1.0 : -1.0;
        z0[k] = factor * c_tilde * d * t[kr] + 0.5 * window.z[k];
    }
    for (double& v : z0) {
        if (std::abs(v) <= epsilon) v = 0.0;
    }
    std::vector<double> z1(w);
    for (std::size_t k = 0; k < w; ++k) {
        z1[k] = window.z[w - 1 - k] - z0[w - 1 - k];
    }

    // x^(j+1) is supported in [2^j - 2^(K~-1), 2^j + 2^(K~-1) - 1]
    std::vector<double> assembled(2 * w);
    std::copy(z0.begin(), z0.end(), assembled.begin());
    std::copy(z1.begin(), z1.end(), assembled.begin() + static_cast<std::ptrdiff_t>(w));
    std::size_t first = assembled.size();
    std::size_t last = 0;
    for (std::size_t k = 0; k < assembled.size(); ++k) {
        if (std::abs(assembled[k]) > epsilon) {
            if (first == assembled.size()) first = k;
            last = k;
        }
    }
    if (first == assembled.size()) return std::nullopt;
    std::vector<double> values(assembled.begin() + static_cast<std::ptrdiff_t>(first),
                               assembled.begin() + static_cast<std::ptrdiff_t>(last + 1));
    const std::size_t mu = half - w + first;
    return restate(j + 1, mu, std::move(values), LevelBranch::Collision);
}

namespace {

RecoveryResult run_recovery(SpectrumSource& spectrum, std::size_t n, const RecoveryConfig& config) {
    if (n != spectrum.size()) {
        throw std::invalid_argument("sparse_idct: spectrum length does not match n");
    }
    if (config.support_bound == 0 || config.support_bound > n) {
        throw std::invalid_argument("sparse_idct: support bound must be in [1, n]");
    }
    if (!(config.epsilon > 0.0) || !std::isfinite(config.epsilon)) {
        throw std::invalid_argument("sparse_idct: epsilon must be positive and finite");
    }
    const auto t_start = std::chrono::steady_clock::now();
    const std::uint64_t distinct0 = spectrum.distinct_reads();
    const std::uint64_t total0 = spectrum.total_reads();

    const int big_j = spectrum.level();
    const std::size_t bound = config.support_bound;
    const int level0 = start_level(bound);

    RecoveryResult result;
    RecoveryStats& stats = result.stats;
    auto finish = [&](Signal x) {
        stats.samples_distinct = spectrum.distinct_reads() - distinct0;
        stats.samples_total = spectrum.total_reads() - total0;
        stats.elapsed_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
        result.x = std::move(x);
        return std::move(result);
    };

    if (level0 >= big_j) {
        // 2^L >= N: a single dense inverse transform is already optimal.
        Signal full = subsample_spectrum(spectrum, big_j, big_j);
        Signal x = dct3_fast(full);
        stats.fallback_dense = true;
        stats.branches.push_back(LevelBranch::FallbackDense);
        stats.support = detect_support(x, config.epsilon);
        stats.empty_support = !stats.support.has_value();
        return finish(std::move(x));
    }

    Signal initial = dct3_fast(subsample_spectrum(spectrum, big_j, level0));
    auto support = detect_support(initial, config.epsilon);
    if (!support) {
        stats.empty_support = true;
        return finish(Signal(n, 0.0));
    }
    IterationState state{level0, *support,
                         std::vector<double>(initial.begin() + static_cast<std::ptrdiff_t>(support->mu),
                                             initial.begin() + static_cast<std::ptrdiff_t>(support->nu + 1)),
                         LevelBranch::KeepFirstHalf};

    for (int j = level0; j < big_j; ++j) {
        const std::size_t half = std::size_t{1} << j;
        // 2^L >= 2M, so 2^j - M stays positive at every level
        const bool in_tail = state.support.mu >= half - bound;
        bool collide = in_tail;
        if (config.variant == RecoveryVariant::ExactLength && in_tail) {
            // With m known exactly, a genuine collision either touches
            // 2^j - 1 or has already shortened the detected support.
            collide = state.support.nu == half - 1 || state.support.length < bound;
        }
        if (collide) {
            ++stats.collision_branches;
            stats.branches.push_back(LevelBranch::Collision);
            auto next = collision_step(state, spectrum, config.epsilon);
            if (!next) {
                stats.empty_support = true;
                return finish(Signal(n, 0.0));
            }
            state = std::move(*next);
        } else {
            state = no_collision_step(state, spectrum);
            stats.branches.push_back(state.branch);
        }
    }

    stats.support = state.support;
    Signal x(n, 0.0);
    std::copy(state.values.begin(), state.values.end(),
              x.begin() + static_cast<std::ptrdiff_t>(state.support.mu));
    return finish(std::move(x));
}

}  // namespace

RecoveryResult sparse_idct(SpectrumSource& spectrum, std::size_t n, const RecoveryConfig& config) {
    return run_recovery(spectrum, n, config);
}

RecoveryResult sparse_idct_exact(SpectrumSource& spectrum, std::size_t n,
                                 std::size_t support_length, double epsilon) {
    return run_recovery(spectrum, n,
                        RecoveryConfig{support_length, epsilon, RecoveryVariant::ExactLength});
}

}  // namespace sparsedct
