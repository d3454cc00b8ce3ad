#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sparsedct/periodization.hpp"
#include "sparsedct/sampling.hpp"

namespace sparsedct {

enum class RecoveryVariant { Bounded, ExactLength };

struct RecoveryConfig {
    std::size_t support_bound;  // M >= m (or m itself for ExactLength)
    double epsilon = 1e-4;
    RecoveryVariant variant = RecoveryVariant::Bounded;
};

/// L = ceil(log2(M)) + 1, the first reconstruction level.
int start_level(std::size_t support_bound);

enum class LevelBranch : char {
    KeepFirstHalf = '0',      // x^(j+1) = (x^(j); 0)
    ReflectSecondHalf = '1',  // x^(j+1) = (0; J x^(j))
    Collision = 'C',
    FallbackDense = 'F',
};

struct RecoveryStats {
    std::uint64_t samples_distinct = 0;
    std::uint64_t samples_total = 0;
    double elapsed_seconds = 0.0;
    int collision_branches = 0;
    bool empty_support = false;
    bool fallback_dense = false;
    std::optional<SupportInfo> support;  // final detected support at level J
    std::vector<LevelBranch> branches;   // one entry per level L..J-1

    std::string branches_string() const;
};

/// One level of the reconstruction: x^(j) restricted to its support
/// interval, so no O(2^j) storage is carried between levels.
struct IterationState {
    int level;                      // j
    SupportInfo support;            // at the run's threshold
    std::vector<double> values;     // x^(j)_{mu..nu}
    LevelBranch branch = LevelBranch::KeepFirstHalf;  // how this state was reached
};

struct OddSample {
    std::size_t k0;
    double alpha;  // sqrt(2)^(J-j-1) * xhat_{2^(J-j-1)(2 k0 + 1)}
};

/// Largest-magnitude entry of the first m_j oddly indexed coefficients of
/// (x^(j+1))^II, located from the full spectrum. Smallest index wins ties.
/// Reads exactly m_j spectrum entries; m_j = 0 is invalid.
OddSample find_nonzero_odd_entry(SpectrumSource& spectrum, int level, std::size_t m_j);

/// Level step when the support is not confined to the last M entries:
/// decides between (x^(j); 0) and (0; J x^(j)) by comparing one oddly
/// indexed spectrum entry against the candidate's coefficient, in O(m_j).
IterationState no_collision_step(const IterationState& state, SpectrumSource& spectrum);

/// Window bookkeeping for the collision step: m~ = 2^j - mu,
/// K~ = ceil(log2 m~) + 1, and z^(j) = the last 2^(K~-1) entries of x^(j).
struct CollisionWindow {
    std::size_t m_tilde;
    int k_tilde;
    std::vector<double> z;
};
CollisionWindow make_collision_window(const IterationState& state);

/// Level step when the support sits in the last M entries and entries from
/// the two halves of x^(j+1) may have been added together. Undoes the
/// possible collision with one DCT-IV of length 2^(K~-1) on 2^K~ fresh
/// samples, thresholds at epsilon, and re-detects the support. Returns empty
/// when everything falls below the threshold.
std::optional<IterationState> collision_step(const IterationState& state,
                                             SpectrumSource& spectrum, double epsilon);

struct RecoveryResult {
    Signal x;
    RecoveryStats stats;
};

/// Sparse fast inverse DCT-II: recovers x of length n = 2^J with short
/// support of length m <= M from its DCT-II spectrum, using
/// O(M + m log2(n/M)) samples. Starts from x^(L) = DCT-III of the
/// subsampled spectrum and doubles the level until J, choosing the branch by
/// mu^(j) < 2^j - M. Falls back to one dense DCT-III when 2^L >= n.
RecoveryResult sparse_idct(SpectrumSource& spectrum, std::size_t n, const RecoveryConfig& config);

/// Variant for exactly known support length: M = m, and the collision
/// machinery runs only when the support touches 2^j - 1 or the detected
/// length has shrunk below m (the signature of an actual collision).
RecoveryResult sparse_idct_exact(SpectrumSource& spectrum, std::size_t n,
                                 std::size_t support_length, double epsilon);

}  // namespace sparsedct
