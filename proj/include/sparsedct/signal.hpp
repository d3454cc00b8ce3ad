#pragma once

#include <cstddef>
#include <vector>

namespace sparsedct {

/// Dense real vector of dyadic length 2^j. Operations that require the
/// dyadic-length/finite-entries invariants validate them on entry.
using Signal = std::vector<double>;

constexpr bool is_power_of_two(std::size_t n) {
    return n != 0 && (n & (n - 1)) == 0;
}

/// log2(n) for n a power of two.
int level_of_length(std::size_t n);

/// Throws std::invalid_argument if x is empty, has non-dyadic length or
/// contains NaN/Inf. `what` names the offending argument in the message.
void require_signal(const Signal& x, const char* what);

/// ε_n(k): 1/√2 for k ≡ 0 (mod n), 1 otherwise.
double epsilon_weight(std::size_t k, std::size_t n);

/// (√2)^e for integer e ≥ 0.
double pow_sqrt2(int e);

}  // namespace sparsedct
