#pragma once

#include <span>

#include "sparsedct/signal.hpp"

namespace sparsedct {

enum class TransformKind { Dct2, Dct3, Dct4, Dst4 };

/// Floating-point operation tally for the fast transforms.
struct OpCount {
    long long adds = 0;
    long long muls = 0;
    long long total() const { return adds + muls; }
};

// Dense O(n^2) oracles. Orthonormal convention throughout:
//   C2[k][l] = sqrt(2/n) * eps_n(k) * cos(k(2l+1)pi/(2n))
//   C4[k][l] = sqrt(2/n) * cos((2k+1)(2l+1)pi/(4n))
//   S4[k][l] = sqrt(2/n) * sin((2k+1)(2l+1)pi/(4n))
// DCT-III is the transpose (= inverse) of DCT-II; DCT-IV is symmetric and
// self-inverse; S4 = J * C4 * D with D = diag((-1)^k) and J the reversal.
Signal dct2_naive(const Signal& x);
Signal dct3_naive(const Signal& x);
Signal dct4_naive(const Signal& x);
Signal dst4_naive(const Signal& x);

// O(n log n) real-arithmetic implementations. DCT-II/III use the split into
// half-length DCT-II and DCT-IV with the (x0 + Jx1; x0 - Jx1)/sqrt(2)
// butterfly; DCT-IV lifts to a same-length DCT-II through an O(n) cosine
// pre-twiddle and a first-order recurrence on the outputs.
// Pass `ops` to count floating-point operations (twiddle tables excluded).
Signal dct2_fast(const Signal& x, OpCount* ops = nullptr);
Signal dct3_fast(const Signal& x, OpCount* ops = nullptr);
Signal dct4_fast(const Signal& x, OpCount* ops = nullptr);
Signal dst4_fast(const Signal& x, OpCount* ops = nullptr);

Signal apply_transform(TransformKind kind, const Signal& x, bool fast);

/// det(x_k^{2l+1})_{k,l} = prod_j x_j * prod_{k<l} (x_l^2 - x_k^2).
/// Nodes must be nonzero with pairwise distinct absolute values; at most 12
/// nodes so the magnitude stays representable. Throws std::invalid_argument.
double odd_vandermonde_det(std::span<const double> nodes);

}  // namespace sparsedct
