#include "sparsedct/transforms.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace sparsedct {

namespace {

constexpr double kPi = std::numbers::pi;
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

// cos(r*pi/half_period) for r = 0..2*half_period-1; exact table lookup keeps
// the naive oracles fast and avoids large-argument cos calls.
std::vector<double> cosine_table(std::size_t half_period) {
    std::vector<double> t(2 * half_period);
    for (std::size_t r = 0; r < t.size(); ++r) {
        t[r] = std::cos(static_cast<double>(r) * kPi / static_cast<double>(half_period));
    }
    return t;
}

// Pre-twiddle factors 2*cos((2l+1)pi/(4n)) for the DCT-IV lifting, cached
// per length. One-time initialization under the lock; the tables themselves
// are immutable afterwards, so concurrent readers only share the pointer.
std::shared_ptr<const std::vector<double>> dct4_twiddles(std::size_t n) {
    static std::mutex mutex;
    static std::map<std::size_t, std::shared_ptr<const std::vector<double>>> cache;
    std::scoped_lock lock(mutex);
    auto& slot = cache[n];
    if (!slot) {
        auto t = std::make_shared<std::vector<double>>(n);
        for (std::size_t l = 0; l < n; ++l) {
            (*t)[l] = 2.0 * std::cos((2.0 * static_cast<double>(l) + 1.0) * kPi /
                                     (4.0 * static_cast<double>(n)));
        }
        slot = std::move(t);
    }
    return slot;
}

void dct2_rec(std::span<double> io, std::span<double> scratch, OpCount* ops);

// DCT-IV via a same-length DCT-II: y = DCT2(2 cos((2l+1)pi/4n) * x), then
// out_0 = y_0/sqrt(2), out_k = y_k - out_{k-1}.
void dct4_rec(std::span<double> io, std::span<double> scratch, OpCount* ops) {
    const std::size_t n = io.size();
    if (n == 1) {
        // C4_1 = sqrt(2)*cos(pi/4) = 1
        return;
    }
    auto tw = dct4_twiddles(n);
    for (std::size_t l = 0; l < n; ++l) io[l] *= (*tw)[l];
    dct2_rec(io, scratch, ops);
    io[0] *= kInvSqrt2;
    for (std::size_t k = 1; k < n; ++k) io[k] -= io[k - 1];
    if (ops) {
        ops->muls += static_cast<long long>(n) + 1;
        ops->adds += static_cast<long long>(n) - 1;
    }
}

void dct2_rec(std::span<double> io, std::span<double> scratch, OpCount* ops) {
    const std::size_t n = io.size();
    if (n == 1) return;
    const std::size_t h = n / 2;
    for (std::size_t k = 0; k < h; ++k) {
        const double u = io[k];
        const double v = io[n - 1 - k];
        scratch[k] = (u + v) * kInvSqrt2;
        scratch[h + k] = (u - v) * kInvSqrt2;
    }
    if (ops) {
        ops->adds += static_cast<long long>(n);
        ops->muls += static_cast<long long>(n);
    }
    dct2_rec(scratch.subspan(0, h), io.subspan(0, h), ops);
    dct4_rec(scratch.subspan(h, h), io.subspan(h, h), ops);
    for (std::size_t k = 0; k < h; ++k) {
        io[2 * k] = scratch[k];
        io[2 * k + 1] = scratch[h + k];
    }
}

// Transpose of the dct2_rec factorization, run backwards.
void dct3_rec(std::span<double> io, std::span<double> scratch, OpCount* ops) {
    const std::size_t n = io.size();
    if (n == 1) return;
    const std::size_t h = n / 2;
    for (std::size_t k = 0; k < h; ++k) {
        scratch[k] = io[2 * k];
        scratch[h + k] = io[2 * k + 1];
    }
    dct3_rec(scratch.subspan(0, h), io.subspan(0, h), ops);
    dct4_rec(scratch.subspan(h, h), io.subspan(h, h), ops);
    for (std::size_t k = 0; k < h; ++k) {
        const double p = scratch[k];
        const double q = scratch[h + k];
        io[k] = (p + q) * kInvSqrt2;
        io[n - 1 - k] = (p - q) * kInvSqrt2;
    }
    if (ops) {
        ops->adds += static_cast<long long>(n);
        ops->muls += static_cast<long long>(n);
    }
}

Signal run_fast(const Signal& x, OpCount* ops, void (*rec)(std::span<double>, std::span<double>, OpCount*)) {
    require_signal(x, "x");
    Signal out = x;
    std::vector<double> scratch(x.size());
    rec(out, scratch, ops);
    return out;
}

}  // namespace

Signal dct2_naive(const Signal& x) {
    require_signal(x, "x");
    const std::size_t n = x.size();
    const auto table = cosine_table(2 * n);  // cos(r*pi/(2n)), period 4n
    const std::uint64_t mask = 4 * n - 1;    // n is a power of two
    const double scale = std::sqrt(2.0 / static_cast<double>(n));
    Signal out(n);
    for (std::size_t k = 0; k < n; ++k) {
        double acc = 0.0;
        for (std::size_t l = 0; l < n; ++l) {
            acc += table[(static_cast<std::uint64_t>(k) * (2 * l + 1)) & mask] * x[l];
        }
        out[k] = scale * epsilon_weight(k, n) * acc;
    }
    return out;
}

Signal dct3_naive(const Signal& x) {
    require_signal(x, "x");
    const std::size_t n = x.size();
    const auto table = cosine_table(2 * n);
    const std::uint64_t mask = 4 * n - 1;
    const double scale = std::sqrt(2.0 / static_cast<double>(n));
    Signal out(n);
    for (std::size_t l = 0; l < n; ++l) {
        double acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            acc += epsilon_weight(k, n) *
                   table[(static_cast<std::uint64_t>(k) * (2 * l + 1)) & mask] * x[k];
        }
        out[l] = scale * acc;
    }
    return out;
}

Signal dct4_naive(const Signal& x) {
    require_signal(x, "x");
    const std::size_t n = x.size();
    const auto table = cosine_table(4 * n);  // cos(r*pi/(4n)), period 8n
    const std::uint64_t mask = 8 * n - 1;
    const double scale = std::sqrt(2.0 / static_cast<double>(n));
    Signal out(n);
    for (std::size_t k = 0; k < n; ++k) {
        double acc = 0.0;
        for (std::size_t l = 0; l < n; ++l) {
            acc += table[((2 * static_cast<std::uint64_t>(k) + 1) * (2 * l + 1)) & mask] * x[l];
        }
        out[k] = scale * acc;
    }
    return out;
}

Signal dst4_naive(const Signal& x) {
    require_signal(x, "x");
    const std::size_t n = x.size();
    const double scale = std::sqrt(2.0 / static_cast<double>(n));
    Signal out(n);
    for (std::size_t k = 0; k < n; ++k) {
        double acc = 0.0;
        for (std::size_t l = 0; l < n; ++l) {
            acc += std::sin((2.0 * static_cast<double>(k) + 1.0) *
                            (2.0 * static_cast<double>(l) + 1.0) * kPi /
                            (4.0 * static_cast<double>(n))) *
                   x[l];
        }
        out[k] = scale * acc;
    }
    return out;
}

Signal dct2_fast(const Signal& x, OpCount* ops) { return run_fast(x, ops, dct2_rec); }

Signal dct3_fast(const Signal& x, OpCount* ops) { return run_fast(x, ops, dct3_rec); }

Signal dct4_fast(const Signal& x, OpCount* ops) { return run_fast(x, ops, dct4_rec); }

Signal dst4_fast(const Signal& x, OpCount* ops) {
    require_signal(x, "x");
    const std::size_t n = x.size();
    // S4 = J * C4 * D
    Signal w(n);
    for (std::size_t l = 0; l < n; ++l) w[l] = (l % 2 == 0) ? x[l] : -x[l];
    std::vector<double> scratch(n);
    dct4_rec(w, scratch, ops);
    Signal out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = w[n - 1 - k];
    if (ops) ops->muls += static_cast<long long>(n) / 2;
    return out;
}

Signal apply_transform(TransformKind kind, const Signal& x, bool fast) {
    switch (kind) {
        case TransformKind::Dct2: return fast ? dct2_fast(x) : dct2_naive(x);
        case TransformKind::Dct3: return fast ? dct3_fast(x) : dct3_naive(x);
        case TransformKind::Dct4: return fast ? dct4_fast(x) : dct4_naive(x);
        case TransformKind::Dst4: return fast ? dst4_fast(x) : dst4_naive(x);
    }
    throw std::invalid_argument("unknown transform kind");
}

double odd_vandermonde_det(std::span<const double> nodes) {
    const std::size_t n = nodes.size();
    if (n == 0 || n > 12) {
        throw std::invalid_argument("odd_vandermonde_det: need 1..12 nodes");
    }
    for (std::size_t k = 0; k < n; ++k) {
        if (nodes[k] == 0.0 || !std::isfinite(nodes[k])) {
            throw std::invalid_argument("odd_vandermonde_det: nodes must be nonzero and finite");
        }
        for (std::size_t l = k + 1; l < n; ++l) {
            if (std::abs(nodes[k]) == std::abs(nodes[l])) {
                throw std::invalid_argument(
                    "odd_vandermonde_det: nodes must have pairwise distinct absolute values");
            }
        }
    }
    double det = 1.0;
    for (std::size_t k = 0; k < n; ++k) det *= nodes[k];
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t l = k + 1; l < n; ++l) {
            det *= nodes[l] * nodes[l] - nodes[k] * nodes[k];
        }
    }
    return det;
}

}  // namespace sparsedct
