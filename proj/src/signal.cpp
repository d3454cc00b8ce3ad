#include "sparsedct/signal.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sparsedct {

int level_of_length(std::size_t n) {
    if (!is_power_of_two(n)) {
        throw std::invalid_argument("length " + std::to_string(n) + " is not a power of two");
    }
    int j = 0;
    while ((std::size_t{1} << j) < n) ++j;
    return j;
}

void require_signal(const Signal& x, const char* what) {
    if (!is_power_of_two(x.size())) {
        throw std::invalid_argument(std::string(what) + ": length " + std::to_string(x.size()) +
                                    " is not a power of two");
    }
    for (double v : x) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument(std::string(what) + ": non-finite entry");
        }
    }
}

double epsilon_weight(std::size_t k, std::size_t n) {
    return (k % n == 0) ? 1.0 / std::sqrt(2.0) : 1.0;
}

double pow_sqrt2(int e) {
    double r = std::ldexp(1.0, e / 2);
    return (e % 2 != 0) ? r * std::sqrt(2.0) : r;
}

}  // namespace sparsedct
