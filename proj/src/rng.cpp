#include "tfqkd/rng.hpp"

#include <cmath>

namespace tfqkd {

double Rng::next_gaussian() {
    const double u1 = 1.0 - next_double(); // (0, 1]
    const double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return r * std::cos(6.283185307179586 * u2);
}

} // namespace tfqkd
