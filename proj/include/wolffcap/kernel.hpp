#pragma once

#include <cmath>
#include <stdexcept>

#include "common.hpp"
#include "phi.hpp"

namespace wolffcap {

// Vector kernel (y - x) / (|y - x| * phi(|y - x|)). Antisymmetry is exact in
// floating point: swapping arguments negates every coordinate difference and
// leaves the squared distance bit-identical.
inline Point kernel_eval(const PhiFunction& phi, const Point& x, const Point& y) {
    double r = dist(x, y);
    if (r == 0.0) throw std::domain_error("kernel: coincident evaluation points");
    double scale = 1.0 / (r * phi.eval(r));
    Point out(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) out[k] = (y[k] - x[k]) * scale;
    return out;
}

inline double kernel_magnitude(const PhiFunction& phi, double separation) {
    if (separation <= 0.0) throw std::domain_error("kernel: separation must be positive");
    return 1.0 / phi.eval(separation);
}

} // namespace wolffcap
