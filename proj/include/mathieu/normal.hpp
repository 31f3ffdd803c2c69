#pragma once

#include <cmath>
#include <numbers>

namespace mathieu {

template <typename Scalar>
Scalar normal_pdf(Scalar z) {
    return std::exp(-z * z / Scalar(2)) / std::sqrt(Scalar(2) * std::numbers::pi_v<Scalar>);
}

template <typename Scalar>
Scalar normal_cdf(Scalar z) {
    return Scalar(0.5) * std::erfc(-z / std::numbers::sqrt2_v<Scalar>);
}

/// 1 - Phi(z) without cancellation.
template <typename Scalar>
Scalar normal_sf(Scalar z) {
    return Scalar(0.5) * std::erfc(z / std::numbers::sqrt2_v<Scalar>);
}

/// Mills ratio (1 - Phi(z)) / phi(z), finite for all z (continued fraction once
/// erfc underflows).
template <typename Scalar>
Scalar mills_ratio(Scalar z) {
    if (z < Scalar(25)) return normal_sf(z) / normal_pdf(z);
    Scalar tail = z;
    for (int k = 60; k >= 1; --k) tail = z + Scalar(k) / tail;
    return Scalar(1) / tail;
}

}  // namespace mathieu
