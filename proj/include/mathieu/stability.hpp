#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <vector>

#include "mathieu/errors.hpp"

namespace mathieu::stability {

/// Smallest excitation amplitude on the leading-order boundary of the first
/// tongue, δ = 1/4 ± ½√(α²δ² − 4ζ²δ) solved for α.
template <typename Scalar>
Scalar leading_order_alpha_crit(Scalar delta, Scalar zeta) {
    require(delta > Scalar(0), "leading_order_alpha_crit: delta must be > 0");
    require(zeta >= Scalar(0), "leading_order_alpha_crit: zeta must be >= 0");
    const Scalar detune = Scalar(2) * delta - Scalar(0.5);
    return std::sqrt(detune * detune + Scalar(4) * zeta * zeta * delta) / delta;
}

/// Harmonic family of the Hill expansion. Half-integer harmonics carry the
/// first tongue (period-doubled solutions); integer harmonics the second.
enum class Family { Integer = 0, HalfInteger = 1 };

inline int tongue_of(Family f) { return f == Family::HalfInteger ? 1 : 2; }

/// Largest real part of the characteristic exponents, per unit of the
/// excitation phase τ = Ωt, for x'' + 2ζ√δ x' + δ(1 + α sin τ)x = 0 using a
/// Fourier truncation of 2·trunc + 1 harmonics. Only exponents whose
/// Floquet multiplier has the family's sign count; -inf if there are none.
double hill_growth_rate(double delta, double alpha, double zeta, int trunc, Family family);

/// Max over both families.
double hill_growth_rate(double delta, double alpha, double zeta, int trunc);

/// True if some characteristic exponent has positive real part. Throws
/// NotConverged when trunc and 2·trunc disagree.
bool hill_unstable(double delta, double alpha, double zeta, int trunc = 10);
bool hill_unstable(double delta, double alpha, double zeta, int trunc, Family family);

/// Lowest α in [alpha_lo, alpha_hi] at which `family` is unstable, by
/// bisection to `tol`; NaN if stable throughout.
double hill_boundary_alpha(double delta, double zeta, Family family, double alpha_lo, double alpha_hi,
                           int trunc = 10, double tol = 1e-4);

enum class Cell : std::int8_t { Stable = 0, Unstable = 1, Undetermined = -1 };

struct BoundaryCurve {
    int tongue = 1;
    std::vector<double> delta;
    std::vector<double> alpha;
};

struct StabilityDiagram {
    Eigen::VectorXd delta_grid;
    Eigen::VectorXd alpha_grid;
    double zeta = 0.0;
    /// classification(i, j) holds a Cell value for delta_grid(i), alpha_grid(j).
    Eigen::Matrix<std::int8_t, Eigen::Dynamic, Eigen::Dynamic> classification;
    std::vector<BoundaryCurve> boundaries;

    Cell cell(Eigen::Index i, Eigen::Index j) const { return static_cast<Cell>(classification(i, j)); }
    Eigen::Index count(Cell c) const;
};

struct DiagramSpec {
    double delta_min = 0.05;
    double delta_max = 1.2;
    double alpha_min = 0.0;
    double alpha_max = 1.5;
    double zeta = 0.0;
    Eigen::Index n_delta = 10;
    Eigen::Index n_alpha = 10;
    int trunc = 10;
    double boundary_tol = 1e-4;

    void validate() const;
};

StabilityDiagram build_diagram(const DiagramSpec& spec);

}  // namespace mathieu::stability
