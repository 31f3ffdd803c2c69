#include "mathieu/stability.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <complex>
#include <limits>
#include <sstream>

namespace mathieu::stability {

namespace {

using ComplexMatrix = Eigen::MatrixXcd;
using namespace std::complex_literals;

// Exponents with real part below this are treated as neutral; the undamped
// problem has purely imaginary exponents that pick up rounding noise.
constexpr double kGrowthTolerance = 1e-9;

// Substituting x = e^{λτ} Σ c_m e^{iω_m τ}, ω_m = m + p/2, gives the
// quadratic eigenproblem (λ² I + λ B + C) c = 0, linearized as a companion
// matrix of size 2(2·trunc + 1).
ComplexMatrix companion(double delta, double alpha, double zeta, int trunc, Family family) {
    const Eigen::Index k = 2 * trunc + 1;
    const double shift = family == Family::HalfInteger ? 0.5 : 0.0;
    const double damping = 2.0 * zeta * std::sqrt(delta);
    const std::complex<double> coupling = delta * alpha / 2.0i;

    ComplexMatrix stiffness = ComplexMatrix::Zero(k, k);
    ComplexMatrix friction = ComplexMatrix::Zero(k, k);
    for (Eigen::Index r = 0; r < k; ++r) {
        const double omega = static_cast<double>(r - trunc) + shift;
        stiffness(r, r) = delta - omega * omega + 1.0i * damping * omega;
        friction(r, r) = 2.0i * omega + damping;
        if (r > 0) stiffness(r, r - 1) = coupling;
        if (r + 1 < k) stiffness(r, r + 1) = -coupling;
    }

    ComplexMatrix a = ComplexMatrix::Zero(2 * k, 2 * k);
    a.topRightCorner(k, k).setIdentity();
    a.bottomLeftCorner(k, k) = -stiffness;
    a.bottomRightCorner(k, k) = -friction;
    return a;
}

bool classify(double growth) { return growth > kGrowthTolerance; }

}  // namespace

double hill_growth_rate(double delta, double alpha, double zeta, int trunc, Family family) {
    require(delta > 0.0, "hill: delta must be > 0");
    require(zeta >= 0.0, "hill: zeta must be >= 0");
    require(trunc >= 3, "hill: trunc must be >= 3");

    Eigen::ComplexEigenSolver<ComplexMatrix> solver(companion(delta, alpha, zeta, trunc, family),
                                                    /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) throw NotConverged("hill: eigenvalue iteration failed");

    // Relabeling m -> m+1 shifts λ by i, and an exponent of the other family
    // shows up here shifted by i/2. Keeping |Im λ| <= 1/4 assigns each
    // Floquet exponent to the family whose harmonics resolve it; the two
    // strips together cover every exponent.
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& lambda : solver.eigenvalues())
        if (std::abs(lambda.imag()) <= 0.25 + 1e-9) best = std::max(best, lambda.real());
    return best;
}

double hill_growth_rate(double delta, double alpha, double zeta, int trunc) {
    return std::max(hill_growth_rate(delta, alpha, zeta, trunc, Family::HalfInteger),
                    hill_growth_rate(delta, alpha, zeta, trunc, Family::Integer));
}

bool hill_unstable(double delta, double alpha, double zeta, int trunc, Family family) {
    const bool coarse = classify(hill_growth_rate(delta, alpha, zeta, trunc, family));
    const bool fine = classify(hill_growth_rate(delta, alpha, zeta, 2 * trunc, family));
    if (coarse != fine) {
        std::ostringstream msg;
        msg << "hill: classification at (delta=" << delta << ", alpha=" << alpha << ", zeta=" << zeta
            << ") changes between trunc=" << trunc << " and " << 2 * trunc;
        throw NotConverged(msg.str());
    }
    return fine;
}

bool hill_unstable(double delta, double alpha, double zeta, int trunc) {
    return hill_unstable(delta, alpha, zeta, trunc, Family::HalfInteger) ||
           hill_unstable(delta, alpha, zeta, trunc, Family::Integer);
}

double hill_boundary_alpha(double delta, double zeta, Family family, double alpha_lo, double alpha_hi, int trunc,
                           double tol) {
    require(alpha_hi > alpha_lo, "hill_boundary_alpha: empty alpha range");
    auto unstable = [&](double a) { return classify(hill_growth_rate(delta, a, zeta, 2 * trunc, family)); };
    if (unstable(alpha_lo)) return alpha_lo;
    if (!unstable(alpha_hi)) return std::numeric_limits<double>::quiet_NaN();
    double lo = alpha_lo, hi = alpha_hi;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (unstable(mid) ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

Eigen::Index StabilityDiagram::count(Cell c) const {
    return (classification.array() == static_cast<std::int8_t>(c)).count();
}

void DiagramSpec::validate() const {
    require(delta_min > 0.0 && delta_max > delta_min, "DiagramSpec: need 0 < delta_min < delta_max");
    require(alpha_min >= 0.0 && alpha_max > alpha_min, "DiagramSpec: need 0 <= alpha_min < alpha_max");
    require(zeta >= 0.0, "DiagramSpec: zeta must be >= 0");
    require(n_delta >= 2 && n_alpha >= 2, "DiagramSpec: resolution must be >= 2 per axis");
    require(trunc >= 3, "DiagramSpec: trunc must be >= 3");
    require(boundary_tol > 0.0, "DiagramSpec: boundary_tol must be > 0");
}

StabilityDiagram build_diagram(const DiagramSpec& spec) {
    spec.validate();
    StabilityDiagram d;
    d.zeta = spec.zeta;
    d.delta_grid = Eigen::VectorXd::LinSpaced(spec.n_delta, spec.delta_min, spec.delta_max);
    d.alpha_grid = Eigen::VectorXd::LinSpaced(spec.n_alpha, spec.alpha_min, spec.alpha_max);
    d.classification.resize(spec.n_delta, spec.n_alpha);

    for (Eigen::Index i = 0; i < spec.n_delta; ++i) {
        for (Eigen::Index j = 0; j < spec.n_alpha; ++j) {
            Cell c;
            try {
                c = hill_unstable(d.delta_grid(i), d.alpha_grid(j), spec.zeta, spec.trunc) ? Cell::Unstable
                                                                                             : Cell::Stable;
            } catch (const NotConverged&) {
                c = Cell::Undetermined;
            }
            d.classification(i, j) = static_cast<std::int8_t>(c);
        }
    }

    for (Family family : {Family::HalfInteger, Family::Integer}) {
        BoundaryCurve current{tongue_of(family), {}, {}};
        auto flush = [&] {
            if (!current.delta.empty()) d.boundaries.push_back(current);
            current = BoundaryCurve{tongue_of(family), {}, {}};
        };
        for (Eigen::Index i = 0; i < spec.n_delta; ++i) {
            const double a = hill_boundary_alpha(d.delta_grid(i), spec.zeta, family, spec.alpha_min,
                                                 spec.alpha_max, spec.trunc, spec.boundary_tol);
            if (std::isnan(a)) {
                flush();
                continue;
            }
            current.delta.push_back(d.delta_grid(i));
            current.alpha.push_back(a);
        }
        flush();
    }
    return d;
}

}  // namespace mathieu::stability
