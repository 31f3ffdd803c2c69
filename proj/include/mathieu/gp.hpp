#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <utility>

#include "mathieu/realization.hpp"
#include "mathieu/rng.hpp"

namespace mathieu::gp {

/// Squared-exponential autocorrelation R(tau) = sigma^2 exp(-tau^2 / (2 ell^2)).
struct AcfSpec {
    double sigma_alpha = 0.0;
    double ell_alpha = 1.0;

    void validate() const {
        require(sigma_alpha >= 0.0 && std::isfinite(sigma_alpha), "AcfSpec: sigma_alpha must be >= 0");
        require(ell_alpha > 0.0 && std::isfinite(ell_alpha), "AcfSpec: ell_alpha must be > 0");
    }
};

template <typename Scalar>
Scalar acf(Scalar tau, const AcfSpec& spec) {
    const Scalar s = static_cast<Scalar>(spec.sigma_alpha);
    const Scalar ell = static_cast<Scalar>(spec.ell_alpha);
    return s * s * std::exp(-tau * tau / (Scalar(2) * ell * ell));
}

/// -r''(0) of the normalized autocorrelation r = R / R(0), i.e. 1 / ell^2.
/// This is the curvature that enters Rice's crossing rate.
template <typename Scalar = double>
Scalar acf_curvature_at_zero(const AcfSpec& spec) {
    const Scalar ell = static_cast<Scalar>(spec.ell_alpha);
    return Scalar(1) / (ell * ell);
}

/// Exact sampler for a stationary Gaussian process on a uniform grid.
///
/// The covariance matrix of n grid samples is Toeplitz; it is embedded in a
/// circulant of size M >= 2(n-1) (power of two) whose eigenvalues are the DFT
/// of its first row. One complex draw yields two independent real paths.
class CirculantSampler {
public:
    /// Negative eigenvalues down to -eig_tolerance * max are clamped to zero;
    /// anything more negative throws EmbeddingNotPSD.
    CirculantSampler(const AcfSpec& spec, Eigen::Index n, double dt, double eig_tolerance = 1e-12);

    Eigen::Index size() const { return n_; }
    Eigen::Index embedding_size() const { return m_; }
    double dt() const { return dt_; }
    bool clamped() const { return clamped_; }
    const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }

    /// Covariance at lags 0..n-1 implied by the (clamped) eigenvalues.
    Eigen::VectorXd embedded_covariance() const;

    /// Two independent zero-mean paths of length n.
    std::pair<Eigen::VectorXd, Eigen::VectorXd> draw_pair(Engine& engine) const;

private:
    Eigen::Index n_;
    Eigen::Index m_;
    double dt_;
    bool clamped_ = false;
    bool degenerate_ = false;
    Eigen::VectorXd eigenvalues_;
    Eigen::VectorXd amplitude_;  // sqrt(eigenvalue / M)
};

/// One realization (channel "alpha") starting at t = 0; deterministic in seed.
ProcessRealization sample_gp(const AcfSpec& spec, Eigen::Index n, double dt, std::uint64_t seed);

}  // namespace mathieu::gp
