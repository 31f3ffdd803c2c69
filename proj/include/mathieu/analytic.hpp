#pragma once

#include <Eigen/Dense>

#include <vector>

#include "mathieu/quadrature.hpp"
#include "mathieu/sde.hpp"

namespace mathieu::analytic {

struct QuadSettings {
    double rel_tol = 1e-6;
    double abs_tol = 0.0;
    int max_evals = 200000;
    /// Integrands are truncated where their exponential factor drops below
    /// exp(-tail_exponent) (1e-30 by default).
    double tail_exponent = 69.07755278982137;

    quad::Settings outer() const { return {rel_tol, abs_tol, max_evals}; }
    quad::Settings inner() const { return {rel_tol * 1e-2, 0.0, max_evals}; }
};

/// Precomputed quantities of the background / rare-event decomposition of
/// the slow-variable dynamics dχ = -γ(t)χ dt + σ_F dW, γ = ζω₀ - ω₀α/4.
struct AnalyticModel {
    sde::SystemParams params;
    double eta = 0.0;        // 4ζ/σ_α, mean over standard deviation of γ
    double tail_prob = 0.0;  // P(γ < 0) = 1 - Φ(η)
    double gamma_pos = 0.0;  // E[γ | γ > 0]
    double gamma_neg = 0.0;  // E[γ | γ < 0]
    double T_bar = 0.0;      // mean duration of γ < 0 excursions
    double upsilon = 0.0;    // decay-to-growth duration ratio
    double P_r = 0.0;        // fraction of time spent in rare events
    double rho = 0.0;        // rare-event envelope threshold, one background std
    double sigma_f2 = 0.0;
    QuadSettings quad;

    /// Standard deviation of the Gaussian background, σ_F / √(2 γ̄₊) (= rho).
    double background_std() const { return rho; }
};

/// Throws InvalidRegime if η ≤ 0 or P_r is outside (0, 0.5) unless
/// `validate_regime` is false (used for the Gaussian limit).
AnalyticModel build_model(const sde::SystemParams& params, const QuadSettings& quad = {},
                          bool validate_regime = true);

double background_pdf(double x, const AnalyticModel& m);

/// Density of the growth rate Λ = -γ given γ < 0; zero for λ < 0.
double lyapunov_pdf(double lambda, const AnalyticModel& m);

/// Rayleigh-type excursion-duration density with mean T̄.
double duration_pdf(double t, const AnalyticModel& m);

/// Envelope density after one instability starting from envelope xi0.
double rare_pdf_given_xi0(double xi, double xi0, const AnalyticModel& m);

/// Conditional rare-event density of the response; zero for |x| ≤ rho.
double rare_pdf(double x, const AnalyticModel& m);

double total_pdf(double x, const AnalyticModel& m);

struct CurvePoint {
    double x = 0.0;
    double total = 0.0;
    double background_weighted = 0.0;
    double rare_weighted = 0.0;
};

std::vector<CurvePoint> analytic_curve(const AnalyticModel& m, const std::vector<double>& xs);

/// Smallest |x| (doubling from 10 rho) with total_pdf below `level`.
double curve_extent(const AnalyticModel& m, double level = 1e-12);

/// Symmetric grid: linear core over ±4 background std plus log-spaced points
/// on [rho/10, X_max] and their mirror images.
std::vector<double> default_curve_grid(const AnalyticModel& m, int n_core = 161, int n_log = 120);

/// Average of total_pdf over [a, b].
double bin_average(const AnalyticModel& m, double a, double b);

}  // namespace mathieu::analytic
