#include "mathieu/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "mathieu/gp.hpp"
#include "mathieu/normal.hpp"

namespace mathieu::analytic {

namespace {

constexpr double kSqrt2Pi = 2.5066282746310002;

void require_rare_part(const AnalyticModel& m) {
    if (!(m.tail_prob > 0.0) || !(m.T_bar > 0.0))
        throw InvalidRegime("rare-event density undefined: P(gamma < 0) underflows for this parameter set");
}

// G(L) = ∫₀^∞ exp(-8(L/t + ζω₀)²/(σ_α ω₀)² - π t²/(4 T̄²)) dt.
//
// This is the growth-rate integral of the envelope density after the change
// of variables t = L / y (t is the excursion duration that takes the envelope
// from ξ₀ to ξ₀ e^L at rate y), which removes the 1/y² singularity.
double duration_integral(double log_ratio, const AnalyticModel& m) {
    const double w0 = m.params.omega0;
    const double zw = m.params.zeta * w0;
    const double scale = m.params.acf.sigma_alpha * w0;
    const double e = m.quad.tail_exponent;
    const double t_max = 2.0 * m.T_bar * std::sqrt(e / std::numbers::pi);
    const double t_min = log_ratio * std::sqrt(8.0 / e) / scale;
    if (t_min >= t_max) return 0.0;
    const double inv_scale2 = 8.0 / (scale * scale);
    const double duration_coeff = std::numbers::pi / (4.0 * m.T_bar * m.T_bar);
    auto integrand = [&](double t) {
        const double rate = log_ratio / t + zw;
        return std::exp(-inv_scale2 * rate * rate - duration_coeff * t * t);
    };
    return quad::integrate(integrand, t_min, t_max, m.quad.inner()).value;
}

}  // namespace

AnalyticModel build_model(const sde::SystemParams& params, const QuadSettings& quad, bool validate_regime) {
    params.validate();
    AnalyticModel m;
    m.params = params;
    m.quad = quad;
    m.sigma_f2 = params.sigma_f2();

    const double zeta = params.zeta;
    const double w0 = params.omega0;
    const double sigma = params.acf.sigma_alpha;

    if (sigma == 0.0) {
        if (validate_regime) throw InvalidRegime("sigma_alpha = 0: no parametric excursions, P_r = 0");
        m.eta = std::numeric_limits<double>::infinity();
        m.tail_prob = 0.0;
        m.gamma_pos = zeta * w0;
        m.gamma_neg = std::numeric_limits<double>::quiet_NaN();
        m.T_bar = std::numeric_limits<double>::quiet_NaN();
        m.upsilon = 0.0;
        m.P_r = 0.0;
        m.rho = std::sqrt(m.sigma_f2 / (2.0 * m.gamma_pos));
        return m;
    }

    m.eta = 4.0 * zeta / sigma;
    m.tail_prob = normal_sf(m.eta);
    const double mills = mills_ratio(m.eta);                         // (1-Φ)/φ
    const double hazard_pos = normal_pdf(m.eta) / normal_cdf(m.eta);  // φ/Φ

    m.gamma_pos = w0 * (zeta + 0.25 * sigma * hazard_pos);
    m.gamma_neg = -w0 * (-zeta + 0.25 * sigma / mills);
    // T̄ = (1-Φ(η)) / ((1/2π) √(-r''(0)) e^{-η²/2}) rewritten via the Mills
    // ratio so it stays finite when 1-Φ(η) underflows.
    m.T_bar = kSqrt2Pi * mills / std::sqrt(gp::acf_curvature_at_zero(params.acf));
    m.upsilon = (-zeta + 0.25 * sigma / mills) / (zeta + 0.25 * sigma * hazard_pos);
    m.P_r = (1.0 + m.upsilon) * m.tail_prob;
    m.rho = std::sqrt(m.sigma_f2 / (2.0 * m.gamma_pos));

    if (validate_regime) {
        std::ostringstream msg;
        if (!(m.eta > 0.0)) {
            msg << "eta = " << m.eta << " must be positive";
            throw InvalidRegime(msg.str());
        }
        if (!(m.P_r > 0.0) || !(m.P_r < 0.5)) {
            msg << "P_r = " << m.P_r << " outside (0, 0.5): rare events are not rare for sigma_alpha = " << sigma;
            throw InvalidRegime(msg.str());
        }
    }
    return m;
}

double background_pdf(double x, const AnalyticModel& m) {
    const double k = m.gamma_pos / m.sigma_f2;
    return std::sqrt(k / std::numbers::pi) * std::exp(-k * x * x);
}

double lyapunov_pdf(double lambda, const AnalyticModel& m) {
    if (lambda < 0.0) return 0.0;
    require_rare_part(m);
    const double scale = m.params.acf.sigma_alpha * m.params.omega0;
    return 4.0 / (scale * m.tail_prob) * normal_pdf(4.0 * (lambda + m.params.zeta * m.params.omega0) / scale);
}

double duration_pdf(double t, const AnalyticModel& m) {
    if (t <= 0.0) return 0.0;
    const double tb2 = m.T_bar * m.T_bar;
    return std::numbers::pi * t / (2.0 * tb2) * std::exp(-std::numbers::pi * t * t / (4.0 * tb2));
}

double rare_pdf_given_xi0(double xi, double xi0, const AnalyticModel& m) {
    require(xi0 > 0.0, "rare_pdf_given_xi0: xi0 must be > 0");
    if (xi <= xi0) return 0.0;
    require_rare_part(m);
    const double scale = m.params.acf.sigma_alpha * m.params.omega0;
    return kSqrt2Pi * duration_integral(std::log(xi / xi0), m) /
           (scale * m.T_bar * m.T_bar * m.tail_prob * xi);
}

double rare_pdf(double x, const AnalyticModel& m) {
    const double ax = std::abs(x);
    if (ax <= m.rho) return 0.0;
    require_rare_part(m);

    const double k = m.gamma_pos / m.sigma_f2;
    const double scale = m.params.acf.sigma_alpha * m.params.omega0;
    const double prefactor =
        kSqrt2Pi * m.gamma_pos / (m.sigma_f2 * scale * m.T_bar * m.T_bar * m.tail_prob);
    // ½ ∫ pdf(|x| | ξ₀) pdf(ξ₀ | ξ₀ > ρ) dξ₀ with the shifted-Rayleigh prior;
    // the prior is negligible beyond ρ + √(tail_exponent / k).
    const double upper = std::min(ax, m.rho + std::sqrt(m.quad.tail_exponent / k));
    auto integrand = [&](double xi0) {
        const double u = xi0 - m.rho;
        return u / ax * duration_integral(std::log(ax / xi0), m) * std::exp(-k * u * u);
    };
    return prefactor * quad::integrate(integrand, m.rho, upper, m.quad.outer()).value;
}

double total_pdf(double x, const AnalyticModel& m) {
    const double background = (1.0 - m.P_r) * background_pdf(x, m);
    if (m.P_r == 0.0) return background;
    return background + m.P_r * rare_pdf(x, m);
}

std::vector<CurvePoint> analytic_curve(const AnalyticModel& m, const std::vector<double>& xs) {
    std::vector<CurvePoint> out;
    out.reserve(xs.size());
    for (double x : xs) {
        CurvePoint p;
        p.x = x;
        p.background_weighted = (1.0 - m.P_r) * background_pdf(x, m);
        p.rare_weighted = m.P_r == 0.0 ? 0.0 : m.P_r * rare_pdf(x, m);
        p.total = p.background_weighted + p.rare_weighted;
        out.push_back(p);
    }
    return out;
}

double curve_extent(const AnalyticModel& m, double level) {
    double x = 10.0 * m.rho;
    for (int i = 0; i < 200 && total_pdf(x, m) >= level; ++i) x *= 2.0;
    return x;
}

std::vector<double> default_curve_grid(const AnalyticModel& m, int n_core, int n_log) {
    require(n_core >= 3 && n_log >= 2, "default_curve_grid: too few points");
    const double core = 4.0 * m.background_std();
    const double x_max = curve_extent(m);
    std::vector<double> xs;
    for (int i = 0; i < n_core; ++i) xs.push_back(-core + 2.0 * core * i / (n_core - 1));
    const double lo = std::log(m.rho / 10.0);
    const double hi = std::log(x_max);
    for (int i = 0; i < n_log; ++i) {
        const double v = std::exp(lo + (hi - lo) * i / (n_log - 1));
        xs.push_back(v);
        xs.push_back(-v);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
}

double bin_average(const AnalyticModel& m, double a, double b) {
    require(b > a, "bin_average: empty bin");
    // Split at ±rho where the rare part switches on, so each piece is smooth.
    std::vector<double> cuts{a};
    for (double c : {-m.rho, m.rho})
        if (c > a && c < b) cuts.push_back(c);
    cuts.push_back(b);
    quad::Settings s{1e-5, 0.0, m.quad.max_evals};
    double mass = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        mass += quad::integrate([&](double x) { return total_pdf(x, m); }, cuts[i], cuts[i + 1], s).value;
    return mass / (b - a);
}

}  // namespace mathieu::analytic
