#include "mathieu/sde.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "mathieu/rng.hpp"

namespace mathieu::sde {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

void check_alpha_grid(const SimConfig& cfg, const ProcessRealization& alpha_path) {
    require(alpha_path.has("alpha"), "simulate: alpha_path needs an 'alpha' channel");
    require(std::abs(alpha_path.dt() - cfg.dt) <= 1e-12 * cfg.dt, "simulate: alpha_path dt differs from cfg.dt");
    require(alpha_path.size() >= cfg.n_points(), "simulate: alpha_path shorter than the simulation horizon");
}

[[noreturn]] void overflow(const char* what, double value, double t) {
    std::ostringstream msg;
    msg << what << ": |state| = " << std::abs(value) << " exceeded the blow-up guard at t = " << t;
    throw Overflow(msg.str());
}

}  // namespace

void SystemParams::validate(bool allow_zero_forcing) const {
    require(omega0 > 0.0 && std::isfinite(omega0), "SystemParams: omega0 must be > 0");
    require(zeta > 0.0 && std::isfinite(zeta), "SystemParams: zeta must be > 0");
    acf.validate();
    const double s2 = sigma_f2();
    require(std::isfinite(s2) && s2 >= 0.0, "SystemParams: forcing intensity must be >= 0");
    require(allow_zero_forcing || s2 > 0.0, "SystemParams: sigma_F must be > 0");
}

double SystemParams::sigma_f2() const {
    return std::visit(overloaded{
                          [&](const WhiteNoise& w) { return w.nu * w.nu / (2.0 * omega0 * omega0); },
                          [&](const Broadband& b) {
                              return std::numbers::pi * b.spectrum_level / (omega0 * omega0);
                          },
                      },
                      forcing);
}

double SystemParams::sigma_f() const { return std::sqrt(sigma_f2()); }

double SystemParams::diffusion_k() const { return sigma_f2() / (2.0 * std::numbers::pi); }

double SystemParams::white_noise_intensity() const {
    return std::visit(overloaded{
                          [](const WhiteNoise& w) { return w.nu; },
                          [](const Broadband& b) { return std::sqrt(2.0 * std::numbers::pi * b.spectrum_level); },
                      },
                      forcing);
}

void SimConfig::validate() const {
    require(dt > 0.0 && std::isfinite(dt), "SimConfig: dt must be > 0");
    require(t_end > 0.0 && std::isfinite(t_end), "SimConfig: t_end must be > 0");
    require(burn_in >= 0.0 && burn_in < t_end, "SimConfig: need 0 <= burn_in < t_end");
    require(n_realizations >= 1, "SimConfig: n_realizations must be >= 1");
}

Eigen::Index SimConfig::n_points() const {
    return static_cast<Eigen::Index>(std::llround(t_end / dt)) + 1;
}

ProcessRealization simulate_full(const SystemParams& params, const SimConfig& cfg,
                                 const ProcessRealization& alpha_path, std::uint64_t noise_seed,
                                 InitialState init, double blow_up) {
    params.validate(true);
    cfg.validate();
    check_alpha_grid(cfg, alpha_path);

    const Eigen::Index n = cfg.n_points();
    const Eigen::VectorXd& alpha = alpha_path.channel("alpha");
    const double w0 = params.omega0;
    const double w0sq = w0 * w0;
    const double damping = 2.0 * params.zeta * w0;
    const double dt = cfg.dt;
    const double kick = params.white_noise_intensity() * std::sqrt(dt);

    Engine engine(noise_seed);
    std::normal_distribution<double> normal;

    Eigen::VectorXd x(n), v(n);
    x(0) = init.first;
    v(0) = init.second;
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        const double t = static_cast<double>(i) * dt;
        const double stiffness = w0sq * (1.0 + alpha(i) * std::sin(2.0 * w0 * t));
        const double noise = kick == 0.0 ? 0.0 : kick * normal(engine);
        v(i + 1) = v(i) - (damping * v(i) + stiffness * x(i)) * dt + noise;
        x(i + 1) = x(i) + v(i + 1) * dt;
        if (!(std::abs(x(i + 1)) <= blow_up)) overflow("simulate_full", x(i + 1), t + dt);
    }

    ProcessRealization out(0.0, dt);
    out.add_channel("x", std::move(x));
    out.add_channel("xdot", std::move(v));
    out.add_channel("alpha", alpha.head(n));
    return out;
}

ProcessRealization simulate_averaged(const SystemParams& params, const SimConfig& cfg,
                                     const ProcessRealization& alpha_path, std::uint64_t noise_seed,
                                     InitialState init, double blow_up) {
    params.validate(true);
    cfg.validate();
    check_alpha_grid(cfg, alpha_path);

    const Eigen::Index n = cfg.n_points();
    const Eigen::VectorXd& alpha = alpha_path.channel("alpha");
    const double w0 = params.omega0;
    const double zeta = params.zeta;
    const double dt = cfg.dt;
    const double kick = params.sigma_f() * std::sqrt(dt);

    Engine engine1(derive_seed(noise_seed, 0, Stream::Noise1));
    Engine engine2(derive_seed(noise_seed, 0, Stream::Noise2));
    std::normal_distribution<double> normal1, normal2;

    Eigen::VectorXd chi1(n), chi2(n);
    chi1(0) = init.first;
    chi2(0) = init.second;
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        const double quarter = 0.25 * alpha(i);
        const double n1 = kick == 0.0 ? 0.0 : kick * normal1(engine1);
        const double n2 = kick == 0.0 ? 0.0 : kick * normal2(engine2);
        chi1(i + 1) = chi1(i) - (zeta - quarter) * w0 * chi1(i) * dt + n1;
        chi2(i + 1) = chi2(i) - (zeta + quarter) * w0 * chi2(i) * dt + n2;
        if (!(std::abs(chi1(i + 1)) <= blow_up)) overflow("simulate_averaged", chi1(i + 1), (i + 1) * dt);
        if (!(std::abs(chi2(i + 1)) <= blow_up)) overflow("simulate_averaged", chi2(i + 1), (i + 1) * dt);
    }

    ProcessRealization out(0.0, dt);
    out.add_channel("chi1", std::move(chi1));
    out.add_channel("chi2", std::move(chi2));
    return out;
}

ProcessRealization reconstruct_fast(const ProcessRealization& chi_path, double omega0) {
    require(omega0 > 0.0, "reconstruct_fast: omega0 must be > 0");
    const Eigen::VectorXd& chi1 = chi_path.channel("chi1");
    const Eigen::VectorXd& chi2 = chi_path.channel("chi2");
    const Eigen::Index n = chi_path.size();
    Eigen::VectorXd x(n), v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double phase = omega0 * chi_path.time(i);
        const double c = std::cos(phase);
        const double s = std::sin(phase);
        x(i) = chi1(i) * c + chi2(i) * s;
        v(i) = omega0 * (-chi1(i) * s + chi2(i) * c);
    }
    ProcessRealization out(chi_path.t0(), chi_path.dt());
    out.add_channel("x", std::move(x));
    out.add_channel("xdot", std::move(v));
    return out;
}

}  // namespace mathieu::sde
