#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <variant>

#include "mathieu/gp.hpp"
#include "mathieu/realization.hpp"

namespace mathieu::sde {

/// F(t) = nu * dW/dt.
struct WhiteNoise {
    double nu = 0.0;
};

/// Broadband forcing characterized by its spectral level S_F at omega0.
struct Broadband {
    double spectrum_level = 0.0;
};

using Forcing = std::variant<WhiteNoise, Broadband>;

struct SystemParams {
    double omega0 = 1.0;
    double zeta = 0.1;
    gp::AcfSpec acf{0.178, 10.0};
    Forcing forcing = WhiteNoise{0.002};

    /// Raises InvalidArgument on violated invariants. `allow_zero_forcing`
    /// admits the deterministic sub-problem used in integrator tests.
    void validate(bool allow_zero_forcing = false) const;

    /// Noise intensity of the slow variables: nu^2/(2 omega0^2) for white
    /// noise, pi S_F(omega0)/omega0^2 for broadband forcing.
    double sigma_f2() const;
    double sigma_f() const;

    /// Diffusion-approximation constant K = S_F(omega0) / (2 omega0^2).
    double diffusion_k() const;

    /// Equivalent white-noise intensity acting on the full oscillator.
    double white_noise_intensity() const;
};

struct SimConfig {
    double dt = 5e-3;
    double t_end = 5500.0;
    double burn_in = 500.0;
    std::int64_t n_realizations = 3000;
    std::uint64_t master_seed = 0;

    void validate() const;
    /// Number of grid points on [0, t_end].
    Eigen::Index n_points() const;
};

struct InitialState {
    double first = 0.0;   // x or chi1
    double second = 0.0;  // xdot or chi2
};

inline constexpr double kDefaultBlowUp = 1e6;

/// ẍ + 2ζω₀ẋ + ω₀²(1 + α(t) sin 2ω₀t) x = ν Ẇ, stepped with semi-implicit
/// Euler–Maruyama (velocity first). Channels: x, xdot, alpha.
ProcessRealization simulate_full(const SystemParams& params, const SimConfig& cfg,
                                 const ProcessRealization& alpha_path, std::uint64_t noise_seed,
                                 InitialState init = {}, double blow_up = kDefaultBlowUp);

/// dχ₁ = -(ζ - α/4) ω₀ χ₁ dt + σ_F dW₁, dχ₂ = -(ζ + α/4) ω₀ χ₂ dt + σ_F dW₂,
/// Euler–Maruyama with independent noise channels. Channels: chi1, chi2.
ProcessRealization simulate_averaged(const SystemParams& params, const SimConfig& cfg,
                                     const ProcessRealization& alpha_path, std::uint64_t noise_seed,
                                     InitialState init = {}, double blow_up = kDefaultBlowUp);

/// x = χ₁ cos ω₀t + χ₂ sin ω₀t and ẋ = -ω₀χ₁ sin ω₀t + ω₀χ₂ cos ω₀t.
ProcessRealization reconstruct_fast(const ProcessRealization& chi_path, double omega0);

}  // namespace mathieu::sde
