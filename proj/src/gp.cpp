#include "mathieu/gp.hpp"

#include <unsupported/Eigen/FFT>

#include <complex>
#include <random>
#include <sstream>
#include <vector>

namespace mathieu::gp {

namespace {

Eigen::Index next_power_of_two(Eigen::Index v) {
    Eigen::Index p = 1;
    while (p < v) p <<= 1;
    return p;
}

}  // namespace

CirculantSampler::CirculantSampler(const AcfSpec& spec, Eigen::Index n, double dt, double eig_tolerance)
    : n_(n), dt_(dt) {
    spec.validate();
    require(n >= 2, "sample_gp: n must be >= 2");
    require(dt > 0.0, "sample_gp: dt must be > 0");

    m_ = next_power_of_two(std::max<Eigen::Index>(2 * (n - 1), 2));
    eigenvalues_ = Eigen::VectorXd::Zero(m_);
    amplitude_ = Eigen::VectorXd::Zero(m_);
    if (spec.sigma_alpha == 0.0) {
        degenerate_ = true;
        return;
    }

    std::vector<std::complex<double>> row(static_cast<std::size_t>(m_));
    for (Eigen::Index k = 0; k < m_; ++k) {
        const Eigen::Index lag = std::min(k, m_ - k);
        row[static_cast<std::size_t>(k)] = acf(static_cast<double>(lag) * dt, spec);
    }
    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> spectrum;
    fft.fwd(spectrum, row);

    double max_eig = 0.0;
    for (const auto& c : spectrum) max_eig = std::max(max_eig, c.real());
    const double floor = -eig_tolerance * max_eig;
    for (Eigen::Index k = 0; k < m_; ++k) {
        double lambda = spectrum[static_cast<std::size_t>(k)].real();
        if (lambda < 0.0) {
            if (lambda < floor) {
                std::ostringstream msg;
                msg << "circulant eigenvalue " << lambda << " below tolerance " << floor
                    << " (M=" << m_ << ", dt=" << dt << ")";
                throw EmbeddingNotPSD(msg.str());
            }
            clamped_ = true;
            lambda = 0.0;
        }
        eigenvalues_(k) = lambda;
        amplitude_(k) = std::sqrt(lambda / static_cast<double>(m_));
    }
}

Eigen::VectorXd CirculantSampler::embedded_covariance() const {
    if (degenerate_) return Eigen::VectorXd::Zero(n_);
    std::vector<std::complex<double>> spectrum(eigenvalues_.data(), eigenvalues_.data() + m_);
    std::vector<std::complex<double>> row;
    Eigen::FFT<double> fft;
    fft.inv(row, spectrum);
    Eigen::VectorXd cov(n_);
    for (Eigen::Index k = 0; k < n_; ++k) cov(k) = row[static_cast<std::size_t>(k)].real();
    return cov;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> CirculantSampler::draw_pair(Engine& engine) const {
    if (degenerate_) return {Eigen::VectorXd::Zero(n_), Eigen::VectorXd::Zero(n_)};

    std::normal_distribution<double> normal;
    std::vector<std::complex<double>> weighted(static_cast<std::size_t>(m_));
    for (Eigen::Index k = 0; k < m_; ++k) {
        const double re = normal(engine);
        const double im = normal(engine);
        weighted[static_cast<std::size_t>(k)] = amplitude_(k) * std::complex<double>(re, im);
    }
    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> paths;
    fft.fwd(paths, weighted);

    Eigen::VectorXd first(n_), second(n_);
    for (Eigen::Index i = 0; i < n_; ++i) {
        first(i) = paths[static_cast<std::size_t>(i)].real();
        second(i) = paths[static_cast<std::size_t>(i)].imag();
    }
    return {std::move(first), std::move(second)};
}

ProcessRealization sample_gp(const AcfSpec& spec, Eigen::Index n, double dt, std::uint64_t seed) {
    CirculantSampler sampler(spec, n, dt);
    Engine engine(seed);
    ProcessRealization out(0.0, dt);
    out.add_channel("alpha", sampler.draw_pair(engine).first);
    return out;
}

}  // namespace mathieu::gp
