#include "mathieu/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace mathieu::stats {

void LogTailBinning::validate() const {
    require(core_halfwidth > 0.0 && std::isfinite(core_halfwidth), "LogTailBinning: core_halfwidth must be > 0");
    require(core_bins >= 1, "LogTailBinning: core_bins must be >= 1");
    require(ratio > 1.0 && std::isfinite(ratio), "LogTailBinning: ratio must be > 1");
}

double LogTailBinning::edge(std::int64_t k) const {
    if (k <= core_bins) return core_halfwidth * static_cast<double>(k) / core_bins;
    return core_halfwidth * std::pow(ratio, static_cast<double>(k - core_bins));
}

std::int64_t LogTailBinning::index(double magnitude) const {
    std::int64_t k;
    if (magnitude < core_halfwidth) {
        k = static_cast<std::int64_t>(magnitude / core_halfwidth * core_bins);
        k = std::min<std::int64_t>(k, core_bins - 1);
    } else {
        k = core_bins + static_cast<std::int64_t>(std::log(magnitude / core_halfwidth) / std::log(ratio));
    }
    // The closed forms can be off by one at bin edges; settle against edge().
    while (k > 0 && magnitude < edge(k)) --k;
    while (magnitude >= edge(k + 1)) ++k;
    return k;
}

LogTailHistogram::LogTailHistogram(LogTailBinning binning) : binning_(binning) {
    binning_.validate();
    positive_.assign(static_cast<std::size_t>(binning_.core_bins), 0);
    negative_.assign(static_cast<std::size_t>(binning_.core_bins), 0);
}

void LogTailHistogram::add(double v) {
    require(std::isfinite(v), "LogTailHistogram: non-finite sample");
    auto& side = std::signbit(v) ? negative_ : positive_;
    const auto k = static_cast<std::size_t>(binning_.index(std::abs(v)));
    if (k >= side.size()) side.resize(k + 1, 0);
    ++side[k];
    ++total_;
}

void LogTailHistogram::merge(const LogTailHistogram& other) {
    require(other.binning_.core_halfwidth == binning_.core_halfwidth && other.binning_.ratio == binning_.ratio &&
                other.binning_.core_bins == binning_.core_bins,
            "LogTailHistogram::merge: incompatible binning");
    auto merge_side = [](std::vector<std::uint64_t>& into, const std::vector<std::uint64_t>& from) {
        if (from.size() > into.size()) into.resize(from.size(), 0);
        for (std::size_t k = 0; k < from.size(); ++k) into[k] += from[k];
    };
    merge_side(positive_, other.positive_);
    merge_side(negative_, other.negative_);
    total_ += other.total_;
}

EmpiricalDensity LogTailHistogram::to_density() const {
    if (total_ == 0) throw EmptyInput("LogTailHistogram: no samples");
    auto occupied = [](const std::vector<std::uint64_t>& side) {
        std::size_t n = side.size();
        while (n > 0 && side[n - 1] == 0) --n;
        return n;
    };
    // Keep at least the core, and make both sides equally long so the edges
    // are exact mirror images.
    const std::size_t per_side = std::max({occupied(positive_), occupied(negative_),
                                           static_cast<std::size_t>(binning_.core_bins)});
    const auto n_bins = static_cast<Eigen::Index>(2 * per_side);

    EmpiricalDensity d;
    d.total_samples = total_;
    d.core_halfwidth = binning_.core_halfwidth;
    d.edges.resize(n_bins + 1);
    d.density.resize(n_bins);
    d.count.assign(static_cast<std::size_t>(n_bins), 0);
    const auto half = static_cast<Eigen::Index>(per_side);
    for (Eigen::Index k = 0; k <= half; ++k) {
        const double e = binning_.edge(k);
        d.edges(half + k) = e;
        d.edges(half - k) = -e;
    }
    for (std::size_t k = 0; k < per_side; ++k) {
        const auto right = static_cast<std::size_t>(half) + k;
        const auto left = static_cast<std::size_t>(half) - 1 - k;
        d.count[right] = k < positive_.size() ? positive_[k] : 0;
        d.count[left] = k < negative_.size() ? negative_[k] : 0;
    }
    const double total = static_cast<double>(total_);
    for (Eigen::Index i = 0; i < n_bins; ++i)
        d.density(i) = static_cast<double>(d.count[static_cast<std::size_t>(i)]) / (total * d.width(i));
    return d;
}

namespace {

template <typename Scalar>
EmpiricalDensity linear_density(std::span<const Scalar> samples, int n_bins) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (auto v : samples) {
        lo = std::min(lo, static_cast<double>(v));
        hi = std::max(hi, static_cast<double>(v));
    }
    if (lo == hi) {
        lo -= 0.5;
        hi += 0.5;
    }
    EmpiricalDensity d;
    d.total_samples = samples.size();
    d.edges = Eigen::VectorXd::LinSpaced(n_bins + 1, lo, hi);
    d.count.assign(static_cast<std::size_t>(n_bins), 0);
    d.core_halfwidth = std::max(std::abs(lo), std::abs(hi));
    const double width = (hi - lo) / n_bins;
    for (auto sv : samples) {
        const double v = static_cast<double>(sv);
        auto k = static_cast<Eigen::Index>((v - lo) / width);
        k = std::clamp<Eigen::Index>(k, 0, n_bins - 1);
        while (k > 0 && v < d.edges(k)) --k;
        while (k < n_bins - 1 && v >= d.edges(k + 1)) ++k;
        ++d.count[static_cast<std::size_t>(k)];
    }
    d.density.resize(n_bins);
    const double total = static_cast<double>(d.total_samples);
    for (Eigen::Index i = 0; i < n_bins; ++i)
        d.density(i) = static_cast<double>(d.count[static_cast<std::size_t>(i)]) / (total * d.width(i));
    return d;
}

}  // namespace

template <typename Scalar>
EmpiricalDensity estimate_density(std::span<const Scalar> samples, BinScheme scheme, int n_bins) {
    if (samples.empty()) throw EmptyInput("estimate_density: no samples");
    require(samples.size() >= 1000, "estimate_density: need at least 1000 samples");
    require(n_bins >= 4, "estimate_density: n_bins must be >= 4");
    for (auto v : samples) require(std::isfinite(static_cast<double>(v)), "estimate_density: non-finite sample");

    if (scheme == BinScheme::Linear) return linear_density(samples, n_bins);

    Moments moments;
    double max_abs = 0.0;
    for (auto v : samples) {
        moments.add(static_cast<double>(v));
        max_abs = std::max(max_abs, std::abs(static_cast<double>(v)));
    }
    const double core = 4.0 * std::sqrt(moments.variance());
    if (!(core > 0.0)) return linear_density(samples, n_bins);

    LogTailBinning binning;
    binning.core_halfwidth = core;
    binning.core_bins = std::max(1, n_bins / 4);
    const int tail_bins = std::max(1, n_bins / 4);
    binning.ratio = max_abs > core ? std::pow(max_abs / core, 1.0 / tail_bins) * (1.0 + 1e-12) : 2.0;

    LogTailHistogram histogram(binning);
    histogram.add_all(samples);
    return histogram.to_density();
}

template EmpiricalDensity estimate_density<double>(std::span<const double>, BinScheme, int);
template EmpiricalDensity estimate_density<float>(std::span<const float>, BinScheme, int);

void Moments::add(double v) {
    ++n;
    const double delta = v - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (v - mean);
}

void Moments::merge(const Moments& other) {
    if (other.n == 0) return;
    if (n == 0) {
        *this = other;
        return;
    }
    const double na = static_cast<double>(n);
    const double nb = static_cast<double>(other.n);
    const double delta = other.mean - mean;
    const double total = na + nb;
    mean += delta * nb / total;
    m2 += other.m2 + delta * delta * na * nb / total;
    n += other.n;
}

void CrossingStats::merge(const CrossingStats& other) {
    downcrossings += other.downcrossings;
    total_time += other.total_time;
    excursion_durations.insert(excursion_durations.end(), other.excursion_durations.begin(),
                               other.excursion_durations.end());
    down_rate = total_time > 0.0 ? static_cast<double>(downcrossings) / total_time : 0.0;
    mean_excursion = excursion_durations.empty()
                         ? 0.0
                         : std::accumulate(excursion_durations.begin(), excursion_durations.end(), 0.0) /
                               static_cast<double>(excursion_durations.size());
}

CrossingStats crossing_stats(std::span<const double> values, double dt, double level) {
    if (values.size() < 2) throw EmptyInput("crossing_stats: need at least two samples");
    require(dt > 0.0, "crossing_stats: dt must be > 0");

    CrossingStats s;
    s.level = level;
    s.total_time = dt * static_cast<double>(values.size() - 1);

    bool inside = false;  // currently in a complete (not clipped) excursion
    double start = 0.0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        const bool was_below = values[i - 1] < level;
        const bool is_below = values[i] < level;
        if (was_below == is_below) continue;
        const double frac = (values[i - 1] - level) / (values[i - 1] - values[i]);
        const double t = (static_cast<double>(i - 1) + frac) * dt;
        if (is_below) {
            ++s.downcrossings;
            inside = true;
            start = t;
        } else if (inside) {
            s.excursion_durations.push_back(t - start);
            inside = false;
        }
    }
    s.down_rate = static_cast<double>(s.downcrossings) / s.total_time;
    if (!s.excursion_durations.empty())
        s.mean_excursion = std::accumulate(s.excursion_durations.begin(), s.excursion_durations.end(), 0.0) /
                           static_cast<double>(s.excursion_durations.size());
    return s;
}

CrossingStats crossing_stats(const ProcessRealization& path, const std::string& channel, double level) {
    const Eigen::VectorXd& v = path.channel(channel);
    return crossing_stats(std::span<const double>(v.data(), static_cast<std::size_t>(v.size())), path.dt(), level);
}

DensityComparison compare_densities(const EmpiricalDensity& a, const Eigen::VectorXd& reference, double min_count,
                                    double core_halfwidth, double top_decades) {
    require(reference.size() == a.n_bins(), "compare_densities: reference must have one value per bin");
    const double core = core_halfwidth > 0.0 ? core_halfwidth : a.core_halfwidth;

    DensityComparison r;
    double max_density = 0.0;
    double min_density = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < a.n_bins(); ++i) {
        if (std::abs(a.edges(i)) <= core * (1.0 + 1e-12) && std::abs(a.edges(i + 1)) <= core * (1.0 + 1e-12))
            r.l1_core += std::abs(a.density(i) - reference(i)) * a.width(i);

        if (static_cast<double>(a.count[static_cast<std::size_t>(i)]) < min_count) continue;
        ++r.valid_bins;
        const double ratio = std::abs(std::log10(reference(i) / a.density(i)));
        r.max_abs_log10_ratio = std::max(r.max_abs_log10_ratio, std::isnan(ratio) ? INFINITY : ratio);
        max_density = std::max(max_density, a.density(i));
        min_density = std::min(min_density, a.density(i));
        if (r.outer_left < 0) r.outer_left = i;
        r.outer_right = i;
    }
    if (r.valid_bins > 0) {
        r.decades = std::log10(max_density / min_density);
        const double left = std::log10(reference(r.outer_left) / a.density(r.outer_left));
        const double right = std::log10(reference(r.outer_right) / a.density(r.outer_right));
        r.log_ratio_tail = 0.5 * (left + right);
        const double floor = max_density * std::pow(10.0, -top_decades);
        for (Eigen::Index i = r.outer_left; i <= r.outer_right; ++i) {
            if (static_cast<double>(a.count[static_cast<std::size_t>(i)]) < min_count || a.density(i) < floor) continue;
            const double ratio = std::abs(std::log10(reference(i) / a.density(i)));
            r.max_abs_log10_ratio_top = std::max(r.max_abs_log10_ratio_top, std::isnan(ratio) ? INFINITY : ratio);
        }
    }
    return r;
}

Eigen::VectorXd gaussian_bin_density(const Eigen::VectorXd& edges, double mean, double std_dev) {
    require(std_dev > 0.0, "gaussian_bin_density: std must be > 0");
    Eigen::VectorXd d(edges.size() - 1);
    auto cdf = [&](double x) { return 0.5 * std::erfc(-(x - mean) / (std_dev * std::sqrt(2.0))); };
    auto sf = [&](double x) { return 0.5 * std::erfc((x - mean) / (std_dev * std::sqrt(2.0))); };
    for (Eigen::Index i = 0; i + 1 < edges.size(); ++i) {
        const double a = edges(i), b = edges(i + 1);
        // Use the tail on the far side of the mean to keep precision.
        const double mass = a >= mean ? sf(a) - sf(b) : cdf(b) - cdf(a);
        d(i) = mass / (b - a);
    }
    return d;
}

KsResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf) {
    if (samples.empty()) throw EmptyInput("ks_test: no samples");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    const double sqrt_n = std::sqrt(n);
    const double lambda = (sqrt_n + 0.12 + 0.11 / sqrt_n) * d;
    if (lambda < 0.2) return {d, 1.0};
    double p = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        p += (k % 2 == 1 ? 2.0 : -2.0) * term;
        if (term < 1e-12) break;
    }
    return {d, std::clamp(p, 0.0, 1.0)};
}

}  // namespace mathieu::stats
