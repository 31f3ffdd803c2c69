#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mathieu/realization.hpp"

namespace mathieu::stats {

enum class BinScheme { Linear, LogTail };

/// Normalized histogram. density(i) covers [edges(i), edges(i+1)).
struct EmpiricalDensity {
    Eigen::VectorXd edges;
    Eigen::VectorXd density;
    std::vector<std::uint64_t> count;
    std::uint64_t total_samples = 0;
    /// Half-width of the linearly binned core (whole range for Linear).
    double core_halfwidth = 0.0;

    Eigen::Index n_bins() const { return density.size(); }
    double width(Eigen::Index i) const { return edges(i + 1) - edges(i); }
    double center(Eigen::Index i) const { return 0.5 * (edges(i) + edges(i + 1)); }
};

/// Symmetric binning: `core_bins` equal bins on each side of zero out to
/// core_halfwidth, then geometric bins with ratio `ratio`, unbounded. Values
/// are binned by magnitude and mirrored, so ±v always land in mirror bins.
struct LogTailBinning {
    double core_halfwidth = 1.0;
    int core_bins = 32;
    double ratio = 1.15;

    void validate() const;
    /// Bin index of |v| on the positive half-axis.
    std::int64_t index(double magnitude) const;
    /// Left edge of positive-side bin k (k = 0 is the bin touching zero).
    double edge(std::int64_t k) const;
};

/// Streaming, mergeable histogram over a LogTailBinning.
class LogTailHistogram {
public:
    explicit LogTailHistogram(LogTailBinning binning);

    void add(double v);
    template <typename Range>
    void add_all(const Range& values) {
        for (auto v : values) add(static_cast<double>(v));
    }
    void merge(const LogTailHistogram& other);

    std::uint64_t total() const { return total_; }
    const LogTailBinning& binning() const { return binning_; }
    EmpiricalDensity to_density() const;

private:
    LogTailBinning binning_;
    std::vector<std::uint64_t> positive_;
    std::vector<std::uint64_t> negative_;
    std::uint64_t total_ = 0;
};

/// Requires at least 1000 samples. Linear: n_bins equal bins over
/// [min, max]. LogTail: linear core over |x| <= 4 sample std with n_bins/4
/// bins per side, then n_bins/4 geometric bins per side out to max |x|.
template <typename Scalar>
EmpiricalDensity estimate_density(std::span<const Scalar> samples, BinScheme scheme, int n_bins);

/// Running mean/variance with an order-dependent but deterministic merge.
struct Moments {
    std::uint64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double v);
    void merge(const Moments& other);
    double variance() const { return n > 1 ? m2 / static_cast<double>(n) : 0.0; }
};

struct CrossingStats {
    double level = 0.0;
    std::uint64_t downcrossings = 0;
    double total_time = 0.0;
    double down_rate = 0.0;
    double mean_excursion = 0.0;
    std::vector<double> excursion_durations;

    void merge(const CrossingStats& other);
};

/// Downcrossings of `level` and the durations of complete excursions below
/// it. Crossing instants are linearly interpolated between samples; the
/// clipped first and last excursions are dropped.
CrossingStats crossing_stats(std::span<const double> values, double dt, double level);
CrossingStats crossing_stats(const ProcessRealization& path, const std::string& channel, double level);

struct DensityComparison {
    double l1_core = 0.0;
    /// Mean over both sides of log10(analytic / empirical) at the outermost
    /// valid bin.
    double log_ratio_tail = 0.0;
    double max_abs_log10_ratio = 0.0;
    /// Same, restricted to valid bins within `top_decades` of the peak.
    double max_abs_log10_ratio_top = 0.0;
    /// log10(max / min) empirical density over valid bins.
    double decades = 0.0;
    Eigen::Index valid_bins = 0;
    Eigen::Index outer_left = -1;
    Eigen::Index outer_right = -1;
};

/// Compares an empirical density with a reference sampled as per-bin
/// densities on the same bins. Bins with fewer than `min_count` samples are
/// excluded from ratio metrics; the L1 distance covers bins inside
/// |x| <= core_halfwidth (a.core_halfwidth when not positive).
DensityComparison compare_densities(const EmpiricalDensity& a, const Eigen::VectorXd& reference,
                                    double min_count = 10.0, double core_halfwidth = 0.0, double top_decades = 4.0);

/// Per-bin density of N(mean, std²).
Eigen::VectorXd gaussian_bin_density(const Eigen::VectorXd& edges, double mean, double std_dev);

struct KsResult {
    double statistic = 0.0;
    double p_value = 0.0;
};

/// One-sample Kolmogorov–Smirnov test with the asymptotic p-value.
KsResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf);

}  // namespace mathieu::stats
