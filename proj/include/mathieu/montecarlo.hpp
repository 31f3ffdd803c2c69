#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "mathieu/sde.hpp"
#include "mathieu/stats.hpp"

namespace mathieu::sde {

enum class System { Averaged, Full };

/// What gets histogrammed after burn-in.
enum class Observable {
    Response,  // x (reconstructed from χ₁, χ₂ for the averaged system)
    Slow,      // χ₁ and χ₂ pooled (averaged system only)
};

struct BatchOptions {
    System system = System::Averaged;
    Observable observable = Observable::Response;
    stats::LogTailBinning binning;
    /// Keep the full path of realization 0 for export.
    bool keep_first_path = false;
    /// 0 = hardware concurrency.
    unsigned threads = 0;
};

struct BatchResult {
    stats::LogTailHistogram histogram;
    stats::Moments moments;
    std::int64_t realizations = 0;
    std::optional<ProcessRealization> first_path;
};

/// Runs cfg.n_realizations independent realizations. Realizations 2j and
/// 2j+1 share one circulant draw (its real and imaginary parts); noise seeds
/// derive from (master_seed, realization index). Per-pair results are merged
/// in index order, so the output does not depend on the thread count.
BatchResult run_batch(const SystemParams& params, const SimConfig& cfg, const BatchOptions& options);

/// Calls body(i) for i in [0, n) on up to `threads` workers.
void parallel_for(std::int64_t n, unsigned threads, const std::function<void(std::int64_t)>& body);

}  // namespace mathieu::sde
