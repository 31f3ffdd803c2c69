#include "mathieu/montecarlo.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "mathieu/gp.hpp"
#include "mathieu/rng.hpp"

namespace mathieu::sde {

void parallel_for(std::int64_t n, unsigned threads, const std::function<void(std::int64_t)>& body) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::int64_t>(threads, std::max<std::int64_t>(n, 1)));
    if (threads <= 1) {
        for (std::int64_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> workers;
    for (unsigned w = 0; w < threads; ++w) {
        workers.emplace_back([&] {
            for (std::int64_t i = next++; i < n; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    next = n;
                }
            }
        });
    }
    workers.clear();
    if (failure) std::rethrow_exception(failure);
}

namespace {

struct PairResult {
    std::optional<stats::LogTailHistogram> histogram;
    stats::Moments moments;
    std::optional<ProcessRealization> first_path;
};

void accumulate(const Eigen::VectorXd& values, Eigen::Index first, PairResult& out) {
    for (Eigen::Index i = first; i < values.size(); ++i) {
        out.histogram->add(values(i));
        out.moments.add(values(i));
    }
}

}  // namespace

BatchResult run_batch(const SystemParams& params, const SimConfig& cfg, const BatchOptions& options) {
    params.validate(true);
    cfg.validate();
    options.binning.validate();
    require(!(options.system == System::Full && options.observable == Observable::Slow),
            "run_batch: the full system has no slow variables");

    const Eigen::Index n = cfg.n_points();
    const auto first_kept = static_cast<Eigen::Index>(std::ceil(cfg.burn_in / cfg.dt - 1e-9));
    const gp::CirculantSampler sampler(params.acf, n, cfg.dt);
    const std::int64_t pairs = (cfg.n_realizations + 1) / 2;

    std::vector<PairResult> results(static_cast<std::size_t>(pairs));
    parallel_for(pairs, options.threads, [&](std::int64_t j) {
        PairResult& out = results[static_cast<std::size_t>(j)];
        out.histogram.emplace(options.binning);
        Engine excitation = make_engine(cfg.master_seed, static_cast<std::uint64_t>(j), Stream::Excitation);
        auto [first, second] = sampler.draw_pair(excitation);
        for (int c = 0; c < 2; ++c) {
            const std::int64_t r = 2 * j + c;
            if (r >= cfg.n_realizations) break;
            ProcessRealization alpha(0.0, cfg.dt);
            alpha.add_channel("alpha", c == 0 ? std::move(first) : std::move(second));
            const std::uint64_t noise_seed = derive_seed(cfg.master_seed, static_cast<std::uint64_t>(r), Stream::Noise1);
            try {
                if (options.system == System::Full) {
                    ProcessRealization path = simulate_full(params, cfg, alpha, noise_seed);
                    accumulate(path.channel("x"), first_kept, out);
                    if (r == 0 && options.keep_first_path) out.first_path = std::move(path);
                } else {
                    ProcessRealization slow = simulate_averaged(params, cfg, alpha, noise_seed);
                    if (options.observable == Observable::Slow) {
                        accumulate(slow.channel("chi1"), first_kept, out);
                        accumulate(slow.channel("chi2"), first_kept, out);
                    } else {
                        ProcessRealization fast = reconstruct_fast(slow, params.omega0);
                        accumulate(fast.channel("x"), first_kept, out);
                    }
                    if (r == 0 && options.keep_first_path) {
                        ProcessRealization fast = reconstruct_fast(slow, params.omega0);
                        ProcessRealization path(0.0, cfg.dt);
                        path.add_channel("chi1", slow.channel("chi1"));
                        path.add_channel("chi2", slow.channel("chi2"));
                        path.add_channel("x", fast.channel("x"));
                        path.add_channel("alpha", alpha.channel("alpha"));
                        out.first_path = std::move(path);
                    }
                }
            } catch (const Overflow& e) {
                throw Overflow("realization " + std::to_string(r) + ": " + e.what());
            }
        }
    });

    BatchResult batch{stats::LogTailHistogram(options.binning), {}, cfg.n_realizations, std::nullopt};
    for (auto& r : results) {
        batch.histogram.merge(*r.histogram);
        batch.moments.merge(r.moments);
        if (r.first_path) batch.first_path = std::move(r.first_path);
    }
    return batch;
}

}  // namespace mathieu::sde
