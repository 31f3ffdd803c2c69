#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "mathieu/errors.hpp"

namespace mathieu {

/// Uniformly sampled multi-channel path: t_i = t0 + i*dt.
class ProcessRealization {
public:
    ProcessRealization(double t0, double dt) : t0_(t0), dt_(dt) {
        require(dt > 0.0 && std::isfinite(dt), "ProcessRealization: dt must be positive");
    }

    void add_channel(std::string name, Eigen::VectorXd values) {
        if (!channels_.empty() && values.size() != size())
            throw InvalidArgument("ProcessRealization: channel '" + name + "' has mismatched length");
        if (!values.allFinite())
            throw InvalidArgument("ProcessRealization: channel '" + name + "' contains non-finite values");
        for (const auto& [existing, _] : channels_)
            if (existing == name) throw InvalidArgument("ProcessRealization: duplicate channel " + name);
        channels_.emplace_back(std::move(name), std::move(values));
    }

    double t0() const { return t0_; }
    double dt() const { return dt_; }
    Eigen::Index size() const { return channels_.empty() ? 0 : channels_.front().second.size(); }
    double time(Eigen::Index i) const { return t0_ + static_cast<double>(i) * dt_; }

    bool has(const std::string& name) const {
        for (const auto& [n, _] : channels_)
            if (n == name) return true;
        return false;
    }

    const Eigen::VectorXd& channel(const std::string& name) const {
        for (const auto& [n, v] : channels_)
            if (n == name) return v;
        throw InvalidArgument("ProcessRealization: no channel named '" + name + "'");
    }

    std::vector<std::string> channel_names() const {
        std::vector<std::string> names;
        for (const auto& [n, _] : channels_) names.push_back(n);
        return names;
    }

    /// Copy of the path with every sample before `t_start` removed.
    ProcessRealization drop_before(double t_start) const {
        auto first = static_cast<Eigen::Index>(std::ceil((t_start - t0_) / dt_ - 1e-9));
        first = std::clamp<Eigen::Index>(first, 0, size());
        ProcessRealization out(time(first), dt_);
        for (const auto& [n, v] : channels_) out.add_channel(n, v.tail(size() - first));
        return out;
    }

private:
    double t0_;
    double dt_;
    std::vector<std::pair<std::string, Eigen::VectorXd>> channels_;
};

}  // namespace mathieu
