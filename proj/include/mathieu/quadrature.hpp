#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <queue>
#include <sstream>
#include <vector>

#include "mathieu/errors.hpp"

namespace mathieu::quad {

struct Settings {
    double rel_tol = 1e-6;
    double abs_tol = 0.0;
    int max_evals = 200000;
};

struct Result {
    double value = 0.0;
    double error = 0.0;
    int evals = 0;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1].
inline constexpr std::array<double, 8> kronrod_nodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kronrod_weights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> gauss_weights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& other) const { return error < other.error; }
};

template <typename F>
Segment kronrod15(F& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = fc * kronrod_weights[7];
    double gauss = fc * gauss_weights[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kronrod_nodes[static_cast<std::size_t>(j)];
        const double sum = f(center - dx) + f(center + dx);
        kronrod += kronrod_weights[static_cast<std::size_t>(j)] * sum;
        if (j % 2 == 1) gauss += gauss_weights[static_cast<std::size_t>(j / 2)] * sum;
    }
    kronrod *= half;
    gauss *= half;
    return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace detail

/// Globally adaptive G7-K15 on [a, b]: bisects the segment with the largest
/// error estimate until the total error meets max(abs_tol, rel_tol |I|).
/// Throws QuadratureFailure when the evaluation budget runs out.
template <typename F>
Result integrate(F&& f, double a, double b, const Settings& s = {}) {
    if (a == b) return {};
    if (b < a) {
        Result r = integrate(f, b, a, s);
        r.value = -r.value;
        return r;
    }
    std::priority_queue<detail::Segment> queue;
    detail::Segment first = detail::kronrod15(f, a, b);
    double value = first.value;
    double error = first.error;
    int evals = 15;
    queue.push(first);

    while (error > std::max(s.abs_tol, s.rel_tol * std::abs(value))) {
        if (evals + 30 > s.max_evals) {
            std::ostringstream msg;
            msg << "adaptive quadrature on [" << a << ", " << b << "] stopped at error " << error
                << " for value " << value << " after " << evals << " evaluations";
            throw QuadratureFailure(msg.str());
        }
        const detail::Segment worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            // Segment is at floating-point resolution; accept what we have.
            queue.push({worst.a, worst.b, worst.value, 0.0});
            error -= worst.error;
            continue;
        }
        const detail::Segment left = detail::kronrod15(f, worst.a, mid);
        const detail::Segment right = detail::kronrod15(f, mid, worst.b);
        evals += 30;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
    }

    // Re-sum from the segments to drop the drift of the running updates.
    double total = 0.0, total_error = 0.0;
    std::vector<detail::Segment> segments;
    while (!queue.empty()) {
        segments.push_back(queue.top());
        queue.pop();
    }
    std::sort(segments.begin(), segments.end(), [](const auto& l, const auto& r) { return l.a < r.a; });
    for (const auto& seg : segments) {
        total += seg.value;
        total_error += seg.error;
    }
    if (!std::isfinite(total)) throw QuadratureFailure("adaptive quadrature produced a non-finite value");
    return {total, total_error, evals};
}

}  // namespace mathieu::quad
