#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <queue>
#include <span>
#include <vector>

#include "flatdist/common.hpp"

namespace flatdist {

struct QuadratureConfig {
    double abs_tol = 1e-9;
    int max_subdivisions = 10000;
};

struct Integral {
    double value = 0.0;
    double error = 0.0;
    int subdivisions = 0;
};

namespace detail {

// 15-point Kronrod / 7-point Gauss pair on [-1, 1].
inline constexpr double kKronrodNodes[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691, 0.7415311855993944,
    0.5860872354676911, 0.4058451513773972, 0.2077849550078985, 0.0};
inline constexpr double kKronrodWeights[8] = {
    0.02293532201052922, 0.06309209262997855, 0.1047900103222502, 0.1406532597155259,
    0.1690047266392679,  0.1903505780647854,  0.2044329400752989, 0.2094821410847278};
inline constexpr double kGaussWeights[4] = {
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189, 0.4179591836734694};

struct Panel {
    double a, b;
    double value;
    double error;
    bool splittable;
};

template <class F>
Panel gk15(F&& f, double a, double b) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double fv[15];
    // fv[2k] at -node[k], fv[2k+1] at +node[k] for k < 7; fv[14] at the centre
    for (int k = 0; k < 7; ++k) {
        fv[2 * k] = f(mid - half * kKronrodNodes[k]);
        fv[2 * k + 1] = f(mid + half * kKronrodNodes[k]);
    }
    fv[14] = f(mid);

    double resk = kKronrodWeights[7] * fv[14];
    double resg = kGaussWeights[3] * fv[14];
    for (int k = 0; k < 7; ++k) {
        double pair = fv[2 * k] + fv[2 * k + 1];
        resk += kKronrodWeights[k] * pair;
        if (k % 2 == 1) resg += kGaussWeights[k / 2] * pair;
    }
    double reskh = resk * 0.5;
    double resasc = kKronrodWeights[7] * std::abs(fv[14] - reskh);
    for (int k = 0; k < 7; ++k)
        resasc += kKronrodWeights[k] *
                  (std::abs(fv[2 * k] - reskh) + std::abs(fv[2 * k + 1] - reskh));
    resasc *= std::abs(half);

    double err = std::abs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));

    bool splittable = std::abs(b - a) > 1e-14 * (1.0 + std::abs(a) + std::abs(b));
    return Panel{a, b, resk * half, err, splittable};
}

struct PanelWorse {
    bool operator()(const Panel& x, const Panel& y) const {
        if (x.error != y.error) return x.error < y.error;
        return x.a > y.a; // deterministic tie-break
    }
};

} // namespace detail

/// Adaptive Gauss-Kronrod integration of f over the panels delimited by `points`
/// (sorted, at least two entries). Splits the worst panel until the summed error
/// estimate drops below abs_tol or the subdivision budget is exhausted.
template <class F>
Integral integrate_panels(F&& f, std::span<const double> points, QuadratureConfig cfg = {}) {
    if (points.size() < 2) throw InputError("integrate: need at least two breakpoints");
    std::priority_queue<detail::Panel, std::vector<detail::Panel>, detail::PanelWorse> work;
    double frozen_value = 0.0, frozen_error = 0.0; // panels too narrow to split further
    double queue_value = 0.0, queue_error = 0.0;
    auto push = [&](detail::Panel p) {
        queue_value += p.value;
        queue_error += p.error;
        work.push(p);
    };
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        if (!(points[i] <= points[i + 1])) throw InputError("integrate: breakpoints not sorted");
        if (points[i] == points[i + 1]) continue;
        push(detail::gk15(f, points[i], points[i + 1]));
    }
    int splits = 0;
    while (queue_error + frozen_error > cfg.abs_tol && !work.empty()) {
        detail::Panel worst = work.top();
        work.pop();
        queue_error -= worst.error;
        queue_value -= worst.value;
        if (!worst.splittable) {
            frozen_value += worst.value;
            frozen_error += worst.error;
            continue;
        }
        if (++splits > cfg.max_subdivisions)
            throw NumericalError("quadrature: subdivision budget exhausted before reaching "
                                 "the requested tolerance");
        double mid = 0.5 * (worst.a + worst.b);
        push(detail::gk15(f, worst.a, mid));
        push(detail::gk15(f, mid, worst.b));
    }
    return Integral{queue_value + frozen_value, queue_error + frozen_error, splits};
}

template <class F>
Integral integrate(F&& f, double a, double b, QuadratureConfig cfg = {}) {
    if (!(a <= b)) throw InputError("integrate: inverted interval");
    const double pts[2] = {a, b};
    return integrate_panels(f, pts, cfg);
}

/// Integral over [a, +inf) by doubling windows; converged once two consecutive
/// windows contribute less than the tolerance. Throws NumericalError otherwise.
template <class F>
Integral integrate_to_infinity(F&& f, double a, QuadratureConfig cfg = {}) {
    QuadratureConfig window_cfg = cfg;
    window_cfg.abs_tol = cfg.abs_tol / 64.0;
    Integral total;
    double lo = a;
    double len = std::max(1.0, std::abs(a));
    int calm = 0;
    for (int w = 0; w < 64; ++w) {
        Integral part = integrate(f, lo, lo + len, window_cfg);
        total.value += part.value;
        total.error += part.error;
        total.subdivisions += part.subdivisions;
        calm = std::abs(part.value) <= cfg.abs_tol * 0.25 ? calm + 1 : 0;
        if (calm >= 2) {
            total.error += std::abs(part.value);
            return total;
        }
        lo += len;
        len *= 2.0;
    }
    throw NumericalError("quadrature: integral over [a, inf) did not converge; "
                         "supply a total mass or shrink the domain");
}

} // namespace flatdist
