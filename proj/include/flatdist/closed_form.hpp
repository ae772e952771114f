#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

#include "flatdist/envelope.hpp"
#include "flatdist/measure.hpp"

namespace flatdist {

/// theta_0^alpha = min(2, inf{r >= 0 : mu(B(x, r)) >= alpha}) - 1. An empty set
/// (mass never reaches alpha) gives radius +infinity, clamped here to 2, so the
/// result always lies in [-1, 1] and no floating infinity escapes.
inline double theta0(const MolecularMeasure& mu, const DistanceMatrix& d, std::size_t x,
                     double alpha) {
    double r = mass_radius(mu, d, x, alpha);
    return std::min(2.0, r) - 1.0;
}

inline double theta0(const DensityMeasure1D& mu, double x, double alpha) {
    double r = mass_radius(mu, x, alpha);
    return std::min(2.0, r) - 1.0;
}

namespace detail {

constexpr double kProbabilityTol = 1e-9;

inline void require_probability(double total) {
    if (std::abs(total - 1.0) > kProbabilityTol)
        throw InputError("fm_dirac_vs_probability: measure mass differs from 1; "
                         "use fm_weighted_dirac_vs_positive instead");
}

} // namespace detail

/// ||delta_x - mu|| = <mu, 2 ^ d(x, .)> for a probability measure mu.
/// The mass is checked to 1e-9 and the measure renormalized exactly before use.
inline NormResult fm_dirac_vs_probability(std::size_t x, const MolecularMeasure& mu,
                                          const DistanceMatrix& d) {
    if (!mu.is_positive()) throw InputError("fm_dirac_vs_probability: measure must be positive");
    double total = total_mass(mu);
    detail::require_probability(total);
    double s = 0.0;
    for (const Atom& a : mu.atoms()) s += (a.weight / total) * truncated_distance(d(x, a.point));
    NormResult res;
    res.value = s;
    res.maximizer = {1.0};
    res.method = "closed_form";
    res.theta0 = 1.0;
    return res;
}

inline NormResult fm_dirac_vs_probability(double x, const DensityMeasure1D& mu) {
    double total_err = 0.0;
    double total = mu.total_mass(&total_err);
    detail::require_probability(total);
    // 2 ^ d(x,.) = 1 - h_theta with theta = 1, so <mu, 2^d> = mu(S) - <mu, h_1>
    const double xs[1] = {x};
    double pair_err = 0.0;
    double pairing = density_envelope_pairing(mu, xs, ThetaVector({1.0}), &pair_err);
    NormResult res;
    res.value = 1.0 - pairing / total;
    res.maximizer = {1.0};
    res.method = "closed_form";
    res.theta0 = 1.0;
    res.gap = (pair_err + total_err * 3.0) / total;
    return res;
}

/// ||alpha delta_x - mu|| = alpha theta_0^alpha - <mu, (-1) v (theta_0^alpha - d(x, .))>
/// for any positive finite mu.
inline NormResult fm_weighted_dirac_vs_positive(double alpha, std::size_t x,
                                                const MolecularMeasure& mu,
                                                const DistanceMatrix& d) {
    if (!(alpha > 0)) throw InputError("fm_weighted_dirac_vs_positive: weight must be positive");
    if (!mu.is_positive())
        throw InputError("fm_weighted_dirac_vs_positive: measure must be positive");
    double t0 = theta0(mu, d, x, alpha);
    double pairing = 0.0;
    for (const Atom& a : mu.atoms())
        pairing += a.weight * std::max(-1.0, t0 - d(x, a.point));
    NormResult res;
    res.value = alpha * t0 - pairing;
    res.maximizer = {t0};
    res.method = "closed_form";
    res.theta0 = t0;
    return res;
}

inline NormResult fm_weighted_dirac_vs_positive(double alpha, double x,
                                                const DensityMeasure1D& mu) {
    if (!(alpha > 0)) throw InputError("fm_weighted_dirac_vs_positive: weight must be positive");
    double t0 = theta0(mu, x, alpha);
    const double xs[1] = {x};
    double pair_err = 0.0;
    double pairing = density_envelope_pairing(mu, xs, ThetaVector({t0}), &pair_err);
    NormResult res;
    res.value = alpha * t0 - pairing;
    res.maximizer = {t0};
    res.method = "closed_form";
    res.theta0 = t0;
    res.gap = pair_err;
    return res;
}

/// ||alpha delta_x - beta delta_y|| = |alpha - beta| + (alpha ^ beta)(2 ^ d(x, y)).
inline NormResult fm_two_weighted_diracs(double alpha, double beta, double dxy) {
    if (!(alpha > 0) || !(beta > 0))
        throw InputError("fm_two_weighted_diracs: weights must be positive");
    if (!(dxy >= 0)) throw InputError("fm_two_weighted_diracs: negative distance");
    NormResult res;
    res.value = std::abs(alpha - beta) + std::min(alpha, beta) * truncated_distance(dxy);
    res.method = "closed_form";
    double t0 = (alpha <= beta && dxy < 2.0) ? dxy - 1.0 : 1.0;
    res.theta0 = t0;
    res.maximizer = {t0};
    return res;
}

inline NormResult fm_two_weighted_diracs(double alpha, std::size_t x, double beta, std::size_t y,
                                         const DistanceMatrix& d) {
    return fm_two_weighted_diracs(alpha, beta, x == y ? 0.0 : d(x, y));
}

} // namespace flatdist
