#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "flatdist/metric.hpp"
#include "flatdist/quadrature.hpp"

namespace flatdist {

struct Atom {
    std::size_t point; // index into a shared support set
    double weight;     // nonzero, signed
};

/// A finite signed weighted sum of Dirac measures. Atoms are kept sorted by
/// point index, with coincident atoms merged and zero weights dropped; the zero
/// measure has no atoms.
class MolecularMeasure {
public:
    MolecularMeasure() = default;

    static MolecularMeasure from_atoms(std::vector<Atom> atoms) {
        std::map<std::size_t, double> acc;
        for (const Atom& a : atoms) {
            if (!std::isfinite(a.weight)) throw InputError("molecular measure: non-finite weight");
            acc[a.point] += a.weight;
        }
        MolecularMeasure m;
        for (auto& [p, w] : acc)
            if (w != 0.0) m.atoms_.push_back({p, w});
        return m;
    }

    const std::vector<Atom>& atoms() const { return atoms_; }
    std::size_t size() const { return atoms_.size(); }
    bool is_zero() const { return atoms_.empty(); }

    bool is_positive() const {
        return std::all_of(atoms_.begin(), atoms_.end(), [](const Atom& a) { return a.weight > 0; });
    }

    std::size_t max_point_index() const {
        return atoms_.empty() ? 0 : atoms_.back().point;
    }

private:
    std::vector<Atom> atoms_;
};

/// Merges coincident points by summing weights and drops exact cancellations.
inline MolecularMeasure merge_and_normalize(std::span<const std::size_t> points,
                                            std::span<const double> weights) {
    if (points.size() != weights.size())
        throw InputError("merge_and_normalize: points/weights length mismatch");
    std::vector<Atom> atoms;
    atoms.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) atoms.push_back({points[i], weights[i]});
    return MolecularMeasure::from_atoms(std::move(atoms));
}

inline double total_variation(const MolecularMeasure& m) {
    double s = 0.0;
    for (const Atom& a : m.atoms()) s += std::abs(a.weight);
    return s;
}

inline double total_mass(const MolecularMeasure& m) {
    double s = 0.0;
    for (const Atom& a : m.atoms()) s += a.weight;
    return s;
}

inline MolecularMeasure scale(const MolecularMeasure& m, double c) {
    std::vector<Atom> atoms = m.atoms();
    for (Atom& a : atoms) a.weight *= c;
    return MolecularMeasure::from_atoms(std::move(atoms));
}

inline MolecularMeasure subtract(const MolecularMeasure& a, const MolecularMeasure& b) {
    std::vector<Atom> atoms = a.atoms();
    for (const Atom& x : b.atoms()) atoms.push_back({x.point, -x.weight});
    return MolecularMeasure::from_atoms(std::move(atoms));
}

/// Disjointly supported positive and negative parts: positive - negative
/// reconstructs the original measure atom by atom.
struct JordanPair {
    MolecularMeasure positive;
    MolecularMeasure negative;
};

inline JordanPair jordan_decompose(const MolecularMeasure& m) {
    std::vector<Atom> pos, neg;
    for (const Atom& a : m.atoms()) {
        if (a.weight > 0)
            pos.push_back(a);
        else
            neg.push_back({a.point, -a.weight});
    }
    return JordanPair{MolecularMeasure::from_atoms(std::move(pos)),
                      MolecularMeasure::from_atoms(std::move(neg))};
}

/// Mass of the open ball B(x, r) = {y : d(x, y) < r}. Atoms exactly at distance
/// r are excluded.
inline double ball_mass(const MolecularMeasure& mu, const DistanceMatrix& d, std::size_t x,
                        double r) {
    if (r < 0) throw InputError("ball_mass: negative radius");
    if (x >= d.size()) throw InputError("ball_mass: point index out of range");
    double s = 0.0;
    for (const Atom& a : mu.atoms()) {
        if (a.point >= d.size()) throw InputError("ball_mass: atom index out of range");
        if (d(x, a.point) < r) s += a.weight;
    }
    return s;
}

/// inf{r >= 0 : mu(B(x, r)) >= m}, with inf over the empty set = +infinity.
/// For atoms this is the smallest distinct distance whose cumulative weight
/// (over atoms at distance <= it) reaches m.
inline double mass_radius(const MolecularMeasure& mu, const DistanceMatrix& d, std::size_t x,
                          double m) {
    if (!(m > 0)) throw InputError("mass_radius: threshold must be positive");
    if (!mu.is_positive()) throw InputError("mass_radius: measure must be positive");
    std::vector<std::pair<double, double>> by_dist; // (distance, weight)
    by_dist.reserve(mu.size());
    for (const Atom& a : mu.atoms()) by_dist.push_back({d(x, a.point), a.weight});
    std::sort(by_dist.begin(), by_dist.end());
    double cum = 0.0;
    for (std::size_t i = 0; i < by_dist.size(); ++i) {
        cum += by_dist[i].second;
        bool last_at_this_distance =
            i + 1 == by_dist.size() || by_dist[i + 1].first != by_dist[i].first;
        if (last_at_this_distance && cum >= m) return by_dist[i].first;
    }
    return std::numeric_limits<double>::infinity();
}

/// A positive measure on an interval of the real line given by a density.
/// The upper endpoint may be +infinity; integrals then rely on a supplied total
/// mass or on window-doubling quadrature with a convergence check.
/// The density callable must be reentrant.
class DensityMeasure1D {
public:
    DensityMeasure1D(double lower, double upper, std::function<double(double)> density,
                     std::optional<double> total_mass = {}, QuadratureConfig quad = {})
        : lower_(lower), upper_(upper), density_(std::move(density)),
          supplied_total_(total_mass), quad_(quad) {
        if (!std::isfinite(lower_)) throw InputError("density measure: lower bound must be finite");
        if (!(upper_ > lower_)) throw InputError("density measure: empty or inverted domain");
        if (!density_) throw InputError("density measure: missing density");
        double probe_hi = std::isfinite(upper_) ? upper_ : lower_ + 50.0;
        for (int i = 0; i <= 256; ++i) {
            double y = lower_ + (probe_hi - lower_) * (double(i) / 256.0);
            double v = density_(y);
            if (!std::isfinite(v) || v < 0.0)
                throw InputError("density measure: density must be finite and nonnegative");
        }
        if (supplied_total_) {
            if (!(*supplied_total_ >= 0.0)) throw InputError("density measure: negative total mass");
            Integral computed = integrate_mass(lower_, upper_);
            if (std::abs(*supplied_total_ - computed.value) >
                2.0 * quad_.abs_tol + computed.error)
                throw InputError("density measure: supplied total mass disagrees with "
                                 "quadrature of the density");
        }
    }

    double lower() const { return lower_; }
    double upper() const { return upper_; }
    bool unbounded_above() const { return !std::isfinite(upper_); }
    double density(double y) const { return density_(y); }
    const QuadratureConfig& quad() const { return quad_; }
    std::optional<double> supplied_total_mass() const { return supplied_total_; }

    /// Mass of (lo, hi) intersected with the domain; hi may be +infinity.
    double mass_between(double lo, double hi, double* error = nullptr) const {
        lo = std::max(lo, lower_);
        hi = std::min(hi, upper_);
        if (!(hi > lo)) {
            if (error) *error = 0.0;
            return 0.0;
        }
        Integral r = integrate_mass(lo, hi);
        if (error) *error = r.error;
        return r.value;
    }

    double total_mass(double* error = nullptr) const {
        if (supplied_total_) {
            if (error) *error = 0.0;
            return *supplied_total_;
        }
        return mass_between(lower_, upper_, error);
    }

    /// Mass of (c, upper); uses the supplied total mass when available.
    double tail_mass(double c, double* error = nullptr) const {
        if (c <= lower_) return total_mass(error);
        if (c >= upper_) {
            if (error) *error = 0.0;
            return 0.0;
        }
        if (supplied_total_) {
            double head_err = 0.0;
            double head = mass_between(lower_, c, &head_err);
            if (error) *error = head_err;
            return std::max(0.0, *supplied_total_ - head);
        }
        return mass_between(c, upper_, error);
    }

private:
    Integral integrate_mass(double lo, double hi) const {
        auto f = [this](double y) { return density_(y); };
        if (std::isfinite(hi)) return integrate(f, lo, hi, quad_);
        return integrate_to_infinity(f, lo, quad_);
    }

    double lower_, upper_;
    std::function<double(double)> density_;
    std::optional<double> supplied_total_;
    QuadratureConfig quad_;
};

inline double ball_mass(const DensityMeasure1D& mu, double x, double r) {
    if (r < 0) throw InputError("ball_mass: negative radius");
    if (r == 0) return 0.0;
    return mu.mass_between(x - r, x + r);
}

/// inf{r >= 0 : mu(B(x, r)) >= m} by monotone bisection to 1e-10 in r;
/// +infinity when the total mass never reaches m.
inline double mass_radius(const DensityMeasure1D& mu, double x, double m) {
    if (!(m > 0)) throw InputError("mass_radius: threshold must be positive");
    const double inf = std::numeric_limits<double>::infinity();
    double total = mu.total_mass();
    if (total < m) return inf;
    // bracket: grow r until the ball holds mass m
    double hi = std::max(1.0, std::abs(x - mu.lower()));
    double cover = std::isfinite(mu.upper())
                       ? std::max(std::abs(x - mu.lower()), std::abs(mu.upper() - x)) + 1.0
                       : inf;
    for (int i = 0; i < 80 && ball_mass(mu, x, hi) < m; ++i) {
        if (std::isfinite(cover) && hi >= cover) return inf; // whole domain covered, still short
        hi = std::isfinite(cover) ? std::min(2.0 * hi, cover) : 2.0 * hi;
        if (hi > 1e12) return inf;
    }
    if (ball_mass(mu, x, hi) < m) return inf;
    double lo = 0.0;
    while (hi - lo > 1e-10) {
        double mid = 0.5 * (lo + hi);
        if (ball_mass(mu, x, mid) >= m)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

} // namespace flatdist
