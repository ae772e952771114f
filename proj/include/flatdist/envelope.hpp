#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "flatdist/measure.hpp"
#include "flatdist/polytope.hpp"

namespace flatdist {

/// max_i (theta_i - dist_i); the inner maximum of the envelope before the -1 floor.
inline double max_shift(std::span<const double> theta, std::span<const double> dist) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < theta.size(); ++i) best = std::max(best, theta[i] - dist[i]);
    return best;
}

/// h_theta at a point with the given distances to the reference points:
/// max(-1, max_i (theta_i - d(x_i, y))).
inline double envelope_value(std::span<const double> theta, std::span<const double> dist) {
    return std::max(-1.0, max_shift(theta, dist));
}

/// A point of [-1, 1]^N. Components beyond the box by at most 1e-12 are clamped;
/// anything further out is rejected rather than silently clamped.
class ThetaVector {
public:
    explicit ThetaVector(std::vector<double> values) : v_(std::move(values)) {
        for (double& x : v_) {
            if (!std::isfinite(x) || std::abs(x) > 1.0 + kClampTol)
                throw InputError("theta vector: component outside [-1, 1]");
            x = std::clamp(x, -1.0, 1.0);
        }
    }

    std::size_t size() const { return v_.size(); }
    const std::vector<double>& values() const { return v_; }
    operator std::span<const double>() const { return v_; }

private:
    static constexpr double kClampTol = 1e-12;
    std::vector<double> v_;
};

/// psi_tau(theta) = <tau, h_theta> for molecular tau, with the envelope built on
/// the reference points `ref` (indices into the same distance matrix).
inline double psi(const MolecularMeasure& tau, const DistanceMatrix& d,
                  std::span<const std::size_t> ref, const ThetaVector& theta) {
    if (ref.size() != theta.size()) throw InputError("psi: theta/reference size mismatch");
    std::span<const double> th = theta;
    double s = 0.0;
    std::vector<double> dist(ref.size());
    for (const Atom& a : tau.atoms()) {
        for (std::size_t i = 0; i < ref.size(); ++i) dist[i] = d(ref[i], a.point);
        s += a.weight * envelope_value(th, dist);
    }
    return s;
}

/// Same for atoms on the real line given by coordinates.
inline double psi_line(std::span<const double> atom_x, std::span<const double> atom_w,
                       std::span<const double> ref_x, const ThetaVector& theta) {
    if (ref_x.size() != theta.size()) throw InputError("psi: theta/reference size mismatch");
    if (atom_x.size() != atom_w.size()) throw InputError("psi: atom size mismatch");
    std::span<const double> th = theta;
    double s = 0.0;
    std::vector<double> dist(ref_x.size());
    for (std::size_t a = 0; a < atom_x.size(); ++a) {
        for (std::size_t i = 0; i < ref_x.size(); ++i) dist[i] = std::abs(ref_x[i] - atom_x[a]);
        s += atom_w[a] * envelope_value(th, dist);
    }
    return s;
}

/// Points where y |-> h_theta(y) on the line changes its affine piece: the
/// reference points themselves, the floor crossings x_i +- (theta_i + 1), and
/// the crossing of pieces i and j between x_i and x_j. O(N^2) points, sorted.
inline std::vector<double> envelope_breakpoints(std::span<const double> ref_x,
                                                std::span<const double> theta) {
    std::vector<double> pts;
    std::size_t n = ref_x.size();
    pts.reserve(3 * n + n * n);
    for (std::size_t i = 0; i < n; ++i) {
        pts.push_back(ref_x[i]);
        pts.push_back(ref_x[i] - (theta[i] + 1.0));
        pts.push_back(ref_x[i] + (theta[i] + 1.0));
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (ref_x[i] >= ref_x[j]) continue;
            double y = 0.5 * (theta[i] - theta[j] + ref_x[i] + ref_x[j]);
            if (y > ref_x[i] && y < ref_x[j]) pts.push_back(y);
        }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

/// <mu, h_theta> for a 1-D density measure. The domain is split at the envelope
/// breakpoints so each quadrature panel sees a smooth integrand; beyond the
/// last breakpoint h_theta is identically -1 and the tail contributes exactly
/// -mu(tail).
inline double density_envelope_pairing(const DensityMeasure1D& mu, std::span<const double> ref_x,
                                       const ThetaVector& theta, double* error = nullptr) {
    if (ref_x.size() != theta.size()) throw InputError("pairing: theta/reference size mismatch");
    std::span<const double> th = theta;
    double lo = mu.lower();
    // h == -1 outside [first, last] floor crossings
    double first = std::numeric_limits<double>::infinity();
    double last = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < ref_x.size(); ++i) {
        first = std::min(first, ref_x[i] - (th[i] + 1.0));
        last = std::max(last, ref_x[i] + (th[i] + 1.0));
    }
    double a = std::max(lo, first);
    double b = std::min(mu.upper(), last);

    double total_err = 0.0;
    double value = 0.0;
    if (b > a) {
        std::vector<double> pts = envelope_breakpoints(ref_x, th);
        std::vector<double> panel{a};
        for (double y : pts)
            if (y > a && y < b) panel.push_back(y);
        panel.push_back(b);
        std::vector<double> dist(ref_x.size());
        auto f = [&](double y) {
            double best = -std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < ref_x.size(); ++i)
                best = std::max(best, th[i] - std::abs(ref_x[i] - y));
            return mu.density(y) * std::max(-1.0, best);
        };
        Integral r = integrate_panels(f, panel, mu.quad());
        value += r.value;
        total_err += r.error;
    }
    // left and right floors
    double err_piece = 0.0;
    if (a > lo) {
        value -= mu.mass_between(lo, a, &err_piece);
        total_err += err_piece;
    }
    if (b < mu.upper() || b <= a) {
        double tail_from = std::max(lo, std::max(b, a));
        value -= mu.tail_mass(tail_from, &err_piece);
        total_err += err_piece;
    }
    if (error) *error = total_err;
    return value;
}

/// psi_{nu - mu}(theta) for positive molecular nu on the line and a density mu.
inline double psi_difference(std::span<const double> nu_x, std::span<const double> nu_w,
                             const DensityMeasure1D& mu, const ThetaVector& theta,
                             double* error = nullptr) {
    return psi_line(nu_x, nu_w, nu_x, theta) - density_envelope_pairing(mu, nu_x, theta, error);
}

/// The envelope extension of g from the support to the whole space, evaluated
/// through distances to the support: y |-> max(-1, max_i (g_i - d(x_i, y))).
/// It is 1-Lipschitz, bounded by [-1, 1], and interpolates g on the support.
struct EnvelopeFn {
    std::vector<double> theta;

    double operator()(std::span<const double> dist_to_y) const {
        return envelope_value(theta, dist_to_y);
    }
};

/// Checked construction: g must lie in iota(B^P_FM) up to the feasibility tolerance.
inline EnvelopeFn envelope_of(const DistanceMatrix& d, std::span<const double> g,
                              double tol = kFeasibilityTol) {
    if (g.size() != d.size()) throw InputError("envelope_of: size mismatch");
    Polytope ball = fm_ball_polytope(d);
    if (!contains(ball, g, tol))
        throw InputError("envelope_of: values lie outside the FM unit ball");
    return EnvelopeFn{std::vector<double>(g.begin(), g.end())};
}

/// 1-D convenience: evaluate the envelope at real coordinates.
struct Envelope1D {
    std::vector<double> x;
    std::vector<double> theta;

    double operator()(double y) const {
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < x.size(); ++i)
            best = std::max(best, theta[i] - std::abs(x[i] - y));
        return std::max(-1.0, best);
    }
};

inline Envelope1D envelope_of_line(std::span<const double> support_x, std::span<const double> g,
                                   double tol = kFeasibilityTol) {
    PointSet ps;
    std::vector<std::vector<double>> coords;
    for (std::size_t i = 0; i < support_x.size(); ++i) {
        ps.labels.push_back("p" + std::to_string(i));
        coords.push_back({support_x[i]});
    }
    ps.coords = std::move(coords);
    DistanceMatrix d = euclidean_matrix(ps);
    EnvelopeFn checked = envelope_of(d, g, tol);
    return Envelope1D{std::vector<double>(support_x.begin(), support_x.end()),
                      std::move(checked.theta)};
}

} // namespace flatdist
