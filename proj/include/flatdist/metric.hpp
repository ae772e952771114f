#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "flatdist/common.hpp"

namespace flatdist {

/// A finite set of named points, optionally with real coordinates.
struct PointSet {
    std::vector<std::string> labels;
    std::optional<std::vector<std::vector<double>>> coords;

    std::size_t size() const { return labels.size(); }
};

inline void validate_point_set(const PointSet& p) {
    std::unordered_set<std::string> seen;
    for (const auto& l : p.labels) {
        if (!seen.insert(l).second)
            throw InputError("point set: duplicate label '" + l + "'");
    }
    if (p.coords) {
        if (p.coords->size() != p.labels.size())
            throw InputError("point set: coords count does not match labels count");
        std::size_t dim = p.coords->empty() ? 0 : p.coords->front().size();
        for (const auto& c : *p.coords) {
            if (c.size() != dim)
                throw InputError("point set: coordinate vectors have mixed dimensions");
            for (double v : c)
                if (!std::isfinite(v)) throw InputError("point set: non-finite coordinate");
        }
        if (dim == 0 && !p.labels.empty())
            throw InputError("point set: empty coordinate vectors");
    }
}

/// min(2, x). Distances enter every pairing through this truncation.
inline double truncated_distance(double x) {
    if (!(x >= 0.0)) throw InputError("truncated_distance: argument must be nonnegative");
    return std::min(2.0, x);
}

struct MetricViolation {
    enum class Kind { NonFinite, Negative, Diagonal, Symmetry, OffDiagonalZero, Triangle };
    Kind kind;
    std::size_t i = 0, j = 0, k = 0;
    double magnitude = 0.0;

    std::string describe() const {
        std::ostringstream os;
        switch (kind) {
            case Kind::NonFinite: os << "non-finite entry at (" << i << "," << j << ")"; break;
            case Kind::Negative: os << "negative entry at (" << i << "," << j << ")"; break;
            case Kind::Diagonal: os << "nonzero diagonal at (" << i << "," << i << ")"; break;
            case Kind::Symmetry: os << "asymmetry at (" << i << "," << j << ")"; break;
            case Kind::OffDiagonalZero:
                os << "zero distance between distinct points (" << i << "," << j << ")";
                break;
            case Kind::Triangle:
                os << "triangle inequality violated for (" << i << "," << j << "," << k << "): excess "
                   << magnitude;
                break;
        }
        return os.str();
    }
};

struct ValidationReport {
    bool ok = true;
    std::vector<MetricViolation> violations;
};

struct MetricCheckOptions {
    /// O(n^3); disable only for large n where construction cost dominates.
    bool check_triangle = true;
    double tol = 1e-12;
};

/// Checks the four metric invariants: zero diagonal, symmetry, positivity off the
/// diagonal, and the triangle inequality. Always returns a report, never throws.
inline ValidationReport validate_metric(std::span<const double> d, std::size_t n,
                                        MetricCheckOptions opts = {}) {
    ValidationReport rep;
    auto at = [&](std::size_t i, std::size_t j) { return d[i * n + j]; };
    auto add = [&](MetricViolation v) {
        rep.ok = false;
        rep.violations.push_back(v);
    };
    using Kind = MetricViolation::Kind;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double v = at(i, j);
            if (!std::isfinite(v)) {
                add({Kind::NonFinite, i, j, 0, v});
                continue;
            }
            if (v < 0.0) add({Kind::Negative, i, j, 0, v});
            if (i == j && std::abs(v) > opts.tol) add({Kind::Diagonal, i, i, 0, v});
            if (i < j) {
                if (std::abs(v - at(j, i)) > opts.tol)
                    add({Kind::Symmetry, i, j, 0, std::abs(v - at(j, i))});
                if (std::abs(v) <= opts.tol && std::abs(at(j, i)) <= opts.tol)
                    add({Kind::OffDiagonalZero, i, j, 0, v});
            }
        }
    }
    if (rep.ok && opts.check_triangle) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k) {
                    double excess = at(i, k) - at(i, j) - at(j, k);
                    if (excess > opts.tol) add({Kind::Triangle, i, j, k, excess});
                }
    }
    return rep;
}

inline ValidationReport validate_metric(const std::vector<std::vector<double>>& rows,
                                        MetricCheckOptions opts = {}) {
    std::size_t n = rows.size();
    std::vector<double> flat;
    flat.reserve(n * n);
    for (const auto& r : rows) {
        if (r.size() != n) throw InputError("metric matrix is not square");
        flat.insert(flat.end(), r.begin(), r.end());
    }
    return validate_metric(flat, n, opts);
}

/// A validated finite metric: symmetric, zero diagonal, strictly positive off the
/// diagonal, triangle inequality within 1e-12. Immutable after construction.
class DistanceMatrix {
public:
    static DistanceMatrix from_rows(const std::vector<std::vector<double>>& rows,
                                    MetricCheckOptions opts = {}) {
        std::size_t n = rows.size();
        if (n == 0) throw InputError("distance matrix: empty");
        std::vector<double> flat;
        flat.reserve(n * n);
        for (const auto& r : rows) {
            if (r.size() != n) throw InputError("distance matrix is not square");
            flat.insert(flat.end(), r.begin(), r.end());
        }
        return from_flat(std::move(flat), n, opts);
    }

    static DistanceMatrix from_flat(std::vector<double> flat, std::size_t n,
                                    MetricCheckOptions opts = {}) {
        if (n == 0 || flat.size() != n * n) throw InputError("distance matrix: bad shape");
        ValidationReport rep = validate_metric(flat, n, opts);
        if (!rep.ok) {
            std::ostringstream os;
            os << "not a metric:";
            for (const auto& v : rep.violations) os << " [" << v.describe() << "]";
            throw InputError(os.str());
        }
        return DistanceMatrix(std::move(flat), n);
    }

    std::size_t size() const { return n_; }

    double operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }

    std::span<const double> row(std::size_t i) const {
        return std::span<const double>(d_.data() + i * n_, n_);
    }

    /// Principal submatrix on the given (distinct) indices. A restriction of a
    /// metric is a metric, so no revalidation happens.
    DistanceMatrix submatrix(std::span<const std::size_t> idx) const {
        std::size_t m = idx.size();
        if (m == 0) throw InputError("submatrix: empty index set");
        std::vector<double> flat(m * m);
        for (std::size_t a = 0; a < m; ++a) {
            if (idx[a] >= n_) throw InputError("submatrix: index out of range");
            for (std::size_t b = 0; b < m; ++b) flat[a * m + b] = (*this)(idx[a], idx[b]);
        }
        return DistanceMatrix(std::move(flat), m);
    }

private:
    DistanceMatrix(std::vector<double> d, std::size_t n) : n_(n), d_(std::move(d)) {}

    std::size_t n_;
    std::vector<double> d_;
};

/// Pairwise Euclidean distances of a coordinate point set. Coincident coordinates
/// under distinct labels are rejected: supports must be merged first.
inline DistanceMatrix euclidean_matrix(const PointSet& p, MetricCheckOptions opts = {}) {
    validate_point_set(p);
    if (!p.coords) throw InputError("euclidean_matrix: point set has no coordinates");
    const auto& c = *p.coords;
    std::size_t n = c.size();
    if (n == 0) throw InputError("euclidean_matrix: empty point set");
    std::vector<double> flat(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < c[i].size(); ++k) {
                double diff = c[i][k] - c[j][k];
                s += diff * diff;
            }
            double dist = std::sqrt(s);
            if (dist == 0.0)
                throw InputError("euclidean_matrix: coincident coordinates for labels '" +
                                 p.labels[i] + "' and '" + p.labels[j] +
                                 "'; merge coincident points first");
            flat[i * n + j] = dist;
            flat[j * n + i] = dist;
        }
    // Euclidean distances always satisfy the metric axioms; the full check is kept
    // as a guard against NaN coordinates slipping through.
    opts.check_triangle = opts.check_triangle && n <= 512;
    return DistanceMatrix::from_flat(std::move(flat), n, opts);
}

} // namespace flatdist
