#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "flatdist/metric.hpp"

namespace flatdist {

/// Provenance of a polytope row.
struct RowTag {
    enum class Kind { Box, LipschitzPair, BlTriple, BlPair, Epigraph };
    Kind kind;
    int sign = +1;                // +1 or -1 variant of the constraint
    std::size_t i = 0, j = 0, k = 0;
};

/// Half-space representation { f : A f <= b } with per-row provenance tags.
struct Polytope {
    std::size_t dim = 0;
    std::vector<double> A; // row-major, rows() x dim
    std::vector<double> b;
    std::vector<RowTag> tags;

    std::size_t rows() const { return b.size(); }
    std::span<const double> row(std::size_t r) const {
        return std::span<const double>(A.data() + r * dim, dim);
    }

    void add_row(std::span<const double> coeffs, double rhs, RowTag tag) {
        A.insert(A.end(), coeffs.begin(), coeffs.end());
        b.push_back(rhs);
        tags.push_back(tag);
    }
};

inline double max_violation(const Polytope& p, std::span<const double> f) {
    double worst = 0.0;
    for (std::size_t r = 0; r < p.rows(); ++r) {
        double lhs = 0.0;
        auto row = p.row(r);
        for (std::size_t j = 0; j < p.dim; ++j) lhs += row[j] * f[j];
        worst = std::max(worst, lhs - p.b[r]);
    }
    return worst;
}

inline bool contains(const Polytope& p, std::span<const double> f, double tol = kFeasibilityTol) {
    return f.size() == p.dim && max_violation(p, f) <= tol;
}

/// iota(B^P_FM): box rows |f_k| <= 1 plus Lipschitz pair rows
/// |f_i - f_j| / d_ij <= 1. For a single point the ball is just [-1, 1].
inline Polytope fm_ball_polytope(const DistanceMatrix& d) {
    std::size_t n = d.size();
    Polytope p;
    p.dim = n;
    std::vector<double> row(n, 0.0);
    using K = RowTag::Kind;
    for (std::size_t k = 0; k < n; ++k) {
        row.assign(n, 0.0);
        row[k] = 1.0;
        p.add_row(row, 1.0, {K::Box, +1, k, k, k});
        row[k] = -1.0;
        p.add_row(row, 1.0, {K::Box, -1, k, k, k});
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double inv = 1.0 / d(i, j);
            row.assign(n, 0.0);
            row[i] = inv;
            row[j] = -inv;
            p.add_row(row, 1.0, {K::LipschitzPair, +1, i, j, j});
            row[i] = -inv;
            row[j] = inv;
            p.add_row(row, 1.0, {K::LipschitzPair, -1, i, j, j});
        }
    return p;
}

/// iota(B^P_BL), the dual bounded-Lipschitz unit ball over the support:
/// rows +-(f_k + (f_i - f_j)/d_ij) <= 1 over ordered pairs (i, j) with k outside
/// {i, j}, and +-(f_k + (f_k - f_i)/d_ik) <= 1 for i != k. A single point gets
/// the box [-1, 1] (its Lipschitz seminorm is zero).
inline Polytope bl_ball_polytope(const DistanceMatrix& d) {
    std::size_t n = d.size();
    if (n == 0) throw InputError("bl_ball_polytope: empty support");
    Polytope p;
    p.dim = n;
    std::vector<double> row(n, 0.0);
    using K = RowTag::Kind;
    if (n == 1) {
        row[0] = 1.0;
        p.add_row(row, 1.0, {K::Box, +1, 0, 0, 0});
        row[0] = -1.0;
        p.add_row(row, 1.0, {K::Box, -1, 0, 0, 0});
        return p;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            double inv = 1.0 / d(i, j);
            for (std::size_t k = 0; k < n; ++k) {
                if (k == i || k == j) continue;
                row.assign(n, 0.0);
                row[k] = 1.0;
                row[i] += inv;
                row[j] -= inv;
                p.add_row(row, 1.0, {K::BlTriple, +1, i, j, k});
                for (double& v : row) v = -v;
                p.add_row(row, 1.0, {K::BlTriple, -1, i, j, k});
            }
        }
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k) continue;
            double inv = 1.0 / d(i, k);
            row.assign(n, 0.0);
            row[k] = 1.0 + inv;
            row[i] = -inv;
            p.add_row(row, 1.0, {K::BlPair, +1, i, k, k});
            for (double& v : row) v = -v;
            p.add_row(row, 1.0, {K::BlPair, -1, i, k, k});
        }
    return p;
}

} // namespace flatdist
