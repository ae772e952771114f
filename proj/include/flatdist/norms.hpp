#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "flatdist/measure.hpp"
#include "flatdist/polytope.hpp"
#include "flatdist/simplex.hpp"

namespace flatdist {

namespace detail {

inline std::vector<std::size_t> support_of(const MolecularMeasure& m) {
    std::vector<std::size_t> idx;
    idx.reserve(m.size());
    for (const Atom& a : m.atoms()) idx.push_back(a.point);
    return idx;
}

inline NormResult ball_norm(const MolecularMeasure& tau, const DistanceMatrix& d,
                            bool bounded_lipschitz) {
    NormResult res;
    res.method = "lp";
    if (tau.is_zero()) return res;
    std::vector<std::size_t> supp = support_of(tau);
    for (std::size_t p : supp)
        if (p >= d.size()) throw InputError("norm: atom index outside the distance matrix");
    DistanceMatrix sub = d.submatrix(supp);
    Polytope ball = bounded_lipschitz ? bl_ball_polytope(sub) : fm_ball_polytope(sub);
    std::vector<double> c;
    c.reserve(supp.size());
    for (const Atom& a : tau.atoms()) c.push_back(a.weight);
    double mass = std::accumulate(c.begin(), c.end(), 0.0);
    // +-(1,...,1) are always vertices; starting at the right one skips phase 1
    // and halves the vertex set worth examining.
    std::vector<double> warm(supp.size(), mass >= 0.0 ? 1.0 : -1.0);
    LPSolution sol = solve_lp(c, ball, std::span<const double>(warm));
    if (sol.status != LPStatus::Optimal)
        throw NumericalError("norm: LP over a bounded ball polytope did not reach an optimum");
    res.value = sol.value;
    res.maximizer = std::move(sol.f);
    res.iterations = sol.iterations;
    return res;
}

} // namespace detail

/// ||tau||_FM over the support of tau, as the LP max { sum a_i f_i : f in iota(B^P_FM) }.
/// The zero measure has norm 0. maximizer[k] belongs to the k-th support point in
/// index order.
inline NormResult fm_norm_molecular(const MolecularMeasure& tau, const DistanceMatrix& d) {
    return detail::ball_norm(tau, d, false);
}

/// ||tau||_BL (Dudley norm) via the bounded-Lipschitz ball polytope.
inline NormResult bl_norm_molecular(const MolecularMeasure& tau, const DistanceMatrix& d) {
    return detail::ball_norm(tau, d, true);
}

/// The reduced (epigraph) formulation: with nu the smaller Jordan part
/// (weights alpha_i at x_i) and beta_j at y_j on the other side,
///   maximize  sum_i alpha_i theta_i - sum_j beta_j t_j
///   s.t.      t_j >= theta_i - d(x_i, y_j),  t_j >= -1,  theta in [-1, 1]^N.
/// `constant` is added to the optimum (used for exact tail corrections).
struct ReducedInstance {
    std::vector<double> alpha;
    std::vector<double> beta;
    std::vector<double> cross; // N x M distances, row-major
    double constant = 0.0;

    std::size_t reduced_size() const { return alpha.size(); }
    std::size_t other_size() const { return beta.size(); }
    double dist(std::size_t i, std::size_t j) const { return cross[i * beta.size() + j]; }
};

struct ReducedSolveOptions {
    /// Instances with N*M at most this go through the dense simplex on the full
    /// epigraph; larger ones use exact cutting planes on the same LP.
    std::size_t dense_threshold = 256;
    int max_cuts = 5000;
};

namespace detail {

inline NormResult solve_reduced_dense(const ReducedInstance& inst) {
    std::size_t N = inst.reduced_size(), M = inst.other_size();
    Polytope p;
    p.dim = N + M;
    std::vector<double> row(p.dim, 0.0);
    using K = RowTag::Kind;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < M; ++j) {
            row.assign(p.dim, 0.0);
            row[i] = 1.0;
            row[N + j] = -1.0;
            p.add_row(row, inst.dist(i, j), {K::Epigraph, +1, i, j, 0});
        }
    for (std::size_t j = 0; j < M; ++j) {
        row.assign(p.dim, 0.0);
        row[N + j] = -1.0;
        p.add_row(row, 1.0, {K::Box, -1, N + j, 0, 0});
    }
    for (std::size_t i = 0; i < N; ++i) {
        row.assign(p.dim, 0.0);
        row[i] = 1.0;
        p.add_row(row, 1.0, {K::Box, +1, i, 0, 0});
        row[i] = -1.0;
        p.add_row(row, 1.0, {K::Box, -1, i, 0, 0});
    }
    std::vector<double> c(p.dim);
    for (std::size_t i = 0; i < N; ++i) c[i] = inst.alpha[i];
    for (std::size_t j = 0; j < M; ++j) c[N + j] = -inst.beta[j];
    std::vector<double> warm(p.dim, -1.0); // theta = t = -1 is always a vertex
    LPSolution sol = solve_lp(c, p, std::span<const double>(warm));
    if (sol.status != LPStatus::Optimal)
        throw NumericalError("reduced LP did not reach an optimum");
    NormResult res;
    res.value = sol.value + inst.constant;
    res.maximizer.assign(sol.f.begin(), sol.f.begin() + N);
    res.method = "lp_reduced";
    res.iterations = sol.iterations;
    return res;
}

/// Objective F(theta) = sum alpha_i theta_i - sum beta_j max(-1, max_i(theta_i - d_ij))
/// and an exact supporting cut z >= c0 + C.theta for the epigraph term at theta.
inline double reduced_objective_and_cut(const ReducedInstance& inst, std::span<const double> theta,
                                        double& c0, std::vector<double>& C) {
    std::size_t N = inst.reduced_size(), M = inst.other_size();
    c0 = 0.0;
    C.assign(N, 0.0);
    double epi = 0.0;
    for (std::size_t j = 0; j < M; ++j) {
        double best = -1.0;
        std::size_t pick = N;
        for (std::size_t i = 0; i < N; ++i) {
            double v = theta[i] - inst.dist(i, j);
            if (v > best) {
                best = v;
                pick = i;
            }
        }
        epi += inst.beta[j] * best;
        if (pick == N)
            c0 -= inst.beta[j];
        else {
            C[pick] += inst.beta[j];
            c0 -= inst.beta[j] * inst.dist(pick, j);
        }
    }
    double lin = 0.0;
    for (std::size_t i = 0; i < N; ++i) lin += inst.alpha[i] * theta[i];
    return lin - epi;
}

inline NormResult solve_reduced_cutting(const ReducedInstance& inst,
                                        const ReducedSolveOptions& opts) {
    std::size_t N = inst.reduced_size();
    double beta_sum = std::accumulate(inst.beta.begin(), inst.beta.end(), 0.0);
    double alpha_sum = std::accumulate(inst.alpha.begin(), inst.alpha.end(), 0.0);
    double scale = std::max(1.0, alpha_sum + beta_sum);
    const double stop = 1e-12 * scale;

    // master over (theta, z): max alpha.theta - z, z >= each cut, z >= -sum beta
    Polytope master;
    master.dim = N + 1;
    std::vector<double> row(master.dim, 0.0);
    using K = RowTag::Kind;
    for (std::size_t i = 0; i < N; ++i) {
        row.assign(master.dim, 0.0);
        row[i] = 1.0;
        master.add_row(row, 1.0, {K::Box, +1, i, 0, 0});
        row[i] = -1.0;
        master.add_row(row, 1.0, {K::Box, -1, i, 0, 0});
    }
    row.assign(master.dim, 0.0);
    row[N] = -1.0;
    master.add_row(row, beta_sum, {K::Box, -1, N, 0, 0});

    std::vector<double> c(master.dim, 0.0);
    for (std::size_t i = 0; i < N; ++i) c[i] = inst.alpha[i];
    c[N] = -1.0;

    std::vector<double> theta(N, 1.0);
    std::vector<double> best_theta = theta;
    double best = -std::numeric_limits<double>::infinity();
    double c0 = 0.0;
    std::vector<double> C;
    int total_pivots = 0;
    NormResult res;
    res.method = "lp_reduced";
    for (int k = 0; k < opts.max_cuts; ++k) {
        double F = reduced_objective_and_cut(inst, theta, c0, C);
        if (F > best) {
            best = F;
            best_theta = theta;
        }
        row.assign(master.dim, 0.0);
        for (std::size_t i = 0; i < N; ++i) row[i] = C[i];
        row[N] = -1.0;
        master.add_row(row, -c0, {K::Epigraph, +1, std::size_t(k), 0, 0});
        LPSolution sol = solve_lp(c, master);
        if (sol.status != LPStatus::Optimal)
            throw NumericalError("reduced LP master did not reach an optimum");
        total_pivots += sol.iterations;
        double upper = sol.value;
        if (upper - best <= stop) {
            res.value = best + inst.constant;
            res.maximizer = best_theta;
            res.gap = std::max(0.0, upper - best);
            res.iterations = total_pivots;
            return res;
        }
        for (std::size_t i = 0; i < N; ++i) theta[i] = std::clamp(sol.f[i], -1.0, 1.0);
    }
    throw NumericalError("reduced LP: cutting-plane budget exhausted");
}

} // namespace detail

inline NormResult solve_reduced_lp(const ReducedInstance& inst, ReducedSolveOptions opts = {}) {
    if (inst.alpha.empty() || inst.beta.empty())
        throw InputError("reduced LP: both sides must be nonempty");
    if (inst.cross.size() != inst.alpha.size() * inst.beta.size())
        throw InputError("reduced LP: bad cross-distance shape");
    for (double a : inst.alpha)
        if (!(a > 0)) throw InputError("reduced LP: weights must be positive");
    for (double b : inst.beta)
        if (!(b > 0)) throw InputError("reduced LP: weights must be positive");
    if (inst.alpha.size() * inst.beta.size() <= opts.dense_threshold)
        return detail::solve_reduced_dense(inst);
    return detail::solve_reduced_cutting(inst, opts);
}

/// ||tau||_FM via the dimension-reduced epigraph LP over the smaller Jordan part.
/// Requires both Jordan parts nonempty (one-signed measures reduce to total
/// variation; callers handle that directly).
inline NormResult fm_norm_molecular_reduced(const MolecularMeasure& tau, const DistanceMatrix& d,
                                            ReducedSolveOptions opts = {}) {
    JordanPair jp = jordan_decompose(tau);
    if (jp.positive.is_zero() || jp.negative.is_zero())
        throw InputError("fm_norm_molecular_reduced: measure is one-signed; its norm is the "
                         "total variation");
    const MolecularMeasure& nu =
        jp.positive.size() <= jp.negative.size() ? jp.positive : jp.negative;
    const MolecularMeasure& mu =
        jp.positive.size() <= jp.negative.size() ? jp.negative : jp.positive;
    ReducedInstance inst;
    for (const Atom& a : nu.atoms()) inst.alpha.push_back(a.weight);
    for (const Atom& b : mu.atoms()) inst.beta.push_back(b.weight);
    inst.cross.reserve(nu.size() * mu.size());
    for (const Atom& a : nu.atoms())
        for (const Atom& b : mu.atoms()) {
            if (a.point >= d.size() || b.point >= d.size())
                throw InputError("norm: atom index outside the distance matrix");
            inst.cross.push_back(d(a.point, b.point));
        }
    return solve_reduced_lp(inst, opts);
}

} // namespace flatdist
