#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "flatdist/polytope.hpp"

namespace flatdist {

enum class LPStatus { Optimal, Unbounded, Infeasible };

struct LPSolution {
    LPStatus status = LPStatus::Optimal;
    std::vector<double> f;
    double value = 0.0;
    int iterations = 0;
};

namespace detail {

/// Dense full-tableau simplex for  max c.x  s.t.  A x <= b, x >= 0.
/// Two phases (artificials only for rows with negative rhs), Bland's rule for
/// both the entering and the leaving variable, so no cycling. Deterministic.
class SimplexCore {
public:
    SimplexCore(std::vector<double> A, std::vector<double> b, std::vector<double> c)
        : m_(b.size()), n_(c.size()), A_(std::move(A)), b_(std::move(b)), c_(std::move(c)) {}

    LPSolution solve(int max_iters = 200000) {
        build();
        LPSolution out;
        if (n_art_ > 0) {
            std::vector<double> phase1(cols_, 0.0);
            for (std::size_t j = cols_ - n_art_; j < cols_; ++j) phase1[j] = -1.0;
            set_objective(phase1);
            LPStatus st = iterate(max_iters, /*allow_artificials=*/true);
            if (st != LPStatus::Optimal) return {LPStatus::Infeasible, {}, 0.0, iterations_};
            if (objective_value() < -10.0 * kFeasibilityTol)
                return {LPStatus::Infeasible, {}, 0.0, iterations_};
            evict_artificials();
        }
        std::vector<double> phase2(cols_, 0.0);
        std::copy(c_.begin(), c_.end(), phase2.begin());
        set_objective(phase2);
        LPStatus st = iterate(max_iters, /*allow_artificials=*/false);
        out.status = st;
        out.iterations = iterations_;
        if (st != LPStatus::Optimal) return out;
        out.f.assign(n_, 0.0);
        for (std::size_t r = 0; r < m_; ++r)
            if (basis_[r] < n_) out.f[basis_[r]] = rhs(r);
        out.value = 0.0;
        for (std::size_t j = 0; j < n_; ++j) out.value += c_[j] * out.f[j];
        return out;
    }

private:
    static constexpr double kPivotTol = 1e-9;

    std::size_t m_, n_;
    std::vector<double> A_, b_, c_;
    std::size_t cols_ = 0, n_art_ = 0;
    std::vector<double> t_;   // (m_+1) x (cols_+1); last row = reduced costs, last col = rhs
    std::vector<std::size_t> basis_;
    int iterations_ = 0;

    double& at(std::size_t r, std::size_t j) { return t_[r * (cols_ + 1) + j]; }
    double rhs(std::size_t r) const { return t_[r * (cols_ + 1) + cols_]; }
    double objective_value() { return -at(m_, cols_); }

    void build() {
        n_art_ = 0;
        for (double v : b_)
            if (v < 0.0) ++n_art_;
        cols_ = n_ + m_ + n_art_;
        t_.assign((m_ + 1) * (cols_ + 1), 0.0);
        basis_.assign(m_, 0);
        std::size_t art = n_ + m_;
        for (std::size_t r = 0; r < m_; ++r) {
            double sgn = b_[r] < 0.0 ? -1.0 : 1.0;
            for (std::size_t j = 0; j < n_; ++j) at(r, j) = sgn * A_[r * n_ + j];
            at(r, n_ + r) = sgn;
            at(r, cols_) = sgn * b_[r];
            if (sgn < 0) {
                at(r, art) = 1.0;
                basis_[r] = art++;
            } else {
                basis_[r] = n_ + r;
            }
        }
    }

    // Install objective coefficients and eliminate the basic columns.
    void set_objective(const std::vector<double>& c) {
        for (std::size_t j = 0; j < cols_; ++j) at(m_, j) = c[j];
        at(m_, cols_) = 0.0;
        for (std::size_t r = 0; r < m_; ++r) {
            double cb = c[basis_[r]];
            if (cb == 0.0) continue;
            for (std::size_t j = 0; j <= cols_; ++j) at(m_, j) -= cb * at(r, j);
        }
    }

    void pivot(std::size_t pr, std::size_t pc) {
        double piv = at(pr, pc);
        for (std::size_t j = 0; j <= cols_; ++j) at(pr, j) /= piv;
        at(pr, pc) = 1.0;
        for (std::size_t r = 0; r <= m_; ++r) {
            if (r == pr) continue;
            double factor = at(r, pc);
            if (factor == 0.0) continue;
            for (std::size_t j = 0; j <= cols_; ++j) at(r, j) -= factor * at(pr, j);
            at(r, pc) = 0.0;
        }
        basis_[pr] = pc;
        ++iterations_;
    }

    LPStatus iterate(int max_iters, bool allow_artificials) {
        std::size_t limit = allow_artificials ? cols_ : n_ + m_;
        while (true) {
            if (iterations_ >= max_iters)
                throw NumericalError("simplex: pivot budget exhausted");
            // Bland: smallest-index column with positive reduced cost
            std::size_t enter = limit;
            for (std::size_t j = 0; j < limit; ++j)
                if (at(m_, j) > kPivotTol) {
                    enter = j;
                    break;
                }
            if (enter == limit) return LPStatus::Optimal;
            // ratio test; exact ties (the degenerate case Bland guards against)
            // are resolved by the smallest basis index
            std::size_t leave = m_;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t r = 0; r < m_; ++r) {
                double a = at(r, enter);
                if (a <= kPivotTol) continue;
                double ratio = rhs(r) / a;
                if (leave == m_ || ratio < best ||
                    (ratio == best && basis_[r] < basis_[leave])) {
                    best = ratio;
                    leave = r;
                }
            }
            if (leave == m_) return LPStatus::Unbounded;
            pivot(leave, enter);
        }
    }

    // After phase 1: pivot basic artificials out where possible; a row whose
    // non-artificial entries are all zero is redundant and its artificial may
    // stay basic at level zero (artificials are barred from re-entering).
    void evict_artificials() {
        for (std::size_t r = 0; r < m_; ++r) {
            if (basis_[r] < n_ + m_) continue;
            std::size_t pc = n_ + m_;
            for (std::size_t j = 0; j < n_ + m_; ++j)
                if (std::abs(at(r, j)) > kPivotTol) {
                    pc = j;
                    break;
                }
            if (pc < n_ + m_) pivot(r, pc);
        }
    }
};

} // namespace detail

/// Maximizes c.f over a polytope. The optional warm start must be a feasible
/// point; the solve is shifted there so the simplex starts phase 2 immediately
/// (an infeasible or absent warm start falls back to the origin, with phase 1
/// engaged automatically when the origin is infeasible).
inline LPSolution solve_lp(std::span<const double> c, const Polytope& p,
                           std::optional<std::span<const double>> warm_start = {}) {
    std::size_t n = p.dim;
    if (n == 0 || c.size() != n) throw InputError("solve_lp: dimension mismatch");
    std::vector<double> v(n, 0.0);
    if (warm_start && warm_start->size() == n && contains(p, *warm_start))
        v.assign(warm_start->begin(), warm_start->end());

    std::size_t m = p.rows();
    std::vector<double> A(m * 2 * n);
    std::vector<double> b(m);
    for (std::size_t r = 0; r < m; ++r) {
        auto row = p.row(r);
        double shift = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            A[r * 2 * n + j] = row[j];
            A[r * 2 * n + n + j] = -row[j];
            shift += row[j] * v[j];
        }
        b[r] = p.b[r] - shift;
    }
    std::vector<double> cc(2 * n);
    for (std::size_t j = 0; j < n; ++j) {
        cc[j] = c[j];
        cc[n + j] = -c[j];
    }
    LPSolution sol = detail::SimplexCore(std::move(A), std::move(b), std::move(cc)).solve();
    if (sol.status != LPStatus::Optimal) return sol;
    LPSolution out;
    out.status = LPStatus::Optimal;
    out.iterations = sol.iterations;
    out.f.assign(n, 0.0);
    out.value = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        out.f[j] = v[j] + sol.f[j] - sol.f[n + j];
        out.value += c[j] * out.f[j];
    }
    return out;
}

} // namespace flatdist
