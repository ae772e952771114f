#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace flatdist {

/// Raised for invalid arguments or malformed data. The CLI maps this to exit code 2.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical procedure fails to converge within its budget
/// (quadrature subdivisions, refinement halvings, pivot caps). CLI exit code 3.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Feasibility tolerance shared by polytope membership checks and the LP solver.
inline constexpr double kFeasibilityTol = 1e-9;

/// Outcome of a norm or distance computation.
///
/// `maximizer` holds the optimal test-function values: one entry per support
/// point for the full LP routes, or one entry per reduced-side point for
/// "lp_reduced" / "discretize_lp". `gap` is a certified bound on
/// |value - exact|; it is zero for the exact finite routes.
struct NormResult {
    double value = 0.0;
    std::vector<double> maximizer;
    std::string method;
    double gap = 0.0;
    int iterations = 0;
    int refinements = 0;
    std::optional<double> theta0;
};

} // namespace flatdist
