// Dense two-phase primal simplex for the small LPs built by the dispatch
// layer. Bland's rule throughout, so the pivot sequence (and hence the
// returned vertex) is a deterministic function of the input.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace secdispatch::lp {

inline constexpr double kFeasibilityTol = 1e-7;
inline constexpr double kPivotTol = 1e-10;
inline constexpr double kBindingTol = 1e-6;

class MalformedLp : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// minimize c'x  s.t.  eq_rows x = eq_rhs,  ineq_rows x <= ineq_rhs,
///                     lower <= x <= upper.
/// Lower bounds must be finite; upper bounds may be +infinity.
struct LinearProgram {
    std::vector<double> objective;
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<std::vector<double>> eq_rows;
    std::vector<double> eq_rhs;
    std::vector<std::vector<double>> ineq_rows;
    std::vector<double> ineq_rhs;

    explicit LinearProgram(std::size_t num_vars = 0);

    std::size_t num_vars() const { return objective.size(); }
    void add_eq(std::vector<double> row, double rhs);
    void add_leq(std::vector<double> row, double rhs);
    void add_geq(std::vector<double> row, double rhs);
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

std::string_view to_string(LpStatus s);

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    std::vector<double> x;
    double objective_value = 0.0;
    /// Inequality rows with slack <= kBindingTol.
    std::vector<std::size_t> binding;
    /// Shadow prices d(objective)/d(rhs). Inequality duals are <= 0.
    std::vector<double> eq_duals;
    std::vector<double> ineq_duals;
    std::size_t iterations = 0;
};

/// Throws MalformedLp when the program violates its shape invariants.
LpSolution solve(const LinearProgram& lp);

}  // namespace secdispatch::lp
