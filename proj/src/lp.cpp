#include "secdispatch/lp.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace secdispatch::lp {

namespace {

constexpr double kOptimalityTol = 1e-9;
constexpr double kRatioTieTol = 1e-12;

enum class RowKind { Equality, Inequality, UpperBound };

struct StdRow {
    RowKind kind;
    std::size_t source;  // index into eq/ineq rows, or variable index
    double sign;         // +1, or -1 when flipped to get rhs >= 0
};

// Dense tableau: rows x (cols + 1), last column is the rhs.
class Tableau {
public:
    Tableau(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * (cols + 1), 0.0), cost_(cols + 1, 0.0)
    {
    }

    double& at(std::size_t r, std::size_t c) { return data_[r * (cols_ + 1) + c]; }
    double at(std::size_t r, std::size_t c) const { return data_[r * (cols_ + 1) + c]; }
    double& rhs(std::size_t r) { return at(r, cols_); }
    double rhs(std::size_t r) const { return at(r, cols_); }
    std::vector<double>& cost() { return cost_; }  // reduced costs, last = -objective
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    void pivot(std::size_t pr, std::size_t pc)
    {
        const std::size_t w = cols_ + 1;
        double* prow = &data_[pr * w];
        const double inv = 1.0 / prow[pc];
        for (std::size_t c = 0; c < w; ++c) prow[c] *= inv;
        prow[pc] = 1.0;
        for (std::size_t r = 0; r < rows_; ++r) {
            if (r == pr) continue;
            double* row = &data_[r * w];
            const double f = row[pc];
            if (f == 0.0) continue;
            for (std::size_t c = 0; c < w; ++c) row[c] -= f * prow[c];
            row[pc] = 0.0;
        }
        const double f = cost_[pc];
        if (f != 0.0) {
            for (std::size_t c = 0; c < w; ++c) cost_[c] -= f * prow[c];
            cost_[pc] = 0.0;
        }
    }

    void drop_row(std::size_t r)
    {
        const std::size_t w = cols_ + 1;
        data_.erase(data_.begin() + static_cast<std::ptrdiff_t>(r * w),
                    data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * w));
        --rows_;
    }

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> data_;
    std::vector<double> cost_;
};

enum class PhaseResult { Optimal, Unbounded };

// Bland's rule: lowest-index improving column; among minimum-ratio rows the
// one whose basic variable has the lowest index.
PhaseResult run_simplex(Tableau& t, std::vector<std::size_t>& basis,
                        const std::vector<bool>& may_enter, std::size_t& iterations)
{
    for (;;) {
        std::size_t enter = t.cols();
        for (std::size_t c = 0; c < t.cols(); ++c) {
            if (may_enter[c] && t.cost()[c] < -kOptimalityTol) {
                enter = c;
                break;
            }
        }
        if (enter == t.cols()) return PhaseResult::Optimal;

        std::size_t leave = t.rows();
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < t.rows(); ++r) {
            const double a = t.at(r, enter);
            if (a <= kPivotTol) continue;
            const double ratio = std::max(t.rhs(r), 0.0) / a;
            if (ratio < best - kRatioTieTol ||
                (ratio <= best + kRatioTieTol && leave < t.rows() && basis[r] < basis[leave])) {
                if (ratio < best - kRatioTieTol || leave == t.rows()) best = ratio;
                leave = r;
            }
        }
        if (leave == t.rows()) return PhaseResult::Unbounded;
        t.pivot(leave, enter);
        basis[leave] = enter;
        ++iterations;
    }
}

void check_shape(const LinearProgram& lp)
{
    const auto n = lp.num_vars();
    if (lp.lower.size() != n || lp.upper.size() != n) {
        throw MalformedLp("bounds length differs from objective length");
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (!std::isfinite(lp.objective[j])) {
            throw MalformedLp("objective coefficient " + std::to_string(j) + " is not finite");
        }
        if (!std::isfinite(lp.lower[j])) {
            throw MalformedLp("lower bound of variable " + std::to_string(j) + " must be finite");
        }
        if (std::isnan(lp.upper[j]) || lp.lower[j] > lp.upper[j]) {
            throw MalformedLp("variable " + std::to_string(j) + " has lower > upper");
        }
    }
    auto check_rows = [n](const std::vector<std::vector<double>>& rows,
                          const std::vector<double>& rhs, const char* what) {
        if (rows.size() != rhs.size()) {
            throw MalformedLp(std::string(what) + " rows and rhs differ in count");
        }
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != n) {
                throw MalformedLp(std::string(what) + " row " + std::to_string(i) +
                                  " has wrong length");
            }
            for (double v : rows[i]) {
                if (!std::isfinite(v)) {
                    throw MalformedLp(std::string(what) + " row " + std::to_string(i) +
                                      " has a non-finite coefficient");
                }
            }
            if (!std::isfinite(rhs[i])) {
                throw MalformedLp(std::string(what) + " rhs " + std::to_string(i) +
                                  " is not finite");
            }
        }
    };
    check_rows(lp.eq_rows, lp.eq_rhs, "equality");
    check_rows(lp.ineq_rows, lp.ineq_rhs, "inequality");
}

}  // namespace

std::string_view to_string(LpStatus s)
{
    switch (s) {
    case LpStatus::Optimal:
        return "optimal";
    case LpStatus::Infeasible:
        return "infeasible";
    case LpStatus::Unbounded:
        return "unbounded";
    }
    return "?";
}

LinearProgram::LinearProgram(std::size_t num_vars)
    : objective(num_vars, 0.0),
      lower(num_vars, 0.0),
      upper(num_vars, std::numeric_limits<double>::infinity())
{
}

void LinearProgram::add_eq(std::vector<double> row, double rhs)
{
    eq_rows.push_back(std::move(row));
    eq_rhs.push_back(rhs);
}

void LinearProgram::add_leq(std::vector<double> row, double rhs)
{
    ineq_rows.push_back(std::move(row));
    ineq_rhs.push_back(rhs);
}

void LinearProgram::add_geq(std::vector<double> row, double rhs)
{
    for (auto& v : row) v = -v;
    add_leq(std::move(row), -rhs);
}

LpSolution solve(const LinearProgram& lp)
{
    check_shape(lp);
    const std::size_t n = lp.num_vars();

    // Standard form over y = x - lower >= 0.
    std::vector<StdRow> rows;
    std::vector<std::vector<double>> coef;
    std::vector<double> rhs;
    auto shifted_rhs = [&](const std::vector<double>& a, double b) {
        for (std::size_t j = 0; j < n; ++j) b -= a[j] * lp.lower[j];
        return b;
    };
    for (std::size_t i = 0; i < lp.eq_rows.size(); ++i) {
        rows.push_back({RowKind::Equality, i, 1.0});
        coef.push_back(lp.eq_rows[i]);
        rhs.push_back(shifted_rhs(lp.eq_rows[i], lp.eq_rhs[i]));
    }
    for (std::size_t i = 0; i < lp.ineq_rows.size(); ++i) {
        rows.push_back({RowKind::Inequality, i, 1.0});
        coef.push_back(lp.ineq_rows[i]);
        rhs.push_back(shifted_rhs(lp.ineq_rows[i], lp.ineq_rhs[i]));
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (std::isinf(lp.upper[j])) continue;
        std::vector<double> unit(n, 0.0);
        unit[j] = 1.0;
        rows.push_back({RowKind::UpperBound, j, 1.0});
        coef.push_back(std::move(unit));
        rhs.push_back(lp.upper[j] - lp.lower[j]);
    }

    // Columns: structural | one slack per non-equality row | artificials.
    const std::size_t num_rows = rows.size();
    std::vector<std::size_t> slack_col(num_rows, 0);
    std::size_t cols = n;
    for (std::size_t r = 0; r < num_rows; ++r) {
        if (rows[r].kind != RowKind::Equality) slack_col[r] = cols++;
    }
    const std::size_t first_artificial = cols;
    std::vector<std::size_t> art_col(num_rows, 0);
    for (std::size_t r = 0; r < num_rows; ++r) {
        if (rhs[r] < 0.0) rows[r].sign = -1.0;
        const bool slack_basic = rows[r].kind != RowKind::Equality && rows[r].sign > 0.0;
        if (!slack_basic) art_col[r] = cols++;
    }

    Tableau t(num_rows, cols);
    std::vector<std::size_t> basis(num_rows);
    for (std::size_t r = 0; r < num_rows; ++r) {
        const double s = rows[r].sign;
        for (std::size_t j = 0; j < n; ++j) t.at(r, j) = s * coef[r][j];
        if (rows[r].kind != RowKind::Equality) t.at(r, slack_col[r]) = s;
        t.rhs(r) = s * rhs[r];
        if (art_col[r]) {
            t.at(r, art_col[r]) = 1.0;
            basis[r] = art_col[r];
        } else {
            basis[r] = slack_col[r];
        }
    }

    LpSolution sol;
    std::vector<bool> may_enter(cols, true);

    // Phase 1: minimize the sum of artificials.
    if (first_artificial < cols) {
        auto& cost = t.cost();
        std::fill(cost.begin(), cost.end(), 0.0);
        for (std::size_t r = 0; r < num_rows; ++r) {
            if (!art_col[r]) continue;
            for (std::size_t c = 0; c <= cols; ++c) {
                if (c < first_artificial || c == cols) cost[c] -= t.at(r, c);
            }
        }
        run_simplex(t, basis, may_enter, sol.iterations);
        const double infeasibility = -t.cost()[cols];
        if (infeasibility > kFeasibilityTol) {
            sol.status = LpStatus::Infeasible;
            sol.objective_value = std::numeric_limits<double>::quiet_NaN();
            return sol;
        }
        // Drive remaining (zero-level) artificials out of the basis.
        for (std::size_t r = 0; r < t.rows();) {
            if (basis[r] < first_artificial) {
                ++r;
                continue;
            }
            std::size_t pc = first_artificial;
            for (std::size_t c = 0; c < first_artificial; ++c) {
                if (std::abs(t.at(r, c)) > kPivotTol) {
                    pc = c;
                    break;
                }
            }
            if (pc < first_artificial) {
                t.pivot(r, pc);
                basis[r] = pc;
                ++r;
            } else {
                // Redundant row.
                t.drop_row(r);
                basis.erase(basis.begin() + static_cast<std::ptrdiff_t>(r));
                rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(r));
                coef.erase(coef.begin() + static_cast<std::ptrdiff_t>(r));
                slack_col.erase(slack_col.begin() + static_cast<std::ptrdiff_t>(r));
            }
        }
        for (std::size_t c = first_artificial; c < cols; ++c) may_enter[c] = false;
    }

    // Phase 2: original objective, priced out against the current basis.
    std::vector<double> col_cost(cols, 0.0);
    for (std::size_t j = 0; j < n; ++j) col_cost[j] = lp.objective[j];
    {
        auto& cost = t.cost();
        for (std::size_t c = 0; c < cols; ++c) cost[c] = col_cost[c];
        cost[cols] = 0.0;
        for (std::size_t r = 0; r < t.rows(); ++r) {
            const double cb = col_cost[basis[r]];
            if (cb == 0.0) continue;
            for (std::size_t c = 0; c <= cols; ++c) cost[c] -= cb * t.at(r, c);
        }
    }
    if (run_simplex(t, basis, may_enter, sol.iterations) == PhaseResult::Unbounded) {
        sol.status = LpStatus::Unbounded;
        sol.objective_value = -std::numeric_limits<double>::infinity();
        return sol;
    }

    sol.status = LpStatus::Optimal;
    sol.x = lp.lower;
    for (std::size_t r = 0; r < t.rows(); ++r) {
        if (basis[r] < n) sol.x[basis[r]] += t.rhs(r);
    }
    for (std::size_t j = 0; j < n; ++j) {
        sol.x[j] = std::min(sol.x[j], lp.upper[j]);
        sol.x[j] = std::max(sol.x[j], lp.lower[j]);
    }
    sol.objective_value = 0.0;
    for (std::size_t j = 0; j < n; ++j) sol.objective_value += lp.objective[j] * sol.x[j];

    for (std::size_t i = 0; i < lp.ineq_rows.size(); ++i) {
        double ax = 0.0;
        for (std::size_t j = 0; j < n; ++j) ax += lp.ineq_rows[i][j] * sol.x[j];
        if (lp.ineq_rhs[i] - ax <= kBindingTol) sol.binding.push_back(i);
    }

    // Duals from the final basis: B' y = c_B over the kept standard-form rows.
    const auto kept = static_cast<Eigen::Index>(t.rows());
    sol.eq_duals.assign(lp.eq_rows.size(), 0.0);
    sol.ineq_duals.assign(lp.ineq_rows.size(), 0.0);
    if (kept > 0) {
        Eigen::MatrixXd bmat = Eigen::MatrixXd::Zero(kept, kept);
        Eigen::VectorXd cb(kept);
        for (Eigen::Index k = 0; k < kept; ++k) {
            const std::size_t col = basis[static_cast<std::size_t>(k)];
            cb(k) = col_cost[col];
            for (Eigen::Index r = 0; r < kept; ++r) {
                const auto& row = rows[static_cast<std::size_t>(r)];
                double v = 0.0;
                if (col < n) {
                    v = row.sign * coef[static_cast<std::size_t>(r)][col];
                } else if (row.kind != RowKind::Equality &&
                           slack_col[static_cast<std::size_t>(r)] == col) {
                    v = row.sign;
                }
                bmat(r, k) = v;
            }
        }
        const Eigen::VectorXd y = bmat.transpose().fullPivLu().solve(cb);
        for (Eigen::Index r = 0; r < kept; ++r) {
            const auto& row = rows[static_cast<std::size_t>(r)];
            const double dual = row.sign * y(r);
            if (row.kind == RowKind::Equality) {
                sol.eq_duals[row.source] = dual;
            } else if (row.kind == RowKind::Inequality) {
                sol.ineq_duals[row.source] = dual;
            }
        }
    }
    return sol;
}

}  // namespace secdispatch::lp
