#include "secdispatch/dispatch.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace secdispatch {

namespace {

std::string islanding_message(const std::vector<int>& lines)
{
    std::ostringstream os;
    os << "N-1 security undefined: outage of line(s)";
    for (auto id : lines) os << ' ' << id;
    os << " islands the network";
    return os.str();
}

std::vector<double> net_injection(std::span<const double> q, const std::vector<double>& d)
{
    std::vector<double> p(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) p[i] = q[i] - d[i];
    return p;
}

// -limit <= H (q - d) <= limit as two <= rows in q.
void add_flow_rows(lp::LinearProgram& prog, const ShiftFactorMatrix& h,
                   std::span<const double> limits, const std::vector<double>& demand)
{
    const auto n = static_cast<std::size_t>(h.entries.cols());
    for (Eigen::Index r = 0; r < h.entries.rows(); ++r) {
        const double lim = limits[static_cast<std::size_t>(r)];
        if (std::isinf(lim)) continue;
        std::vector<double> row(n);
        double hd = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            row[j] = h.entries(r, static_cast<Eigen::Index>(j));
            hd += row[j] * demand[j];
        }
        std::vector<double> neg(n);
        for (std::size_t j = 0; j < n; ++j) neg[j] = -row[j];
        prog.add_leq(std::move(row), lim + hd);
        prog.add_leq(std::move(neg), lim - hd);
    }
}

}  // namespace

IslandingContingency::IslandingContingency(std::vector<int> lines)
    : std::runtime_error(islanding_message(lines)), lines_(std::move(lines))
{
}

std::string_view to_string(DispatchStatus s)
{
    switch (s) {
    case DispatchStatus::Optimal:
        return "optimal";
    case DispatchStatus::Infeasible:
        return "infeasible";
    case DispatchStatus::SolverFailure:
        return "solver_failure";
    }
    return "?";
}

std::string_view to_string(PosStatus s)
{
    switch (s) {
    case PosStatus::Ok:
        return "ok";
    case PosStatus::EdInfeasible:
        return "ed_infeasible";
    case PosStatus::ScedInfeasible:
        return "sced_infeasible";
    }
    return "?";
}

double pos_ratio(double c_ed, double c_sc)
{
    constexpr double kZeroCost = 1e-12;
    if (std::abs(c_ed) <= kZeroCost && std::abs(c_sc) <= kZeroCost) return 1.0;
    if (std::abs(c_ed) <= kZeroCost) return std::numeric_limits<double>::infinity();
    return c_sc / c_ed;
}

DispatchModel::DispatchModel(Network net)
    : net_(std::move(net)), base_(shift_factors(net_)), contingencies_(contingency_topologies(net_))
{
}

void DispatchModel::require_valid(const InputInstance& inst) const
{
    const auto rep = validate_instance(net_, inst);
    if (!rep.valid()) throw InvalidInstance(rep.errors.front());
}

lp::LinearProgram DispatchModel::build_lp(const InputInstance& inst,
                                          bool security_constrained) const
{
    require_valid(inst);
    const auto n = net_.n();
    lp::LinearProgram prog(n);
    prog.objective = net_.alphas();
    prog.upper = inst.gen_capacity;

    prog.add_eq(std::vector<double>(n, 1.0), inst.total_demand());

    std::vector<double> base_limits;
    for (const auto& l : net_.lines()) base_limits.push_back(l.limit);
    add_flow_rows(prog, base_, base_limits, inst.demand);

    if (security_constrained) {
        for (const auto& ct : contingencies_.valid) {
            add_flow_rows(prog, ct.shift_factors, ct.limits, inst.demand);
        }
    }
    return prog;
}

DispatchSolution DispatchModel::solve(const InputInstance& inst, bool security_constrained) const
{
    if (security_constrained && !contingencies_.islanding.empty()) {
        throw IslandingContingency(contingencies_.islanding);
    }
    const auto prog = build_lp(inst, security_constrained);
    const auto res = lp::solve(prog);

    DispatchSolution sol;
    if (res.status == lp::LpStatus::Infeasible) {
        sol.status = DispatchStatus::Infeasible;
        sol.cost = std::numeric_limits<double>::quiet_NaN();
        return sol;
    }
    if (res.status != lp::LpStatus::Optimal) {
        sol.status = DispatchStatus::SolverFailure;
        sol.cost = std::numeric_limits<double>::quiet_NaN();
        return sol;
    }
    sol.status = DispatchStatus::Optimal;
    sol.generation = res.x;
    sol.cost = res.objective_value;

    const auto p = net_injection(sol.generation, inst.demand);
    const Eigen::VectorXd f = base_.flows(p);
    sol.flows.assign(f.data(), f.data() + f.size());
    for (std::size_t e = 0; e < net_.m(); ++e) {
        const auto& l = net_.lines()[e];
        if (std::abs(sol.flows[e]) >= l.limit - kFlowTol) sol.binding_lines.push_back(l.id);
    }
    if (security_constrained) {
        for (const auto& ct : contingencies_.valid) {
            const Eigen::VectorXd fc = ct.shift_factors.flows(p);
            for (Eigen::Index r = 0; r < fc.size(); ++r) {
                if (std::abs(fc(r)) >= ct.limits[static_cast<std::size_t>(r)] - kFlowTol) {
                    sol.binding_contingencies.push_back(
                        {ct.outaged_line, ct.shift_factors.line_ids[static_cast<std::size_t>(r)]});
                }
            }
        }
    }
    return sol;
}

DispatchSolution DispatchModel::solve_ed(const InputInstance& inst) const
{
    return solve(inst, false);
}

DispatchSolution DispatchModel::solve_sced(const InputInstance& inst) const
{
    return solve(inst, true);
}

SecurityReport DispatchModel::check_n1_security(const InputInstance& inst,
                                                std::span<const double> generation,
                                                double tol) const
{
    require_valid(inst);
    if (generation.size() != net_.n()) {
        throw InvalidInstance("generation vector has wrong length");
    }
    const auto p = net_injection(generation, inst.demand);
    const double imbalance = std::accumulate(p.begin(), p.end(), 0.0);
    if (std::abs(imbalance) > kBalanceTol) {
        throw InvalidInstance("generation is not balanced against demand (mismatch " +
                              std::to_string(imbalance) + " MW)");
    }

    SecurityReport rep;
    auto scan = [&](std::optional<int> outaged, const std::vector<std::size_t>& lines) {
        const Eigen::VectorXd f = dc_flows_by_angles(net_, lines, p);
        for (std::size_t r = 0; r < lines.size(); ++r) {
            const auto& l = net_.lines()[lines[r]];
            const double excess = std::abs(f(static_cast<Eigen::Index>(r))) - l.limit;
            if (excess > tol) {
                rep.violations.push_back(
                    {outaged, l.id, f(static_cast<Eigen::Index>(r)), l.limit, excess});
                rep.max_excess = std::max(rep.max_excess, excess);
            }
        }
    };

    std::vector<std::size_t> all(net_.m());
    std::iota(all.begin(), all.end(), std::size_t{0});
    scan(std::nullopt, all);

    for (std::size_t e = 0; e < net_.m(); ++e) {
        if (!survives_outage(net_, e)) continue;
        std::vector<std::size_t> rest;
        for (auto i : all) {
            if (i != e) rest.push_back(i);
        }
        scan(net_.lines()[e].id, rest);
        ++rep.contingencies_checked;
    }
    return rep;
}

PosReport DispatchModel::price_of_security(const InputInstance& inst) const
{
    PosReport rep;
    rep.ed_solution = solve_ed(inst);
    if (!rep.ed_solution.optimal()) {
        rep.status = PosStatus::EdInfeasible;
        return rep;
    }
    rep.sc_solution = solve_sced(inst);
    if (!rep.sc_solution.optimal()) {
        rep.status = PosStatus::ScedInfeasible;
        return rep;
    }
    rep.c_ed = rep.ed_solution.cost;
    rep.c_sc = rep.sc_solution.cost;
    rep.pos = pos_ratio(rep.c_ed, rep.c_sc);
    return rep;
}

DispatchSolution solve_ed(const Network& net, const InputInstance& inst)
{
    return DispatchModel(net).solve_ed(inst);
}

DispatchSolution solve_sced(const Network& net, const InputInstance& inst)
{
    return DispatchModel(net).solve_sced(inst);
}

SecurityReport check_n1_security(const Network& net, const InputInstance& inst,
                                 std::span<const double> generation)
{
    return DispatchModel(net).check_n1_security(inst, generation);
}

PosReport price_of_security(const Network& net, const InputInstance& inst)
{
    return DispatchModel(net).price_of_security(inst);
}

}  // namespace secdispatch
