// Economic dispatch (ED), preventive N-1 security-constrained economic
// dispatch (SCED), independent N-1 verification, and the price of security.

#pragma once

#include "secdispatch/lp.hpp"
#include "secdispatch/network.hpp"
#include "secdispatch/ptdf.hpp"

#include <optional>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <vector>

namespace secdispatch {

inline constexpr double kBalanceTol = 1e-6;
inline constexpr double kFlowTol = 1e-6;

/// SCED refuses to certify a topology that has a bridge.
class IslandingContingency : public std::runtime_error {
public:
    explicit IslandingContingency(std::vector<int> lines);
    const std::vector<int>& lines() const { return lines_; }

private:
    std::vector<int> lines_;
};

class InvalidInstance : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class DispatchStatus { Optimal, Infeasible, SolverFailure };

std::string_view to_string(DispatchStatus s);

struct ContingencyBinding {
    int outaged_line = 0;
    int constrained_line = 0;

    bool operator==(const ContingencyBinding&) const = default;
};

struct DispatchSolution {
    DispatchStatus status = DispatchStatus::Infeasible;
    std::vector<double> generation;  // MW per bus
    std::vector<double> flows;       // base-topology flows per line, MW
    double cost = 0.0;               // $/h
    std::vector<int> binding_lines;
    std::vector<ContingencyBinding> binding_contingencies;  // SCED only

    bool optimal() const { return status == DispatchStatus::Optimal; }
};

struct FlowViolation {
    std::optional<int> outaged_line;  // nullopt for the intact topology
    int line = 0;
    double flow = 0.0;
    double limit = 0.0;
    double excess = 0.0;
};

struct SecurityReport {
    std::vector<FlowViolation> violations;
    double max_excess = 0.0;
    std::size_t contingencies_checked = 0;

    bool secure() const { return violations.empty(); }
};

enum class PosStatus { Ok, EdInfeasible, ScedInfeasible };

std::string_view to_string(PosStatus s);

struct PosReport {
    PosStatus status = PosStatus::Ok;
    double c_ed = 0.0;
    double c_sc = 0.0;
    double pos = 1.0;
    DispatchSolution ed_solution;
    DispatchSolution sc_solution;

    bool ok() const { return status == PosStatus::Ok; }
};

/// c_sc / c_ed, with 0/0 defined as 1.
double pos_ratio(double c_ed, double c_sc);

/// Network plus its precomputed base and outage shift factors. Immutable
/// after construction and safe to share between threads.
class DispatchModel {
public:
    explicit DispatchModel(Network net);

    const Network& network() const { return net_; }
    const ShiftFactorMatrix& base_shift_factors() const { return base_; }
    const ContingencySet& contingencies() const { return contingencies_; }

    DispatchSolution solve_ed(const InputInstance& inst) const;
    /// Throws IslandingContingency if any single outage splits the network.
    DispatchSolution solve_sced(const InputInstance& inst) const;

    /// Recomputes base and post-outage flows for a fixed dispatch with a
    /// direct angle solve per topology.
    SecurityReport check_n1_security(const InputInstance& inst, std::span<const double> generation,
                                     double tol = kFlowTol) const;

    PosReport price_of_security(const InputInstance& inst) const;

    /// The LP handed to the solver; exposed for inspection and tests.
    lp::LinearProgram build_lp(const InputInstance& inst, bool security_constrained) const;

private:
    DispatchSolution solve(const InputInstance& inst, bool security_constrained) const;
    void require_valid(const InputInstance& inst) const;

    Network net_;
    ShiftFactorMatrix base_;
    ContingencySet contingencies_;
};

DispatchSolution solve_ed(const Network& net, const InputInstance& inst);
DispatchSolution solve_sced(const Network& net, const InputInstance& inst);
SecurityReport check_n1_security(const Network& net, const InputInstance& inst,
                                 std::span<const double> generation);
PosReport price_of_security(const Network& net, const InputInstance& inst);

}  // namespace secdispatch
