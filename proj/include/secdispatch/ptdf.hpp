// Shift-factor (PTDF) matrices for the base topology and every single-line
// outage, via a dense solve of the reduced bus Laplacian.

#pragma once

#include "secdispatch/network.hpp"

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace secdispatch {

class SingularTopology : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class WrongTopology : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Maps balanced nodal injections to line flows: f = H p.
/// Row r belongs to line_ids[r]; column i to bus i of the network.
struct ShiftFactorMatrix {
    std::vector<int> line_ids;
    Eigen::MatrixXd entries;
    int slack_bus = 0;

    Eigen::VectorXd flows(std::span<const double> injection) const;
};

/// Shift factors for the full network. Slack defaults to the lowest bus id.
ShiftFactorMatrix shift_factors(const Network& net, std::optional<int> slack = std::nullopt);

/// Shift factors over a subset of the network's lines (indices into
/// net.lines()). Throws SingularTopology if the subset does not connect
/// every bus.
ShiftFactorMatrix shift_factors(const Network& net, std::span<const std::size_t> line_subset,
                                std::optional<int> slack = std::nullopt);

struct ContingencyTopology {
    int outaged_line = 0;
    ShiftFactorMatrix shift_factors;  // rows: the m-1 surviving lines
    std::vector<double> limits;       // limits of the surviving lines, row-aligned
};

struct ContingencySet {
    std::vector<ContingencyTopology> valid;  // ordered by outaged line id
    std::vector<int> islanding;              // lines whose loss splits the network
};

/// One entry per single-line outage. Outage matrices are rebuilt on the
/// reduced topology (no LODF shortcut); computed in parallel, returned in
/// line-id order.
ContingencySet contingency_topologies(const Network& net);

/// True when removing line_index leaves every bus reachable.
bool survives_outage(const Network& net, std::size_t line_index);

struct TransferLimits {
    double f_ed = 0.0;  // max 1->2 transfer, intact topology
    double f_sc = 0.0;  // max 1->2 transfer that survives any single outage
};

/// Closed-form transfer limits for a two-bus, two-parallel-line network.
TransferLimits two_bus_transfer_limits(const Network& net);

/// DC flows from an explicit angle solve on the given line subset. Kept
/// independent of ShiftFactorMatrix so security checks can cross-verify.
Eigen::VectorXd dc_flows_by_angles(const Network& net, std::span<const std::size_t> line_subset,
                                   std::span<const double> injection);

}  // namespace secdispatch
