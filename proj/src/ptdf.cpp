#include "secdispatch/ptdf.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace secdispatch {

namespace {

constexpr double kSolveResidual = 1e-9;

int default_slack(const Network& net)
{
    int best = net.buses().front().id;
    for (const auto& b : net.buses()) best = std::min(best, b.id);
    return best;
}

std::vector<std::size_t> all_lines(const Network& net)
{
    std::vector<std::size_t> idx(net.m());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    return idx;
}

// Reduced Laplacian (slack row/column removed) over a line subset.
Eigen::MatrixXd reduced_laplacian(const Network& net, std::span<const std::size_t> lines,
                                  std::size_t slack_idx)
{
    const auto n = static_cast<Eigen::Index>(net.n());
    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
    for (auto li : lines) {
        const auto& l = net.lines()[li];
        const auto a = static_cast<Eigen::Index>(net.bus_index(l.from_bus));
        const auto b = static_cast<Eigen::Index>(net.bus_index(l.to_bus));
        lap(a, a) += l.susceptance;
        lap(b, b) += l.susceptance;
        lap(a, b) -= l.susceptance;
        lap(b, a) -= l.susceptance;
    }
    Eigen::MatrixXd red(n - 1, n - 1);
    const auto s = static_cast<Eigen::Index>(slack_idx);
    for (Eigen::Index i = 0, ri = 0; i < n; ++i) {
        if (i == s) continue;
        for (Eigen::Index j = 0, rj = 0; j < n; ++j) {
            if (j == s) continue;
            red(ri, rj++) = lap(i, j);
        }
        ++ri;
    }
    return red;
}

// Inverse of the reduced Laplacian, zero-padded back to n x n at the slack.
Eigen::MatrixXd padded_inverse(const Network& net, std::span<const std::size_t> lines,
                               std::size_t slack_idx)
{
    const auto n = static_cast<Eigen::Index>(net.n());
    const Eigen::MatrixXd red = reduced_laplacian(net, lines, slack_idx);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(red);
    if (!lu.isInvertible()) {
        throw SingularTopology("reduced Laplacian is singular; topology is disconnected");
    }
    const Eigen::MatrixXd inv = lu.inverse();
    const auto ident = Eigen::MatrixXd::Identity(n - 1, n - 1);
    const double resid = (red * inv - ident).norm();
    if (resid > kSolveResidual * std::max(1.0, red.norm() * inv.norm())) {
        throw SingularTopology("reduced Laplacian solve residual too large: " +
                               std::to_string(resid));
    }
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, n);
    const auto s = static_cast<Eigen::Index>(slack_idx);
    for (Eigen::Index i = 0, ri = 0; i < n; ++i) {
        if (i == s) continue;
        for (Eigen::Index j = 0, rj = 0; j < n; ++j) {
            if (j == s) continue;
            x(i, j) = inv(ri, rj++);
        }
        ++ri;
    }
    return x;
}

bool connected_over(const Network& net, std::span<const std::size_t> lines)
{
    std::vector<std::size_t> parent(net.n());
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    std::size_t components = net.n();
    for (auto li : lines) {
        const auto& l = net.lines()[li];
        auto a = find(net.bus_index(l.from_bus));
        auto b = find(net.bus_index(l.to_bus));
        if (a != b) {
            parent[a] = b;
            --components;
        }
    }
    return components == 1;
}

}  // namespace

Eigen::VectorXd ShiftFactorMatrix::flows(std::span<const double> injection) const
{
    const Eigen::Map<const Eigen::VectorXd> p(injection.data(),
                                              static_cast<Eigen::Index>(injection.size()));
    return entries * p;
}

ShiftFactorMatrix shift_factors(const Network& net, std::optional<int> slack)
{
    const auto lines = all_lines(net);
    return shift_factors(net, lines, slack);
}

ShiftFactorMatrix shift_factors(const Network& net, std::span<const std::size_t> line_subset,
                                std::optional<int> slack)
{
    const int slack_id = slack.value_or(default_slack(net));
    const auto slack_idx = net.bus_index(slack_id);
    const Eigen::MatrixXd x = padded_inverse(net, line_subset, slack_idx);

    ShiftFactorMatrix h;
    h.slack_bus = slack_id;
    h.entries.resize(static_cast<Eigen::Index>(line_subset.size()), x.cols());
    for (std::size_t r = 0; r < line_subset.size(); ++r) {
        const auto& l = net.lines()[line_subset[r]];
        const auto a = static_cast<Eigen::Index>(net.bus_index(l.from_bus));
        const auto b = static_cast<Eigen::Index>(net.bus_index(l.to_bus));
        // row of B_d * A * X for this line
        h.entries.row(static_cast<Eigen::Index>(r)) = l.susceptance * (x.row(a) - x.row(b));
        h.line_ids.push_back(l.id);
    }
    return h;
}

bool survives_outage(const Network& net, std::size_t line_index)
{
    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < net.m(); ++i) {
        if (i != line_index) rest.push_back(i);
    }
    return connected_over(net, rest);
}

ContingencySet contingency_topologies(const Network& net)
{
    const auto m = net.m();
    std::vector<std::optional<ContingencyTopology>> slots(m);

#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(m); ++k) {
        const auto e = static_cast<std::size_t>(k);
        if (!survives_outage(net, e)) continue;
        std::vector<std::size_t> rest;
        for (std::size_t i = 0; i < m; ++i) {
            if (i != e) rest.push_back(i);
        }
        ContingencyTopology ct;
        ct.outaged_line = net.lines()[e].id;
        ct.shift_factors = shift_factors(net, rest);
        for (auto i : rest) ct.limits.push_back(net.lines()[i].limit);
        slots[e] = std::move(ct);
    }

    ContingencySet out;
    for (std::size_t e = 0; e < m; ++e) {
        if (slots[e]) {
            out.valid.push_back(std::move(*slots[e]));
        } else {
            out.islanding.push_back(net.lines()[e].id);
        }
    }
    std::sort(out.valid.begin(), out.valid.end(),
              [](const auto& a, const auto& b) { return a.outaged_line < b.outaged_line; });
    std::sort(out.islanding.begin(), out.islanding.end());
    return out;
}

TransferLimits two_bus_transfer_limits(const Network& net)
{
    if (net.n() != 2 || net.m() != 2) {
        throw WrongTopology("two-bus transfer limits need n=2, m=2 (got n=" +
                            std::to_string(net.n()) + ", m=" + std::to_string(net.m()) + ")");
    }
    const auto& l1 = net.lines()[0];
    const auto& l2 = net.lines()[1];
    TransferLimits t;
    t.f_ed = (l1.susceptance + l2.susceptance) *
             std::min(l1.limit / l1.susceptance, l2.limit / l2.susceptance);
    t.f_sc = std::min(l1.limit, l2.limit);
    return t;
}

Eigen::VectorXd dc_flows_by_angles(const Network& net, std::span<const std::size_t> line_subset,
                                   std::span<const double> injection)
{
    const auto n = static_cast<Eigen::Index>(net.n());
    const std::size_t slack_idx = net.bus_index(default_slack(net));
    const Eigen::MatrixXd red = reduced_laplacian(net, line_subset, slack_idx);
    Eigen::VectorXd rhs(n - 1);
    for (Eigen::Index i = 0, ri = 0; i < n; ++i) {
        if (i == static_cast<Eigen::Index>(slack_idx)) continue;
        rhs(ri++) = injection[static_cast<std::size_t>(i)];
    }
    Eigen::LDLT<Eigen::MatrixXd> ldlt(red);
    if (ldlt.info() != Eigen::Success || !connected_over(net, line_subset)) {
        throw SingularTopology("angle solve failed: topology is disconnected");
    }
    const Eigen::VectorXd theta_red = ldlt.solve(rhs);
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0, ri = 0; i < n; ++i) {
        if (i == static_cast<Eigen::Index>(slack_idx)) continue;
        theta(i) = theta_red(ri++);
    }
    Eigen::VectorXd f(static_cast<Eigen::Index>(line_subset.size()));
    for (std::size_t r = 0; r < line_subset.size(); ++r) {
        const auto& l = net.lines()[line_subset[r]];
        f(static_cast<Eigen::Index>(r)) =
            l.susceptance * (theta(static_cast<Eigen::Index>(net.bus_index(l.from_bus))) -
                             theta(static_cast<Eigen::Index>(net.bus_index(l.to_bus))));
    }
    return f;
}

}  // namespace secdispatch
