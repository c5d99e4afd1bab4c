// Reference computations for tests. None of these share code with the
// library: small hand-rolled elimination, brute-force vertex enumeration
// and plain BFS.

#pragma once

#include "secdispatch/network.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <queue>
#include <string>
#include <vector>

namespace oracle {

using Matrix = std::vector<std::vector<double>>;

/// Gaussian elimination with partial pivoting. nullopt when singular.
inline std::optional<std::vector<double>> gauss_solve(Matrix a, std::vector<double> b)
{
    const std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r) {
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        }
        if (std::abs(a[piv][c]) < 1e-12) return std::nullopt;
        std::swap(a[c], a[piv]);
        std::swap(b[c], b[piv]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c) continue;
            const double f = a[r][c] / a[c][c];
            if (f == 0.0) continue;
            for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
            b[r] -= f * b[c];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
    return x;
}

/// min c'x s.t. A x <= b (bounds folded into A). Enumerates every square
/// subsystem of active rows; only usable for a handful of variables.
struct VertexOptimum {
    bool feasible = false;
    std::vector<double> x;
    double value = std::numeric_limits<double>::infinity();
};

inline VertexOptimum enumerate_vertices(const Matrix& a, const std::vector<double>& b,
                                        const std::vector<double>& c, double tol = 1e-9)
{
    const std::size_t rows = a.size();
    const std::size_t n = c.size();
    VertexOptimum best;
    std::vector<std::size_t> pick(n);
    // Lexicographic n-subsets of the rows.
    for (std::size_t i = 0; i < n; ++i) pick[i] = i;
    if (rows < n) return best;
    while (true) {
        Matrix sub(n);
        std::vector<double> rhs(n);
        for (std::size_t i = 0; i < n; ++i) {
            sub[i] = a[pick[i]];
            rhs[i] = b[pick[i]];
        }
        if (auto x = gauss_solve(sub, rhs)) {
            bool ok = true;
            for (std::size_t r = 0; r < rows && ok; ++r) {
                double s = 0.0;
                for (std::size_t k = 0; k < n; ++k) s += a[r][k] * (*x)[k];
                ok = s <= b[r] + tol;
            }
            if (ok) {
                double v = 0.0;
                for (std::size_t k = 0; k < n; ++k) v += c[k] * (*x)[k];
                if (v < best.value) {
                    best.feasible = true;
                    best.value = v;
                    best.x = *x;
                }
            }
        }
        std::size_t i = n;
        while (i > 0 && pick[i - 1] == rows - n + i - 1) --i;
        if (i == 0) break;
        ++pick[i - 1];
        for (std::size_t k = i; k < n; ++k) pick[k] = pick[k - 1] + 1;
    }
    return best;
}

/// Buses reachable from the first bus with line `skip` removed.
inline bool connected_without(const secdispatch::Network& net, std::optional<std::size_t> skip)
{
    const std::size_t n = net.n();
    std::vector<std::vector<std::size_t>> adj(n);
    for (std::size_t l = 0; l < net.m(); ++l) {
        if (skip && *skip == l) continue;
        const auto& ln = net.lines()[l];
        const auto u = net.bus_index(ln.from_bus);
        const auto v = net.bus_index(ln.to_bus);
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    std::vector<bool> seen(n, false);
    std::queue<std::size_t> q;
    q.push(0);
    seen[0] = true;
    std::size_t count = 1;
    while (!q.empty()) {
        const auto u = q.front();
        q.pop();
        for (auto v : adj[u]) {
            if (!seen[v]) {
                seen[v] = true;
                ++count;
                q.push(v);
            }
        }
    }
    return count == n;
}

/// DC flows by building the reduced B matrix by hand and eliminating.
inline std::vector<double> dc_flows(const secdispatch::Network& net, const std::vector<double>& p,
                                    std::optional<std::size_t> skip = std::nullopt)
{
    const std::size_t n = net.n();
    Matrix lap(n, std::vector<double>(n, 0.0));
    for (std::size_t l = 0; l < net.m(); ++l) {
        if (skip && *skip == l) continue;
        const auto& ln = net.lines()[l];
        const auto u = net.bus_index(ln.from_bus);
        const auto v = net.bus_index(ln.to_bus);
        lap[u][u] += ln.susceptance;
        lap[v][v] += ln.susceptance;
        lap[u][v] -= ln.susceptance;
        lap[v][u] -= ln.susceptance;
    }
    // Ground the last bus.
    Matrix red(n - 1, std::vector<double>(n - 1));
    std::vector<double> rhs(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t j = 0; j + 1 < n; ++j) red[i][j] = lap[i][j];
        rhs[i] = p[i];
    }
    auto theta = gauss_solve(red, rhs).value();
    theta.push_back(0.0);
    std::vector<double> f;
    for (std::size_t l = 0; l < net.m(); ++l) {
        if (skip && *skip == l) continue;
        const auto& ln = net.lines()[l];
        f.push_back(ln.susceptance *
                    (theta[net.bus_index(ln.from_bus)] - theta[net.bus_index(ln.to_bus)]));
    }
    return f;
}

inline const char* two_bus_json(double lim1 = 100, double lim2 = 100, double b1 = 1, double b2 = 1,
                                double a1 = 1, double a2 = 2)
{
    static thread_local std::string s;
    s = R"({"name":"t2","buses":[{"id":1,"alpha":)" + std::to_string(a1) +
        R"(},{"id":2,"alpha":)" + std::to_string(a2) +
        R"(}],"lines":[{"id":1,"from":1,"to":2,"susceptance":)" + std::to_string(b1) +
        R"(,"limit":)" + std::to_string(lim1) +
        R"(},{"id":2,"from":1,"to":2,"susceptance":)" + std::to_string(b2) +
        R"(,"limit":)" + std::to_string(lim2) + "}]}";
    return s.c_str();
}

}  // namespace oracle
