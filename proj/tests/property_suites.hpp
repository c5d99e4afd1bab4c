// Randomized two-bus property suites evaluated through the LP path. Shared
// by the unit tests and the acceptance binary.

#pragma once

#include "secdispatch/dispatch.hpp"
#include "secdispatch/two_bus.hpp"

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace suites {

struct SuiteResult {
    std::size_t checked = 0;
    std::size_t failures = 0;
    std::size_t skipped = 0;  // draws where an instance fell outside the feasible set
    double worst_violation = 0.0;
    std::string first_failure;

    void record(double violation, double slack, const std::string& what)
    {
        ++checked;
        worst_violation = std::max(worst_violation, violation);
        if (violation > slack) {
            if (failures == 0) first_failure = what;
            ++failures;
        }
    }
};

inline constexpr double kPropertySlack = 1e-9;

struct RandomTwoBus {
    secdispatch::DispatchModel model;
    secdispatch::TwoBusParams params;
};

inline RandomTwoBus random_two_bus(std::mt19937_64& rng)
{
    using namespace secdispatch;
    std::uniform_real_distribution<double> lim(20.0, 200.0), b(0.2, 5.0), a(1.0, 50.0),
        ratio(1.0, 4.0), coin(0.0, 1.0);
    const double a1 = a(rng);
    const double a2 = coin(rng) < 0.1 ? a1 : a1 * ratio(rng);
    Network net("rand2", {{1, a1}, {2, a2}},
                {{1, 1, 2, b(rng), lim(rng)}, {2, 1, 2, b(rng), lim(rng)}});
    const auto t = two_bus_transfer_limits(net);
    return {DispatchModel(std::move(net)), TwoBusParams::make(a1, a2, t.f_ed, t.f_sc)};
}

inline std::string describe(const secdispatch::InputInstance& w)
{
    return "qbar=(" + std::to_string(w.gen_capacity[0]) + "," + std::to_string(w.gen_capacity[1]) +
           ") d=(" + std::to_string(w.demand[0]) + "," + std::to_string(w.demand[1]) + ")";
}

/// Less cheap capacity never raises PoS.
inline SuiteResult capacity_monotonicity(std::uint64_t seed, std::size_t samples)
{
    using namespace secdispatch;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    SuiteResult r;
    while (r.checked < samples) {
        auto inst = random_two_bus(rng);
        const double fed = inst.params.f_ed;
        const double d1 = 1.5 * fed * u(rng), d2 = 1.5 * fed * u(rng);
        const double q1 = 1.5 * (d1 + d2) * u(rng);
        const double q1p = q1 * u(rng);
        const double q2 = u(rng) < 0.5 ? kUnlimited : (d1 + d2) * (0.5 + 1.5 * u(rng));
        const InputInstance w{{q1, q2}, {d1, d2}};
        const InputInstance wp{{q1p, q2}, {d1, d2}};
        const auto a = inst.model.price_of_security(w);
        const auto b = inst.model.price_of_security(wp);
        if (!a.ok() || !b.ok()) {
            ++r.skipped;
            continue;
        }
        r.record(b.pos - a.pos, kPropertySlack, describe(w) + " qbar1'=" + std::to_string(q1p));
    }
    return r;
}

/// More cheap-side demand (expensive-side demand fixed) never raises PoS.
inline SuiteResult cheap_demand_monotonicity(std::uint64_t seed, std::size_t samples)
{
    using namespace secdispatch;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    SuiteResult r;
    while (r.checked < samples) {
        auto inst = random_two_bus(rng);
        const double fed = inst.params.f_ed;
        const double d2 = 1.5 * fed * u(rng);
        const double d1 = 1.5 * fed * u(rng);
        const double d1p = d1 + fed * u(rng);
        const double q1 = u(rng) < 0.5 ? kUnlimited : (d1p + d2) * (1.0 + u(rng));
        const double q2 = u(rng) < 0.5 ? kUnlimited : (d1p + d2) * (0.5 + 1.5 * u(rng));
        const InputInstance w{{q1, q2}, {d1, d2}};
        const InputInstance wp{{q1, q2}, {d1p, d2}};
        const auto a = inst.model.price_of_security(w);
        const auto b = inst.model.price_of_security(wp);
        if (!a.ok() || !b.ok()) {
            ++r.skipped;
            continue;
        }
        r.record(b.pos - a.pos, kPropertySlack, describe(w) + " d1'=" + std::to_string(d1p));
    }
    return r;
}

/// For fixed total demand, no split on a d/100 scan beats d2 = min(d, f_ed).
inline SuiteResult best_split_dominance(std::uint64_t seed, std::size_t samples)
{
    using namespace secdispatch;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    SuiteResult r;
    while (r.checked < samples) {
        auto inst = random_two_bus(rng);
        const double d = 2.0 * inst.params.f_ed * u(rng);
        const double q1 = u(rng) < 0.5 ? kUnlimited : d * (1.0 + u(rng));
        const double q2 = u(rng) < 0.5 ? kUnlimited : d * (1.0 + u(rng));
        const auto best = best_demand_split(inst.params, d);
        const auto at_best = inst.model.price_of_security({{q1, q2}, {best.d1, best.d2}});
        if (!at_best.ok()) {
            ++r.skipped;
            continue;
        }
        double worst = -1.0;
        std::string where;
        for (int k = 0; k <= 100; ++k) {
            const double d2 = d * k / 100.0;
            const InputInstance w{{q1, q2}, {std::max(0.0, d - d2), d2}};
            const auto s = inst.model.price_of_security(w);
            if (!s.ok()) continue;
            if (s.pos - at_best.pos > worst) {
                worst = s.pos - at_best.pos;
                where = describe(w);
            }
        }
        r.record(worst, kPropertySlack, where);
    }
    return r;
}

}  // namespace suites
