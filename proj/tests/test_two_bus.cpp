#include "secdispatch/dispatch.hpp"
#include "secdispatch/two_bus.hpp"

#include "property_suites.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace secdispatch;

namespace {

std::string case_path(const char* name) { return std::string(SECDISPATCH_CASE_DIR) + "/" + name; }

const TwoBusParams kRef = TwoBusParams::make(1, 2, 200, 100);

}  // namespace

TEST_CASE("closed-form costs")
{
    auto c = closed_form_costs(kRef, 0, 200);
    CHECK(c.c_ed == 200.0);
    CHECK(c.c_sc == 300.0);
    c = closed_form_costs(kRef, 0, 0);
    CHECK(c.c_ed == 0.0);
    CHECK(c.c_sc == 0.0);
    c = closed_form_costs(kRef, 100, 300);
    CHECK(c.c_ed == 500.0);
    CHECK(c.c_sc == 600.0);
    CHECK_THROWS_AS(closed_form_costs(kRef, -1, 0), std::invalid_argument);
}

TEST_CASE("closed-form PoS")
{
    CHECK(closed_form_pos(kRef, 0, 200) == doctest::Approx(1.5));
    CHECK(closed_form_pos(kRef, 0, 50) == doctest::Approx(1.0));
    CHECK(closed_form_pos(kRef, 0, 150) == doctest::Approx(4.0 / 3.0));
    CHECK(closed_form_pos(kRef, 0, 0) == 1.0);
}

TEST_CASE("parameter invariants")
{
    CHECK_THROWS_AS(TwoBusParams::make(2, 1, 200, 100), std::invalid_argument);
    CHECK_THROWS_AS(TwoBusParams::make(-1, 1, 200, 100), std::invalid_argument);
    CHECK_THROWS_AS(TwoBusParams::make(1, 2, 100, 200), std::invalid_argument);
    CHECK_NOTHROW(TwoBusParams::make(1, 2, 1010, 100));
}

TEST_CASE("worst case")
{
    const auto w = worst_case_instance(kRef);
    CHECK(w.d1 == 0.0);
    CHECK(w.d2 == 200.0);
    CHECK(w.min_cheap_capacity == 200.0);
    CHECK(w.pos == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(worst_case_instance(TwoBusParams::make(3, 3, 200, 100)).pos == doctest::Approx(1.0));
    CHECK(worst_case_instance(TwoBusParams::make(1, 2, 150, 150)).pos == doctest::Approx(1.0));
    CHECK_THROWS_AS(worst_case_instance(TwoBusParams::make(0, 2, 200, 100)), std::invalid_argument);
}

TEST_CASE("best demand split")
{
    auto s = best_demand_split(kRef, 300);
    CHECK(s.d1 == 100.0);
    CHECK(s.d2 == 200.0);
    s = best_demand_split(kRef, 150);
    CHECK(s.d1 == 0.0);
    CHECK(s.d2 == 150.0);
    s = best_demand_split(kRef, 0);
    CHECK(s.d1 == 0.0);
    CHECK(s.d2 == 0.0);
    CHECK(s.pos == 1.0);
}

TEST_CASE("best split value matches its closed form")
{
    for (double d = 1; d <= 600; d += 7) {
        const auto s = best_demand_split(kRef, d);
        const double expect =
            (kRef.alpha1 * (s.d1 + std::min(kRef.f_sc, s.d2)) +
             kRef.alpha2 * std::max(0.0, s.d2 - kRef.f_sc)) /
            (kRef.alpha1 * d);
        CHECK(s.pos == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("oracle relabels when the expensive bus is listed first")
{
    const auto net = load_network(oracle::two_bus_json(100, 100, 1, 1, 5, 2));
    const TwoBusOracle o(net);
    CHECK(o.relabeled());
    CHECK(o.cheap_bus_id() == 2);
    CHECK(o.expensive_bus_id() == 1);
    CHECK(o.params().alpha1 == 2.0);
    CHECK(o.params().alpha2 == 5.0);
    // All demand at bus 1 (the expensive one) in network order.
    const DispatchModel model(net);
    const auto lp = model.price_of_security({{kUnlimited, kUnlimited}, {200, 0}});
    REQUIRE(lp.ok());
    const auto cf = o.costs(200, 0);
    CHECK(cf.c_ed == doctest::Approx(lp.c_ed));
    CHECK(cf.c_sc == doctest::Approx(lp.c_sc));
    CHECK(o.pos(200, 0) == doctest::Approx(lp.pos));

    const TwoBusOracle plain(load_network_file(case_path("2bus.json")));
    CHECK_FALSE(plain.relabeled());
    CHECK(plain.params().f_ed == doctest::Approx(200));
}

TEST_CASE("closed forms match the LP on random two-bus networks")
{
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 300; ++i) {
        auto inst = suites::random_two_bus(rng);
        const double d1 = 2 * inst.params.f_ed * u(rng), d2 = 2 * inst.params.f_ed * u(rng);
        const auto lp = inst.model.price_of_security({{kUnlimited, kUnlimited}, {d1, d2}});
        REQUIRE(lp.ok());
        const auto cf = closed_form_costs(inst.params, d1, d2);
        CHECK(std::abs(lp.c_ed - cf.c_ed) <= 1e-6 * std::max(1.0, cf.c_ed));
        CHECK(std::abs(lp.c_sc - cf.c_sc) <= 1e-6 * std::max(1.0, cf.c_sc));
    }
}

TEST_CASE("capacity monotonicity holds on 1000 draws")
{
    const auto r = suites::capacity_monotonicity(101, 1000);
    INFO(r.first_failure);
    CHECK(r.checked == 1000);
    CHECK(r.failures == 0);
}

TEST_CASE("cheap-demand monotonicity holds on 1000 draws")
{
    const auto r = suites::cheap_demand_monotonicity(202, 1000);
    INFO(r.first_failure);
    CHECK(r.failures == 0);
}

TEST_CASE("best split is never beaten on 1000 draws")
{
    const auto r = suites::best_split_dominance(303, 1000);
    INFO(r.first_failure);
    CHECK(r.failures == 0);
}

TEST_CASE("grid scan never exceeds the worst-case value")
{
    const DispatchModel model(load_network_file(case_path("2bus.json")));
    const double bound = worst_case_instance(kRef).pos;
    double best = 0.0;
    for (double q1 = 0; q1 <= 400; q1 += 50) {
        for (double d1 = 0; d1 <= 300; d1 += 25) {
            for (double d2 = 0; d2 <= 400; d2 += 25) {
                const auto r = model.price_of_security({{q1, kUnlimited}, {d1, d2}});
                if (!r.ok()) continue;
                best = std::max(best, r.pos);
                CHECK(r.pos <= bound + 1e-9);
            }
        }
    }
    CHECK(best == doctest::Approx(bound).epsilon(1e-9));
}
