#include "secdispatch/two_bus.hpp"

#include "secdispatch/dispatch.hpp"
#include "secdispatch/ptdf.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace secdispatch {

namespace {

double positive_part(double x) { return x > 0.0 ? x : 0.0; }

void require_demand(double d1, double d2)
{
    if (!(d1 >= 0.0) || !(d2 >= 0.0)) {
        throw std::invalid_argument("two-bus demand must be nonnegative");
    }
}

}  // namespace

TwoBusParams TwoBusParams::make(double alpha1, double alpha2, double f_ed, double f_sc)
{
    if (!(alpha1 >= 0.0) || !(alpha1 <= alpha2)) {
        throw std::invalid_argument("two-bus params need 0 <= alpha1 <= alpha2");
    }
    const double slack = 1e-9 * std::max(1.0, f_ed);
    if (!(f_sc >= 0.0) || !std::isfinite(f_ed) || f_sc > f_ed + slack) {
        throw std::invalid_argument("two-bus params need 0 <= f_sc <= f_ed < inf");
    }
    return TwoBusParams{alpha1, alpha2, f_ed, f_sc};
}

TwoBusCosts closed_form_costs(const TwoBusParams& p, double d1, double d2)
{
    require_demand(d1, d2);
    TwoBusCosts c;
    c.c_ed = p.alpha1 * (d1 + std::min(p.f_ed, d2)) + p.alpha2 * positive_part(d2 - p.f_ed);
    c.c_sc = p.alpha1 * (d1 + std::min(p.f_sc, d2)) + p.alpha2 * positive_part(d2 - p.f_sc);
    return c;
}

double closed_form_pos(const TwoBusParams& p, double d1, double d2)
{
    const auto c = closed_form_costs(p, d1, d2);
    if (d1 + d2 <= 0.0) return 1.0;
    return pos_ratio(c.c_ed, c.c_sc);
}

WorstCase worst_case_instance(const TwoBusParams& p)
{
    if (!(p.alpha1 > 0.0)) {
        throw std::invalid_argument("worst-case PoS needs alpha1 > 0");
    }
    WorstCase w;
    w.d1 = 0.0;
    w.d2 = p.f_ed;
    w.min_cheap_capacity = p.f_ed;
    w.pos = p.f_ed > 0.0
                ? p.alpha2 / p.alpha1 - (p.alpha2 - p.alpha1) * p.f_sc / (p.alpha1 * p.f_ed)
                : 1.0;
    return w;
}

DemandSplit best_demand_split(const TwoBusParams& p, double total_demand)
{
    if (!(total_demand >= 0.0)) {
        throw std::invalid_argument("total demand must be nonnegative");
    }
    DemandSplit s;
    s.d2 = std::min(total_demand, p.f_ed);
    s.d1 = total_demand - s.d2;
    s.pos = closed_form_pos(p, s.d1, s.d2);
    return s;
}

TwoBusOracle::TwoBusOracle(const Network& net)
{
    const auto limits = two_bus_transfer_limits(net);
    const auto& b0 = net.buses()[0];
    const auto& b1 = net.buses()[1];
    relabeled_ = b0.alpha > b1.alpha;
    const auto& cheap = relabeled_ ? b1 : b0;
    const auto& expensive = relabeled_ ? b0 : b1;
    cheap_id_ = cheap.id;
    expensive_id_ = expensive.id;
    params_ = TwoBusParams::make(cheap.alpha, expensive.alpha, limits.f_ed, limits.f_sc);
}

TwoBusCosts TwoBusOracle::costs(double demand_bus0, double demand_bus1) const
{
    return relabeled_ ? closed_form_costs(params_, demand_bus1, demand_bus0)
                      : closed_form_costs(params_, demand_bus0, demand_bus1);
}

double TwoBusOracle::pos(double demand_bus0, double demand_bus1) const
{
    return relabeled_ ? closed_form_pos(params_, demand_bus1, demand_bus0)
                      : closed_form_pos(params_, demand_bus0, demand_bus1);
}

}  // namespace secdispatch
