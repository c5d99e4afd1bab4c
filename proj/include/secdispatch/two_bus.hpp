// Closed-form price-of-security analytics for the two-bus, two-line
// topology. Valid when the cheap generator can cover all demand; outside
// that regime only the LP path applies.

#pragma once

#include "secdispatch/network.hpp"

#include <stdexcept>

namespace secdispatch {

/// Cost coefficients with alpha1 <= alpha2 (bus 1 is the cheap bus) and the
/// intact / N-1-secure transfer limits, f_sc <= f_ed. For identical lines
/// f_ed = 2 f_sc; a stiff high-rated line next to a weak one can push f_ed
/// well above 2 f_sc.
struct TwoBusParams {
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    double f_ed = 0.0;
    double f_sc = 0.0;

    /// Throws std::invalid_argument when the ordering invariants fail.
    static TwoBusParams make(double alpha1, double alpha2, double f_ed, double f_sc);
};

struct TwoBusCosts {
    double c_ed = 0.0;
    double c_sc = 0.0;
};

TwoBusCosts closed_form_costs(const TwoBusParams& p, double d1, double d2);

/// Ratio of the closed-form costs; 1 when total demand is zero.
double closed_form_pos(const TwoBusParams& p, double d1, double d2);

struct WorstCase {
    double d1 = 0.0;
    double d2 = 0.0;
    double min_cheap_capacity = 0.0;
    double pos = 1.0;
};

/// Maximizer over all instances: d = (0, f_ed) with q̄1 >= f_ed.
/// Requires alpha1 > 0.
WorstCase worst_case_instance(const TwoBusParams& p);

struct DemandSplit {
    double d1 = 0.0;
    double d2 = 0.0;
    double pos = 1.0;
};

/// PoS-maximizing split of a fixed total demand: d2 = min(d, f_ed).
DemandSplit best_demand_split(const TwoBusParams& p, double total_demand);

/// Two-bus oracle bound to a concrete network. If the case file lists the
/// expensive bus first, the buses are relabeled so that "1" is cheap; the
/// original ids are kept for reporting.
class TwoBusOracle {
public:
    explicit TwoBusOracle(const Network& net);

    const TwoBusParams& params() const { return params_; }
    int cheap_bus_id() const { return cheap_id_; }
    int expensive_bus_id() const { return expensive_id_; }
    bool relabeled() const { return relabeled_; }

    /// Demand given in network order; mapped to (cheap, expensive).
    TwoBusCosts costs(double demand_bus0, double demand_bus1) const;
    double pos(double demand_bus0, double demand_bus1) const;

private:
    TwoBusParams params_;
    int cheap_id_ = 0;
    int expensive_id_ = 0;
    bool relabeled_ = false;
};

}  // namespace secdispatch
