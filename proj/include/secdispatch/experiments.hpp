// Sweep harness: capacity sweeps, demand grids, cheap-demand sweeps,
// fixed-aggregate splits, randomized demand-distribution studies, grid
// worst-case search and the topology-simplification ablations.
//
// Demand is placed by region. A region with a single bus takes its whole
// aggregate; a region with several buses gets a uniform draw from the
// simplex {d >= 0 : sum d = aggregate} per run (exponential spacings).
// Each sweep point owns an RNG stream derived from (seed, point index), and
// all instances are drawn before evaluation, so output is independent of
// thread count and schedule.

#pragma once

#include "secdispatch/dispatch.hpp"
#include "secdispatch/sweep_parallel.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace secdispatch {

class SweepError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class EmptyFeasibleGrid : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class SweepMode {
    CapacitySweep,
    DemandGrid,
    CheapDemandSweep,
    FixedAggregateSplit,
    RandomDistributionStudy,
};

std::string_view to_string(SweepMode m);
SweepMode parse_sweep_mode(std::string_view s);

/// Inclusive arithmetic range start, start+step, ..., <= stop.
struct Range {
    double start = 0.0;
    double stop = 0.0;
    double step = 1.0;

    std::vector<double> points() const;
};

struct SweepSpec {
    SweepMode mode = SweepMode::RandomDistributionStudy;
    Range range;                 // primary axis
    std::optional<Range> range2;  // demand-grid: expensive-side axis
    /// Fixed expensive-side aggregate (capacity sweep without explicit demand,
    /// cheap-demand sweep) or total demand (fixed-aggregate split).
    double aggregate_demand = 0.0;
    /// Fixed cheap-side aggregate where the cheap side is not swept.
    double cheap_demand = 0.0;
    /// Capacity sweep: explicit per-bus demand (network order).
    std::optional<std::vector<double>> demand;
    /// Capacity sweep: range values are fractions of total demand.
    bool capacity_as_fraction = false;
    /// Capacity of every generator not being swept.
    double capacity = kUnlimited;
    std::size_t runs = 1;
    std::uint64_t seed = 0;
    Execution execution = Execution::Parallel;
    EvalOptions eval;

    void validate() const;
};

/// JSON spec document; "mode" may be omitted when supplied separately.
SweepSpec parse_sweep_spec(const Network& net, std::string_view document,
                           std::optional<SweepMode> mode_override = std::nullopt);

struct SweepRecord {
    std::vector<double> axis;
    PosStatus status = PosStatus::Ok;  // of the worst run, or first failure
    double c_ed = 0.0;  // costs of the worst (max-PoS) run
    double c_sc = 0.0;
    double pos = 1.0;   // max-PoS run
    double pos_max = 1.0;
    double pos_avg = 1.0;
    std::size_t runs = 0;
    std::size_t feasible_runs = 0;
    // Certification tallies (EvalOptions::certify).
    std::size_t sced_insecure = 0;
    std::size_t ed_secure_with_pos_gt_1 = 0;
};

struct SweepResult {
    std::string case_name;
    SweepMode mode = SweepMode::RandomDistributionStudy;
    std::vector<std::string> axis_names;
    std::vector<SweepRecord> records;
    std::uint64_t seed = 0;
    std::string timestamp;  // metadata only; not written to CSV
    std::optional<std::size_t> argmax;  // record with the largest pos_max
};

struct CriticalPoints {
    std::optional<std::size_t> onset;  // first record with pos_max > 1 + 1e-6
    std::optional<std::size_t> peak;   // largest pos_max, ties to lower index
};

CriticalPoints critical_points(const SweepResult& r);

/// Cheap / expensive bus indices. Uses region labels; for an unlabeled
/// two-bus case the lower-cost bus is cheap.
struct RegionSplit {
    std::vector<std::size_t> cheap;
    std::vector<std::size_t> expensive;
};
RegionSplit regions_of(const Network& net);

/// Uniform draw from {x >= 0, sum x = total} in `dims` dimensions.
std::vector<double> sample_simplex(std::mt19937_64& rng, std::size_t dims, double total);

/// RNG for sweep point `index` of a run seeded with `seed`.
std::mt19937_64 point_rng(std::uint64_t seed, std::uint64_t index);

SweepResult capacity_sweep(const DispatchModel& model, const SweepSpec& spec);
SweepResult demand_grid(const DispatchModel& model, const SweepSpec& spec);
SweepResult cheap_demand_sweep(const DispatchModel& model, const SweepSpec& spec);
SweepResult fixed_aggregate_split(const DispatchModel& model, const SweepSpec& spec);
SweepResult random_distribution_study(const DispatchModel& model, const SweepSpec& spec);
SweepResult run_sweep(const DispatchModel& model, const SweepSpec& spec);

void write_csv(const SweepResult& r, std::ostream& os);
std::string to_csv(const SweepResult& r);
/// Sidecar metadata (case, mode, seed, timestamp, argmax) as JSON.
std::string metadata_json(const SweepResult& r);

/// Box for grid worst-case search. Per-bus inclusive bounds, network order.
/// A capacity axis with lo == hi (including +inf) is a single value.
struct SearchBox {
    std::vector<double> demand_lo;
    std::vector<double> demand_hi;
    std::vector<double> capacity_lo;
    std::vector<double> capacity_hi;
    double step = 10.0;

    static SearchBox uniform(const Network& net, double dmax, double step,
                             double capacity = kUnlimited);
};

struct WorstCaseResult {
    InputInstance instance;
    double pos = 1.0;
    double c_ed = 0.0;
    double c_sc = 0.0;
    std::size_t evaluated = 0;
    std::size_t feasible = 0;
};

/// Exhaustive grid search for the PoS maximizer; infeasible points are
/// skipped. Ties resolve to the first grid point in enumeration order
/// (capacities outermost, demand of the last bus innermost). Throws EmptyFeasibleGrid.
WorstCaseResult worst_case_search(const DispatchModel& model, const SearchBox& box,
                                  Execution exec = Execution::Parallel);

enum class AblationVariant { Full, No150Link, Normalized, Homogeneous };

std::string_view to_string(AblationVariant v);
AblationVariant parse_ablation_variant(std::string_view s);

/// Cumulative simplifications of the five-bus case: drop the (1,5) link,
/// then rescale the (2,5) limit so f/B matches line (1,3), then set costs
/// to 15 on the cheap side and 40 on the expensive side.
Network ablation_network(const Network& pjm5, AblationVariant v);

struct AblationSpec {
    Range aggregate{0.0, 1000.0, 50.0};
    std::size_t runs = 500;
    std::uint64_t seed = 2024;
    Execution execution = Execution::Parallel;
    EvalOptions eval;
};

/// Worst-case-style demand sweep (no cheap-side demand) on an ablation variant.
SweepResult ablation_suite(const Network& pjm5, AblationVariant v, const AblationSpec& spec = {});

/// Line joining buses a and b (either orientation); throws if absent or ambiguous.
int line_between(const Network& net, int bus_a, int bus_b);

}  // namespace secdispatch
