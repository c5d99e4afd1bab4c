#include "secdispatch/experiments.hpp"

#include "secdispatch/csv.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <limits>
#include <numeric>
#include <sstream>

namespace secdispatch {

using nlohmann::json;

namespace {

constexpr double kRisingTol = 1e-6;
constexpr double kTieTol = 1e-12;

std::string utc_timestamp()
{
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Spread `total` over the buses of one region.
void place(std::vector<double>& demand, const std::vector<std::size_t>& buses, double total,
           std::mt19937_64* rng)
{
    if (buses.empty()) {
        if (total > 0.0) throw SweepError("demand assigned to an empty region");
        return;
    }
    if (buses.size() == 1 || total == 0.0) {
        for (auto b : buses) demand[b] = 0.0;
        demand[buses.front()] = total;
        return;
    }
    if (rng) {
        const auto share = sample_simplex(*rng, buses.size(), total);
        for (std::size_t k = 0; k < buses.size(); ++k) demand[buses[k]] = share[k];
    } else {
        for (auto b : buses) demand[b] = total / static_cast<double>(buses.size());
    }
}

bool needs_sampling(const RegionSplit& rs, double cheap_total, double expensive_total)
{
    return (rs.cheap.size() > 1 && cheap_total > 0.0) ||
           (rs.expensive.size() > 1 && expensive_total > 0.0);
}

struct PointPlan {
    std::vector<double> axis;
    std::vector<InputInstance> runs;
};

// Instances for one sweep point: a single deterministic instance, or
// spec.runs draws from this point's RNG stream.
PointPlan plan_point(const Network& net, const RegionSplit& rs, const SweepSpec& spec,
                     std::size_t index, std::vector<double> axis, double cheap_total,
                     double expensive_total, const std::vector<double>& capacity)
{
    PointPlan plan{std::move(axis), {}};
    if (!needs_sampling(rs, cheap_total, expensive_total)) {
        std::vector<double> d(net.n(), 0.0);
        place(d, rs.cheap, cheap_total, nullptr);
        place(d, rs.expensive, expensive_total, nullptr);
        plan.runs.push_back({capacity, std::move(d)});
        return plan;
    }
    auto rng = point_rng(spec.seed, index);
    plan.runs.reserve(spec.runs);
    for (std::size_t r = 0; r < spec.runs; ++r) {
        std::vector<double> d(net.n(), 0.0);
        place(d, rs.cheap, cheap_total, &rng);
        place(d, rs.expensive, expensive_total, &rng);
        plan.runs.push_back({capacity, std::move(d)});
    }
    return plan;
}

SweepRecord summarize(std::vector<double> axis, std::span<const PosOutcome> outcomes)
{
    SweepRecord rec;
    rec.axis = std::move(axis);
    rec.runs = outcomes.size();
    double sum = 0.0;
    std::optional<std::size_t> worst;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        const auto& o = outcomes[i];
        if (!o.ok()) continue;
        ++rec.feasible_runs;
        sum += o.pos;
        if (!worst || o.pos > outcomes[*worst].pos + kTieTol) worst = i;
        if (o.certified) {
            if (!o.sced_secure) ++rec.sced_insecure;
            if (o.ed_secure && o.pos > 1.0 + kRisingTol) ++rec.ed_secure_with_pos_gt_1;
        }
    }
    if (worst) {
        const auto& w = outcomes[*worst];
        rec.status = PosStatus::Ok;
        rec.c_ed = w.c_ed;
        rec.c_sc = w.c_sc;
        rec.pos = rec.pos_max = w.pos;
        rec.pos_avg = sum / static_cast<double>(rec.feasible_runs);
    } else {
        rec.status = outcomes.empty() ? PosStatus::EdInfeasible : outcomes.front().status;
        const double nan = std::numeric_limits<double>::quiet_NaN();
        rec.c_ed = rec.c_sc = rec.pos = rec.pos_max = rec.pos_avg = nan;
    }
    return rec;
}

SweepResult execute(const DispatchModel& model, const SweepSpec& spec,
                    std::vector<std::string> axis_names, std::vector<PointPlan> plans)
{
    std::vector<InputInstance> batch;
    std::vector<std::size_t> offsets{0};
    for (auto& p : plans) {
        for (auto& inst : p.runs) batch.push_back(std::move(inst));
        offsets.push_back(batch.size());
    }
    const auto outcomes = evaluate(model, batch, spec.execution, spec.eval);

    SweepResult res;
    res.case_name = model.network().name();
    res.mode = spec.mode;
    res.axis_names = std::move(axis_names);
    res.seed = spec.seed;
    res.timestamp = utc_timestamp();
    for (std::size_t k = 0; k < plans.size(); ++k) {
        const std::span<const PosOutcome> slice(outcomes.data() + offsets[k],
                                                offsets[k + 1] - offsets[k]);
        res.records.push_back(summarize(std::move(plans[k].axis), slice));
    }
    res.argmax = critical_points(res).peak;
    return res;
}

void require_sced_defined(const DispatchModel& model)
{
    if (!model.contingencies().islanding.empty()) {
        throw IslandingContingency(model.contingencies().islanding);
    }
}

}  // namespace

std::string_view to_string(SweepMode m)
{
    switch (m) {
    case SweepMode::CapacitySweep:
        return "capacity-sweep";
    case SweepMode::DemandGrid:
        return "demand-grid";
    case SweepMode::CheapDemandSweep:
        return "cheap-demand-sweep";
    case SweepMode::FixedAggregateSplit:
        return "fixed-aggregate-split";
    case SweepMode::RandomDistributionStudy:
        return "random-distribution-study";
    }
    return "?";
}

SweepMode parse_sweep_mode(std::string_view s)
{
    for (auto m : {SweepMode::CapacitySweep, SweepMode::DemandGrid, SweepMode::CheapDemandSweep,
                   SweepMode::FixedAggregateSplit, SweepMode::RandomDistributionStudy}) {
        if (to_string(m) == s) return m;
    }
    throw SweepError("unknown sweep mode '" + std::string(s) + "'");
}

std::vector<double> Range::points() const
{
    if (!(step > 0.0) || !(stop >= start)) {
        throw SweepError("range needs step > 0 and stop >= start");
    }
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    std::vector<double> pts(count);
    for (std::size_t k = 0; k < count; ++k) pts[k] = start + static_cast<double>(k) * step;
    return pts;
}

void SweepSpec::validate() const
{
    (void)range.points();
    if (range2) (void)range2->points();
    if (runs < 1) throw SweepError("runs must be >= 1");
    if (aggregate_demand < 0.0 || cheap_demand < 0.0) {
        throw SweepError("aggregate demands must be nonnegative");
    }
    if (!(capacity >= 0.0)) throw SweepError("capacity must be nonnegative");
    switch (mode) {
    case SweepMode::CapacitySweep:
        if (range.start < 0.0) throw SweepError("capacity range must be nonnegative");
        break;
    case SweepMode::DemandGrid:
        if (!range2) throw SweepError("demand-grid needs a second range");
        if (range.start < 0.0 || range2->start < 0.0) {
            throw SweepError("demand ranges must be nonnegative");
        }
        break;
    case SweepMode::FixedAggregateSplit:
        if (range.start < 0.0 || range.stop > aggregate_demand + 1e-9) {
            throw SweepError("split range must lie within [0, aggregate_demand]");
        }
        break;
    case SweepMode::CheapDemandSweep:
    case SweepMode::RandomDistributionStudy:
        if (range.start < 0.0) throw SweepError("demand range must be nonnegative");
        break;
    }
}

SweepSpec parse_sweep_spec(const Network& net, std::string_view document,
                           std::optional<SweepMode> mode_override)
{
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::parse_error& e) {
        throw SweepError(std::string("malformed sweep spec: ") + e.what());
    }
    SweepSpec spec;
    try {
        if (mode_override) {
            spec.mode = *mode_override;
        } else if (doc.contains("mode")) {
            spec.mode = parse_sweep_mode(doc.at("mode").get<std::string>());
        } else {
            throw SweepError("sweep spec has no mode");
        }
        auto read_range = [](const json& r) {
            return Range{r.at("start").get<double>(), r.at("stop").get<double>(),
                         r.at("step").get<double>()};
        };
        if (!doc.contains("range")) throw SweepError("sweep spec needs 'range'");
        spec.range = read_range(doc.at("range"));
        if (doc.contains("range2")) spec.range2 = read_range(doc.at("range2"));
        spec.aggregate_demand = doc.value("aggregate_demand", 0.0);
        spec.cheap_demand = doc.value("cheap_demand", 0.0);
        spec.capacity_as_fraction = doc.value("capacity_as_fraction", false);
        if (doc.contains("capacity") && !doc.at("capacity").is_null()) {
            spec.capacity = doc.at("capacity").get<double>();
        }
        spec.runs = doc.value("runs", std::size_t{1});
        spec.seed = doc.value("seed", std::uint64_t{0});
        if (doc.contains("execution")) {
            const auto e = doc.at("execution").get<std::string>();
            if (e == "serial") {
                spec.execution = Execution::Serial;
            } else if (e == "parallel") {
                spec.execution = Execution::Parallel;
            } else {
                throw SweepError("execution must be 'serial' or 'parallel'");
            }
        }
        if (doc.contains("demand")) {
            std::vector<double> d(net.n(), 0.0);
            for (const auto& [k, v] : doc.at("demand").items()) {
                d[net.bus_index(std::stoi(k))] = v.get<double>();
            }
            spec.demand = std::move(d);
        }
    } catch (const json::exception& e) {
        throw SweepError(std::string("sweep spec field error: ") + e.what());
    }
    spec.validate();
    return spec;
}

CriticalPoints critical_points(const SweepResult& r)
{
    CriticalPoints cp;
    for (std::size_t i = 0; i < r.records.size(); ++i) {
        const auto& rec = r.records[i];
        if (rec.feasible_runs == 0) continue;
        if (!cp.onset && rec.pos_max > 1.0 + kRisingTol) cp.onset = i;
        if (!cp.peak || rec.pos_max > r.records[*cp.peak].pos_max + kTieTol) cp.peak = i;
    }
    return cp;
}

RegionSplit regions_of(const Network& net)
{
    RegionSplit rs;
    rs.cheap = net.buses_in(Region::Cheap);
    rs.expensive = net.buses_in(Region::Expensive);
    if (!rs.cheap.empty() || !rs.expensive.empty()) {
        if (rs.cheap.size() + rs.expensive.size() != net.n()) {
            throw SweepError("case '" + net.name() + "' labels only some buses with a region");
        }
        return rs;
    }
    if (net.n() == 2) {
        const bool swap = net.buses()[0].alpha > net.buses()[1].alpha;
        rs.cheap = {swap ? std::size_t{1} : std::size_t{0}};
        rs.expensive = {swap ? std::size_t{0} : std::size_t{1}};
        return rs;
    }
    throw SweepError("case '" + net.name() + "' has no cheap/expensive region labels");
}

std::vector<double> sample_simplex(std::mt19937_64& rng, std::size_t dims, double total)
{
    std::vector<double> e(dims);
    double sum = 0.0;
    for (auto& v : e) {
        // u in [0, 1) from the top 53 bits; -log(1-u) ~ Exp(1).
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        v = -std::log1p(-u);
        sum += v;
    }
    if (sum <= 0.0) {
        std::fill(e.begin(), e.end(), total / static_cast<double>(dims));
        return e;
    }
    for (auto& v : e) v = total * v / sum;
    return e;
}

std::mt19937_64 point_rng(std::uint64_t seed, std::uint64_t index)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return std::mt19937_64(seq);
}

SweepResult capacity_sweep(const DispatchModel& model, const SweepSpec& spec)
{
    spec.validate();
    require_sced_defined(model);
    const auto& net = model.network();
    const auto rs = regions_of(net);
    const double total =
        spec.demand ? std::accumulate(spec.demand->begin(), spec.demand->end(), 0.0)
                    : spec.aggregate_demand + spec.cheap_demand;

    std::vector<PointPlan> plans;
    const auto xs = spec.range.points();
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const double cheap_cap = spec.capacity_as_fraction ? xs[k] * total : xs[k];
        std::vector<double> cap(net.n(), spec.capacity);
        for (auto b : rs.cheap) cap[b] = cheap_cap / static_cast<double>(rs.cheap.size());
        if (spec.demand) {
            if (spec.demand->size() != net.n()) throw SweepError("demand has wrong length");
            plans.push_back({{xs[k]}, {InputInstance{cap, *spec.demand}}});
        } else {
            plans.push_back(
                plan_point(net, rs, spec, k, {xs[k]}, spec.cheap_demand, spec.aggregate_demand, cap));
        }
    }
    return execute(model, spec,
                   {spec.capacity_as_fraction ? "cheap_capacity_fraction" : "cheap_capacity"},
                   std::move(plans));
}

SweepResult demand_grid(const DispatchModel& model, const SweepSpec& spec)
{
    spec.validate();
    require_sced_defined(model);
    const auto& net = model.network();
    const auto rs = regions_of(net);
    const std::vector<double> cap(net.n(), spec.capacity);
    const auto xs = spec.range.points();
    const auto ys = spec.range2->points();
    std::vector<PointPlan> plans;
    std::size_t index = 0;
    for (double x : xs) {
        for (double y : ys) {
            plans.push_back(plan_point(net, rs, spec, index++, {x, y}, x, y, cap));
        }
    }
    return execute(model, spec, {"d_cheap", "d_expensive"}, std::move(plans));
}

SweepResult cheap_demand_sweep(const DispatchModel& model, const SweepSpec& spec)
{
    spec.validate();
    require_sced_defined(model);
    const auto& net = model.network();
    const auto rs = regions_of(net);
    const std::vector<double> cap(net.n(), spec.capacity);
    const auto xs = spec.range.points();
    std::vector<PointPlan> plans;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        plans.push_back(plan_point(net, rs, spec, k, {xs[k]}, xs[k], spec.aggregate_demand, cap));
    }
    return execute(model, spec, {"d_cheap"}, std::move(plans));
}

SweepResult fixed_aggregate_split(const DispatchModel& model, const SweepSpec& spec)
{
    spec.validate();
    require_sced_defined(model);
    const auto& net = model.network();
    const auto rs = regions_of(net);
    const std::vector<double> cap(net.n(), spec.capacity);
    const auto xs = spec.range.points();
    std::vector<PointPlan> plans;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const double expensive = std::min(xs[k], spec.aggregate_demand);
        const double cheap = std::max(spec.aggregate_demand - expensive, 0.0);
        plans.push_back(plan_point(net, rs, spec, k, {xs[k]}, cheap, expensive, cap));
    }
    return execute(model, spec, {"d_expensive"}, std::move(plans));
}

SweepResult random_distribution_study(const DispatchModel& model, const SweepSpec& spec)
{
    spec.validate();
    require_sced_defined(model);
    const auto& net = model.network();
    const auto rs = regions_of(net);
    const std::vector<double> cap(net.n(), spec.capacity);
    const auto xs = spec.range.points();
    std::vector<PointPlan> plans;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        plans.push_back(plan_point(net, rs, spec, k, {xs[k]}, spec.cheap_demand, xs[k], cap));
    }
    return execute(model, spec, {"d_expensive"}, std::move(plans));
}

SweepResult run_sweep(const DispatchModel& model, const SweepSpec& spec)
{
    switch (spec.mode) {
    case SweepMode::CapacitySweep:
        return capacity_sweep(model, spec);
    case SweepMode::DemandGrid:
        return demand_grid(model, spec);
    case SweepMode::CheapDemandSweep:
        return cheap_demand_sweep(model, spec);
    case SweepMode::FixedAggregateSplit:
        return fixed_aggregate_split(model, spec);
    case SweepMode::RandomDistributionStudy:
        return random_distribution_study(model, spec);
    }
    throw SweepError("unhandled sweep mode");
}

void write_csv(const SweepResult& r, std::ostream& os)
{
    std::vector<std::string> header = r.axis_names;
    for (const char* h : {"status", "c_ed", "c_sc", "pos", "pos_max", "pos_avg", "runs",
                          "feasible_runs"}) {
        header.emplace_back(h);
    }
    csv::write_row(os, header);
    for (const auto& rec : r.records) {
        std::vector<std::string> row;
        for (double a : rec.axis) row.push_back(csv::number(a));
        row.emplace_back(to_string(rec.status));
        row.push_back(csv::number(rec.c_ed));
        row.push_back(csv::number(rec.c_sc));
        row.push_back(csv::number(rec.pos));
        row.push_back(csv::number(rec.pos_max));
        row.push_back(csv::number(rec.pos_avg));
        row.push_back(std::to_string(rec.runs));
        row.push_back(std::to_string(rec.feasible_runs));
        csv::write_row(os, row);
    }
}

std::string to_csv(const SweepResult& r)
{
    std::ostringstream os;
    write_csv(r, os);
    return os.str();
}

std::string metadata_json(const SweepResult& r)
{
    json doc{{"case", r.case_name},
             {"mode", std::string(to_string(r.mode))},
             {"seed", r.seed},
             {"timestamp", r.timestamp},
             {"records", r.records.size()}};
    const auto cp = critical_points(r);
    auto axis_of = [&](std::optional<std::size_t> i) {
        return i ? json(r.records[*i].axis) : json(nullptr);
    };
    doc["argmax"] = axis_of(r.argmax);
    doc["pos_max"] = r.argmax ? json(r.records[*r.argmax].pos_max) : json(nullptr);
    doc["onset"] = axis_of(cp.onset);
    return doc.dump(2);
}

SearchBox SearchBox::uniform(const Network& net, double dmax, double step, double capacity)
{
    SearchBox b;
    b.demand_lo.assign(net.n(), 0.0);
    b.demand_hi.assign(net.n(), dmax);
    b.capacity_lo.assign(net.n(), capacity);
    b.capacity_hi.assign(net.n(), capacity);
    b.step = step;
    return b;
}

WorstCaseResult worst_case_search(const DispatchModel& model, const SearchBox& box,
                                  Execution exec)
{
    const auto& net = model.network();
    const auto n = net.n();
    if (box.demand_lo.size() != n || box.demand_hi.size() != n || box.capacity_lo.size() != n ||
        box.capacity_hi.size() != n) {
        throw SweepError("search box dimensions differ from the network");
    }
    if (!(box.step > 0.0)) throw SweepError("grid step must be > 0");
    require_sced_defined(model);

    // Axes: capacity of bus 0..n-1, then demand of bus 0..n-1. The odometer
    // advances the last axis fastest.
    std::vector<std::vector<double>> axes;
    for (std::size_t i = 0; i < n; ++i) {
        if (box.capacity_lo[i] == box.capacity_hi[i]) {
            axes.push_back({box.capacity_lo[i]});
        } else {
            axes.push_back(Range{box.capacity_lo[i], box.capacity_hi[i], box.step}.points());
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        axes.push_back(Range{box.demand_lo[i], box.demand_hi[i], box.step}.points());
    }
    std::size_t total = 1;
    for (const auto& a : axes) {
        if (total > (std::size_t{1} << 40) / a.size()) throw SweepError("search grid too large");
        total *= a.size();
    }

    constexpr std::size_t kChunk = 1 << 15;
    WorstCaseResult best;
    bool found = false;
    std::vector<std::size_t> digit(axes.size(), 0);
    auto advance = [&] {
        for (std::size_t a = axes.size(); a-- > 0;) {
            if (++digit[a] < axes[a].size()) return;
            digit[a] = 0;
        }
    };
    for (std::size_t begin = 0; begin < total; begin += kChunk) {
        const std::size_t end = std::min(total, begin + kChunk);
        std::vector<InputInstance> batch;
        batch.reserve(end - begin);
        for (std::size_t g = begin; g < end; ++g) {
            InputInstance inst{std::vector<double>(n), std::vector<double>(n)};
            for (std::size_t i = 0; i < n; ++i) {
                inst.gen_capacity[i] = axes[i][digit[i]];
                inst.demand[i] = axes[n + i][digit[n + i]];
            }
            batch.push_back(std::move(inst));
            advance();
        }
        const auto outcomes = evaluate(model, batch, exec);
        for (std::size_t k = 0; k < outcomes.size(); ++k) {
            ++best.evaluated;
            const auto& o = outcomes[k];
            if (!o.ok()) continue;
            ++best.feasible;
            if (!found || o.pos > best.pos + kTieTol) {
                found = true;
                best.pos = o.pos;
                best.c_ed = o.c_ed;
                best.c_sc = o.c_sc;
                best.instance = batch[k];
            }
        }
    }
    if (!found) throw EmptyFeasibleGrid("no grid point is feasible for both ED and SCED");
    return best;
}

std::string_view to_string(AblationVariant v)
{
    switch (v) {
    case AblationVariant::Full:
        return "full";
    case AblationVariant::No150Link:
        return "no-150-link";
    case AblationVariant::Normalized:
        return "normalized";
    case AblationVariant::Homogeneous:
        return "homogeneous";
    }
    return "?";
}

AblationVariant parse_ablation_variant(std::string_view s)
{
    for (auto v : {AblationVariant::Full, AblationVariant::No150Link, AblationVariant::Normalized,
                   AblationVariant::Homogeneous}) {
        if (to_string(v) == s) return v;
    }
    throw SweepError("unknown ablation variant '" + std::string(s) + "'");
}

int line_between(const Network& net, int bus_a, int bus_b)
{
    std::optional<int> found;
    for (const auto& l : net.lines()) {
        if ((l.from_bus == bus_a && l.to_bus == bus_b) ||
            (l.from_bus == bus_b && l.to_bus == bus_a)) {
            if (found) {
                throw SweepError("more than one line joins buses " + std::to_string(bus_a) +
                                 " and " + std::to_string(bus_b));
            }
            found = l.id;
        }
    }
    if (!found) {
        throw SweepError("no line joins buses " + std::to_string(bus_a) + " and " +
                         std::to_string(bus_b));
    }
    return *found;
}

Network ablation_network(const Network& pjm5, AblationVariant v)
{
    Network net = pjm5;
    if (v == AblationVariant::Full) return net;

    net = net.without_line(line_between(net, 1, 5));
    if (v != AblationVariant::No150Link) {
        const auto& l13 = net.lines()[net.line_index(line_between(net, 1, 3))];
        const auto& l25 = net.lines()[net.line_index(line_between(net, 2, 5))];
        const double ratio = l13.limit / l13.susceptance;
        net = net.with_line_limit(l25.id, ratio * l25.susceptance);
    }
    if (v == AblationVariant::Homogeneous) {
        const auto rs = regions_of(net);
        for (auto b : rs.cheap) net = net.with_alpha(net.buses()[b].id, 15.0);
        for (auto b : rs.expensive) net = net.with_alpha(net.buses()[b].id, 40.0);
    }
    return net.renamed(pjm5.name() + "/" + std::string(to_string(v)));
}

SweepResult ablation_suite(const Network& pjm5, AblationVariant v, const AblationSpec& aspec)
{
    const DispatchModel model(ablation_network(pjm5, v));
    SweepSpec spec;
    spec.mode = SweepMode::RandomDistributionStudy;
    spec.range = aspec.aggregate;
    spec.cheap_demand = 0.0;
    spec.runs = aspec.runs;
    spec.seed = aspec.seed;
    spec.execution = aspec.execution;
    spec.eval = aspec.eval;
    return random_distribution_study(model, spec);
}

}  // namespace secdispatch
