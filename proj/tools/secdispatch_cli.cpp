// secdispatch: command-line front end for dispatch, price-of-security and
// sweep runs. Exit status: 0 success, 1 bad input, 2 infeasible instance.

#include "secdispatch/csv.hpp"
#include "secdispatch/dispatch.hpp"
#include "secdispatch/experiments.hpp"
#include "secdispatch/two_bus.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

using namespace secdispatch;

namespace {

constexpr int kBadInput = 1;
constexpr int kInfeasible = 2;

std::ofstream open_output(const std::string& path)
{
    std::ofstream out(path);
    if (!out) throw CaseError("cannot write '" + path + "'");
    return out;
}

void write_generation(std::ostream& os, const Network& net, const std::vector<double>& gen)
{
    csv::write_row(os, {"bus", "generation"});
    for (std::size_t i = 0; i < gen.size(); ++i) {
        csv::write_row(os, {std::to_string(net.buses()[i].id), csv::number(gen[i])});
    }
}

void print_validation(const ValidationReport& rep)
{
    for (const auto& w : rep.warnings) std::cerr << "warning: " << w << '\n';
    for (const auto& e : rep.errors) std::cerr << "error: " << e << '\n';
}

struct InstanceArgs {
    std::string case_path;
    std::string instance_path;
    std::string output;
};

void add_instance_flags(CLI::App* sub, InstanceArgs& a)
{
    sub->add_option("--case", a.case_path, "case JSON")->required()->check(CLI::ExistingFile);
    sub->add_option("--instance", a.instance_path, "instance JSON")->required()->check(CLI::ExistingFile);
    sub->add_option("--output", a.output, "output CSV")->required();
}

int run_dispatch(const InstanceArgs& a, bool security_constrained)
{
    const DispatchModel model(load_network_file(a.case_path));
    const auto inst = load_instance_file(model.network(), a.instance_path);
    print_validation(validate_instance(model.network(), inst));
    const auto sol = security_constrained ? model.solve_sced(inst) : model.solve_ed(inst);
    auto out = open_output(a.output);
    if (!sol.optimal()) {
        write_generation(out, model.network(), {});
        std::cerr << (security_constrained ? "SCED" : "ED") << " is " << to_string(sol.status) << '\n';
        return kInfeasible;
    }
    write_generation(out, model.network(), sol.generation);
    std::printf("cost %s\n", csv::number(sol.cost).c_str());
    return 0;
}

int run_pos(const InstanceArgs& a)
{
    const DispatchModel model(load_network_file(a.case_path));
    const auto inst = load_instance_file(model.network(), a.instance_path);
    print_validation(validate_instance(model.network(), inst));
    const auto rep = model.price_of_security(inst);
    auto out = open_output(a.output);
    if (!rep.ok()) {
        write_generation(out, model.network(), {});
        csv::write_row(out, {"cost_ed", "cost_sc", "pos"});
        std::cerr << "instance not in the feasible set: " << to_string(rep.status) << '\n';
        return kInfeasible;
    }
    // The secure dispatch is the one reported; both costs go in the summary.
    write_generation(out, model.network(), rep.sc_solution.generation);
    csv::write_row(out, {"cost_ed", "cost_sc", "pos"});
    csv::write_row(out, {csv::number(rep.c_ed), csv::number(rep.c_sc), csv::number(rep.pos)});
    std::printf("cost_ed %s\ncost_sc %s\npos %s\n", csv::number(rep.c_ed).c_str(),
                csv::number(rep.c_sc).c_str(), csv::number(rep.pos).c_str());
    return 0;
}

struct OracleArgs {
    double alpha1 = 1, alpha2 = 2;
    double limit1 = 100, limit2 = 100;
    double b1 = 1, b2 = 1;
    double d1 = 0, d2 = 0;
};

int run_oracle(const OracleArgs& a)
{
    const Network net("two-bus", {{1, a.alpha1}, {2, a.alpha2}},
                      {{1, 1, 2, a.b1, a.limit1}, {2, 1, 2, a.b2, a.limit2}});
    const TwoBusOracle oracle(net);
    const auto& p = oracle.params();
    const auto c = oracle.costs(a.d1, a.d2);
    std::printf("f_ed %s\nf_sc %s\n", csv::number(p.f_ed).c_str(), csv::number(p.f_sc).c_str());
    if (oracle.relabeled()) std::printf("note: bus 2 is the cheap bus; closed forms use it as bus 1\n");
    std::printf("c_ed %s\nc_sc %s\npos %s\n", csv::number(c.c_ed).c_str(),
                csv::number(c.c_sc).c_str(), csv::number(oracle.pos(a.d1, a.d2)).c_str());
    if (p.alpha1 > 0.0) {
        const auto w = worst_case_instance(p);
        std::printf("worst_case d_cheap %s d_expensive %s cheap_capacity>= %s pos %s\n",
                    csv::number(w.d1).c_str(), csv::number(w.d2).c_str(),
                    csv::number(w.min_cheap_capacity).c_str(), csv::number(w.pos).c_str());
    } else {
        std::printf("worst_case unbounded (cheap cost is zero)\n");
    }
    return 0;
}

struct SweepArgs {
    std::string case_path;
    std::string mode;
    std::string spec_path;
    std::string output;
};

int run_sweep_cmd(const SweepArgs& a)
{
    const DispatchModel model(load_network_file(a.case_path));
    std::optional<SweepMode> mode;
    if (!a.mode.empty()) mode = parse_sweep_mode(a.mode);
    const auto spec = parse_sweep_spec(model.network(), read_text_file(a.spec_path), mode);
    const auto result = run_sweep(model, spec);
    {
        auto out = open_output(a.output);
        write_csv(result, out);
    }
    open_output(a.output + ".meta.json") << metadata_json(result) << '\n';
    const auto cp = critical_points(result);
    std::printf("%zu points written to %s\n", result.records.size(), a.output.c_str());
    if (cp.peak) {
        const auto& rec = result.records[*cp.peak];
        std::printf("peak pos_max %s at", csv::number(rec.pos_max).c_str());
        for (std::size_t k = 0; k < rec.axis.size(); ++k) {
            std::printf(" %s=%s", result.axis_names[k].c_str(), csv::number(rec.axis[k]).c_str());
        }
        std::printf("\n");
    }
    return 0;
}

struct WorstCaseArgs {
    std::string case_path;
    double dstep = 10;
    double dmax = 300;
    double qmax = kUnlimited;
    bool zero_cheap = false;
    std::string output;
};

int run_worst_case(const WorstCaseArgs& a)
{
    const DispatchModel model(load_network_file(a.case_path));
    const auto& net = model.network();
    auto box = SearchBox::uniform(net, a.dmax, a.dstep, a.qmax);
    if (a.zero_cheap) {
        for (auto b : regions_of(net).cheap) box.demand_hi[b] = 0.0;
    }
    const auto w = worst_case_search(model, box);
    auto out = open_output(a.output);
    csv::write_row(out, {"bus", "demand", "gen_capacity"});
    for (std::size_t i = 0; i < net.n(); ++i) {
        csv::write_row(out, {std::to_string(net.buses()[i].id), csv::number(w.instance.demand[i]),
                             csv::number(w.instance.gen_capacity[i])});
    }
    csv::write_row(out, {"pos", "c_ed", "c_sc", "evaluated", "feasible"});
    csv::write_row(out, {csv::number(w.pos), csv::number(w.c_ed), csv::number(w.c_sc),
                         std::to_string(w.evaluated), std::to_string(w.feasible)});
    std::printf("pos %s over %zu feasible of %zu grid points\ndemand", csv::number(w.pos).c_str(),
                w.feasible, w.evaluated);
    for (double d : w.instance.demand) std::printf(" %s", csv::number(d).c_str());
    std::printf("\n");
    return 0;
}

struct AblationArgs {
    std::string case_path;
    std::string variant = "full";
    std::size_t runs = 500;
    std::uint64_t seed = 2024;
    std::string output;
};

int run_ablation(const AblationArgs& a)
{
    const auto base = load_network_file(a.case_path);
    AblationSpec spec;
    spec.runs = a.runs;
    spec.seed = a.seed;
    const auto variant = parse_ablation_variant(a.variant);
    const auto result = ablation_suite(base, variant, spec);
    {
        auto out = open_output(a.output);
        write_csv(result, out);
    }
    open_output(a.output + ".meta.json") << metadata_json(result) << '\n';
    const auto cp = critical_points(result);
    if (cp.onset) {
        std::printf("onset %s\n", csv::number(result.records[*cp.onset].axis[0]).c_str());
    }
    if (cp.peak) {
        const auto& rec = result.records[*cp.peak];
        std::printf("peak %s at %s\n", csv::number(rec.pos_max).c_str(),
                    csv::number(rec.axis[0]).c_str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"DC dispatch, N-1 security and price-of-security tool"};
    app.require_subcommand(1);

    InstanceArgs ed_args, sced_args, pos_args;
    auto* ed = app.add_subcommand("solve-ed", "economic dispatch for one instance");
    add_instance_flags(ed, ed_args);
    auto* sced = app.add_subcommand("solve-sced", "N-1 security-constrained dispatch");
    add_instance_flags(sced, sced_args);
    auto* pos = app.add_subcommand("pos", "price of security for one instance");
    add_instance_flags(pos, pos_args);

    OracleArgs oracle_args;
    auto* oracle = app.add_subcommand("two-bus-oracle", "closed-form two-bus costs and worst case");
    oracle->add_option("--alpha1", oracle_args.alpha1, "cost at bus 1")->capture_default_str();
    oracle->add_option("--alpha2", oracle_args.alpha2, "cost at bus 2")->capture_default_str();
    oracle->add_option("--limit1", oracle_args.limit1, "line 1 limit")->capture_default_str();
    oracle->add_option("--limit2", oracle_args.limit2, "line 2 limit")->capture_default_str();
    oracle->add_option("--b1", oracle_args.b1, "line 1 susceptance")->capture_default_str();
    oracle->add_option("--b2", oracle_args.b2, "line 2 susceptance")->capture_default_str();
    oracle->add_option("--d1", oracle_args.d1, "demand at bus 1")->capture_default_str();
    oracle->add_option("--d2", oracle_args.d2, "demand at bus 2")->capture_default_str();

    SweepArgs sweep_args;
    auto* sweep = app.add_subcommand("sweep", "run a sweep described by a JSON spec");
    sweep->add_option("--case", sweep_args.case_path)->required()->check(CLI::ExistingFile);
    sweep->add_option("--mode", sweep_args.mode, "overrides the spec's mode");
    sweep->add_option("--spec", sweep_args.spec_path)->required()->check(CLI::ExistingFile);
    sweep->add_option("--output", sweep_args.output)->required();

    WorstCaseArgs wc_args;
    auto* wc = app.add_subcommand("worst-case", "grid search for the largest price of security");
    wc->add_option("--case", wc_args.case_path)->required()->check(CLI::ExistingFile);
    wc->add_option("--dstep", wc_args.dstep, "demand grid step")->capture_default_str();
    wc->add_option("--dmax", wc_args.dmax, "per-bus demand upper bound")->capture_default_str();
    wc->add_option("--qmax", wc_args.qmax, "generator capacity (unlimited if omitted)");
    wc->add_flag("--zero-cheap", wc_args.zero_cheap, "no demand on cheap-region buses");
    wc->add_option("--output", wc_args.output)->required();

    AblationArgs ab_args;
    auto* ab = app.add_subcommand("ablation", "five-bus topology-simplification sweep");
    ab->add_option("--case", ab_args.case_path)->required()->check(CLI::ExistingFile);
    ab->add_option("--variant", ab_args.variant, "full | no-150-link | normalized | homogeneous")
        ->capture_default_str();
    ab->add_option("--runs", ab_args.runs)->capture_default_str();
    ab->add_option("--seed", ab_args.seed)->capture_default_str();
    ab->add_option("--output", ab_args.output)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*ed) return run_dispatch(ed_args, false);
        if (*sced) return run_dispatch(sced_args, true);
        if (*pos) return run_pos(pos_args);
        if (*oracle) return run_oracle(oracle_args);
        if (*sweep) return run_sweep_cmd(sweep_args);
        if (*wc) return run_worst_case(wc_args);
        if (*ab) return run_ablation(ab_args);
    } catch (const IslandingContingency& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kBadInput;
    } catch (const EmptyFeasibleGrid& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInfeasible;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kBadInput;
    }
    return 0;
}
