// Power-network topology, parameters and problem instances.
//
// Units: power in MW, cost coefficients in $/MWh, susceptance in per-unit.
// Bus and line ordering follows the case document; that ordering fixes the
// column of every shift-factor matrix and the position in every instance
// vector.

#pragma once

#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace secdispatch {

inline constexpr double kUnlimited = std::numeric_limits<double>::infinity();

/// Error raised while loading or validating a case or instance document.
class CaseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Which side of a two-region network a bus belongs to. Used by the
/// experiment harness to place "cheap" and "expensive" demand.
enum class Region { Unspecified, Cheap, Expensive };

std::string_view to_string(Region r);

struct Bus {
    int id = 0;
    double alpha = 0.0;  // $/MWh
    Region region = Region::Unspecified;
};

struct Line {
    int id = 0;
    int from_bus = 0;
    int to_bus = 0;
    double susceptance = 1.0;  // per-unit, > 0
    double limit = kUnlimited;  // MW, >= 0; kUnlimited when unrated
};

/// Immutable directed multigraph of buses and lines. Validated on
/// construction: n >= 2, m >= 1, unique ids, positive susceptances,
/// nonnegative limits and costs, no self loops, connected.
class Network {
public:
    Network(std::string name, std::vector<Bus> buses, std::vector<Line> lines,
            std::optional<double> cross_region_limit = std::nullopt);

    const std::string& name() const { return name_; }
    const std::vector<Bus>& buses() const { return buses_; }
    const std::vector<Line>& lines() const { return lines_; }
    std::size_t n() const { return buses_.size(); }
    std::size_t m() const { return lines_.size(); }

    /// Position of a bus id in buses(); throws CaseError when absent.
    std::size_t bus_index(int bus_id) const;
    std::size_t line_index(int line_id) const;
    bool has_bus(int bus_id) const;

    std::vector<double> alphas() const;
    std::vector<std::size_t> buses_in(Region r) const;

    /// Documented cheap-to-expensive aggregate limit, when the case file
    /// declares one. Checked against the line data at construction.
    std::optional<double> cross_region_limit() const { return cross_region_limit_; }

    /// Sum of limits of lines joining a cheap bus to an expensive bus.
    double cross_region_capacity() const;

    // Modified copies for experiment variants.
    Network without_line(int line_id) const;
    Network with_line_limit(int line_id, double limit) const;
    Network with_alpha(int bus_id, double alpha) const;
    Network renamed(std::string name) const;

private:
    std::string name_;
    std::vector<Bus> buses_;
    std::vector<Line> lines_;
    std::optional<double> cross_region_limit_;
};

/// Generation capacity q̄ and demand d, indexed like Network::buses().
/// Unlimited capacity is kUnlimited.
struct InputInstance {
    std::vector<double> gen_capacity;
    std::vector<double> demand;

    double total_demand() const;
    double total_capacity() const;
};

struct ValidationReport {
    std::vector<std::string> errors;
    std::vector<std::string> warnings;

    bool valid() const { return errors.empty(); }
};

ValidationReport validate_instance(const Network& net, const InputInstance& inst);

/// Parse a case document:
/// {"name", "buses": [{"id", "alpha", "region"?}],
///  "lines": [{"id", "from", "to", "susceptance", "limit"}],
///  "cross_region_limit"?}
/// A null or absent line limit means the line is unrated.
Network load_network(std::string_view document);
Network load_network_file(const std::string& path);
std::string serialize_network(const Network& net);

/// Parse {"gen_capacity": {bus_id: number|null}, "demand": {bus_id: number}}.
/// Null capacity means unlimited. Every bus must appear in both maps.
InputInstance load_instance(const Network& net, std::string_view document);
InputInstance load_instance_file(const Network& net, const std::string& path);

/// Instance with the same capacity on every bus.
InputInstance uniform_capacity_instance(const Network& net, double capacity,
                                        std::vector<double> demand);

std::string read_text_file(const std::string& path);

}  // namespace secdispatch
