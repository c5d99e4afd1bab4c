#include "secdispatch/network.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

namespace secdispatch {

using nlohmann::json;

std::string_view to_string(Region r)
{
    switch (r) {
    case Region::Cheap:
        return "cheap";
    case Region::Expensive:
        return "expensive";
    case Region::Unspecified:
        break;
    }
    return "unspecified";
}

namespace {

std::string join_ids(const std::vector<int>& ids)
{
    std::ostringstream os;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        os << (i ? "," : "") << ids[i];
    }
    return os.str();
}

// Buses (by index) not reachable from bus 0.
std::vector<std::size_t> unreachable_buses(const std::vector<Bus>& buses,
                                           const std::vector<Line>& lines)
{
    std::unordered_map<int, std::size_t> index;
    for (std::size_t i = 0; i < buses.size(); ++i) index[buses[i].id] = i;
    std::vector<std::vector<std::size_t>> adj(buses.size());
    for (const auto& l : lines) {
        auto a = index.at(l.from_bus);
        auto b = index.at(l.to_bus);
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    std::vector<bool> seen(buses.size(), false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
        auto v = stack.back();
        stack.pop_back();
        for (auto w : adj[v]) {
            if (!seen[w]) {
                seen[w] = true;
                stack.push_back(w);
            }
        }
    }
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < buses.size(); ++i) {
        if (!seen[i]) out.push_back(i);
    }
    return out;
}

}  // namespace

Network::Network(std::string name, std::vector<Bus> buses, std::vector<Line> lines,
                 std::optional<double> cross_region_limit)
    : name_(std::move(name)),
      buses_(std::move(buses)),
      lines_(std::move(lines)),
      cross_region_limit_(cross_region_limit)
{
    if (buses_.size() < 2) {
        throw CaseError("network '" + name_ + "': n >= 2 required (got " +
                        std::to_string(buses_.size()) + ")");
    }
    if (lines_.empty()) {
        throw CaseError("network '" + name_ + "': m >= 1 required");
    }
    std::set<int> bus_ids;
    for (const auto& b : buses_) {
        if (!bus_ids.insert(b.id).second) {
            throw CaseError("duplicate bus id " + std::to_string(b.id));
        }
        if (!(b.alpha >= 0.0) || !std::isfinite(b.alpha)) {
            throw CaseError("bus " + std::to_string(b.id) + ": alpha must be finite and >= 0");
        }
    }
    std::set<int> line_ids;
    for (const auto& l : lines_) {
        const auto lid = std::to_string(l.id);
        if (!line_ids.insert(l.id).second) {
            throw CaseError("duplicate line id " + lid);
        }
        if (!bus_ids.count(l.from_bus) || !bus_ids.count(l.to_bus)) {
            throw CaseError("line " + lid + ": references unknown bus");
        }
        if (l.from_bus == l.to_bus) {
            throw CaseError("line " + lid + ": from_bus equals to_bus");
        }
        if (!(l.susceptance > 0.0) || !std::isfinite(l.susceptance)) {
            throw CaseError("line " + lid + ": susceptance must be finite and > 0");
        }
        if (!(l.limit >= 0.0)) {
            throw CaseError("line " + lid + ": limit must be >= 0");
        }
    }
    if (auto lost = unreachable_buses(buses_, lines_); !lost.empty()) {
        std::vector<int> ids;
        for (auto i : lost) ids.push_back(buses_[i].id);
        throw CaseError("network '" + name_ + "' is disconnected; unreachable buses {" +
                        join_ids(ids) + "}");
    }
    if (cross_region_limit_) {
        const double actual = cross_region_capacity();
        if (std::abs(actual - *cross_region_limit_) > 1e-6) {
            std::ostringstream os;
            os << "network '" << name_ << "': declared cross_region_limit "
               << *cross_region_limit_ << " MW but cheap-to-expensive lines sum to " << actual
               << " MW";
            throw CaseError(os.str());
        }
    }
}

std::size_t Network::bus_index(int bus_id) const
{
    for (std::size_t i = 0; i < buses_.size(); ++i) {
        if (buses_[i].id == bus_id) return i;
    }
    throw CaseError("unknown bus id " + std::to_string(bus_id));
}

std::size_t Network::line_index(int line_id) const
{
    for (std::size_t i = 0; i < lines_.size(); ++i) {
        if (lines_[i].id == line_id) return i;
    }
    throw CaseError("unknown line id " + std::to_string(line_id));
}

bool Network::has_bus(int bus_id) const
{
    return std::any_of(buses_.begin(), buses_.end(),
                       [&](const Bus& b) { return b.id == bus_id; });
}

std::vector<double> Network::alphas() const
{
    std::vector<double> a;
    a.reserve(buses_.size());
    for (const auto& b : buses_) a.push_back(b.alpha);
    return a;
}

std::vector<std::size_t> Network::buses_in(Region r) const
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < buses_.size(); ++i) {
        if (buses_[i].region == r) out.push_back(i);
    }
    return out;
}

double Network::cross_region_capacity() const
{
    double total = 0.0;
    for (const auto& l : lines_) {
        const auto ra = buses_[bus_index(l.from_bus)].region;
        const auto rb = buses_[bus_index(l.to_bus)].region;
        const bool crosses = (ra == Region::Cheap && rb == Region::Expensive) ||
                             (ra == Region::Expensive && rb == Region::Cheap);
        if (crosses) total += l.limit;
    }
    return total;
}

Network Network::without_line(int line_id) const
{
    auto lines = lines_;
    lines.erase(lines.begin() + static_cast<std::ptrdiff_t>(line_index(line_id)));
    return Network(name_, buses_, std::move(lines));
}

Network Network::with_line_limit(int line_id, double limit) const
{
    auto lines = lines_;
    lines[line_index(line_id)].limit = limit;
    return Network(name_, buses_, std::move(lines));
}

Network Network::with_alpha(int bus_id, double alpha) const
{
    auto buses = buses_;
    buses[bus_index(bus_id)].alpha = alpha;
    return Network(name_, std::move(buses), lines_, cross_region_limit_);
}

Network Network::renamed(std::string name) const
{
    return Network(std::move(name), buses_, lines_, cross_region_limit_);
}

double InputInstance::total_demand() const
{
    return std::accumulate(demand.begin(), demand.end(), 0.0);
}

double InputInstance::total_capacity() const
{
    return std::accumulate(gen_capacity.begin(), gen_capacity.end(), 0.0);
}

ValidationReport validate_instance(const Network& net, const InputInstance& inst)
{
    ValidationReport rep;
    const auto n = net.n();
    if (inst.gen_capacity.size() != n) {
        rep.errors.push_back("gen_capacity has length " + std::to_string(inst.gen_capacity.size()) +
                             ", expected " + std::to_string(n));
    }
    if (inst.demand.size() != n) {
        rep.errors.push_back("demand has length " + std::to_string(inst.demand.size()) +
                             ", expected " + std::to_string(n));
    }
    for (std::size_t i = 0; i < inst.gen_capacity.size(); ++i) {
        if (!(inst.gen_capacity[i] >= 0.0)) {
            rep.errors.push_back("gen_capacity[" + std::to_string(i) + "] is negative or NaN");
        }
    }
    for (std::size_t i = 0; i < inst.demand.size(); ++i) {
        if (!(inst.demand[i] >= 0.0) || !std::isfinite(inst.demand[i])) {
            rep.errors.push_back("demand[" + std::to_string(i) + "] is negative or not finite");
        }
    }
    if (rep.valid()) {
        const double cap = inst.total_capacity();
        const double dem = inst.total_demand();
        if (cap < dem) {
            std::ostringstream os;
            os << "total capacity " << cap << " < total demand " << dem
               << "; both dispatch problems are infeasible";
            rep.warnings.push_back(os.str());
        }
    }
    return rep;
}

namespace {

template <class T>
T require(const json& obj, const char* key, const std::string& where)
{
    if (!obj.is_object() || !obj.contains(key)) {
        throw CaseError(where + ": missing field '" + key + "'");
    }
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw CaseError(where + ": field '" + key + "' has wrong type");
    }
}

Region parse_region(const json& b, const std::string& where)
{
    if (!b.contains("region") || b.at("region").is_null()) return Region::Unspecified;
    const auto s = require<std::string>(b, "region", where);
    if (s == "cheap") return Region::Cheap;
    if (s == "expensive") return Region::Expensive;
    throw CaseError(where + ": region must be 'cheap' or 'expensive'");
}

json parse_json(std::string_view document)
{
    try {
        return json::parse(document);
    } catch (const json::parse_error& e) {
        throw CaseError(std::string("malformed JSON: ") + e.what());
    }
}

}  // namespace

Network load_network(std::string_view document)
{
    const json doc = parse_json(document);
    if (!doc.is_object()) throw CaseError("case document must be a JSON object");
    const auto name = require<std::string>(doc, "name", "case");

    if (!doc.contains("buses") || !doc.at("buses").is_array()) {
        throw CaseError("case: 'buses' must be an array");
    }
    if (!doc.contains("lines") || !doc.at("lines").is_array()) {
        throw CaseError("case: 'lines' must be an array");
    }

    std::vector<Bus> buses;
    for (const auto& b : doc.at("buses")) {
        const std::string where =
            "bus" + (b.contains("id") ? " " + b.at("id").dump() : std::string(" <no id>"));
        Bus bus;
        bus.id = require<int>(b, "id", where);
        bus.alpha = require<double>(b, "alpha", where);
        bus.region = parse_region(b, where);
        buses.push_back(bus);
    }

    std::vector<Line> lines;
    for (const auto& l : doc.at("lines")) {
        const std::string where =
            "line" + (l.contains("id") ? " " + l.at("id").dump() : std::string(" <no id>"));
        Line line;
        line.id = require<int>(l, "id", where);
        line.from_bus = require<int>(l, "from", where);
        line.to_bus = require<int>(l, "to", where);
        line.susceptance = require<double>(l, "susceptance", where);
        line.limit = (!l.contains("limit") || l.at("limit").is_null())
                         ? kUnlimited
                         : require<double>(l, "limit", where);
        lines.push_back(line);
    }

    std::optional<double> cross;
    if (doc.contains("cross_region_limit") && !doc.at("cross_region_limit").is_null()) {
        cross = require<double>(doc, "cross_region_limit", "case");
    }
    return Network(name, std::move(buses), std::move(lines), cross);
}

std::string read_text_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CaseError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Network load_network_file(const std::string& path)
{
    return load_network(read_text_file(path));
}

std::string serialize_network(const Network& net)
{
    json doc;
    doc["name"] = net.name();
    doc["buses"] = json::array();
    for (const auto& b : net.buses()) {
        json jb{{"id", b.id}, {"alpha", b.alpha}};
        if (b.region != Region::Unspecified) jb["region"] = std::string(to_string(b.region));
        doc["buses"].push_back(jb);
    }
    doc["lines"] = json::array();
    for (const auto& l : net.lines()) {
        json jl{{"id", l.id}, {"from", l.from_bus}, {"to", l.to_bus},
                {"susceptance", l.susceptance}};
        jl["limit"] = std::isinf(l.limit) ? json(nullptr) : json(l.limit);
        doc["lines"].push_back(jl);
    }
    if (net.cross_region_limit()) doc["cross_region_limit"] = *net.cross_region_limit();
    return doc.dump(2);
}

InputInstance load_instance(const Network& net, std::string_view document)
{
    const json doc = parse_json(document);
    InputInstance inst;
    inst.gen_capacity.assign(net.n(), 0.0);
    inst.demand.assign(net.n(), 0.0);

    auto fill = [&](const char* key, std::vector<double>& out, bool null_is_unlimited) {
        if (!doc.is_object() || !doc.contains(key) || !doc.at(key).is_object()) {
            throw CaseError(std::string("instance: '") + key + "' must be an object keyed by bus id");
        }
        std::vector<bool> seen(net.n(), false);
        for (const auto& [k, v] : doc.at(key).items()) {
            int id = 0;
            try {
                std::size_t used = 0;
                id = std::stoi(k, &used);
                if (used != k.size()) throw std::invalid_argument(k);
            } catch (const std::exception&) {
                throw CaseError(std::string("instance: ") + key + " key '" + k +
                                "' is not a bus id");
            }
            if (!net.has_bus(id)) {
                throw CaseError(std::string("instance: ") + key + " references unknown bus " + k);
            }
            const auto i = net.bus_index(id);
            if (v.is_null() && null_is_unlimited) {
                out[i] = kUnlimited;
            } else if (v.is_number()) {
                out[i] = v.get<double>();
            } else {
                throw CaseError(std::string("instance: ") + key + "[" + k + "] must be a number");
            }
            seen[i] = true;
        }
        for (std::size_t i = 0; i < net.n(); ++i) {
            if (!seen[i]) {
                throw CaseError(std::string("instance: ") + key + " missing bus " +
                                std::to_string(net.buses()[i].id));
            }
        }
    };
    fill("gen_capacity", inst.gen_capacity, true);
    fill("demand", inst.demand, false);
    return inst;
}

InputInstance load_instance_file(const Network& net, const std::string& path)
{
    return load_instance(net, read_text_file(path));
}

InputInstance uniform_capacity_instance(const Network& net, double capacity,
                                        std::vector<double> demand)
{
    return InputInstance{std::vector<double>(net.n(), capacity), std::move(demand)};
}

}  // namespace secdispatch
