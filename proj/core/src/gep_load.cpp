#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>

#include <json.hpp>

#include "adpqis/gep.hpp"

namespace adpqis::gep {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what)
{
    throw ContractViolation(path + ": " + what);
}

int byte_to_line(const std::string& text, std::size_t byte)
{
    int line = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i)
        if (text[i] == '\n')
            ++line;
    return line;
}

double number_field(const json& obj, const std::string& key, const std::string& path, const std::string& where)
{
    if (!obj.contains(key))
        fail(path, where + ": missing key '" + key + "'");
    if (!obj[key].is_number())
        fail(path, where + ": key '" + key + "' must be a number");
    return obj[key].get<double>();
}

Fuel parse_fuel(const std::string& s, const std::string& path, const std::string& where)
{
    if (s == "gas")
        return Fuel::Gas;
    if (s == "coal")
        return Fuel::Coal;
    if (s == "uranium")
        return Fuel::Uranium;
    fail(path, where + ": unknown fuel '" + s + "' (expected gas, coal or uranium)");
}

} // namespace

void validate(const GepInstance& instance)
{
    if (instance.technologies.empty())
        throw ContractViolation("gep: no technologies");
    if (instance.blocks.empty())
        throw ContractViolation("gep: no load blocks");
    if (instance.initial_capacity_mw.size() != instance.technologies.size())
        throw ContractViolation("gep: initial_capacity_mw length must match technologies");
    if (instance.stage_bounds.empty())
        throw ContractViolation("gep: no stage bounds");
    if (!(instance.years_per_stage > 0.0))
        throw ContractViolation("gep: years_per_stage must be positive");
    if (instance.growth_rate < 0.0)
        throw ContractViolation("gep: growth_rate must be non-negative");
    if (!(instance.epoch_weight > 0.0))
        throw ContractViolation("gep: epoch_weight must be positive");

    for (const Technology& t : instance.technologies)
        if (t.capital_cost_per_mw < 0.0 || t.heat_rate < 0.0 || t.fuel_price < 0.0 || t.emission_rate < 0.0 ||
            t.variable_om < 0.0)
            throw ContractViolation("gep: technology '" + t.name + "' has a negative parameter");

    double hours = 0.0;
    for (std::size_t b = 0; b < instance.blocks.size(); ++b) {
        if (!(instance.blocks[b].hours > 0.0))
            throw ContractViolation("gep: blocks[" + std::to_string(b) + "].hours must be positive");
        if (!(instance.blocks[b].net_demand_mw > 0.0))
            throw ContractViolation("gep: blocks[" + std::to_string(b) + "].net_demand_mw must be positive");
        hours += instance.blocks[b].hours;
    }
    if (std::abs(hours - 8760.0) > 0.5)
        throw ContractViolation("gep: block hours sum to " + std::to_string(hours) + ", expected 8760");

    for (double c : instance.initial_capacity_mw)
        if (c < 0.0)
            throw ContractViolation("gep: negative initial capacity");

    for (std::size_t t = 0; t < instance.stage_bounds.size(); ++t) {
        const StageBounds& sb = instance.stage_bounds[t];
        if (sb.gas_lo > sb.gas_hi || sb.carbon_lo > sb.carbon_hi)
            throw ContractViolation("gep: stage_bounds[" + std::to_string(t) + "] has lo > hi");
    }
    const StageBounds& first = instance.stage_bounds.front();
    if (first.gas_lo != first.gas_hi || first.carbon_lo != first.carbon_hi)
        throw ContractViolation("gep: stage 1 bounds must be degenerate (lo == hi)");
}

GepInstance load_instance(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ContractViolation("cannot open dataset file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();

    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(path, "parse error at line " + std::to_string(byte_to_line(text, e.byte)) + ": " + e.what());
    }

    GepInstance instance;

    if (!root.contains("technologies") || !root["technologies"].is_array())
        fail(path, "missing or non-array key 'technologies'");
    for (std::size_t i = 0; i < root["technologies"].size(); ++i) {
        const json& jt = root["technologies"][i];
        const std::string where = "technologies[" + std::to_string(i) + "]";
        Technology t;
        if (!jt.contains("name") || !jt["name"].is_string())
            fail(path, where + ": missing string key 'name'");
        t.name = jt["name"].get<std::string>();
        t.capital_cost_per_mw = number_field(jt, "capital_cost_per_mw", path, where);
        t.heat_rate = number_field(jt, "heat_rate", path, where);
        if (!jt.contains("fuel") || !jt["fuel"].is_string())
            fail(path, where + ": missing string key 'fuel'");
        t.fuel = parse_fuel(jt["fuel"].get<std::string>(), path, where);
        t.fuel_price = number_field(jt, "fuel_price", path, where);
        t.emission_rate = number_field(jt, "emission_rate", path, where);
        t.variable_om = number_field(jt, "variable_om", path, where);
        instance.technologies.push_back(std::move(t));
    }

    if (!root.contains("blocks") || !root["blocks"].is_array())
        fail(path, "missing or non-array key 'blocks'");
    for (std::size_t i = 0; i < root["blocks"].size(); ++i) {
        const json& jb = root["blocks"][i];
        const std::string where = "blocks[" + std::to_string(i) + "]";
        instance.blocks.push_back({number_field(jb, "hours", path, where),
                                   number_field(jb, "net_demand_mw", path, where)});
    }

    if (!root.contains("initial_capacity_mw") || !root["initial_capacity_mw"].is_array())
        fail(path, "missing or non-array key 'initial_capacity_mw'");
    for (const json& jc : root["initial_capacity_mw"]) {
        if (!jc.is_number())
            fail(path, "initial_capacity_mw entries must be numbers");
        instance.initial_capacity_mw.push_back(jc.get<double>());
    }

    if (!root.contains("stage_bounds") || !root["stage_bounds"].is_array())
        fail(path, "missing or non-array key 'stage_bounds'");
    for (std::size_t i = 0; i < root["stage_bounds"].size(); ++i) {
        const json& js = root["stage_bounds"][i];
        const std::string where = "stage_bounds[" + std::to_string(i) + "]";
        auto pair_of = [&](const char* key) {
            if (!js.contains(key) || !js[key].is_array() || js[key].size() != 2 || !js[key][0].is_number() ||
                !js[key][1].is_number())
                fail(path, where + ": key '" + std::string(key) + "' must be [lo, hi]");
            return std::pair<double, double>{js[key][0].get<double>(), js[key][1].get<double>()};
        };
        const auto [glo, ghi] = pair_of("gas");
        const auto [clo, chi] = pair_of("carbon");
        instance.stage_bounds.push_back({glo, ghi, clo, chi});
    }

    instance.years_per_stage = number_field(root, "years_per_stage", path, "root");
    instance.growth_rate = number_field(root, "growth_rate", path, "root");
    instance.epoch_weight = number_field(root, "epoch_weight", path, "root");

    try {
        validate(instance);
    } catch (const ContractViolation& e) {
        fail(path, e.what());
    }
    return instance;
}

} // namespace adpqis::gep
