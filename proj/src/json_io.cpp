#include "anarchy/json_io.hpp"

#include "anarchy/errors.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace anarchy {

using nlohmann::json;

namespace {

json scalar_out(const Rational& v) { return format_scalar(v); }

Rational scalar_in(const json& j, const char* what) {
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_string()) return parse_scalar(j.get<std::string>());
    throw ValidationError(std::string(what) + " must be an integer or a numeric string");
}

std::vector<Rational> scalar_vec_in(const json& j, const char* what) {
    if (!j.is_array()) throw ValidationError(std::string(what) + " must be an array");
    std::vector<Rational> out;
    for (const auto& e : j) out.push_back(scalar_in(e, what));
    return out;
}

json scalar_vec_out(const std::vector<Rational>& v, std::size_t from, std::size_t count) {
    json arr = json::array();
    for (std::size_t i = 0; i < count; ++i) arr.push_back(scalar_out(v[from + i]));
    return arr;
}

// Missing keys and wrong value kinds are caller input errors, not internal
// failures; surface them with the document kind attached.
template <typename Fn>
auto schema_guard(const char* what, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const json::exception& e) {
        throw ValidationError(std::string(what) + ": " + e.what());
    }
}

ExplicitGame named_instance(const json& j) {
    std::string name = j.at("instance").get<std::string>();
    if (name == "three_cycle") {
        Rational v = j.contains("v") ? scalar_in(j.at("v"), "v") : Rational(1);
        return instance_three_cycle(v);
    }
    if (name == "two_paths") {
        int n = j.at("n").get<int>();
        return instance_two_paths(n, scalar_vec_in(j.at("v"), "v"));
    }
    throw ValidationError("unknown named instance '" + name + "'");
}

} // namespace

json type_to_json(const ResourceType& t) {
    json j;
    j["name"] = t.name;
    j["n"] = t.n;
    j["c"] = scalar_vec_out(t.cost, 1, static_cast<std::size_t>(t.n));
    j["f"] = scalar_vec_out(t.rule, 1, static_cast<std::size_t>(t.n));
    return j;
}

ResourceType type_from_json(const json& j) {
    return schema_guard("type", [&] {
        int n = j.at("n").get<int>();
        auto cost = scalar_vec_in(j.at("c"), "c");
        auto rule = scalar_vec_in(j.at("f"), "f");
        if (cost.size() != static_cast<std::size_t>(n) ||
            rule.size() != static_cast<std::size_t>(n))
            throw ValidationError("c/f arrays must list loads 1..n");
        return make_type(j.value("name", std::string("type")), n, cost, rule);
    });
}

json game_to_json(const ExplicitGame& g) {
    json j;
    j["n"] = g.types.n;
    json types = json::array();
    for (const auto& t : g.types.types) types.push_back(type_to_json(t));
    j["types"] = types;
    json resources = json::array();
    for (const auto& r : g.resources)
        resources.push_back(json{{"type", r.type_index}, {"value", scalar_out(r.value)}});
    j["resources"] = resources;
    j["actions"] = g.actions;
    return j;
}

ExplicitGame game_from_json(const json& j) {
    if (!j.is_object()) throw ValidationError("game JSON must be an object");
    return schema_guard("game", [&] {
        if (j.contains("instance")) return named_instance(j);

        ExplicitGame g;
        g.types.n = j.at("n").get<int>();
        for (const auto& t : j.at("types")) g.types.types.push_back(type_from_json(t));
        for (const auto& r : j.at("resources"))
            g.resources.push_back({r.at("type").get<int>(), scalar_in(r.at("value"), "value")});
        for (const auto& pa : j.at("actions")) {
            std::vector<std::vector<int>> acts;
            for (const auto& a : pa) acts.push_back(a.get<std::vector<int>>());
            g.actions.push_back(std::move(acts));
        }
        g.validate();
        return g;
    });
}

json certificate_to_json(const SmoothnessCertificate& cert) {
    json j;
    j["mode"] =
        cert.mode == SmoothnessCertificate::Mode::Generalized ? "generalized" : "traditional";
    j["direction"] =
        cert.direction == SmoothnessCertificate::Direction::WelfareMax ? "welfare" : "cost";
    j["rho"] = scalar_out(cert.rho);
    j["bound"] = scalar_out(cert.bound);
    j["bound_decimal"] = format_decimal(cert.bound);
    j["nu"] = scalar_out(cert.nu);
    j["attained"] = cert.attained;
    j["lambda"] = cert.attained ? json(scalar_out(cert.lambda)) : json(nullptr);
    j["mu"] = cert.attained ? json(scalar_out(cert.mu)) : json(nullptr);
    j["binding"] = cert.binding;
    return j;
}

json poa_bound_to_json(const PoaBound& bound) {
    json j;
    j["n"] = bound.n;
    j["types"] = bound.type_names;
    j["finite"] = bound.finite;
    j["rho"] = scalar_out(bound.rho);
    j["poa"] = bound.finite ? json(scalar_out(bound.poa)) : json(nullptr);
    if (bound.finite) j["poa_decimal"] = format_decimal(bound.poa);
    j["attained"] = bound.attained;
    j["nu"] = scalar_out(bound.nu);
    j["nu_capped"] = bound.nu_capped;
    j["lambda"] = bound.attained ? json(scalar_out(bound.lambda)) : json(nullptr);
    j["mu"] = bound.attained ? json(scalar_out(bound.mu)) : json(nullptr);
    if (bound.attained) {
        j["lambda_decimal"] = format_decimal(bound.lambda);
        j["mu_decimal"] = format_decimal(bound.mu);
    }
    json binding = json::array();
    for (const auto& b : bound.binding)
        binding.push_back(json{{"type", b.type_index},
                               {"x", b.tuple.x},
                               {"y", b.tuple.y},
                               {"z", b.tuple.z},
                               {"dual", scalar_out(b.dual)}});
    j["binding"] = binding;
    return j;
}

json designed_rules_to_json(const DesignedRules& rules) {
    json j;
    j["n"] = rules.n;
    j["finite"] = rules.finite;
    if (rules.finite) {
        j["poa"] = scalar_out(rules.poa);
        j["poa_decimal"] = format_decimal(rules.poa);
    }
    json per = json::array();
    for (const auto& pt : rules.per_type) {
        json e;
        e["name"] = pt.name;
        e["finite"] = pt.finite;
        e["rho"] = scalar_out(pt.rho);
        e["f"] = scalar_vec_out(pt.f_star, 0, pt.f_star.size());
        e["nonneg_already"] = pt.nonneg_already;
        per.push_back(e);
    }
    j["per_type"] = per;
    return j;
}

json worst_case_to_json(const WorstCaseInstance& inst) {
    json j;
    j["game"] = game_to_json(inst.game);
    j["construction"] =
        inst.construction == Construction::TwoCycle ? "two_cycle" : "single_cycle";
    j["equilibrium"] = inst.equilibrium.choice;
    j["optimum"] = inst.optimum.choice;
    j["declared_poa"] = scalar_out(inst.declared_poa);
    return j;
}

WorstCaseInstance worst_case_from_json(const json& j) {
    return schema_guard("worst-case instance", [&] {
        WorstCaseInstance inst;
        inst.game = game_from_json(j.at("game"));
        std::string c = j.at("construction").get<std::string>();
        if (c == "two_cycle")
            inst.construction = Construction::TwoCycle;
        else if (c == "single_cycle")
            inst.construction = Construction::SingleCycle;
        else
            throw ValidationError("unknown construction '" + c + "'");
        inst.equilibrium.choice = j.at("equilibrium").get<std::vector<int>>();
        inst.optimum.choice = j.at("optimum").get<std::vector<int>>();
        inst.declared_poa = scalar_in(j.at("declared_poa"), "declared_poa");
        return inst;
    });
}

json worst_case_report_to_json(const WorstCaseReport& rep) {
    json j;
    j["equilibrium_ok"] = rep.equilibrium_ok;
    json costs = json::array();
    for (const auto& [at_eq, at_dev] : rep.player_costs)
        costs.push_back(json::array({scalar_out(at_eq), scalar_out(at_dev)}));
    j["player_costs"] = costs;
    j["declared_poa"] = scalar_out(rep.declared_poa);
    j["brute_poa"] = rep.brute_poa ? json(scalar_out(*rep.brute_poa)) : json(nullptr);
    j["gpoa_bound"] = rep.gpoa_bound ? json(scalar_out(*rep.gpoa_bound)) : json(nullptr);
    j["tight"] = rep.tight;
    j["lower_bound_ok"] = rep.lower_bound_ok;
    j["resources_ok"] = rep.resources_ok;
    j["pass"] = rep.pass;
    j["detail"] = rep.detail;
    return j;
}

std::string canonical_json(const json& j) { return j.dump(2) + "\n"; }

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw ValidationError("failed writing '" + path + "'");
}

} // namespace anarchy
