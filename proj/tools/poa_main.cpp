// Command-line driver: compute class-level price-of-anarchy bounds, design
// optimal distribution rules, synthesize/verify worst-case instances, and
// analyze explicit game files.
#include "CLI11.hpp"

#include "anarchy/errors.hpp"
#include "anarchy/game.hpp"
#include "anarchy/json_io.hpp"
#include "anarchy/poa.hpp"
#include "anarchy/smoothness.hpp"
#include "anarchy/types.hpp"
#include "anarchy/worstcase.hpp"

#include <nlohmann/json.hpp>

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

namespace {

using namespace anarchy;
using nlohmann::json;

struct RunConfig {
    int n = 25;
    bool n_set = false;
    std::string basis;
    std::string types_arg;
    std::string costs_arg;
    std::string game_arg;
    std::string out;
    std::string format = "json";
    bool use_float = false;
    bool full_index = false;
    bool nonneg = false;
    std::uint64_t cap = kDefaultEnumerationCap;
    std::uint64_t cce_cap = kDefaultCceCap;
    unsigned digits = 40;
    unsigned bit_limit = 1u << 20;

    void check() const {
        if (cap == 0 || cce_cap == 0 || bit_limit == 0)
            throw ValidationError("caps and bit limit must be positive");
        if (digits == 0) throw ValidationError("digits must be positive");
    }
};

bool logging_on() {
    const char* e = std::getenv("POA_LOG");
    return e && *e;
}

void note(const std::string& msg) {
    if (logging_on()) std::cerr << "[poa] " << msg << "\n";
}

json parse_json_text(const std::string& text, const std::string& origin) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(origin + ": " + e.what());
    }
}

// File path, or inline JSON when the argument starts with '{' or '['.
json load_json_arg(const std::string& arg) {
    if (!arg.empty() && (arg.front() == '{' || arg.front() == '['))
        return parse_json_text(arg, "inline JSON");
    return parse_json_text(read_text_file(arg), arg);
}

TypeSet load_types(const RunConfig& cfg) {
    if (!cfg.basis.empty() && !cfg.types_arg.empty())
        throw ValidationError("give either --basis or --types, not both");
    TypeSet set;
    if (!cfg.basis.empty()) {
        set.n = cfg.n;
        set.types = basis_types_by_name(cfg.basis, cfg.n, cfg.digits);
    } else if (!cfg.types_arg.empty()) {
        json j = load_json_arg(cfg.types_arg);
        const json* arr = &j;
        if (j.is_object()) {
            set.n = j.at("n").get<int>();
            if (cfg.n_set && set.n != cfg.n)
                throw ValidationError("--n disagrees with the type file's n");
            arr = &j.at("types");
        } else {
            set.n = cfg.n;
        }
        for (const auto& t : *arr) set.types.push_back(type_from_json(t));
        for (const auto& t : set.types)
            if (t.n != set.n) throw ValidationError("type '" + t.name + "' has mismatched n");
    } else {
        throw ValidationError("need --basis or --types");
    }
    set.validate();
    return set;
}

void emit_text(const RunConfig& cfg, const std::string& text) {
    if (cfg.out.empty())
        std::cout << text;
    else {
        write_text_file(cfg.out, text);
        note("wrote " + cfg.out);
    }
}

void emit(const RunConfig& cfg, const json& doc) { emit_text(cfg, canonical_json(doc)); }

PoaLpOptions lp_options(const RunConfig& cfg) {
    PoaLpOptions opt;
    opt.restricted = !cfg.full_index;
    opt.arithmetic = cfg.use_float ? Arithmetic::Float64 : Arithmetic::RationalExact;
    opt.lp.max_entry_bits = cfg.bit_limit;
    return opt;
}

int cmd_compute(const RunConfig& cfg) {
    TypeSet types = load_types(cfg);
    note("class LP: " + std::to_string(types.types.size()) + " type(s), n=" +
         std::to_string(types.n));
    PoaBound bound = poa_lp(types, lp_options(cfg));
    emit(cfg, poa_bound_to_json(bound));
    return bound.finite ? 0 : 4;
}

int cmd_design(const RunConfig& cfg) {
    std::vector<CostCurve> costs;
    int sources = (!cfg.basis.empty()) + (!cfg.costs_arg.empty()) + (!cfg.types_arg.empty());
    if (sources != 1)
        throw ValidationError("give exactly one of --basis, --costs, --types");
    if (!cfg.basis.empty()) {
        for (const auto& t : basis_types_by_name(cfg.basis, cfg.n, cfg.digits)) {
            CostCurve c;
            c.name = t.name;
            for (int x = 1; x <= t.n; ++x) c.cost_1n.push_back(t.c(x));
            costs.push_back(std::move(c));
        }
    } else {
        json j = load_json_arg(cfg.costs_arg.empty() ? cfg.types_arg : cfg.costs_arg);
        if (!j.is_array()) throw ValidationError("cost file must be a JSON array");
        for (const auto& e : j) {
            CostCurve c;
            c.name = e.value("name", std::string("cost") + std::to_string(costs.size()));
            for (const auto& v : e.at("c"))
                c.cost_1n.push_back(v.is_string() ? parse_scalar(v.get<std::string>())
                                                  : Rational(v.get<long long>()));
            costs.push_back(std::move(c));
        }
    }
    DesignedRules rules = optimal_rules(costs, cfg.n, cfg.nonneg);
    json doc = designed_rules_to_json(rules);
    json designed = json::array();
    for (const auto& t : rules.designed.types) designed.push_back(type_to_json(t));
    doc["designed_types"] = designed;
    emit(cfg, doc);
    return rules.finite ? 0 : 4;
}

int cmd_worst_case(const RunConfig& cfg) {
    TypeSet types = load_types(cfg);
    WorstCaseInstance inst = build_worst_case(types);
    note("constructed " +
         std::string(inst.construction == Construction::TwoCycle ? "two-cycle" : "single-cycle") +
         " instance with " + std::to_string(inst.game.resources.size()) + " resources");

    json doc;
    doc["instance"] = worst_case_to_json(inst);
    int rc = 0;
    if (profile_count(inst.game) <= cfg.cap) {
        WorstCaseReport rep = verify_worst_case(inst, cfg.cap);
        doc["report"] = worst_case_report_to_json(rep);
        if (!rep.pass) rc = 1;
    } else {
        doc["report"] = nullptr;
        note("verification skipped: profile count exceeds cap");
    }
    emit(cfg, doc);
    return rc;
}

int cmd_analyze(const RunConfig& cfg) {
    if (cfg.game_arg.empty()) throw ValidationError("need --game");
    json j = load_json_arg(cfg.game_arg);

    json doc;
    ExplicitGame game;
    if (j.is_object() && j.contains("instance") && j.at("instance").is_object())
        j = j.at("instance"); // output document of the worst-case command
    if (j.is_object() && j.contains("game")) {
        WorstCaseInstance inst = worst_case_from_json(j);
        game = inst.game;
        if (profile_count(game) <= cfg.cap)
            doc["verification"] = worst_case_report_to_json(verify_worst_case(inst, cfg.cap));
        else
            doc["verification"] = nullptr;
    } else {
        game = game_from_json(j);
    }
    game.validate();

    std::uint64_t total = profile_count(game);
    doc["players"] = game.num_players();
    doc["resources"] = game.resources.size();
    doc["profiles"] = total;

    BruteForcePoA brute = brute_force_poa(game, cfg.cap);
    doc["poa"] = format_scalar(brute.poa);
    doc["poa_decimal"] = format_decimal(brute.poa);
    doc["worst_equilibrium"] = brute.worst_equilibrium.choice;
    doc["worst_equilibrium_cost"] = format_scalar(brute.worst_equilibrium_cost);
    doc["optimum"] = brute.optimum.choice;
    doc["optimum_cost"] = format_scalar(brute.optimum_cost);

    auto equilibria = enumerate_nash(game, cfg.cap);
    doc["equilibria_count"] = equilibria.size();
    json eq_list = json::array();
    for (std::size_t i = 0; i < equilibria.size() && i < 200; ++i)
        eq_list.push_back(equilibria[i].choice);
    doc["equilibria"] = eq_list;
    doc["equilibria_truncated"] = equilibria.size() > 200;

    if (total <= cfg.cce_cap) {
        WorstCce cce = worst_cce_value(game, cfg.cce_cap);
        doc["worst_cce"] =
            json{{"value", format_scalar(cce.value)},
                 {"value_decimal", format_decimal(cce.value)},
                 {"support", cce.sigma.weights.size()},
                 {"over_optimum", format_scalar(cce.value / brute.optimum_cost)}};
    } else {
        doc["worst_cce"] = nullptr;
        note("CCE LP skipped: profile count exceeds --cce-cap");
    }

    std::vector<ExplicitGame> one{game};
    if (total * total <= cfg.cap) {
        try {
            doc["rpoa"] = certificate_to_json(robust_poa(one, cfg.cap));
        } catch (const ValidationError& e) {
            doc["rpoa"] = nullptr;
            doc["rpoa_error"] = e.what(); // validity condition fails
        }
        doc["gpoa"] = certificate_to_json(generalized_poa(one, cfg.cap));
    } else {
        doc["rpoa"] = nullptr;
        doc["gpoa"] = nullptr;
        note("smoothness LPs skipped: pair count exceeds --cap");
    }

    emit(cfg, doc);
    return 0;
}

int cmd_table1(const RunConfig& cfg) {
    const std::vector<std::string> bases = {"affine", "quadratic", "cubic", "sqrt", "log"};
    struct Row {
        std::string name;
        PoaBound bound;
    };
    std::vector<Row> rows;
    for (const auto& b : bases) {
        RunConfig one = cfg;
        one.basis = b;
        note("solving basis " + b);
        rows.push_back({b, poa_lp(load_types(one), lp_options(cfg))});
    }

    auto dec = [](const Rational& v) { return format_decimal(v); };
    if (cfg.format == "md") {
        std::string t = "| Class | lambda* | mu* | PoA |\n|---|---|---|---|\n";
        for (const auto& r : rows)
            t += "| " + r.name + " | " + (r.bound.attained ? dec(r.bound.lambda) : "-") + " | " +
                 (r.bound.attained ? dec(r.bound.mu) : "-") + " | " +
                 (r.bound.finite ? dec(r.bound.poa) : "unbounded") + " |\n";
        emit_text(cfg, t);
    } else if (cfg.format == "csv") {
        std::string t = "class,lambda,mu,poa\n";
        for (const auto& r : rows)
            t += r.name + "," + (r.bound.attained ? dec(r.bound.lambda) : "") + "," +
                 (r.bound.attained ? dec(r.bound.mu) : "") + "," +
                 (r.bound.finite ? dec(r.bound.poa) : "") + "\n";
        emit_text(cfg, t);
    } else if (cfg.format == "json") {
        json doc = json::array();
        for (const auto& r : rows) {
            json e = poa_bound_to_json(r.bound);
            e["class"] = r.name;
            doc.push_back(e);
        }
        emit(cfg, doc);
    } else {
        throw ValidationError("unknown --format '" + cfg.format + "'");
    }
    return 0;
}

void add_shared_flags(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--out", cfg.out, "write the result to this file instead of stdout");
    sub->add_option("--cap", cfg.cap, "profile enumeration cap");
    sub->add_option("--bit-limit", cfg.bit_limit,
                    "abort exact solves when any numerator/denominator exceeds this many bits");
}

void add_type_flags(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--n", cfg.n, "number of players")->check(CLI::PositiveNumber);
    sub->add_option("--basis", cfg.basis,
                    "latency basis: affine|quadratic|cubic|sqrt|log|poly<D>");
    sub->add_option("--types", cfg.types_arg,
                    "type set: JSON file or inline ({\"n\":..,\"types\":[..]} or array)");
    sub->add_option("--digits", cfg.digits, "decimal digits kept for sqrt/log basis values");
}

} // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    CLI::App app{"price-of-anarchy toolkit for local resource allocation games"};
    app.require_subcommand(1);

    CLI::App* compute = app.add_subcommand(
        "compute", "class-level price of anarchy of a type set (exact LP)");
    add_type_flags(compute, cfg);
    add_shared_flags(compute, cfg);
    compute->add_flag("--float", cfg.use_float, "solve in binary64 instead of rationals");
    compute->add_flag("--exact,!--no-exact", [](std::int64_t) {},
                      "exact rational arithmetic (default)");
    compute->add_flag("--full-index-set,!--restricted-only", cfg.full_index,
                      "use the full index set instead of the restricted one");

    CLI::App* design = app.add_subcommand(
        "design", "optimal distribution rules per cost curve");
    add_type_flags(design, cfg);
    add_shared_flags(design, cfg);
    design->add_option("--costs", cfg.costs_arg,
                       "cost curves: JSON array [{\"name\":..,\"c\":[..]}]");
    design->add_flag("--nonneg-rules", cfg.nonneg, "restrict rules to f >= 0");

    CLI::App* worst = app.add_subcommand(
        "worst-case", "build and verify a bound-attaining instance");
    add_type_flags(worst, cfg);
    add_shared_flags(worst, cfg);

    CLI::App* analyze = app.add_subcommand(
        "analyze", "exhaustive analysis of an explicit game file");
    analyze->add_option("--game", cfg.game_arg, "game JSON: file path or inline");
    analyze->add_option("--cce-cap", cfg.cce_cap, "profile cap for the CCE LP");
    add_shared_flags(analyze, cfg);

    CLI::App* table = app.add_subcommand(
        "table1", "bound table for the five latency bases");
    table->add_option("--n", cfg.n, "number of players")->check(CLI::PositiveNumber);
    table->add_option("--digits", cfg.digits, "decimal digits for sqrt/log values");
    table->add_option("--format", cfg.format, "json|csv|md")->capture_default_str();
    add_shared_flags(table, cfg);

    int rc = 0;
    try {
        app.parse(argc, argv);
        cfg.n_set = compute->count("--n") || design->count("--n") || worst->count("--n") ||
                    table->count("--n");
        cfg.check();
        if (app.got_subcommand(compute)) rc = cmd_compute(cfg);
        else if (app.got_subcommand(design)) rc = cmd_design(cfg);
        else if (app.got_subcommand(worst)) rc = cmd_worst_case(cfg);
        else if (app.got_subcommand(analyze)) rc = cmd_analyze(cfg);
        else if (app.got_subcommand(table)) rc = cmd_table1(cfg);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericOverflowError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const CapExceededError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const NoFiniteBoundError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const nlohmann::json::exception& e) {
        // Missing keys / wrong value kinds in user-supplied JSON.
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return rc;
}
