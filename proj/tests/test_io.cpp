#include "anarchy/errors.hpp"
#include "anarchy/json_io.hpp"
#include "anarchy/smoothness.hpp"
#include "anarchy/worstcase.hpp"

#include "doctest.h"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <cstdlib>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

using namespace anarchy;
using nlohmann::json;

TEST_CASE("scalar parsing accepts exact decimal and fraction forms") {
    CHECK(parse_scalar("3") == 3);
    CHECK(parse_scalar("+3") == 3);
    CHECK(parse_scalar("-5/2") == Rational(-5, 2));
    CHECK(parse_scalar("2/4") == Rational(1, 2));
    CHECK(parse_scalar("1.25") == Rational(5, 4));
    CHECK(parse_scalar(".5") == Rational(1, 2));
    CHECK(parse_scalar("2.5e-3") == Rational(1, 400));
    CHECK(parse_scalar("1e3") == 1000);
    CHECK(parse_scalar(" 7 ") == 7);

    CHECK_THROWS_AS(parse_scalar(""), ValidationError);
    CHECK_THROWS_AS(parse_scalar("1.2.3"), ValidationError);
    CHECK_THROWS_AS(parse_scalar("1/0"), ValidationError);
    CHECK_THROWS_AS(parse_scalar("x"), ValidationError);
    CHECK_THROWS_AS(parse_scalar("1e"), ValidationError);
    CHECK_THROWS_AS(parse_scalar("1/2/3"), ValidationError);
}

TEST_CASE("scalar formatting is canonical") {
    CHECK(format_scalar(Rational(5, 2)) == "5/2");
    CHECK(format_scalar(Rational(4, 2)) == "2");
    CHECK(format_scalar(Rational(-1, 3)) == "-1/3");
    CHECK(format_scalar(Rational(0)) == "0");
    CHECK(format_decimal(Rational(5, 2)) == "2.5");
    CHECK(parse_scalar(format_scalar(Rational(22, 7))) == Rational(22, 7));
}

TEST_CASE("type serialization round trip") {
    auto t = make_type("quad", 3, {1, 4, 9}, {1, Rational(31, 21), Rational(13, 7)});
    json j = type_to_json(t);
    CHECK(j["name"] == "quad");
    CHECK(j["n"] == 3);
    CHECK(j["c"] == json::array({"1", "4", "9"}));
    CHECK(j["f"] == json::array({"1", "31/21", "13/7"}));

    auto back = type_from_json(j);
    CHECK(back.name == t.name);
    CHECK(back.cost == t.cost);
    CHECK(back.rule == t.rule);

    // Bare JSON integers are accepted; curves must cover loads 1..n exactly;
    // non-integral JSON numbers are not silently rounded.
    auto mixed = type_from_json(json{{"name", "m"}, {"n", 2}, {"c", {1, "3/2"}}, {"f", {1, 1}}});
    CHECK(mixed.c(2) == Rational(3, 2));
    CHECK_THROWS_AS(type_from_json(json{{"n", 2}, {"c", {1}}, {"f", {1, 1}}}), ValidationError);
    CHECK_THROWS_AS(type_from_json(json{{"n", 1}, {"c", {1.5}}, {"f", {1}}}), ValidationError);
}

TEST_CASE("game serialization is canonical and stable") {
    auto g = instance_three_cycle();
    std::string s = canonical_json(game_to_json(g));
    CHECK(s.back() == '\n');

    auto back = game_from_json(json::parse(s));
    CHECK(canonical_json(game_to_json(back)) == s);
    CHECK(back.resources.size() == 6);
    CHECK(brute_force_poa(back).poa == Rational(5, 2));

    // parse(serialize(.)) is the identity on documents, byte for byte.
    CHECK(canonical_json(json::parse(s)) == s);
}

TEST_CASE("named instances load by name") {
    auto g = game_from_json(json{{"instance", "three_cycle"}});
    CHECK(g.resources.size() == 6);

    auto scaled = game_from_json(json{{"instance", "three_cycle"}, {"v", "7/3"}});
    CHECK(scaled.resources[0].value == Rational(7, 3));

    auto paths = game_from_json(
        json{{"instance", "two_paths"}, {"n", 2}, {"v", {"1", "0", "1", "0"}}});
    CHECK(paths.resources.size() == 4);
    CHECK(paths.num_actions(0) == 2);

    CHECK_THROWS_AS(game_from_json(json{{"instance", "mystery"}}), ValidationError);
}

TEST_CASE("malformed games are rejected with the offending path") {
    json good = game_to_json(instance_three_cycle());

    json bad = good;
    bad["actions"][0][0] = {0, 9};
    CHECK_THROWS_WITH_AS(game_from_json(bad), doctest::Contains("actions[0][0]"),
                         ValidationError);

    bad = good;
    bad["resources"][2]["value"] = "-1";
    CHECK_THROWS_WITH_AS(game_from_json(bad), doctest::Contains("resources[2]"),
                         ValidationError);

    bad = good;
    bad["types"].push_back(bad["types"][0]); // duplicate type name
    CHECK_THROWS_AS(game_from_json(bad), ValidationError);

    CHECK_THROWS_AS(game_from_json(json::parse("[]")), ValidationError);
}

TEST_CASE("certificate serialization") {
    std::vector<ExplicitGame> games{instance_three_cycle()};
    json j = certificate_to_json(generalized_poa(games));
    CHECK(j["mode"] == "generalized");
    CHECK(j["direction"] == "cost");
    CHECK(j["bound"] == "5/2");
    CHECK(j["bound_decimal"] == "2.5");
    CHECK(j["lambda"] == "20/21");
    CHECK(j["mu"] == "13/21");
    CHECK(j["attained"] == true);
    CHECK(j["binding"].is_array());

    SmoothnessCertificate bare;
    bare.rho = 1;
    bare.bound = 1;
    json k = certificate_to_json(bare);
    CHECK(k["lambda"].is_null());
    CHECK(k["mu"].is_null());
    CHECK(k["mode"] == "generalized");
}

TEST_CASE("bound serialization with and without a finite value") {
    TypeSet affine{3, basis_types(BasisFamily::Affine, 3)};
    json j = poa_bound_to_json(poa_lp(affine));
    CHECK(j["poa"] == "5/2");
    CHECK(j["poa_decimal"] == "2.5");
    CHECK(j["lambda"] == "5/3");
    CHECK(j["mu"] == "1/3");
    CHECK(j["nu_capped"] == false);
    REQUIRE(j["binding"].size() == 2);
    CHECK(j["binding"][0] ==
          json{{"type", 0}, {"x", 1}, {"y", 1}, {"z", 0}, {"dual", "-1/5"}});

    TypeSet inert{2, {make_type("inert", 2, {1, 2}, {0, 0})}};
    json k = poa_bound_to_json(poa_lp(inert));
    CHECK(k["finite"] == false);
    CHECK(k["poa"].is_null());
    CHECK(!k.contains("poa_decimal"));
    CHECK(k["lambda"].is_null());
}

TEST_CASE("designed rule serialization") {
    json j = designed_rules_to_json(optimal_rules({{"quad", {1, 4, 9}}}, 3));
    CHECK(j["poa"] == "21/11");
    REQUIRE(j["per_type"].size() == 1);
    CHECK(j["per_type"][0]["f"] == json::array({"1", "31/21", "13/7"}));
    CHECK(j["per_type"][0]["rho"] == "11/21");
    CHECK(j["per_type"][0]["nonneg_already"] == true);
}

TEST_CASE("worst case serialization round trip") {
    TypeSet T{3, {make_type("xx", 3, {1, 2, 3}, {1, 2, 3})}};
    auto inst = build_worst_case(T);

    json j = worst_case_to_json(inst);
    CHECK(j["construction"] == "two_cycle");
    std::string s = canonical_json(j);
    auto back = worst_case_from_json(json::parse(s));
    CHECK(canonical_json(worst_case_to_json(back)) == s);
    CHECK(back.declared_poa == 2);
    CHECK(back.equilibrium == inst.equilibrium);
    CHECK(verify_worst_case(back).pass);

    json bad = j;
    bad["construction"] = "spiral";
    CHECK_THROWS_AS(worst_case_from_json(bad), ValidationError);

    json rep = worst_case_report_to_json(verify_worst_case(inst));
    CHECK(rep["pass"] == true);
    CHECK(rep["tight"] == true);
    CHECK(rep["brute_poa"] == "2");
    CHECK(rep["player_costs"].is_array());
}

TEST_CASE("text file helpers") {
    std::string path = "/tmp/anarchy_io_" + std::to_string(::getpid()) + ".txt";
    write_text_file(path, "hello\n");
    CHECK(read_text_file(path) == "hello\n");
    std::remove(path.c_str());
    CHECK_THROWS_AS(read_text_file(path), ValidationError);
}

#ifdef POA_CLI_PATH

namespace {

struct CliResult {
    int exit_code = -1;
    std::string output; // stdout only; stderr is discarded to a separate file
};

CliResult run_cli(const std::string& args) {
    static int counter = 0;
    std::string base = "/tmp/anarchy_cli_" + std::to_string(::getpid()) + "_" +
                       std::to_string(counter++);
    std::string cmd = std::string(POA_CLI_PATH) + " " + args + " > " + base + ".out 2> " +
                      base + ".err";
    int status = std::system(cmd.c_str());
    CliResult r;
    if (WIFEXITED(status)) r.exit_code = WEXITSTATUS(status);
    r.output = read_text_file(base + ".out");
    std::remove((base + ".out").c_str());
    std::remove((base + ".err").c_str());
    return r;
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

} // namespace

TEST_CASE("command line: bound computation") {
    auto r = run_cli("compute --basis affine --n 25");
    CHECK(r.exit_code == 0);
    CHECK(contains(r.output, "\"poa\": \"5/2\""));
    CHECK(contains(r.output, "\"lambda\": \"5/3\""));

    // A class without a finite bound reports it in the exit status.
    auto nf = run_cli("compute --n 2 --types "
                      "'[{\"name\":\"inert\",\"n\":2,\"c\":[1,2],\"f\":[0,0]}]'");
    CHECK(nf.exit_code == 4);
    CHECK(contains(nf.output, "\"finite\": false"));

    // Duplicate type names are a validation failure.
    auto dup = run_cli("compute --n 1 --types "
                       "'[{\"name\":\"t\",\"n\":1,\"c\":[1],\"f\":[1]},"
                       "{\"name\":\"t\",\"n\":1,\"c\":[2],\"f\":[1]}]'");
    CHECK(dup.exit_code == 2);
}

TEST_CASE("command line: game analysis") {
    auto r = run_cli("analyze --game '{\"instance\":\"three_cycle\"}'");
    CHECK(r.exit_code == 0);
    CHECK(contains(r.output, "\"poa\": \"5/2\""));
    CHECK(contains(r.output, "\"equilibria_count\": 2"));
    CHECK(contains(r.output, "\"worst_cce\""));

    auto capped = run_cli("analyze --game '{\"instance\":\"three_cycle\"}' --cap 2");
    CHECK(capped.exit_code == 3);

    auto missing = run_cli("analyze");
    CHECK(missing.exit_code == 2);
}

TEST_CASE("command line: witness construction and rule design") {
    auto w = run_cli("worst-case --basis affine --n 3");
    CHECK(w.exit_code == 0);
    CHECK(contains(w.output, "\"pass\": true"));
    CHECK(contains(w.output, "\"declared_poa\": \"5/2\""));

    auto d = run_cli("design --n 3 --costs '[{\"name\":\"quad\",\"c\":[1,4,9]}]'");
    CHECK(d.exit_code == 0);
    CHECK(contains(d.output, "\"poa\": \"21/11\""));

    auto t = run_cli("table1 --n 2 --format csv");
    CHECK(t.exit_code == 0);
    CHECK(contains(t.output, "class,lambda,mu,poa"));
    CHECK(contains(t.output, "affine,"));
    CHECK(contains(t.output, "log,"));
}

#endif // POA_CLI_PATH
