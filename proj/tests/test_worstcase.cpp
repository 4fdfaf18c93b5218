#include "anarchy/errors.hpp"
#include "anarchy/worstcase.hpp"

#include "doctest.h"
#include "testutil.hpp"

#include <vector>

using namespace anarchy;

namespace {

// Every certified deviation must be exactly cost-neutral for its player;
// that is what pins the equilibrium at the declared ratio.
void check_neutral(const WorstCaseReport& rep) {
    CHECK(!rep.player_costs.empty());
    for (const auto& [at_eq, at_dev] : rep.player_costs) CHECK(at_eq == at_dev);
}

} // namespace

TEST_CASE("mixing parameters of the identity rule class") {
    TypeSet T{3, {make_type("xx", 3, {1, 2, 3}, {1, 2, 3})}};
    auto bound = poa_lp(T);
    auto p = extract_optimality_parameters(bound, T);
    CHECK(p.type1 == 0);
    CHECK(p.type2 == 0);
    CHECK(p.t1 == IndexTuple{1, 0, 0});
    CHECK(p.t2 == IndexTuple{1, 1, 0});
    CHECK(p.eta == Rational(1, 2));

    // The mixing identity and the tightness of both rows, re-derived.
    auto g = [&](const IndexTuple& q) {
        const auto& t = T.types[0];
        return (q.z - q.x) * t.f(q.x) + (q.y - q.z) * t.f(q.x + 1);
    };
    CHECK(p.eta * g(p.t1) + (1 - p.eta) * g(p.t2) == 0);
    for (const auto& q : {p.t1, p.t2}) {
        const auto& t = T.types[0];
        CHECK(t.c(q.y) - bound.rho * t.c(q.x) - bound.nu * g(q) == 0);
    }
}

TEST_CASE("mixing parameters require a finite, attained bound") {
    TypeSet T{2, {make_type("inert", 2, {1, 2}, {0, 0})}};
    auto bound = poa_lp(T);
    REQUIRE(!bound.finite);
    CHECK_THROWS_AS(extract_optimality_parameters(bound, T), NoFiniteBoundError);

    PoaBound fake;
    fake.n = 2;
    fake.finite = true;
    fake.rho = Rational(1, 2);
    fake.poa = 2;
    fake.attained = false;
    CHECK_THROWS_AS(extract_optimality_parameters(fake, T), ValidationError);
    CHECK_THROWS_AS(build_worst_case_from_bound(PoaBound{}, T), NoFiniteBoundError);
}

TEST_CASE("identity rule, three players: the bound is met exactly") {
    TypeSet T{3, {make_type("xx", 3, {1, 2, 3}, {1, 2, 3})}};
    auto inst = build_worst_case(T);
    CHECK(inst.construction == Construction::TwoCycle);
    CHECK(inst.declared_poa == 2);
    CHECK(inst.game.num_players() == 3);
    CHECK(inst.game.resources.size() == 4); // two cycles of length two
    CHECK(inst.game.num_actions(2) == 1);   // padding player, empty action
    CHECK(inst.equilibrium == Allocation{{0, 0, 0}});
    CHECK(inst.optimum == Allocation{{1, 1, 0}});

    auto rep = verify_worst_case(inst);
    CHECK(rep.pass);
    CHECK(rep.tight);
    CHECK(rep.equilibrium_ok);
    CHECK(rep.resources_ok);
    REQUIRE(rep.brute_poa.has_value());
    CHECK(*rep.brute_poa == 2);
    REQUIRE(rep.gpoa_bound.has_value());
    CHECK(*rep.gpoa_bound == 2);
    CHECK(rep.player_costs.size() == 2);
    check_neutral(rep);
    CHECK(rep.detail.find("two-cycle") != std::string::npos);
}

TEST_CASE("worst cases for the frozen class values") {
    struct Case {
        TypeSet types;
        Rational poa;
    };
    std::vector<Case> cases;
    cases.push_back({TypeSet{3, {make_type("sq", 3, {1, 4, 9}, {1, 2, 3})}}, Rational(5, 2)});
    cases.push_back({TypeSet{3,
                             {make_type("sq", 3, {1, 4, 9}, {1, 2, 3}),
                              make_type("xx", 3, {1, 2, 3}, {1, 2, 3})}},
                     Rational(13, 5)});
    cases.push_back({TypeSet{3, basis_types(BasisFamily::Affine, 3)}, Rational(5, 2)});
    cases.push_back({TypeSet{1, {make_type("xx", 1, {1}, {1})}}, Rational(1)});

    for (const auto& c : cases) {
        auto inst = build_worst_case(c.types);
        CHECK(inst.declared_poa == c.poa);
        auto rep = verify_worst_case(inst);
        CHECK(rep.pass);
        CHECK(rep.tight);
        CHECK(*rep.brute_poa == c.poa);
        CHECK(inst.game.resources.size() <= 2 * static_cast<std::size_t>(c.types.n));
        check_neutral(rep);
    }
}

TEST_CASE("the hand-built cycle instance verifies as a witness") {
    WorstCaseInstance w;
    w.game = instance_three_cycle();
    w.construction = Construction::TwoCycle;
    w.equilibrium = Allocation{{0, 0, 0}};
    w.optimum = Allocation{{1, 1, 1}};
    w.declared_poa = Rational(5, 2);

    auto rep = verify_worst_case(w);
    CHECK(rep.pass);
    CHECK(rep.tight);
    REQUIRE(rep.gpoa_bound.has_value());
    CHECK(*rep.gpoa_bound == Rational(5, 2));
    REQUIRE(rep.player_costs.size() == 3);
    for (const auto& [at_eq, at_dev] : rep.player_costs) {
        CHECK(at_eq == 5);
        CHECK(at_dev == 5);
    }
    CHECK_THROWS_AS(verify_worst_case(w, 4), CapExceededError);

    WorstCaseInstance short_profile = w;
    short_profile.equilibrium.choice.pop_back();
    CHECK_THROWS_AS(verify_worst_case(short_profile), ValidationError);
}

TEST_CASE("tampering is caught") {
    TypeSet T{3, {make_type("xx", 3, {1, 2, 3}, {1, 2, 3})}};
    auto inst = build_worst_case(T);
    REQUIRE(verify_worst_case(inst).pass);

    // Upsetting one cycle's value breaks the exact cost balance.
    WorstCaseInstance bumped = inst;
    bumped.game.resources[0].value *= 2;
    auto rep = verify_worst_case(bumped);
    CHECK(!rep.pass);

    // Overclaiming the ratio fails even with the game untouched.
    WorstCaseInstance greedy = inst;
    greedy.declared_poa = 3;
    auto rep2 = verify_worst_case(greedy);
    CHECK(!rep2.pass);
    CHECK(!rep2.tight);
}

TEST_CASE("lower-bound witness from a vertex without a mixing pair") {
    // rho = 1/4 with the optimum not attained routes the construction to a
    // single cycle; the instance must prove the declared value as a floor.
    TypeSet T{3, {make_type("flat", 3, {4, 1, 1}, {1, 2, 2})}};
    PoaBound fake;
    fake.n = 3;
    fake.finite = true;
    fake.rho = Rational(1, 4);
    fake.poa = 4;
    fake.attained = false;

    auto inst = build_worst_case_from_bound(fake, T);
    CHECK(inst.construction == Construction::SingleCycle);
    CHECK(inst.declared_poa == 4);
    REQUIRE(inst.game.resources.size() == 3);
    for (const auto& r : inst.game.resources) CHECK(r.value == 1);
    CHECK(inst.game.num_players() == 3);
    CHECK(inst.game.actions[0][0] == std::vector<int>{0});
    CHECK(inst.game.actions[0][1] == std::vector<int>{1, 2});

    auto nes = enumerate_nash(inst.game);
    REQUIRE(nes.size() == 1);
    CHECK(nes[0] == Allocation{{0, 0, 0}});
    CHECK(system_cost(inst.game, nes[0]) == 12);

    auto rep = verify_worst_case(inst);
    CHECK(rep.pass);
    CHECK(!rep.tight);
    CHECK(rep.lower_bound_ok);
    CHECK(*rep.brute_poa == 6);
    CHECK(rep.detail.find("single-cycle") != std::string::npos);
}

TEST_CASE("random classes always get a tight witness") {
    testutil::Rng rng(777);
    for (int trial = 0; trial < 30; ++trial) {
        int n = 2 + static_cast<int>(rng() % 3); // 2..4
        int width = 1 + static_cast<int>(rng() % 2);
        TypeSet T = testutil::rnd_positive_type_set(rng, n, width);

        auto bound = poa_lp(T);
        REQUIRE(bound.finite);
        REQUIRE(bound.attained);

        auto inst = build_worst_case_from_bound(bound, T);
        CHECK(inst.declared_poa == bound.poa);
        CHECK(inst.game.num_players() == n);

        auto rep = verify_worst_case(inst);
        CHECK(rep.pass);
        CHECK(rep.tight);
        CHECK(rep.equilibrium_ok);
        CHECK(rep.resources_ok);
        CHECK(inst.game.resources.size() <= 2 * static_cast<std::size_t>(n));
        check_neutral(rep);
        if (rep.gpoa_bound) CHECK(*rep.gpoa_bound >= *rep.brute_poa);
    }
}
