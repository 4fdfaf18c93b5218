#include "anarchy/errors.hpp"
#include "anarchy/poa.hpp"
#include "anarchy/types.hpp"

#include "doctest.h"

#include <vector>

using namespace anarchy;

TEST_CASE("make_type pads boundaries") {
    auto t = make_type("t", 3, {1, 2, 3}, {4, 5, 6});
    CHECK(t.c(0) == 0);
    CHECK(t.f(0) == 0);
    CHECK(t.f(4) == 0);
    CHECK(t.c(1) == 1);
    CHECK(t.c(3) == 3);
    CHECK(t.f(1) == 4);
    CHECK(t.f(3) == 6);
    CHECK(t.cost.size() == 4);
    CHECK(t.rule.size() == 5);
}

TEST_CASE("make_type rejects bad shapes") {
    CHECK_THROWS_AS(make_type("t", 0, {}, {}), ValidationError);
    CHECK_THROWS_AS(make_type("t", 2, {1}, {1, 2}), ValidationError);
}

TEST_CASE("congestion embedding and round trip") {
    LatencyCurve ell{{1, 2, 3}};
    auto t = congestion_type_from_latency("lin", ell);
    CHECK(t.c(1) == 1);
    CHECK(t.c(2) == 4);
    CHECK(t.c(3) == 9);
    for (int x = 1; x <= 3; ++x) CHECK(t.f(x) == ell.at(x)); // f recovers the latency
}

TEST_CASE("type set validation") {
    TypeSet ok{2, {make_type("a", 2, {1, 2}, {1, 1}), make_type("b", 2, {1, 1}, {2, 2})}};
    CHECK_NOTHROW(ok.validate());

    TypeSet wrong_n{3, {make_type("a", 2, {1, 2}, {1, 1})}};
    CHECK_THROWS_AS(wrong_n.validate(), ValidationError);

    TypeSet dup{2, {make_type("a", 2, {1, 2}, {1, 1}), make_type("a", 2, {1, 1}, {2, 2})}};
    CHECK_THROWS_AS(dup.validate(), ValidationError);

    TypeSet empty{2, {}};
    CHECK_THROWS_AS(empty.validate(), ValidationError);

    TypeSet broken = ok;
    broken.types[0].cost[0] = 1; // violate c(0) = 0
    CHECK_THROWS_AS(broken.validate(), ValidationError);
}

TEST_CASE("basis families have the advertised sizes") {
    CHECK(basis_types(BasisFamily::Affine, 3).size() == 2);
    CHECK(basis_types(BasisFamily::Quadratic, 3).size() == 3);
    CHECK(basis_types(BasisFamily::Cubic, 3).size() == 4);
    CHECK(basis_types(BasisFamily::Polynomial, 3, 5).size() == 6);
    CHECK(basis_types(BasisFamily::Sqrt, 3).size() == 1);
    CHECK(basis_types(BasisFamily::Log, 3).size() == 1);
}

TEST_CASE("affine basis embeds latencies x and 1") {
    auto ts = basis_types(BasisFamily::Affine, 3);
    REQUIRE(ts.size() == 2);
    // latency x -> (x^2, x)
    CHECK(ts[0].c(2) == 4);
    CHECK(ts[0].f(2) == 2);
    CHECK(ts[0].c(3) == 9);
    // latency 1 -> (x, 1)
    CHECK(ts[1].c(2) == 2);
    CHECK(ts[1].f(2) == 1);
    for (const auto& t : ts) {
        CHECK(t.c(0) == 0);
        CHECK(t.f(0) == 0);
        CHECK(t.f(4) == 0);
    }
}

TEST_CASE("square-root basis is exact where the root is rational") {
    auto ts = basis_types(BasisFamily::Sqrt, 4);
    REQUIRE(ts.size() == 1);
    const auto& t = ts[0];
    CHECK(t.f(1) == 1);
    CHECK(t.f(4) == 2);
    CHECK(t.c(4) == 8); // 4 * sqrt(4)
    Rational err = t.f(2) * t.f(2) - 2;
    if (err < 0) err = -err;
    CHECK(err < Rational(Integer(1), pow10(39))); // 40-digit rounding of sqrt(2)
    CHECK(t.c(2) == 2 * t.f(2));
}

TEST_CASE("log basis pins f(1) = 1") {
    auto ts = basis_types(BasisFamily::Log, 3);
    const auto& t = ts[0];
    CHECK(t.f(1) == 1); // log(1) + 1
    CHECK(t.f(2) > Rational(169, 100));
    CHECK(t.f(2) < Rational(17, 10)); // log(2)+1 = 1.6931...
    CHECK(t.c(3) == 3 * t.f(3));
}

TEST_CASE("precision knob changes the rounding grid") {
    auto coarse = basis_types(BasisFamily::Sqrt, 2, 0, 5)[0];
    auto fine = basis_types(BasisFamily::Sqrt, 2, 0, 40)[0];
    CHECK(coarse.f(2) != fine.f(2));
    Rational err = coarse.f(2) * coarse.f(2) - 2;
    if (err < 0) err = -err;
    CHECK(err < Rational(1, 10000)); // still a 5-digit approximation
}

TEST_CASE("basis lookup by name") {
    CHECK(basis_types_by_name("affine", 3).size() == 2);
    CHECK(basis_types_by_name("quadratic", 3).size() == 3);
    CHECK(basis_types_by_name("cubic", 3).size() == 4);
    CHECK(basis_types_by_name("sqrt", 3).size() == 1);
    CHECK(basis_types_by_name("log", 3).size() == 1);
    CHECK(basis_types_by_name("poly4", 3).size() == 5);
    CHECK_THROWS_AS(basis_types_by_name("fourier", 3), ValidationError);
    CHECK_THROWS_AS(basis_types_by_name("poly-2", 3), ValidationError);
}

TEST_CASE("tolls: pointwise subtraction") {
    LatencyCurve id{{1, 2, 3}};
    auto zero = toll_from_optimal_rule(id, {1, 2, 3});
    CHECK(zero == std::vector<Rational>{0, 0, 0});

    LatencyCurve flat{{1, 1}};
    auto tau = toll_from_optimal_rule(flat, {1, 2});
    CHECK(tau == std::vector<Rational>{0, 1});

    CHECK_THROWS_AS(toll_from_optimal_rule(flat, {1, 2, 3}), ValidationError);
}

TEST_CASE("tolls reproduce the designed bound through the class LP") {
    // Design the rule for cost x^2, convert it to a toll on latency x, and
    // re-run the class LP on (x * latency, latency + toll): the designed
    // value must come back exactly.
    auto design = optimal_rules({{"x2", {1, 4, 9}}}, 3);
    REQUIRE(design.finite);
    LatencyCurve ell{{1, 2, 3}};
    auto tau = toll_from_optimal_rule(ell, design.per_type[0].f_star);
    std::vector<Rational> tolled;
    for (int x = 1; x <= 3; ++x) tolled.push_back(ell.at(x) + tau[static_cast<std::size_t>(x - 1)]);
    std::vector<Rational> cost;
    for (int x = 1; x <= 3; ++x) cost.push_back(x * ell.at(x));
    TypeSet T{3, {make_type("tolled", 3, cost, tolled)}};
    auto bound = poa_lp(T);
    REQUIRE(bound.finite);
    CHECK(bound.poa == design.poa);
    CHECK(design.poa == Rational(21, 11));
}
