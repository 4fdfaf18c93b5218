#pragma once

#include "anarchy/scalar.hpp"

#include <string>
#include <vector>

namespace anarchy {

// One resource type of an n-player local resource allocation game class:
// a cost curve c and a cost-distribution rule f, both indexed by load.
// Storage is padded with the boundary conventions c(0) = f(0) = f(n+1) = 0,
// so c is valid on 0..n and f on 0..n+1.
struct ResourceType {
    std::string name;
    int n = 0;
    std::vector<Rational> cost; // size n+1
    std::vector<Rational> rule; // size n+2

    const Rational& c(int load) const { return cost.at(static_cast<std::size_t>(load)); }
    const Rational& f(int load) const { return rule.at(static_cast<std::size_t>(load)); }
};

struct TypeSet {
    int n = 0;
    std::vector<ResourceType> types;

    void validate() const; // throws ValidationError
};

// Latency curve of a congestion game, indexed by load 1..n.
struct LatencyCurve {
    std::vector<Rational> values; // values[k] = latency at load k+1

    int n() const { return static_cast<int>(values.size()); }
    const Rational& at(int load) const { return values.at(static_cast<std::size_t>(load - 1)); }
};

// Builds a padded type from curves given on loads 1..n.
ResourceType make_type(std::string name, int n,
                       const std::vector<Rational>& cost_1n,
                       const std::vector<Rational>& rule_1n);

// Embeds a congestion game resource: players sharing the resource each pay
// the latency, so c(x) = x * latency(x) and f = latency.
ResourceType congestion_type_from_latency(std::string name, const LatencyCurve& latency);

enum class BasisFamily { Affine, Quadratic, Cubic, Polynomial, Sqrt, Log };

// Latency bases used by the bound tables. Polynomial families use the
// monomials x^d .. x^0; sqrt(x) and log(x)+1 are rounded to `digits`
// decimal digits and kept as exact rationals from there on.
std::vector<ResourceType> basis_types(BasisFamily family, int n, int degree = 0,
                                      unsigned digits = 40);

// "affine", "quadratic", "cubic", "sqrt", "log", "polyD" (e.g. "poly4").
std::vector<ResourceType> basis_types_by_name(const std::string& name, int n,
                                              unsigned digits = 40);

// Tolls converting a latency into a designed distribution rule:
// tau(x) = f_star(x) - latency(x) for loads 1..n.
std::vector<Rational> toll_from_optimal_rule(const LatencyCurve& latency,
                                             const std::vector<Rational>& f_star_1n);

} // namespace anarchy
