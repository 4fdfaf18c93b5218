#pragma once

#include "anarchy/lp.hpp"
#include "anarchy/types.hpp"

#include <string>
#include <vector>

namespace anarchy {

// Load/deviation index tuples (x, y, z): x players on a resource, y after
// everyone deviates, z using it in both. The full set for n players is
//   I(n)   = { 0 <= x,y <= n, 1 <= x+y-z <= n, 0 <= z <= min(x,y) },
// and the boundary subset sufficient for the class-level LP is
//   I_R(n) = { (x,y,z) in I(n) : x+y-z = n or (x-z)(y-z)z = 0 }.
struct IndexTuple {
    int x = 0, y = 0, z = 0;

    bool operator==(const IndexTuple&) const = default;
    auto operator<=>(const IndexTuple&) const = default;
};

std::vector<IndexTuple> enumerate_index_set(int n, bool restricted);

enum class Arithmetic { RationalExact, Float64 };

struct PoaLpOptions {
    bool restricted = true; // I_R(n); full I(n) is a cross-check mode
    Arithmetic arithmetic = Arithmetic::RationalExact;
    LPOptions lp; // bit limit / trace for the underlying solves
};

struct BindingConstraint {
    int type_index = -1;
    IndexTuple tuple;
    Rational dual = 0; // weight from the optimizing solve (0 if merely tight)
};

// Exact price of anarchy of the game class with type set T and n players:
//   maximize rho  s.t.  nu >= 0 and, for every type (c, f) and tuple,
//   c(y) - rho c(x) + nu [ (x-z) f(x) - (y-z) f(x+1) ] >= 0,
// with poa = 1/rho*. The reported vertex is canonical: among all optima it
// maximizes nu (secondary LP), so lambda = 1/nu is the least certified
// lambda. attained is true iff nu* > 0, i.e. some finite (lambda, mu) with
// lambda/(1-mu) = poa exists.
struct PoaBound {
    int n = 0;
    std::vector<std::string> type_names;
    Rational rho = 0;
    Rational nu = 0;
    bool finite = false;   // rho* > 0
    Rational poa = 0;      // 1/rho*, valid when finite
    bool attained = false; // nu* > 0 at optimum
    bool nu_capped = false; // nu* hit the internal cap (flat direction)
    Rational lambda = 0;   // 1/nu*, valid when attained
    Rational mu = 0;       // 1 - rho* * lambda, valid when attained
    std::vector<BindingConstraint> binding; // tight rows at the canonical vertex
};

PoaBound poa_lp(const TypeSet& types, const PoaLpOptions& options = {});

// Same LP, exposed as the smoothness-parameter infimum gamma over the
// class constraint set; equals poa_lp(...).poa.
Rational gamma_value(const TypeSet& types);

// Distribution-rule design: per cost curve, jointly optimize the rule and
// the bound:
//   maximize rho  s.t.  c(y) - rho c(x) + (x-z) f(x) - (y-z) f(x+1) >= 0
// over I_R(n), variables f(1..n) (free unless nonneg_rules) and rho.
// The designed class has poa = max_t 1/rho*_t.
struct CostCurve {
    std::string name;
    std::vector<Rational> cost_1n; // c(1..n)
};

struct DesignedRules {
    struct PerType {
        std::string name;
        std::vector<Rational> f_star; // loads 1..n
        Rational rho = 0;
        bool finite = false;        // rho* > 0
        bool nonneg_already = false; // the returned rule has no negative entries
    };
    int n = 0;
    std::vector<PerType> per_type;
    bool finite = false;
    Rational poa = 0; // max_t 1/rho*_t when finite
    TypeSet designed; // types (c_t, f*_t), ready for poa_lp / construction
};

DesignedRules optimal_rules(const std::vector<CostCurve>& costs, int n,
                            bool nonneg_rules = false);

} // namespace anarchy
