#pragma once

#include "anarchy/types.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace anarchy {

// A concrete local resource allocation game: typed, weighted resources and
// explicit action sets (actions are subsets of resource indices; the empty
// action is allowed). Player i's cost is sum over chosen resources of
// v_r * f_r(load); the system cost is sum over resources of v_r * c_r(load).
struct ExplicitGame {
    TypeSet types;
    struct Resource {
        int type_index = 0;
        Rational value = 1;
    };
    std::vector<Resource> resources;
    // actions[i][k] = sorted set of resource indices for player i's k-th action
    std::vector<std::vector<std::vector<int>>> actions;

    int num_players() const { return static_cast<int>(actions.size()); }
    int num_actions(int player) const {
        return static_cast<int>(actions.at(static_cast<std::size_t>(player)).size());
    }
    void validate() const; // throws ValidationError
};

// One action index per player.
struct Allocation {
    std::vector<int> choice;

    bool operator==(const Allocation&) const = default;
    auto operator<=>(const Allocation&) const = default;
};

std::uint64_t profile_count(const ExplicitGame& g); // throws CapExceededError past 2^62

std::vector<int> loads(const ExplicitGame& g, const Allocation& a);
Rational system_cost(const ExplicitGame& g, const Allocation& a);
Rational local_cost(const ExplicitGame& g, int player, const Allocation& a);
Rational local_cost_sum(const ExplicitGame& g, const Allocation& a);

struct DeviationWitness {
    int player = -1;
    int action = -1; // strictly improving action index
};

struct NashCheck {
    bool is_nash = false;
    std::optional<DeviationWitness> witness; // set when is_nash is false
};

// Weak inequality: a profitable deviation must be strictly cheaper, so
// cost ties never break an equilibrium.
NashCheck is_nash(const ExplicitGame& g, const Allocation& a);

inline constexpr std::uint64_t kDefaultEnumerationCap = 10'000'000;
inline constexpr std::uint64_t kDefaultCceCap = 100'000;

std::vector<Allocation> enumerate_nash(const ExplicitGame& g,
                                       std::uint64_t cap = kDefaultEnumerationCap);

struct BruteForcePoA {
    Rational poa = 0;
    Allocation worst_equilibrium;
    Allocation optimum;
    Rational worst_equilibrium_cost = 0;
    Rational optimum_cost = 0;
};

// Exhaustive price of anarchy: max equilibrium cost over min achievable cost.
// Throws ValidationError when no pure equilibrium exists or the optimum cost
// is not positive (ratio undefined), CapExceededError past the cap.
BruteForcePoA brute_force_poa(const ExplicitGame& g,
                              std::uint64_t cap = kDefaultEnumerationCap);

// Distribution over full profiles, sparse by support.
struct JointDistribution {
    std::map<Allocation, Rational> weights;

    void validate() const; // nonnegative, sums to 1
};

struct CceCheck {
    bool is_cce = false;
    std::optional<DeviationWitness> witness; // violated deviation constraint
};

CceCheck is_cce(const ExplicitGame& g, const JointDistribution& sigma);

struct WorstCce {
    Rational value = 0; // max expected system cost over all CCE
    JointDistribution sigma;
};

// LP over the full profile space (throws CapExceededError past cap).
WorstCce worst_cce_value(const ExplicitGame& g, std::uint64_t cap = kDefaultCceCap);

// Per-resource deviation statistics between two allocations: x = load under
// a, y = load under b, z = players using the resource in both. Both sides of
// the exact decomposition
//   sum_i J_i(b_i, a_{-i}) - sum_i J_i(a) + C(a)
//     = sum_r v_r [ (z_r - x_r) f(x_r) + (y_r - z_r) f(x_r + 1) + c(x_r) ]
// are computed independently and must agree.
struct DeviationProfile {
    struct Tuple {
        int x = 0, y = 0, z = 0;
    };
    std::vector<Tuple> per_resource;
    Rational lhs = 0;
    Rational rhs = 0;
};

DeviationProfile deviation_profile(const ExplicitGame& g, const Allocation& a,
                                   const Allocation& b);

// Generic pure-equilibrium enumeration over any tabulated cost game; used by
// the welfare analysis and by tests for games outside the resource class.
// cost(i, profile) must be total over players 0..players-1.
std::vector<std::vector<int>> enumerate_nash_generic(
    const std::vector<int>& action_counts,
    const std::function<Rational(int, const std::vector<int>&)>& cost,
    std::uint64_t cap = kDefaultEnumerationCap);

// Named instances.
// Six equal-value unit-latency-slope edges, three players cycling through
// them, price of anarchy exactly 5/2 at the unique worst equilibrium.
ExplicitGame instance_three_cycle(const Rational& edge_value = 1);
// Two parallel two-resource paths per player, linear/constant latencies,
// parameterized by the four resource values.
ExplicitGame instance_two_paths(int n, const std::vector<Rational>& values);

} // namespace anarchy
