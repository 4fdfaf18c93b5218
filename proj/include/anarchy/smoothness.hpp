#pragma once

#include "anarchy/game.hpp"

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace anarchy {

// A (lambda, mu) smoothness certificate. For cost games the certified price
// of anarchy bound is lambda/(1-mu) = 1/rho; for welfare games the certified
// guarantee is lambda/(1+mu) = 1/rho in (0, 1]. nu = 1/lambda. Traditional
// mode additionally requires the validity condition sum_i J_i(a) >= C(a).
struct SmoothnessCertificate {
    enum class Mode { Traditional, Generalized };
    enum class Direction { CostMin, WelfareMax };

    Mode mode = Mode::Generalized;
    Direction direction = Direction::CostMin;
    Rational lambda = 0;
    Rational mu = 0;
    Rational nu = 0;
    Rational rho = 0;
    Rational bound = 0;
    bool attained = false; // an optimal vertex with nu > 0 exists
    // Labels of constraints (allocation pairs / index tuples) tight at the
    // certified vertex.
    std::vector<std::string> binding;
};

// Best traditional smoothness bound over a list of games sharing the
// certificate: maximize rho = (1-mu)/lambda with nu = 1/lambda >= 0 subject
// to C(a') - rho C(a) + nu [C(a) - sum_i J_i(a'_i, a_{-i})] >= 0 for every
// game and ordered pair (a, a'). Throws ValidationError if validity fails
// (witness in message), NoFiniteBoundError if rho* <= 0.
SmoothnessCertificate robust_poa(std::span<const ExplicitGame> games,
                                 std::uint64_t cap = kDefaultEnumerationCap);

// Generalized smoothness drops validity and inserts the self-correction
// term: C(a') - rho C(a) + nu [sum_i J_i(a) - sum_i J_i(a'_i, a_{-i})] >= 0.
SmoothnessCertificate generalized_poa(std::span<const ExplicitGame> games,
                                      std::uint64_t cap = kDefaultEnumerationCap);

struct SmoothnessCheck {
    bool holds = false;
    std::vector<std::pair<Allocation, Allocation>> violations;
};

// Direct verification of given (lambda, mu) against every ordered pair.
SmoothnessCheck check_smooth(const ExplicitGame& g, const Rational& lambda,
                             const Rational& mu,
                             std::uint64_t cap = kDefaultEnumerationCap);
SmoothnessCheck check_generalized_smooth(const ExplicitGame& g, const Rational& lambda,
                                         const Rational& mu,
                                         std::uint64_t cap = kDefaultEnumerationCap);

// Tabulated welfare-maximization game. Profiles are indexed in mixed radix
// with player 0 the most significant digit (same order the enumeration
// helpers use).
struct WelfareGame {
    std::vector<int> action_counts;
    std::vector<Rational> welfare;               // one per profile, >= 0
    std::vector<std::vector<Rational>> utility;  // [player][profile]

    int num_players() const { return static_cast<int>(action_counts.size()); }
    std::size_t num_profiles() const;
    std::size_t profile_index(const std::vector<int>& profile) const;
    void validate() const;
};

// Welfare analog: find the largest b in (0, 1] such that some lambda > 0,
// mu > -1 with lambda/(1+mu) = b satisfies, for every game and ordered pair,
//   sum_i U_i(a'_i, a_{-i}) - sum_i U_i(a) + W(a) >= lambda W(a') - mu W(a).
// Every equilibrium then retains at least fraction b of the best welfare.
// Solved by bisection (the per-b feasibility test is exact); the returned
// certificate's (lambda, mu) are exactly feasible, so the bound is safe.
// Throws NoFiniteBoundError when no feasible pair exists at any b.
SmoothnessCertificate welfare_generalized_poa(std::span<const WelfareGame> games,
                                              int bisection_iters = 60);

// Exhaustive welfare price of anarchy: min equilibrium welfare over max
// welfare (equilibria are utility-maximizing best responses). Throws
// ValidationError when no pure equilibrium exists or max welfare is 0.
Rational welfare_brute_force_poa(const WelfareGame& g,
                                 std::uint64_t cap = kDefaultEnumerationCap);

// Cost-covering margin gamma = min_a sum_i J_i(a) / C(a) together with the
// two certificates; requires sum_i J_i(a) > C(a) for every profile. Checks
// that the generalized bound never exceeds the traditional one and, whenever
// the traditional certificate is attained (nu* > 0), strictly beats it and
// stays within the margin-corrected bound lambda*/(gamma - mu*). When the
// traditional optimum is approached only as lambda diverges (attained is
// false), the two bounds can coincide and no strict gap is asserted.
struct GapReport {
    Rational gamma = 0;
    SmoothnessCertificate traditional;
    SmoothnessCertificate generalized;
};

GapReport covering_gap(const ExplicitGame& g, std::uint64_t cap = kDefaultEnumerationCap);

} // namespace anarchy
