#pragma once

#include "anarchy/game.hpp"
#include "anarchy/poa.hpp"

#include <optional>
#include <string>

namespace anarchy {

// Two tight LP constraints plus a mixing weight eta in [0,1] satisfying
//   eta g1 + (1-eta) g2 = 0,  g_j = (z_j - x_j) f_j(x_j) + (y_j - z_j) f_j(x_j + 1),
// which makes the cyclic construction's equilibrium deviation exactly
// cost-neutral. When a single tight constraint has g = 0 both slots hold it
// and eta = 1/2.
struct OptimalityParameters {
    int type1 = -1, type2 = -1;
    IndexTuple t1, t2;
    Rational eta = 0;
};

OptimalityParameters extract_optimality_parameters(const PoaBound& bound,
                                                   const TypeSet& types);

enum class Construction { TwoCycle, SingleCycle };

// A concrete n-player game witnessing the class-level bound, its certified
// equilibrium/optimum pair and the ratio it proves. Two-cycle instances
// (attained case) meet the LP bound exactly; single-cycle instances
// (non-attained case) prove declared_poa as a lower bound.
struct WorstCaseInstance {
    ExplicitGame game;
    Construction construction = Construction::TwoCycle;
    Allocation equilibrium;
    Allocation optimum;
    Rational declared_poa = 0;
};

WorstCaseInstance build_worst_case(const TypeSet& types);

// Construction from an already-computed bound (build_worst_case runs the LP
// and delegates here; separate entry so each branch is testable directly).
WorstCaseInstance build_worst_case_from_bound(const PoaBound& bound, const TypeSet& types);

struct WorstCaseReport {
    bool equilibrium_ok = false;
    // per real player: (cost at equilibrium, cost after the certified deviation)
    std::vector<std::pair<Rational, Rational>> player_costs;
    Rational declared_poa = 0;
    std::optional<Rational> brute_poa;  // always set on success (cap excess throws)
    std::optional<Rational> gpoa_bound; // absent when the pair count exceeds the cap
    bool tight = false;       // brute_poa == declared (two-cycle goal)
    bool lower_bound_ok = false; // brute_poa >= declared (single-cycle goal)
    bool resources_ok = false;   // |R| <= 2n
    bool pass = false;
    std::string detail;
};

WorstCaseReport verify_worst_case(const WorstCaseInstance& inst,
                                  std::uint64_t cap = kDefaultEnumerationCap);

} // namespace anarchy
