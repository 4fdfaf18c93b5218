#include "anarchy/game.hpp"

#include "anarchy/errors.hpp"
#include "anarchy/lp.hpp"

#include <algorithm>
#include <sstream>

namespace anarchy {

namespace {

// Odometer over profiles, last player fastest. visit returns false to stop.
template <class Visit>
void for_each_profile(const std::vector<int>& action_counts, const Visit& visit) {
    std::vector<int> profile(action_counts.size(), 0);
    for (int c : action_counts)
        if (c <= 0) throw ValidationError("player with empty action set");
    for (;;) {
        if (!visit(profile)) return;
        int i = static_cast<int>(profile.size()) - 1;
        while (i >= 0) {
            if (++profile[static_cast<std::size_t>(i)] <
                action_counts[static_cast<std::size_t>(i)])
                break;
            profile[static_cast<std::size_t>(i)] = 0;
            --i;
        }
        if (i < 0) return;
    }
}

std::vector<int> action_counts_of(const ExplicitGame& g) {
    std::vector<int> counts(static_cast<std::size_t>(g.num_players()));
    for (int i = 0; i < g.num_players(); ++i)
        counts[static_cast<std::size_t>(i)] = g.num_actions(i);
    return counts;
}

std::string profile_string(const std::vector<int>& profile) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < profile.size(); ++i) os << (i ? "," : "") << profile[i];
    os << ")";
    return os.str();
}

} // namespace

void ExplicitGame::validate() const {
    types.validate();
    if (actions.empty()) throw ValidationError("game needs at least one player");
    if (num_players() > types.n)
        throw ValidationError("more players than the type set's n");
    for (std::size_t ri = 0; ri < resources.size(); ++ri) {
        const auto& r = resources[ri];
        if (r.type_index < 0 || r.type_index >= static_cast<int>(types.types.size()))
            throw ValidationError("resources[" + std::to_string(ri) + "] has unknown type index");
        if (r.value < 0)
            throw ValidationError("resources[" + std::to_string(ri) + "] has negative value");
    }
    for (std::size_t pi = 0; pi < actions.size(); ++pi) {
        const auto& player_actions = actions[pi];
        if (player_actions.empty())
            throw ValidationError("actions[" + std::to_string(pi) + "] is an empty action set");
        for (std::size_t ai = 0; ai < player_actions.size(); ++ai) {
            const auto& action = player_actions[ai];
            const std::string where =
                "actions[" + std::to_string(pi) + "][" + std::to_string(ai) + "]";
            for (std::size_t k = 0; k < action.size(); ++k) {
                if (action[k] < 0 || action[k] >= static_cast<int>(resources.size()))
                    throw ValidationError(where + " uses unknown resource " +
                                          std::to_string(action[k]));
                if (k && action[k] <= action[k - 1])
                    throw ValidationError(where + " must be sorted and duplicate-free");
            }
        }
    }
}

std::uint64_t profile_count(const ExplicitGame& g) {
    std::uint64_t count = 1;
    for (int i = 0; i < g.num_players(); ++i) {
        std::uint64_t a = static_cast<std::uint64_t>(g.num_actions(i));
        if (a == 0) throw ValidationError("player with empty action set");
        if (count > (std::uint64_t(1) << 62) / a)
            throw CapExceededError("profile space exceeds 2^62");
        count *= a;
    }
    return count;
}

std::vector<int> loads(const ExplicitGame& g, const Allocation& a) {
    std::vector<int> load(g.resources.size(), 0);
    for (int i = 0; i < g.num_players(); ++i)
        for (int r : g.actions[static_cast<std::size_t>(i)]
                         [static_cast<std::size_t>(a.choice.at(static_cast<std::size_t>(i)))])
            ++load[static_cast<std::size_t>(r)];
    return load;
}

Rational system_cost(const ExplicitGame& g, const Allocation& a) {
    std::vector<int> load = loads(g, a);
    Rational total = 0;
    for (std::size_t r = 0; r < g.resources.size(); ++r) {
        const auto& res = g.resources[r];
        total += res.value * g.types.types[static_cast<std::size_t>(res.type_index)].c(load[r]);
    }
    return total;
}

Rational local_cost(const ExplicitGame& g, int player, const Allocation& a) {
    std::vector<int> load = loads(g, a);
    Rational total = 0;
    for (int r : g.actions[static_cast<std::size_t>(player)]
                     [static_cast<std::size_t>(a.choice.at(static_cast<std::size_t>(player)))]) {
        const auto& res = g.resources[static_cast<std::size_t>(r)];
        total += res.value *
                 g.types.types[static_cast<std::size_t>(res.type_index)].f(load[static_cast<std::size_t>(r)]);
    }
    return total;
}

Rational local_cost_sum(const ExplicitGame& g, const Allocation& a) {
    Rational total = 0;
    for (int i = 0; i < g.num_players(); ++i) total += local_cost(g, i, a);
    return total;
}

NashCheck is_nash(const ExplicitGame& g, const Allocation& a) {
    NashCheck out;
    Allocation work = a;
    for (int i = 0; i < g.num_players(); ++i) {
        Rational current = local_cost(g, i, a);
        for (int k = 0; k < g.num_actions(i); ++k) {
            if (k == a.choice[static_cast<std::size_t>(i)]) continue;
            work.choice[static_cast<std::size_t>(i)] = k;
            if (local_cost(g, i, work) < current) {
                out.is_nash = false;
                out.witness = DeviationWitness{i, k};
                return out;
            }
        }
        work.choice[static_cast<std::size_t>(i)] = a.choice[static_cast<std::size_t>(i)];
    }
    out.is_nash = true;
    return out;
}

std::vector<std::vector<int>> enumerate_nash_generic(
    const std::vector<int>& action_counts,
    const std::function<Rational(int, const std::vector<int>&)>& cost, std::uint64_t cap) {
    std::uint64_t total = 1;
    for (int c : action_counts) {
        if (c <= 0) throw ValidationError("player with empty action set");
        if (total > cap / static_cast<std::uint64_t>(c))
            throw CapExceededError("profile enumeration exceeds cap");
        total *= static_cast<std::uint64_t>(c);
    }

    std::vector<std::vector<int>> result;
    for_each_profile(action_counts, [&](const std::vector<int>& profile) {
        std::vector<int> work = profile;
        for (std::size_t i = 0; i < action_counts.size(); ++i) {
            Rational current = cost(static_cast<int>(i), profile);
            for (int k = 0; k < action_counts[i]; ++k) {
                if (k == profile[i]) continue;
                work[i] = k;
                if (cost(static_cast<int>(i), work) < current) {
                    work[i] = profile[i];
                    return true; // profitable deviation: not an equilibrium
                }
            }
            work[i] = profile[i];
        }
        result.push_back(profile);
        return true;
    });
    return result;
}

std::vector<Allocation> enumerate_nash(const ExplicitGame& g, std::uint64_t cap) {
    auto raw = enumerate_nash_generic(
        action_counts_of(g),
        [&](int player, const std::vector<int>& profile) {
            return local_cost(g, player, Allocation{profile});
        },
        cap);
    std::vector<Allocation> out;
    out.reserve(raw.size());
    for (auto& p : raw) out.push_back(Allocation{std::move(p)});
    return out;
}

BruteForcePoA brute_force_poa(const ExplicitGame& g, std::uint64_t cap) {
    std::uint64_t total = profile_count(g);
    if (total > cap) throw CapExceededError("profile space exceeds cap");

    BruteForcePoA out;
    bool have_opt = false, have_ne = false;
    for_each_profile(action_counts_of(g), [&](const std::vector<int>& profile) {
        Allocation a{profile};
        Rational cost = system_cost(g, a);
        if (!have_opt || cost < out.optimum_cost) {
            have_opt = true;
            out.optimum_cost = cost;
            out.optimum = a;
        }
        if (is_nash(g, a).is_nash &&
            (!have_ne || cost > out.worst_equilibrium_cost)) {
            have_ne = true;
            out.worst_equilibrium_cost = cost;
            out.worst_equilibrium = a;
        }
        return true;
    });
    if (!have_ne) throw ValidationError("no pure equilibrium exists");
    if (out.optimum_cost <= 0)
        throw ValidationError("optimum cost is not positive; ratio undefined");
    out.poa = out.worst_equilibrium_cost / out.optimum_cost;
    return out;
}

void JointDistribution::validate() const {
    Rational total = 0;
    for (const auto& [a, w] : weights) {
        if (w < 0) throw ValidationError("negative probability in joint distribution");
        total += w;
    }
    if (total != 1) throw ValidationError("joint distribution must sum to 1");
}

CceCheck is_cce(const ExplicitGame& g, const JointDistribution& sigma) {
    sigma.validate();
    const int players = g.num_players();
    for (const auto& [a, w] : sigma.weights)
        if (static_cast<int>(a.choice.size()) != players)
            throw ValidationError("distribution support has wrong profile size");

    CceCheck out;
    for (int i = 0; i < players; ++i) {
        for (int k = 0; k < g.num_actions(i); ++k) {
            Rational gain = 0; // expected J_i(a) - J_i(k, a_{-i})
            for (const auto& [a, w] : sigma.weights) {
                if (w == 0) continue;
                Allocation dev = a;
                dev.choice[static_cast<std::size_t>(i)] = k;
                gain += w * (local_cost(g, i, a) - local_cost(g, i, dev));
            }
            if (gain > 0) {
                out.is_cce = false;
                out.witness = DeviationWitness{i, k};
                return out;
            }
        }
    }
    out.is_cce = true;
    return out;
}

WorstCce worst_cce_value(const ExplicitGame& g, std::uint64_t cap) {
    std::uint64_t total = profile_count(g);
    if (total > cap) throw CapExceededError("profile space exceeds CCE cap");

    std::vector<Allocation> profiles;
    profiles.reserve(total);
    std::vector<Rational> cost;
    cost.reserve(total);
    for_each_profile(action_counts_of(g), [&](const std::vector<int>& p) {
        profiles.push_back(Allocation{p});
        cost.push_back(system_cost(g, profiles.back()));
        return true;
    });

    LPProblem lp;
    lp.objective = cost;
    lp.lower.assign(profiles.size(), Rational(0));
    lp.upper.assign(profiles.size(), std::nullopt);

    lp.add_row(std::vector<Rational>(profiles.size(), Rational(1)), Relation::Equal, 1,
               "normalization");
    for (int i = 0; i < g.num_players(); ++i) {
        for (int k = 0; k < g.num_actions(i); ++k) {
            std::vector<Rational> coeffs(profiles.size(), Rational(0));
            for (std::size_t s = 0; s < profiles.size(); ++s) {
                Allocation dev = profiles[s];
                if (dev.choice[static_cast<std::size_t>(i)] == k) continue;
                dev.choice[static_cast<std::size_t>(i)] = k;
                coeffs[s] = local_cost(g, i, profiles[s]) - local_cost(g, i, dev);
            }
            lp.add_row(std::move(coeffs), Relation::LessEq, 0,
                       "player " + std::to_string(i) + " -> action " + std::to_string(k));
        }
    }

    LPSolution sol = solve(lp);
    if (sol.status != LPStatus::Optimal)
        throw VerificationError("worst-CCE LP must be solvable (point mass on an equilibrium)");

    WorstCce out;
    out.value = sol.objective;
    for (std::size_t s = 0; s < profiles.size(); ++s)
        if (sol.primal[s] != 0) out.sigma.weights[profiles[s]] = sol.primal[s];
    out.sigma.validate();
    return out;
}

DeviationProfile deviation_profile(const ExplicitGame& g, const Allocation& a,
                                   const Allocation& b) {
    std::vector<int> la = loads(g, a), lb = loads(g, b);
    DeviationProfile out;
    out.per_resource.resize(g.resources.size());

    std::vector<char> in_a(g.resources.size()), in_b(g.resources.size());
    std::vector<int> both(g.resources.size(), 0);
    for (int i = 0; i < g.num_players(); ++i) {
        std::fill(in_a.begin(), in_a.end(), 0);
        std::fill(in_b.begin(), in_b.end(), 0);
        for (int r : g.actions[static_cast<std::size_t>(i)]
                         [static_cast<std::size_t>(a.choice[static_cast<std::size_t>(i)])])
            in_a[static_cast<std::size_t>(r)] = 1;
        for (int r : g.actions[static_cast<std::size_t>(i)]
                         [static_cast<std::size_t>(b.choice[static_cast<std::size_t>(i)])])
            in_b[static_cast<std::size_t>(r)] = 1;
        for (std::size_t r = 0; r < g.resources.size(); ++r)
            if (in_a[r] && in_b[r]) ++both[r];
    }

    out.rhs = 0;
    for (std::size_t r = 0; r < g.resources.size(); ++r) {
        auto& t = out.per_resource[r];
        t.x = la[r];
        t.y = lb[r];
        t.z = both[r];
        const auto& res = g.resources[r];
        const auto& type = g.types.types[static_cast<std::size_t>(res.type_index)];
        out.rhs += res.value *
                   ((t.z - t.x) * type.f(t.x) + (t.y - t.z) * type.f(t.x + 1) + type.c(t.x));
    }

    out.lhs = system_cost(g, a) - local_cost_sum(g, a);
    for (int i = 0; i < g.num_players(); ++i) {
        Allocation dev = a;
        dev.choice[static_cast<std::size_t>(i)] = b.choice[static_cast<std::size_t>(i)];
        out.lhs += local_cost(g, i, dev);
    }

    if (out.lhs != out.rhs)
        throw VerificationError("deviation decomposition mismatch at " +
                                profile_string(a.choice) + " -> " + profile_string(b.choice));
    return out;
}

ExplicitGame instance_three_cycle(const Rational& edge_value) {
    LatencyCurve ell;
    ell.values = {Rational(1), Rational(2), Rational(3)}; // latency x for n=3
    ExplicitGame g;
    g.types.n = 3;
    g.types.types = {congestion_type_from_latency("x", ell)};
    for (int e = 0; e < 6; ++e) g.resources.push_back({0, edge_value});
    g.actions = {
        {{3, 4, 5}, {0, 1}},
        {{0, 1, 4}, {2, 3}},
        {{0, 2, 3}, {4, 5}},
    };
    g.validate();
    return g;
}

ExplicitGame instance_two_paths(int n, const std::vector<Rational>& values) {
    if (n < 1) throw ValidationError("two_paths needs n >= 1");
    if (values.size() != 4) throw ValidationError("two_paths needs exactly 4 resource values");
    LatencyCurve linear, constant;
    linear.values.resize(static_cast<std::size_t>(n));
    constant.values.resize(static_cast<std::size_t>(n));
    for (int x = 1; x <= n; ++x) {
        linear.values[static_cast<std::size_t>(x) - 1] = x;
        constant.values[static_cast<std::size_t>(x) - 1] = 1;
    }
    ExplicitGame g;
    g.types.n = n;
    g.types.types = {congestion_type_from_latency("x", linear),
                     congestion_type_from_latency("1", constant)};
    g.resources = {{0, values[0]}, {1, values[1]}, {0, values[2]}, {1, values[3]}};
    g.actions.assign(static_cast<std::size_t>(n), {{0, 1}, {2, 3}});
    g.validate();
    return g;
}

} // namespace anarchy
