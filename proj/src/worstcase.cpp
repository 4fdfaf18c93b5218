#include "anarchy/worstcase.hpp"

#include "anarchy/errors.hpp"
#include "anarchy/smoothness.hpp"

#include <algorithm>
#include <sstream>

namespace anarchy {

namespace {

// g of a tight constraint: the exact cost change a cycle player sees when
// switching from its equilibrium arc to its optimum arc on one cycle of
// unit value.
Rational g_of(const ResourceType& t, const IndexTuple& q) {
    return (q.z - q.x) * t.f(q.x) + (q.y - q.z) * t.f(q.x + 1);
}

struct Candidate {
    OptimalityParameters params;
    Rational weight; // combined dual mass, for ordering
};

std::vector<Candidate> candidate_pairs(const PoaBound& bound, const TypeSet& types) {
    struct Row {
        int type;
        IndexTuple tuple;
        Rational g, cx, w;
    };
    std::vector<Row> rows;
    for (const BindingConstraint& b : bound.binding) {
        const ResourceType& t = types.types[static_cast<std::size_t>(b.type_index)];
        Rational w = b.dual < 0 ? -b.dual : b.dual;
        rows.push_back({b.type_index, b.tuple, g_of(t, b.tuple), t.c(b.tuple.x), w});
    }

    std::vector<Candidate> out;
    auto push = [&](const Row& a, const Row& b) {
        Rational eta;
        if (a.g == 0 && b.g == 0)
            eta = Rational(1, 2);
        else if (a.g * b.g <= 0)
            eta = b.g / (b.g - a.g);
        else
            return;
        if (eta * a.cx + (1 - eta) * b.cx <= 0) return; // equilibrium cost must be positive
        out.push_back({{a.type, b.type, a.tuple, b.tuple, eta}, a.w + b.w});
    };
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].g == 0) push(rows[i], rows[i]);
        for (std::size_t j = i + 1; j < rows.size(); ++j) push(rows[i], rows[j]);
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const Candidate& a, const Candidate& b) { return a.weight > b.weight; });
    return out;
}

int wrap(int v, int l) { return ((v % l) + l) % l; }

// Two cycles of length l; player i's equilibrium arc on cycle j covers x_j
// consecutive resources starting at i, its optimum arc covers y_j consecutive
// resources ending at i + z_j - 1, so the arcs overlap in exactly z_j
// resources (l >= x_j + y_j - z_j keeps them from wrapping into each other).
WorstCaseInstance assemble_two_cycle(const PoaBound& bound, const TypeSet& types,
                                     const OptimalityParameters& p) {
    const int n = types.n;
    const IndexTuple t[2] = {p.t1, p.t2};
    const int type_of[2] = {p.type1, p.type2};
    const Rational value[2] = {p.eta, 1 - p.eta};

    int span = std::max(t[0].x + t[0].y, t[1].x + t[1].y);
    int l = std::min(span, n);

    WorstCaseInstance inst;
    inst.construction = Construction::TwoCycle;
    inst.game.types = types;
    for (int j = 0; j < 2; ++j)
        for (int k = 0; k < l; ++k)
            inst.game.resources.push_back({type_of[j], value[j]});

    for (int i = 0; i < l; ++i) {
        std::vector<int> ne, opt;
        for (int j = 0; j < 2; ++j) {
            for (int k = 0; k < t[j].x; ++k) ne.push_back(j * l + wrap(i + k, l));
            for (int k = 0; k < t[j].y; ++k)
                opt.push_back(j * l + wrap(i + t[j].z - t[j].y + k, l));
        }
        std::sort(ne.begin(), ne.end());
        std::sort(opt.begin(), opt.end());
        inst.game.actions.push_back({std::move(ne), std::move(opt)});
    }
    for (int i = l; i < n; ++i) inst.game.actions.push_back({{}});

    inst.equilibrium.choice.assign(static_cast<std::size_t>(n), 0);
    inst.optimum.choice.assign(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < l; ++i) inst.optimum.choice[static_cast<std::size_t>(i)] = 1;
    inst.declared_poa = bound.poa;
    return inst;
}

WorstCaseInstance single_cycle(const PoaBound& bound, const TypeSet& types) {
    // Pick a constraint that is tight at nu* = 0 and keeps the equilibrium
    // strictly stable on a lone cycle: c(y) = rho* c(x), c(x) > 0, g > 0
    // (the deviation strictly increases cost). First hit in type-major
    // lexicographic tuple order, for determinism.
    const int n = types.n;
    auto tuples = enumerate_index_set(n, true);
    for (std::size_t ti = 0; ti < types.types.size(); ++ti) {
        const ResourceType& ty = types.types[ti];
        for (const IndexTuple& q : tuples) {
            if (ty.c(q.x) <= 0) continue;
            if (ty.c(q.y) != bound.rho * ty.c(q.x)) continue;
            if (g_of(ty, q) <= 0) continue;

            int l = std::min(q.x + q.y, n);
            WorstCaseInstance inst;
            inst.construction = Construction::SingleCycle;
            inst.game.types = types;
            for (int k = 0; k < l; ++k)
                inst.game.resources.push_back({static_cast<int>(ti), Rational(1)});
            for (int i = 0; i < l; ++i) {
                std::vector<int> ne, opt;
                for (int k = 0; k < q.x; ++k) ne.push_back(wrap(i + k, l));
                for (int k = 0; k < q.y; ++k) opt.push_back(wrap(i + q.z - q.y + k, l));
                std::sort(ne.begin(), ne.end());
                std::sort(opt.begin(), opt.end());
                inst.game.actions.push_back({std::move(ne), std::move(opt)});
            }
            for (int i = l; i < n; ++i) inst.game.actions.push_back({{}});
            inst.equilibrium.choice.assign(static_cast<std::size_t>(n), 0);
            inst.optimum.choice.assign(static_cast<std::size_t>(n), 0);
            for (int i = 0; i < l; ++i) inst.optimum.choice[static_cast<std::size_t>(i)] = 1;
            inst.declared_poa = bound.poa;
            return inst;
        }
    }
    throw VerificationError("no single-cycle witness among the tight constraints");
}

} // namespace

namespace {

std::string binding_dump(const PoaBound& bound, const TypeSet& types) {
    std::ostringstream os;
    for (const BindingConstraint& b : bound.binding) {
        const ResourceType& t = types.types[static_cast<std::size_t>(b.type_index)];
        os << "\n  " << t.name << ":(" << b.tuple.x << "," << b.tuple.y << "," << b.tuple.z
           << ") dual=" << format_scalar(b.dual) << " g=" << format_scalar(g_of(t, b.tuple))
           << " c(x)=" << format_scalar(t.c(b.tuple.x));
    }
    return os.str();
}

} // namespace

OptimalityParameters extract_optimality_parameters(const PoaBound& bound, const TypeSet& types) {
    if (!bound.finite) throw NoFiniteBoundError("bound is not finite");
    if (!bound.attained)
        throw ValidationError("mixing parameters exist only when the optimum is attained");
    auto cands = candidate_pairs(bound, types);
    if (cands.empty())
        throw VerificationError("no tight constraint pair admits a mixing weight; candidates:" +
                                binding_dump(bound, types));
    return cands.front().params;
}

WorstCaseInstance build_worst_case_from_bound(const PoaBound& bound, const TypeSet& types) {
    if (!bound.finite)
        throw NoFiniteBoundError("class price of anarchy is unbounded; no witness exists");

    if (!bound.attained) return single_cycle(bound, types);

    for (const Candidate& cand : candidate_pairs(bound, types)) {
        WorstCaseInstance inst = assemble_two_cycle(bound, types, cand.params);
        Rational cne = system_cost(inst.game, inst.equilibrium);
        Rational copt = system_cost(inst.game, inst.optimum);
        if (cne <= 0 || copt <= 0) continue;
        if (cne != bound.poa * copt) continue;
        if (!is_nash(inst.game, inst.equilibrium).is_nash) continue;
        return inst;
    }
    throw VerificationError("no tight constraint pair produced a verified witness; candidates:" +
                            binding_dump(bound, types));
}

WorstCaseInstance build_worst_case(const TypeSet& types) {
    return build_worst_case_from_bound(poa_lp(types), types);
}

WorstCaseReport verify_worst_case(const WorstCaseInstance& inst, std::uint64_t cap) {
    inst.game.validate();
    const int n = inst.game.num_players();
    if (static_cast<int>(inst.equilibrium.choice.size()) != n ||
        static_cast<int>(inst.optimum.choice.size()) != n)
        throw ValidationError("profile length does not match the player count");

    WorstCaseReport rep;
    rep.declared_poa = inst.declared_poa;
    rep.equilibrium_ok = is_nash(inst.game, inst.equilibrium).is_nash;
    rep.resources_ok = inst.game.resources.size() <= 2 * static_cast<std::size_t>(n);

    for (int i = 0; i < n; ++i) {
        if (inst.game.num_actions(i) < 2) continue;
        Allocation dev = inst.equilibrium;
        dev.choice[static_cast<std::size_t>(i)] = inst.optimum.choice[static_cast<std::size_t>(i)];
        rep.player_costs.emplace_back(local_cost(inst.game, i, inst.equilibrium),
                                      local_cost(inst.game, i, dev));
    }

    // declared_poa must equal the certified equilibrium/optimum cost ratio in
    // both constructions; the exhaustive comparison is equality for two-cycle
    // witnesses and >= for single-cycle ones.
    Rational cne = system_cost(inst.game, inst.equilibrium);
    Rational copt = system_cost(inst.game, inst.optimum);
    bool ratio_ok = copt > 0 && cne == inst.declared_poa * copt;

    std::uint64_t total = profile_count(inst.game);
    if (total > cap) throw CapExceededError("worst-case verification exceeds the profile cap");
    BruteForcePoA brute = brute_force_poa(inst.game, cap);
    rep.brute_poa = brute.poa;
    rep.tight = brute.poa == inst.declared_poa;
    rep.lower_bound_ok = brute.poa >= inst.declared_poa;
    if (total * total <= cap) {
        std::vector<ExplicitGame> one{inst.game};
        rep.gpoa_bound = generalized_poa(one, cap).bound;
    }

    bool goal = inst.construction == Construction::TwoCycle ? rep.tight : rep.lower_bound_ok;
    rep.pass = rep.equilibrium_ok && rep.resources_ok && ratio_ok && goal;

    std::ostringstream os;
    os << (inst.construction == Construction::TwoCycle ? "two-cycle" : "single-cycle")
       << " witness: equilibrium " << (rep.equilibrium_ok ? "holds" : "FAILS")
       << ", cost ratio " << format_scalar(copt > 0 ? cne / copt : Rational(0)) << " vs declared "
       << format_scalar(inst.declared_poa);
    if (rep.brute_poa)
        os << ", exhaustive ratio " << format_scalar(*rep.brute_poa);
    else
        os << ", exhaustive check skipped (profile cap)";
    os << ", " << inst.game.resources.size() << " resources for " << n << " players";
    rep.detail = os.str();
    return rep;
}

} // namespace anarchy
