#include "anarchy/poa.hpp"

#include "anarchy/errors.hpp"

#include <algorithm>
#include <sstream>

namespace anarchy {

namespace {

const Rational kNuCap = Rational(Integer(1) << 20);

std::string tuple_label(const std::string& type_name, const IndexTuple& t) {
    std::ostringstream os;
    os << type_name << ":(" << t.x << "," << t.y << "," << t.z << ")";
    return os.str();
}

} // namespace

std::vector<IndexTuple> enumerate_index_set(int n, bool restricted) {
    if (n < 1) throw ValidationError("player count must be >= 1");
    std::vector<IndexTuple> out;
    for (int x = 0; x <= n; ++x)
        for (int y = 0; y <= n; ++y)
            for (int z = 0; z <= std::min(x, y); ++z) {
                int users = x + y - z;
                if (users < 1 || users > n) continue;
                if (restricted && users != n && (x - z) * (y - z) * z != 0) continue;
                out.push_back({x, y, z});
            }
    return out;
}

PoaBound poa_lp(const TypeSet& types, const PoaLpOptions& options) {
    types.validate();
    const int n = types.n;
    auto tuples = enumerate_index_set(n, options.restricted);

    LPProblem lp;
    std::size_t nu = lp.add_var(0, Rational(0));
    std::size_t rho = lp.add_var(1);

    struct RowRef {
        int type_index;
        IndexTuple tuple;
    };
    std::vector<RowRef> refs;
    for (std::size_t ti = 0; ti < types.types.size(); ++ti) {
        const ResourceType& t = types.types[ti];
        for (const IndexTuple& q : tuples) {
            std::vector<Rational> coeffs(lp.num_vars(), Rational(0));
            coeffs[nu] = (q.x - q.z) * t.f(q.x) - (q.y - q.z) * t.f(q.x + 1);
            coeffs[rho] = -t.c(q.x);
            lp.add_row(std::move(coeffs), Relation::GreaterEq, -t.c(q.y),
                       tuple_label(t.name, q));
            refs.push_back({static_cast<int>(ti), q});
        }
    }

    const bool exact = options.arithmetic == Arithmetic::RationalExact;
    auto run = [&](const LPProblem& p) {
        return exact ? solve(p, options.lp) : solve_float(p, options.lp);
    };

    LPSolution primary = run(lp);
    if (primary.status == LPStatus::Unbounded)
        throw ValidationError("cost curves admit arbitrarily large rho; "
                              "at least one positive cost entry is required");
    if (primary.status != LPStatus::Optimal)
        throw VerificationError("class LP is feasible by construction yet did not solve");

    PoaBound out;
    out.n = n;
    for (const auto& t : types.types) out.type_names.push_back(t.name);
    out.rho = primary.primal[rho];
    out.finite = out.rho > 0;
    if (!out.finite) return out;
    out.poa = 1 / out.rho;

    // Canonical vertex: fix rho at its optimum and maximize nu, capped so a
    // flat direction cannot make the secondary solve unbounded.
    LPProblem secondary = lp;
    secondary.objective[nu] = 1;
    secondary.objective[rho] = 0;
    secondary.upper[nu] = kNuCap;
    {
        std::vector<Rational> coeffs(secondary.num_vars(), Rational(0));
        coeffs[rho] = 1;
        secondary.add_row(std::move(coeffs), Relation::Equal, out.rho, "fix rho");
    }
    LPSolution canon = run(secondary);
    bool forced_past_cap = false;
    if (canon.status == LPStatus::Infeasible) {
        // Every optimum has nu beyond the cap; take the least such nu instead
        // of the (unreachable) capped maximum and report the cap as hit.
        secondary.objective[nu] = -1;
        secondary.upper[nu] = std::nullopt;
        canon = run(secondary);
        forced_past_cap = true;
    }
    if (canon.status != LPStatus::Optimal)
        throw VerificationError("canonicalization solve failed");

    out.nu = canon.primal[nu];
    out.nu_capped = forced_past_cap || out.nu == kNuCap;
    out.attained = out.nu > 0;
    if (out.attained) {
        out.lambda = 1 / out.nu;
        out.mu = 1 - out.rho * out.lambda;
    }
    for (std::size_t r : canon.binding) {
        if (r >= refs.size()) continue; // the rho-fixing row
        BindingConstraint b;
        b.type_index = refs[r].type_index;
        b.tuple = refs[r].tuple;
        b.dual = primary.dual[r];
        out.binding.push_back(b);
    }
    return out;
}

Rational gamma_value(const TypeSet& types) {
    PoaBound b = poa_lp(types);
    if (!b.finite) throw NoFiniteBoundError("class has no finite price of anarchy");
    return b.poa;
}

DesignedRules optimal_rules(const std::vector<CostCurve>& costs, int n, bool nonneg_rules) {
    if (n < 1) throw ValidationError("player count must be >= 1");
    if (costs.empty()) throw ValidationError("need at least one cost curve");
    auto tuples = enumerate_index_set(n, true);

    DesignedRules out;
    out.n = n;
    out.finite = true;
    out.designed.n = n;

    for (const CostCurve& cc : costs) {
        if (cc.cost_1n.size() != static_cast<std::size_t>(n))
            throw ValidationError("cost curve '" + cc.name + "' must list loads 1..n");
        bool positive = false;
        for (const Rational& v : cc.cost_1n) {
            if (v < 0) throw ValidationError("cost curve '" + cc.name + "' must be nonnegative");
            if (v > 0) positive = true;
        }
        if (!positive)
            throw ValidationError("cost curve '" + cc.name + "' vanishes everywhere");

        auto c = [&](int x) { return x == 0 ? Rational(0) : cc.cost_1n[static_cast<std::size_t>(x - 1)]; };

        LPProblem lp;
        std::size_t rho = lp.add_var(1);
        std::vector<std::size_t> f(static_cast<std::size_t>(n));
        for (int x = 1; x <= n; ++x)
            f[static_cast<std::size_t>(x - 1)] =
                nonneg_rules ? lp.add_var(0, Rational(0)) : lp.add_var(0);

        for (const IndexTuple& q : tuples) {
            std::vector<Rational> coeffs(lp.num_vars(), Rational(0));
            coeffs[rho] = -c(q.x);
            if (q.x >= 1) coeffs[f[static_cast<std::size_t>(q.x - 1)]] += q.x - q.z;
            if (q.x + 1 <= n) coeffs[f[static_cast<std::size_t>(q.x)]] -= q.y - q.z;
            lp.add_row(std::move(coeffs), Relation::GreaterEq, -c(q.y),
                       tuple_label(cc.name, q));
        }

        LPSolution sol = solve(lp);
        if (sol.status != LPStatus::Optimal)
            throw VerificationError("design LP did not solve for '" + cc.name + "'");

        DesignedRules::PerType pt;
        pt.name = cc.name;
        pt.rho = sol.primal[rho];
        pt.finite = pt.rho > 0;
        for (int x = 1; x <= n; ++x)
            pt.f_star.push_back(sol.primal[f[static_cast<std::size_t>(x - 1)]]);
        pt.nonneg_already = std::all_of(pt.f_star.begin(), pt.f_star.end(),
                                        [](const Rational& v) { return v >= 0; });

        if (pt.finite) {
            Rational poa_t = 1 / pt.rho;
            if (poa_t > out.poa) out.poa = poa_t;
        } else {
            out.finite = false;
        }
        out.designed.types.push_back(make_type(cc.name, n, cc.cost_1n, pt.f_star));
        out.per_type.push_back(std::move(pt));
    }
    if (!out.finite) out.poa = 0;
    return out;
}

} // namespace anarchy
