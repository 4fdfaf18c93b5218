#include "anarchy/types.hpp"

#include "anarchy/errors.hpp"

#include <boost/multiprecision/mpfr.hpp>

#include <algorithm>
#include <cctype>
#include <set>

namespace anarchy {

namespace {

using BigFloat = boost::multiprecision::mpfr_float_100;

// Round to exactly `digits` decimal digits, half away from zero, and return
// the result as an exact rational with denominator 10^digits.
Rational round_to_digits(const BigFloat& value, unsigned digits) {
    Integer den = pow10(digits);
    BigFloat scaled = value * BigFloat(den.str());
    bool neg = scaled < 0;
    if (neg) scaled = -scaled;
    scaled += BigFloat(1) / 2;
    Integer num = floor(scaled).convert_to<Integer>();
    if (neg) num = -num;
    return Rational(num, den);
}

} // namespace

void TypeSet::validate() const {
    if (n < 1) throw ValidationError("type set needs n >= 1");
    if (types.empty()) throw ValidationError("type set needs at least one type");
    for (const auto& t : types) {
        if (t.n != n) throw ValidationError("type " + t.name + " built for different n");
        if (t.cost.size() != static_cast<std::size_t>(n) + 1 ||
            t.rule.size() != static_cast<std::size_t>(n) + 2)
            throw ValidationError("type " + t.name + " has malformed curves");
        if (t.cost[0] != 0 || t.rule[0] != 0 || t.rule[static_cast<std::size_t>(n) + 1] != 0)
            throw ValidationError("type " + t.name + " violates boundary padding");
    }
    std::set<std::string> names;
    for (const auto& t : types)
        if (!names.insert(t.name).second)
            throw ValidationError("duplicate type name " + t.name);
}

ResourceType make_type(std::string name, int n, const std::vector<Rational>& cost_1n,
                       const std::vector<Rational>& rule_1n) {
    if (n < 1) throw ValidationError("make_type needs n >= 1");
    if (cost_1n.size() != static_cast<std::size_t>(n) ||
        rule_1n.size() != static_cast<std::size_t>(n))
        throw ValidationError("make_type: curve length must equal n");
    ResourceType t;
    t.name = std::move(name);
    t.n = n;
    t.cost.assign(static_cast<std::size_t>(n) + 1, Rational(0));
    t.rule.assign(static_cast<std::size_t>(n) + 2, Rational(0));
    for (int x = 1; x <= n; ++x) {
        t.cost[static_cast<std::size_t>(x)] = cost_1n[static_cast<std::size_t>(x) - 1];
        t.rule[static_cast<std::size_t>(x)] = rule_1n[static_cast<std::size_t>(x) - 1];
    }
    return t;
}

ResourceType congestion_type_from_latency(std::string name, const LatencyCurve& latency) {
    const int n = latency.n();
    std::vector<Rational> cost(static_cast<std::size_t>(n));
    std::vector<Rational> rule(static_cast<std::size_t>(n));
    for (int x = 1; x <= n; ++x) {
        rule[static_cast<std::size_t>(x) - 1] = latency.at(x);
        cost[static_cast<std::size_t>(x) - 1] = x * latency.at(x);
    }
    return make_type(std::move(name), n, cost, rule);
}

std::vector<ResourceType> basis_types(BasisFamily family, int n, int degree, unsigned digits) {
    if (n < 1) throw ValidationError("basis_types needs n >= 1");
    auto monomials = [&](int top_degree) {
        std::vector<ResourceType> out;
        for (int d = top_degree; d >= 0; --d) {
            LatencyCurve ell;
            ell.values.resize(static_cast<std::size_t>(n));
            for (int x = 1; x <= n; ++x) {
                Integer p = 1;
                for (int k = 0; k < d; ++k) p *= x;
                ell.values[static_cast<std::size_t>(x) - 1] = Rational(p);
            }
            std::string name = d == 0 ? "1" : (d == 1 ? "x" : "x^" + std::to_string(d));
            out.push_back(congestion_type_from_latency(name, ell));
        }
        return out;
    };

    switch (family) {
        case BasisFamily::Affine: return monomials(1);
        case BasisFamily::Quadratic: return monomials(2);
        case BasisFamily::Cubic: return monomials(3);
        case BasisFamily::Polynomial:
            if (degree < 0) throw ValidationError("polynomial basis needs degree >= 0");
            return monomials(degree);
        case BasisFamily::Sqrt: {
            LatencyCurve ell;
            ell.values.resize(static_cast<std::size_t>(n));
            for (int x = 1; x <= n; ++x)
                ell.values[static_cast<std::size_t>(x) - 1] = round_to_digits(sqrt(BigFloat(x)), digits);
            return {congestion_type_from_latency("sqrt(x)", ell)};
        }
        case BasisFamily::Log: {
            LatencyCurve ell;
            ell.values.resize(static_cast<std::size_t>(n));
            for (int x = 1; x <= n; ++x)
                ell.values[static_cast<std::size_t>(x) - 1] =
                    round_to_digits(log(BigFloat(x)) + 1, digits);
            return {congestion_type_from_latency("log(x)+1", ell)};
        }
    }
    throw ValidationError("unknown basis family");
}

std::vector<ResourceType> basis_types_by_name(const std::string& name, int n, unsigned digits) {
    std::string s;
    for (char c : name) s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (s == "affine") return basis_types(BasisFamily::Affine, n, 0, digits);
    if (s == "quadratic") return basis_types(BasisFamily::Quadratic, n, 0, digits);
    if (s == "cubic") return basis_types(BasisFamily::Cubic, n, 0, digits);
    if (s == "sqrt") return basis_types(BasisFamily::Sqrt, n, 0, digits);
    if (s == "log") return basis_types(BasisFamily::Log, n, 0, digits);
    if (s.rfind("poly", 0) == 0) {
        std::string d = s.substr(4);
        if (d.empty() || !std::all_of(d.begin(), d.end(),
                                      [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
            throw ValidationError("bad polynomial basis name: " + name);
        return basis_types(BasisFamily::Polynomial, n, std::stoi(d), digits);
    }
    throw ValidationError("unknown basis: " + name);
}

std::vector<Rational> toll_from_optimal_rule(const LatencyCurve& latency,
                                             const std::vector<Rational>& f_star_1n) {
    if (f_star_1n.size() != static_cast<std::size_t>(latency.n()))
        throw ValidationError("toll: rule length must equal n");
    std::vector<Rational> toll(f_star_1n.size());
    for (int x = 1; x <= latency.n(); ++x)
        toll[static_cast<std::size_t>(x) - 1] =
            f_star_1n[static_cast<std::size_t>(x) - 1] - latency.at(x);
    return toll;
}

} // namespace anarchy
