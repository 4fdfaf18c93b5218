#include "anarchy/lp.hpp"

#include "anarchy/errors.hpp"

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <limits>
#include <ostream>
#include <string_view>
#include <utility>

namespace anarchy {

namespace {

// Numeric policy. Rational runs are exact; the float backend uses a fixed
// feasibility/optimality tolerance of 1e-9.
template <class T>
struct Policy;

template <>
struct Policy<Rational> {
    static bool pos(const Rational& v) { return v > 0; }
    static bool neg(const Rational& v) { return v < 0; }
    static constexpr bool exact = true;
};

template <>
struct Policy<double> {
    static constexpr double eps = 1e-9;
    static bool pos(double v) { return v > eps; }
    static bool neg(double v) { return v < -eps; }
    static constexpr bool exact = false;
};

unsigned bit_size(const Integer& v) {
    if (v == 0) return 1;
    return static_cast<unsigned>(msb(abs(v))) + 1;
}

unsigned bit_size(const Rational& v) {
    return std::max(bit_size(numerator(v)), bit_size(denominator(v)));
}

// Simplex on the dictionary: one row per basic variable, one column per
// nonbasic variable, so memory stays O(rows * structural-vars) even for the
// long thin systems the class-level bounds produce.
//
//   value(basic[i]) = rhs[i] + sum_j M[i][j] * x(nonbasic[j])
//   objective       = obj_const + sum_j obj[j] * x(nonbasic[j])
//
// Variable ids: 0..cols-1 structural, cols..cols+rows-1 slacks, then the
// phase-1 auxiliary. Bland's rule (lowest eligible variable id both for the
// entering and the tie-broken leaving variable) guarantees termination.
template <class T>
class Dictionary {
public:
    Dictionary(std::vector<std::vector<T>> neg_a, std::vector<T> rhs, std::vector<T> obj,
               T obj_const, const LPOptions& options)
        : m_(rhs.size()),
          n_(obj.size()),
          M_(std::move(neg_a)),
          rhs_(std::move(rhs)),
          phase2_(std::move(obj)),
          phase2_const_(std::move(obj_const)),
          options_(options) {
        basic_.resize(m_);
        nonbasic_.resize(n_);
        for (std::size_t j = 0; j < n_; ++j) nonbasic_[j] = j;
        for (std::size_t i = 0; i < m_; ++i) basic_[i] = n_ + i;
    }

    // Returns the final status; on Optimal the dictionary holds the vertex.
    LPStatus run() {
        if (!make_feasible()) return LPStatus::Infeasible;
        return optimize(phase2_, phase2_const_) ? LPStatus::Optimal : LPStatus::Unbounded;
    }

    T variable_value(std::size_t var) const {
        for (std::size_t i = 0; i < m_; ++i)
            if (basic_[i] == var) return rhs_[i];
        return T(0);
    }

    // Dual of internal row i (its slack has id n_ + i): the negated reduced
    // cost of the slack, zero while the slack is basic.
    T row_dual(std::size_t i) const {
        std::size_t slack = n_ + i;
        for (std::size_t j = 0; j < nonbasic_.size(); ++j)
            if (nonbasic_[j] == slack) return T(-phase2_[j]);
        return T(0);
    }

    const T& objective_value() const { return phase2_const_; }

private:
    bool make_feasible() {
        std::size_t worst = m_;
        for (std::size_t i = 0; i < m_; ++i)
            if (Policy<T>::neg(rhs_[i]) && (worst == m_ || rhs_[i] < rhs_[worst])) worst = i;
        if (worst == m_) return true;

        // Auxiliary variable column: value(w_i) = rhs_i - a_i x + x_aux.
        aux_ = n_ + m_;
        std::size_t aux_col = nonbasic_.size();
        nonbasic_.push_back(aux_);
        for (std::size_t i = 0; i < m_; ++i) M_[i].push_back(T(1));
        phase2_.push_back(T(0));
        std::vector<T> phase1(nonbasic_.size(), T(0));
        phase1[aux_col] = T(-1);
        T phase1_const(0);

        pivot(worst, aux_col, phase1, phase1_const);
        if (!optimize(phase1, phase1_const))
            throw VerificationError("phase 1 cannot be unbounded");
        if (Policy<T>::neg(phase1_const)) return false;

        // Drive the auxiliary variable out of the basis if it is stuck there
        // at value zero, then drop its column.
        for (std::size_t i = 0; i < m_; ++i) {
            if (basic_[i] != aux_) continue;
            std::size_t col = nonbasic_.size();
            for (std::size_t j = 0; j < nonbasic_.size(); ++j) {
                if (nonbasic_[j] == aux_) continue;
                if (Policy<T>::pos(M_[i][j]) || Policy<T>::neg(M_[i][j])) {
                    if (col == nonbasic_.size() || nonbasic_[j] < nonbasic_[col]) col = j;
                }
            }
            if (col == nonbasic_.size()) {
                // Row reads 0 = 0: redundant, remove it.
                M_.erase(M_.begin() + static_cast<std::ptrdiff_t>(i));
                rhs_.erase(rhs_.begin() + static_cast<std::ptrdiff_t>(i));
                basic_.erase(basic_.begin() + static_cast<std::ptrdiff_t>(i));
                --m_;
            } else {
                pivot(i, col, phase1, phase1_const);
            }
            break;
        }
        for (std::size_t j = 0; j < nonbasic_.size(); ++j) {
            if (nonbasic_[j] != aux_) continue;
            nonbasic_.erase(nonbasic_.begin() + static_cast<std::ptrdiff_t>(j));
            phase2_.erase(phase2_.begin() + static_cast<std::ptrdiff_t>(j));
            for (auto& row : M_) row.erase(row.begin() + static_cast<std::ptrdiff_t>(j));
            break;
        }
        aux_ = std::numeric_limits<std::size_t>::max();
        return true;
    }

    bool optimize(std::vector<T>& obj, T& obj_const) {
        for (;;) {
            std::size_t enter = nonbasic_.size();
            for (std::size_t j = 0; j < nonbasic_.size(); ++j)
                if (Policy<T>::pos(obj[j]) &&
                    (enter == nonbasic_.size() || nonbasic_[j] < nonbasic_[enter]))
                    enter = j;
            if (enter == nonbasic_.size()) return true;

            std::size_t leave = m_;
            T best_ratio(0);
            for (std::size_t i = 0; i < m_; ++i) {
                if (!Policy<T>::neg(M_[i][enter])) continue;
                T ratio = T(-rhs_[i] / M_[i][enter]);
                if (leave == m_ || ratio < best_ratio ||
                    (ratio == best_ratio && basic_[i] < basic_[leave])) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
            if (leave == m_) return false;
            pivot(leave, enter, obj, obj_const);
        }
    }

    void pivot(std::size_t row, std::size_t col, std::vector<T>& active_obj, T& active_const) {
        if (options_.trace)
            *options_.trace << "pivot: enter x" << nonbasic_[col] << " leave x" << basic_[row]
                            << " obj=" << active_const << "\n";
        const T p = M_[row][col];
        std::vector<T>& pr = M_[row];
        rhs_[row] = T(-rhs_[row] / p);
        for (std::size_t k = 0; k < pr.size(); ++k)
            pr[k] = (k == col) ? T(T(1) / p) : T(-pr[k] / p);

        auto apply = [&](std::vector<T>& target, T& target_rhs, const T& factor) {
            if (!(Policy<T>::pos(factor) || Policy<T>::neg(factor))) {
                target[col] = T(0);
                return;
            }
            target_rhs += factor * rhs_[row];
            for (std::size_t k = 0; k < target.size(); ++k) {
                if (k == col)
                    target[k] = factor * pr[k];
                else if (Policy<T>::pos(pr[k]) || Policy<T>::neg(pr[k]))
                    target[k] += factor * pr[k];
            }
        };

        for (std::size_t l = 0; l < m_; ++l) {
            if (l == row) continue;
            T factor = M_[l][col];
            apply(M_[l], rhs_[l], factor);
        }
        {
            T factor = phase2_[col];
            apply(phase2_, phase2_const_, factor);
        }
        if (&active_obj != &phase2_) {
            T factor = active_obj[col];
            apply(active_obj, active_const, factor);
        }
        std::swap(basic_[row], nonbasic_[col]);

        if constexpr (Policy<T>::exact) {
            if (options_.max_entry_bits) check_bits();
        }
    }

    void check_bits() {
        unsigned worst = 0;
        for (const auto& dict_row : M_)
            for (const T& v : dict_row) worst = std::max(worst, bit_size(v));
        for (const T& v : rhs_) worst = std::max(worst, bit_size(v));
        for (const T& v : phase2_) worst = std::max(worst, bit_size(v));
        worst = std::max(worst, bit_size(phase2_const_));
        if (worst > options_.max_entry_bits)
            throw NumericOverflowError("simplex entries exceeded " +
                                       std::to_string(options_.max_entry_bits) +
                                       " bits; consider float mode");
    }

    std::size_t m_;
    std::size_t n_;
    std::vector<std::vector<T>> M_;
    std::vector<T> rhs_;
    std::vector<std::size_t> basic_;
    std::vector<std::size_t> nonbasic_;
    std::vector<T> phase2_;
    T phase2_const_;
    std::size_t aux_ = std::numeric_limits<std::size_t>::max();
    LPOptions options_;
};

// How each user variable maps into the nonnegative internal space.
struct VarMap {
    enum class Kind { Shift, Negate, Split } kind = Kind::Shift;
    Rational offset = 0;     // Shift: x = offset + x'; Negate: x = offset - x'
    std::size_t col = 0;     // primary internal column
    std::size_t col_neg = 0; // Split only: x = x'(col) - x'(col_neg)
};

struct InternalForm {
    std::vector<std::vector<Rational>> neg_a; // -A, dictionary initial matrix
    std::vector<Rational> rhs;
    std::vector<Rational> obj;
    Rational obj_const = 0;
    std::vector<VarMap> vars;
    // user row -> internal rows with the sign of their dual contribution
    std::vector<std::vector<std::pair<std::size_t, int>>> row_map;
    bool trivially_infeasible = false; // contradictory bounds
};

InternalForm build_internal(const LPProblem& p) {
    InternalForm f;
    const std::size_t nu = p.num_vars();
    f.vars.resize(nu);

    std::size_t cols = 0;
    for (std::size_t j = 0; j < nu; ++j) {
        const auto& lo = p.lower.empty() ? std::optional<Rational>{} : p.lower[j];
        const auto& hi = p.upper.empty() ? std::optional<Rational>{} : p.upper[j];
        VarMap& vm = f.vars[j];
        if (lo && hi && *lo > *hi) f.trivially_infeasible = true;
        if (lo) {
            vm.kind = VarMap::Kind::Shift;
            vm.offset = *lo;
            vm.col = cols++;
        } else if (hi) {
            vm.kind = VarMap::Kind::Negate;
            vm.offset = *hi;
            vm.col = cols++;
        } else {
            vm.kind = VarMap::Kind::Split;
            vm.col = cols++;
            vm.col_neg = cols++;
        }
    }

    f.obj.assign(cols, Rational(0));
    for (std::size_t j = 0; j < nu; ++j) {
        const VarMap& vm = f.vars[j];
        const Rational& c = p.objective[j];
        switch (vm.kind) {
            case VarMap::Kind::Shift:
                f.obj[vm.col] += c;
                f.obj_const += c * vm.offset;
                break;
            case VarMap::Kind::Negate:
                f.obj[vm.col] -= c;
                f.obj_const += c * vm.offset;
                break;
            case VarMap::Kind::Split:
                f.obj[vm.col] += c;
                f.obj[vm.col_neg] -= c;
                break;
        }
    }

    auto transformed_row = [&](const LPRow& row) {
        std::pair<std::vector<Rational>, Rational> out{std::vector<Rational>(cols, Rational(0)),
                                                       row.rhs};
        for (std::size_t j = 0; j < p.num_vars(); ++j) {
            const Rational& a = row.coeffs[j];
            if (a == 0) continue;
            const VarMap& vm = f.vars[j];
            switch (vm.kind) {
                case VarMap::Kind::Shift:
                    out.first[vm.col] += a;
                    out.second -= a * vm.offset;
                    break;
                case VarMap::Kind::Negate:
                    out.first[vm.col] -= a;
                    out.second -= a * vm.offset;
                    break;
                case VarMap::Kind::Split:
                    out.first[vm.col] += a;
                    out.first[vm.col_neg] -= a;
                    break;
            }
        }
        return out;
    };

    auto push_le = [&](std::vector<Rational> coeffs, Rational rhs) {
        std::vector<Rational> neg(coeffs.size());
        for (std::size_t k = 0; k < coeffs.size(); ++k) neg[k] = -coeffs[k];
        f.neg_a.push_back(std::move(neg));
        f.rhs.push_back(std::move(rhs));
        return f.neg_a.size() - 1;
    };

    f.row_map.resize(p.rows.size());
    for (std::size_t r = 0; r < p.rows.size(); ++r) {
        auto [coeffs, rhs] = transformed_row(p.rows[r]);
        switch (p.rows[r].rel) {
            case Relation::LessEq:
                f.row_map[r].emplace_back(push_le(coeffs, rhs), +1);
                break;
            case Relation::GreaterEq: {
                std::vector<Rational> neg(coeffs.size());
                for (std::size_t k = 0; k < coeffs.size(); ++k) neg[k] = -coeffs[k];
                f.row_map[r].emplace_back(push_le(std::move(neg), -rhs), -1);
                break;
            }
            case Relation::Equal: {
                std::vector<Rational> neg(coeffs.size());
                for (std::size_t k = 0; k < coeffs.size(); ++k) neg[k] = -coeffs[k];
                f.row_map[r].emplace_back(push_le(coeffs, rhs), +1);
                f.row_map[r].emplace_back(push_le(std::move(neg), -rhs), -1);
                break;
            }
        }
    }

    // Internal rows for two-sided bounds: x' <= hi - lo.
    for (std::size_t j = 0; j < nu; ++j) {
        const auto& lo = p.lower.empty() ? std::optional<Rational>{} : p.lower[j];
        const auto& hi = p.upper.empty() ? std::optional<Rational>{} : p.upper[j];
        if (lo && hi) {
            std::vector<Rational> coeffs(cols, Rational(0));
            coeffs[f.vars[j].col] = 1;
            push_le(std::move(coeffs), *hi - *lo);
        }
    }
    return f;
}

Rational user_value(const VarMap& vm, const auto& value_of) {
    switch (vm.kind) {
        case VarMap::Kind::Shift:
            return vm.offset + value_of(vm.col);
        case VarMap::Kind::Negate:
            return vm.offset - value_of(vm.col);
        case VarMap::Kind::Split:
            return value_of(vm.col) - value_of(vm.col_neg);
    }
    return 0;
}

template <class T>
LPSolution run_simplex(const LPProblem& p, const InternalForm& f, const LPOptions& options) {
    std::vector<std::vector<T>> neg_a(f.neg_a.size());
    std::vector<T> rhs(f.rhs.size());
    std::vector<T> obj(f.obj.size());
    for (std::size_t i = 0; i < f.neg_a.size(); ++i) {
        neg_a[i].reserve(f.obj.size());
        for (const Rational& v : f.neg_a[i]) neg_a[i].push_back(v.convert_to<T>());
        rhs[i] = f.rhs[i].convert_to<T>();
    }
    for (std::size_t j = 0; j < f.obj.size(); ++j) obj[j] = f.obj[j].convert_to<T>();

    Dictionary<T> dict(std::move(neg_a), std::move(rhs), std::move(obj),
                       f.obj_const.convert_to<T>(), options);
    LPSolution out;
    out.status = dict.run();
    if (out.status != LPStatus::Optimal) return out;

    out.objective = Rational(dict.objective_value());
    out.primal.resize(p.num_vars());
    for (std::size_t j = 0; j < p.num_vars(); ++j)
        out.primal[j] =
            user_value(f.vars[j], [&](std::size_t col) { return Rational(dict.variable_value(col)); });

    out.dual.resize(p.rows.size());
    for (std::size_t r = 0; r < p.rows.size(); ++r) {
        Rational y = 0;
        for (auto [internal, sign] : f.row_map[r]) {
            Rational yi(dict.row_dual(internal));
            y += sign * yi;
        }
        out.dual[r] = y;
    }

    // Binding rows by exact re-substitution against the user-space data.
    for (std::size_t r = 0; r < p.rows.size(); ++r) {
        Rational lhs = 0;
        for (std::size_t j = 0; j < p.num_vars(); ++j) lhs += p.rows[r].coeffs[j] * out.primal[j];
        Rational slack = p.rows[r].rhs - lhs;
        bool tight;
        if constexpr (Policy<T>::exact) {
            tight = slack == 0;
        } else {
            Rational scale = abs(p.rows[r].rhs) > 1 ? abs(p.rows[r].rhs) : Rational(1);
            tight = abs(slack) <= scale / 100'000'000;
        }
        if (tight) out.binding.push_back(r);
        if constexpr (Policy<T>::exact) {
            bool ok = true;
            switch (p.rows[r].rel) {
                case Relation::LessEq: ok = slack >= 0; break;
                case Relation::GreaterEq: ok = slack <= 0; break;
                case Relation::Equal: ok = slack == 0; break;
            }
            if (!ok) throw VerificationError("simplex returned an infeasible vertex");
        }
    }

    if constexpr (Policy<T>::exact) {
        // Strong duality in internal space: optimum == const + b~' y~.
        Rational dual_obj = f.obj_const;
        for (std::size_t i = 0; i < f.rhs.size(); ++i) dual_obj += f.rhs[i] * Rational(dict.row_dual(i));
        if (dual_obj != out.objective)
            throw VerificationError("strong duality check failed in rational simplex");
    }
    return out;
}

LPSolution solve_with(const LPProblem& p, LPOptions options, bool rational) {
    if (!options.trace) {
        const char* log = std::getenv("POA_LOG");
        if (log && std::string_view(log) == "trace") options.trace = &std::cerr;
    }
    p.validate();
    InternalForm f = build_internal(p);
    if (f.trivially_infeasible) {
        LPSolution out;
        out.status = LPStatus::Infeasible;
        return out;
    }
    if (rational) return run_simplex<Rational>(p, f, options);
    return run_simplex<double>(p, f, options);
}

} // namespace

std::size_t LPProblem::add_var(const Rational& obj_coeff, std::optional<Rational> lo,
                               std::optional<Rational> hi) {
    objective.push_back(obj_coeff);
    lower.push_back(std::move(lo));
    upper.push_back(std::move(hi));
    for (auto& row : rows) row.coeffs.emplace_back(0);
    return objective.size() - 1;
}

void LPProblem::add_row(std::vector<Rational> coeffs, Relation rel, Rational rhs,
                        std::string label) {
    LPRow row;
    row.coeffs = std::move(coeffs);
    row.rel = rel;
    row.rhs = std::move(rhs);
    row.label = std::move(label);
    rows.push_back(std::move(row));
}

void LPProblem::validate() const {
    const std::size_t nv = num_vars();
    if (!lower.empty() && lower.size() != nv)
        throw ValidationError("lower bound vector size mismatch");
    if (!upper.empty() && upper.size() != nv)
        throw ValidationError("upper bound vector size mismatch");
    for (const auto& row : rows)
        if (row.coeffs.size() != nv)
            throw ValidationError("row width mismatch: " + row.label);
    for (std::size_t j = 0; j < lower.size() && j < upper.size(); ++j)
        if (lower[j] && upper[j] && *lower[j] > *upper[j])
            throw ValidationError("empty bound interval for variable " + std::to_string(j));
}

LPSolution solve(const LPProblem& problem, const LPOptions& options) {
    return solve_with(problem, options, true);
}

LPSolution solve_float(const LPProblem& problem, const LPOptions& options) {
    return solve_with(problem, options, false);
}

} // namespace anarchy
