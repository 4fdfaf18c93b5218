#pragma once

#include "anarchy/scalar.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace anarchy {

enum class Relation { LessEq, Equal, GreaterEq };

enum class LPStatus { Optimal, Infeasible, Unbounded };

struct LPRow {
    std::vector<Rational> coeffs; // dense, one per variable
    Relation rel = Relation::LessEq;
    Rational rhs = 0;
    std::string label; // opaque tag reported back for binding rows
};

// General-form LP, always a maximization. Variables are free by default;
// per-variable lower/upper bounds are optional.
struct LPProblem {
    std::vector<Rational> objective;
    std::vector<LPRow> rows;
    std::vector<std::optional<Rational>> lower;
    std::vector<std::optional<Rational>> upper;

    std::size_t num_vars() const { return objective.size(); }

    std::size_t add_var(const Rational& obj_coeff,
                        std::optional<Rational> lo = std::nullopt,
                        std::optional<Rational> hi = std::nullopt);
    void add_row(std::vector<Rational> coeffs, Relation rel, Rational rhs,
                 std::string label = {});
    void validate() const; // throws ValidationError on shape errors
};

struct LPSolution {
    LPStatus status = LPStatus::Infeasible;
    std::vector<Rational> primal;  // one per variable (Optimal only)
    std::vector<Rational> dual;    // one per row; nonnegative for <=-rows,
                                   // nonpositive for >=-rows, free for =-rows
    Rational objective = 0;
    std::vector<std::size_t> binding; // indices of rows with zero slack
};

struct LPOptions {
    // Rational mode refuses to continue once any dictionary entry's numerator
    // or denominator exceeds this many bits (NumericOverflowError).
    unsigned max_entry_bits = 1u << 20;
    // Dump dictionary state per pivot when set (also enabled by POA_LOG).
    std::ostream* trace = nullptr;
};

// Two-phase primal simplex with Bland's rule on a dense dictionary,
// exact rational arithmetic. Deterministic.
LPSolution solve(const LPProblem& problem, const LPOptions& options = {});

// Same algorithm in binary64 with a 1e-9 feasibility tolerance. Scalars in
// the returned solution are exact conversions of the computed doubles.
LPSolution solve_float(const LPProblem& problem, const LPOptions& options = {});

} // namespace anarchy
