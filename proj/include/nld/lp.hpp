#pragma once

#include "nld/inequality.hpp"
#include "nld/rational.hpp"

#include <iosfwd>
#include <optional>
#include <vector>

namespace nld {

enum class Relation { LessEqual, Equal, GreaterEqual };

struct LpRow {
    std::vector<Rational> coeffs;
    Relation relation = Relation::LessEqual;
    Rational rhs;
};

/// maximize objective . x subject to the rows and lower <= x <= upper. A missing lower
/// bound means the variable is free; the default is x >= 0.
struct LinearProgram {
    std::vector<Rational> objective;
    std::vector<LpRow> rows;
    std::vector<std::optional<Rational>> lower;
    std::vector<std::optional<Rational>> upper;

    explicit LinearProgram(std::size_t variables = 0);

    std::size_t variables() const noexcept { return objective.size(); }
    void add_row(std::vector<Rational> coeffs, Relation relation, Rational rhs);
    /// Throws DimensionMismatch when the sizes are inconsistent.
    void validate() const;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

/// Dual certificate in the convention
///   objective = A^T y + z_lower + z_upper,  y_i >= 0 on <= rows, <= 0 on >= rows,
///   z_lower <= 0, z_upper >= 0 (zero where the bound is absent),
/// so that b . y + lower . z_lower + upper . z_upper equals the optimum.
struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    Rational optimum;
    std::vector<Rational> x;
    std::vector<Rational> row_duals;
    std::vector<Rational> lower_duals;
    std::vector<Rational> upper_duals;
    std::size_t pivots = 0;
};

/// Two-phase primal simplex on a dense rational tableau with Bland's rule.
LpResult simplex_max(const LinearProgram& lp);

/// max c . x subject to A x = b, x >= 0, with a fixed set of rows and columns that can be
/// appended between solves (column generation). The tableau keeps B^-1 in the artificial
/// block, so a new column is priced and inserted without refactoring and the next solve
/// continues from the current basis.
class ColumnLp {
public:
    explicit ColumnLp(std::vector<Rational> rhs);

    std::size_t rows() const noexcept { return m_; }
    std::size_t columns() const noexcept { return cost_.size(); }
    std::size_t add_column(const std::vector<Rational>& a, const Rational& cost);
    /// Bland's rule from the current basis; phase 1 runs as long as artificials are positive.
    LpStatus solve();

    const Rational& objective() const noexcept { return value_; }
    std::vector<Rational> x() const;
    /// y with cost_j - y . a_j <= 0 for every column at optimality.
    std::vector<Rational> duals() const;
    std::size_t pivots() const noexcept { return pivots_; }

private:
    void pivot(std::size_t r, std::size_t c);
    bool run(bool phase_one);
    void price(bool phase_one);

    std::size_t m_;
    std::vector<int> sign_;                   // rows negated to make b >= 0
    std::vector<std::vector<Rational>> t_;    // per row: m artificial entries, then columns
    std::vector<Rational> rhs_;
    std::vector<std::size_t> basis_;          // tableau column index (artificials first)
    std::vector<Rational> cost_;
    std::vector<Rational> d_;                 // reduced costs over all tableau columns
    Rational value_;
    bool feasible_ = false;
    std::size_t pivots_ = 0;
};

/// Exact check of primal feasibility, dual feasibility and equal objective values.
bool verify_certificate(const LinearProgram& lp, const LpResult& result);

/// Plain-text LP format:
///   * comment lines
///   lp <variables> <rows>
///   max c_1 ... c_N
///   row a_1 ... a_N <=|=|>= b        (one per constraint)
///   lower j v | upper j v | free j    (0-based j; unlisted variables are >= 0)
///   end
void write_lp(std::ostream& os, const LinearProgram& lp);
LinearProgram read_lp(std::istream& is);

/// Maximum of the inequality's Bell expression (-sum c (mu)) over no-signaling behaviors,
/// from a party-symmetric LP (the objective and the polytope are permutation invariant,
/// so a symmetric optimizer exists). Marginals are read with the partners on setting 1.
Rational nosignaling_bound(const SymmetricInequality& ineq);

/// The same LP over the unsymmetrized probability space: p(a|x) >= 0, normalized, with all
/// no-signaling equalities. Size m^n 2^n; intended for n <= 4.
LinearProgram nosignaling_lp(const SymmetricInequality& ineq);
Rational nosignaling_bound_full(const SymmetricInequality& ineq);

/// sum_mu |c_mu| |mu| for full-body inequalities: the no-signaling bound of a
/// full-correlation expression.
Rational hypercube_bound(const SymmetricInequality& ineq);

}  // namespace nld
