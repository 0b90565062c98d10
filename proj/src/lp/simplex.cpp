#include "nld/errors.hpp"
#include "nld/lp.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace nld {

LinearProgram::LinearProgram(std::size_t variables)
    : objective(variables), lower(variables, Rational(0)), upper(variables) {}

void LinearProgram::add_row(std::vector<Rational> coeffs, Relation relation, Rational rhs) {
    if (coeffs.size() != variables()) throw DimensionMismatch("LP row has wrong length");
    rows.push_back({std::move(coeffs), relation, std::move(rhs)});
}

void LinearProgram::validate() const {
    const std::size_t n = variables();
    if (lower.size() != n || upper.size() != n) throw DimensionMismatch("LP bounds have wrong length");
    for (const auto& r : rows)
        if (r.coeffs.size() != n) throw DimensionMismatch("LP row has wrong length");
}

namespace {

struct Tableau {
    std::size_t rows = 0, cols = 0;   // cols excludes the rhs column
    std::vector<std::vector<Rational>> t;
    std::vector<std::size_t> basis;
    std::vector<bool> artificial;
    std::vector<Rational> d;          // reduced costs c_B B^-1 A_j - c_j
    Rational value;
    std::size_t pivots = 0;

    void price(const std::vector<Rational>& cost) {
        d.assign(cols, Rational(0));
        value = 0;
        for (std::size_t i = 0; i < rows; ++i) {
            const Rational& cb = cost[basis[i]];
            if (cb == 0) continue;
            for (std::size_t j = 0; j < cols; ++j)
                if (t[i][j] != 0) d[j] += cb * t[i][j];
            value += cb * t[i][cols];
        }
        for (std::size_t j = 0; j < cols; ++j) d[j] -= cost[j];
    }

    void pivot(std::size_t r, std::size_t c) {
        ++pivots;
        auto& pr = t[r];
        const Rational inv = 1 / pr[c];
        std::vector<std::size_t> nz;
        for (std::size_t j = 0; j <= cols; ++j)
            if (pr[j] != 0) {
                pr[j] *= inv;
                nz.push_back(j);
            }
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || t[i][c] == 0) continue;
            const Rational f = t[i][c];
            for (std::size_t j : nz) t[i][j] -= f * pr[j];
        }
        if (d[c] != 0) {
            const Rational f = d[c];
            for (std::size_t j : nz)
                if (j < cols) d[j] -= f * pr[j];
            value -= f * pr[cols];
        }
        basis[r] = c;
    }

    // Bland's rule; returns false when unbounded
    bool run(bool allow_artificial) {
        for (;;) {
            std::size_t enter = cols;
            for (std::size_t j = 0; j < cols; ++j)
                if (d[j] < 0 && (allow_artificial || !artificial[j])) {
                    enter = j;
                    break;
                }
            if (enter == cols) return true;
            std::size_t leave = rows;
            Rational best;
            for (std::size_t i = 0; i < rows; ++i) {
                if (t[i][enter] <= 0) continue;
                Rational ratio = t[i][cols] / t[i][enter];
                if (leave == rows || ratio < best || (ratio == best && basis[i] < basis[leave])) {
                    best = std::move(ratio);
                    leave = i;
                }
            }
            if (leave == rows) return false;
            pivot(leave, enter);
        }
    }
};

Rational dot(const std::vector<Rational>& a, const std::vector<Rational>& b) {
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != 0 && b[i] != 0) s += a[i] * b[i];
    return s;
}

}  // namespace

LpResult simplex_max(const LinearProgram& lp) {
    lp.validate();
    const std::size_t n = lp.variables();

    // standard-form columns: x_j = l_j + x'_j, or x_j = x+_j - x-_j for free variables
    std::vector<std::size_t> plus_col(n), minus_col(n, SIZE_MAX);
    std::size_t nstd = 0;
    for (std::size_t j = 0; j < n; ++j) {
        plus_col[j] = nstd++;
        if (!lp.lower[j]) minus_col[j] = nstd++;
    }

    struct StdRow {
        std::vector<Rational> a;
        Relation rel;
        Rational b;
        int sign = 1;
    };
    std::vector<StdRow> srows;
    auto add = [&](const std::vector<Rational>& coeffs, Relation rel, Rational rhs) {
        StdRow r{std::vector<Rational>(nstd), rel, std::move(rhs)};
        for (std::size_t j = 0; j < n; ++j) {
            if (coeffs[j] == 0) continue;
            r.a[plus_col[j]] = coeffs[j];
            if (lp.lower[j])
                r.b -= coeffs[j] * *lp.lower[j];
            else
                r.a[minus_col[j]] = -coeffs[j];
        }
        if (r.b < 0) {
            r.sign = -1;
            r.b = -r.b;
            for (auto& x : r.a) x = -x;
            if (r.rel == Relation::LessEqual)
                r.rel = Relation::GreaterEqual;
            else if (r.rel == Relation::GreaterEqual)
                r.rel = Relation::LessEqual;
        }
        srows.push_back(std::move(r));
    };
    for (const auto& r : lp.rows) add(r.coeffs, r.relation, r.rhs);
    std::vector<std::size_t> upper_row(n, SIZE_MAX);
    for (std::size_t j = 0; j < n; ++j) {
        if (!lp.upper[j]) continue;
        std::vector<Rational> e(n);
        e[j] = 1;
        upper_row[j] = srows.size();
        add(e, Relation::LessEqual, *lp.upper[j]);
    }

    const std::size_t m = srows.size();
    std::size_t cols = nstd;
    std::vector<std::size_t> surplus(m, SIZE_MAX), ident(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (srows[i].rel == Relation::LessEqual)
            ident[i] = cols++;
        else if (srows[i].rel == Relation::GreaterEqual)
            surplus[i] = cols++;
    }
    const std::size_t first_artificial = cols;
    for (std::size_t i = 0; i < m; ++i)
        if (srows[i].rel != Relation::LessEqual) ident[i] = cols++;

    Tableau tab;
    tab.rows = m;
    tab.cols = cols;
    tab.t.assign(m, std::vector<Rational>(cols + 1));
    tab.basis.resize(m);
    tab.artificial.assign(cols, false);
    for (std::size_t j = first_artificial; j < cols; ++j) tab.artificial[j] = true;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < nstd; ++j) tab.t[i][j] = srows[i].a[j];
        if (surplus[i] != SIZE_MAX) tab.t[i][surplus[i]] = -1;
        tab.t[i][ident[i]] = 1;
        tab.t[i][cols] = srows[i].b;
        tab.basis[i] = ident[i];
    }

    LpResult res;
    std::vector<Rational> cost(cols);
    for (std::size_t j = first_artificial; j < cols; ++j) cost[j] = -1;
    tab.price(cost);
    tab.run(true);
    if (tab.value < 0) {
        res.status = LpStatus::Infeasible;
        res.pivots = tab.pivots;
        return res;
    }
    // drive zero-level artificials out of the basis; rows where that fails are redundant
    for (std::size_t i = 0; i < m; ++i) {
        if (!tab.artificial[tab.basis[i]]) continue;
        for (std::size_t j = 0; j < first_artificial; ++j)
            if (tab.t[i][j] != 0) {
                tab.pivot(i, j);
                break;
            }
    }

    cost.assign(cols, Rational(0));
    Rational offset = 0;
    for (std::size_t j = 0; j < n; ++j) {
        cost[plus_col[j]] = lp.objective[j];
        if (lp.lower[j])
            offset += lp.objective[j] * *lp.lower[j];
        else
            cost[minus_col[j]] = -lp.objective[j];
    }
    tab.price(cost);
    const bool bounded = tab.run(false);
    res.pivots = tab.pivots;
    if (!bounded) {
        res.status = LpStatus::Unbounded;
        return res;
    }

    std::vector<Rational> xs(cols);
    for (std::size_t i = 0; i < m; ++i) xs[tab.basis[i]] = tab.t[i][cols];
    res.status = LpStatus::Optimal;
    res.optimum = tab.value + offset;
    res.x.resize(n);
    for (std::size_t j = 0; j < n; ++j)
        res.x[j] = lp.lower[j] ? Rational(*lp.lower[j] + xs[plus_col[j]]) : Rational(xs[plus_col[j]] - xs[minus_col[j]]);

    // y_i is the reduced cost of the row's identity column
    res.row_duals.resize(lp.rows.size());
    for (std::size_t i = 0; i < lp.rows.size(); ++i) res.row_duals[i] = srows[i].sign * tab.d[ident[i]];
    res.upper_duals.assign(n, Rational(0));
    for (std::size_t j = 0; j < n; ++j)
        if (upper_row[j] != SIZE_MAX) res.upper_duals[j] = srows[upper_row[j]].sign * tab.d[ident[upper_row[j]]];
    res.lower_duals.assign(n, Rational(0));
    for (std::size_t j = 0; j < n; ++j) {
        if (!lp.lower[j]) continue;
        Rational r = lp.objective[j] - res.upper_duals[j];
        for (std::size_t i = 0; i < lp.rows.size(); ++i)
            if (lp.rows[i].coeffs[j] != 0) r -= lp.rows[i].coeffs[j] * res.row_duals[i];
        res.lower_duals[j] = r;
    }
    return res;
}

bool verify_certificate(const LinearProgram& lp, const LpResult& res) {
    if (res.status != LpStatus::Optimal) return false;
    const std::size_t n = lp.variables();
    if (res.x.size() != n || res.row_duals.size() != lp.rows.size()) return false;
    for (std::size_t j = 0; j < n; ++j) {
        if (lp.lower[j] && res.x[j] < *lp.lower[j]) return false;
        if (lp.upper[j] && res.x[j] > *lp.upper[j]) return false;
    }
    Rational dual_value = 0;
    std::vector<Rational> aty(n);
    for (std::size_t i = 0; i < lp.rows.size(); ++i) {
        const auto& r = lp.rows[i];
        const Rational lhs = dot(r.coeffs, res.x);
        const Rational& y = res.row_duals[i];
        switch (r.relation) {
            case Relation::LessEqual:
                if (lhs > r.rhs || y < 0) return false;
                break;
            case Relation::GreaterEqual:
                if (lhs < r.rhs || y > 0) return false;
                break;
            case Relation::Equal:
                if (lhs != r.rhs) return false;
                break;
        }
        dual_value += y * r.rhs;
        for (std::size_t j = 0; j < n; ++j)
            if (r.coeffs[j] != 0) aty[j] += r.coeffs[j] * y;
    }
    for (std::size_t j = 0; j < n; ++j) {
        const Rational& zl = res.lower_duals[j];
        const Rational& zu = res.upper_duals[j];
        if (zl > 0 || zu < 0) return false;
        if (!lp.lower[j] && zl != 0) return false;
        if (!lp.upper[j] && zu != 0) return false;
        if (aty[j] + zl + zu != lp.objective[j]) return false;
        if (lp.lower[j]) dual_value += *lp.lower[j] * zl;
        if (lp.upper[j]) dual_value += *lp.upper[j] * zu;
    }
    return dual_value == res.optimum && dot(lp.objective, res.x) == res.optimum;
}

void write_lp(std::ostream& os, const LinearProgram& lp) {
    lp.validate();
    os << "lp " << lp.variables() << ' ' << lp.rows.size() << "\nmax";
    for (const auto& c : lp.objective) os << ' ' << to_string(c);
    os << '\n';
    for (const auto& r : lp.rows) {
        os << "row";
        for (const auto& a : r.coeffs) os << ' ' << to_string(a);
        os << (r.relation == Relation::LessEqual ? " <= " : r.relation == Relation::Equal ? " = " : " >= ")
           << to_string(r.rhs) << '\n';
    }
    for (std::size_t j = 0; j < lp.variables(); ++j) {
        if (!lp.lower[j])
            os << "free " << j << '\n';
        else if (*lp.lower[j] != 0)
            os << "lower " << j << ' ' << to_string(*lp.lower[j]) << '\n';
        if (lp.upper[j]) os << "upper " << j << ' ' << to_string(*lp.upper[j]) << '\n';
    }
    os << "end\n";
}

LinearProgram read_lp(std::istream& is) {
    std::string line;
    std::optional<LinearProgram> lp;
    std::size_t nrows = 0;
    auto need = [&](bool ok, const std::string& what) {
        if (!ok) throw ParseError("LP text: " + what);
    };
    while (std::getline(is, line)) {
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key) || key[0] == '*') continue;
        if (key == "lp") {
            std::size_t nv = 0;
            need(static_cast<bool>(ls >> nv >> nrows), "bad header");
            lp.emplace(nv);
            continue;
        }
        need(lp.has_value(), "missing 'lp' header");
        const std::size_t n = lp->variables();
        if (key == "end") {
            need(lp->rows.size() == nrows, "row count mismatch");
            return *lp;
        }
        if (key == "max") {
            for (auto& c : lp->objective) {
                std::string tok;
                need(static_cast<bool>(ls >> tok), "short objective");
                c = parse_rational(tok);
            }
        } else if (key == "row") {
            std::vector<Rational> a(n);
            std::string tok;
            for (auto& x : a) {
                need(static_cast<bool>(ls >> tok), "short row");
                x = parse_rational(tok);
            }
            std::string rel;
            need(static_cast<bool>(ls >> rel >> tok), "row without relation");
            Relation r;
            if (rel == "<=")
                r = Relation::LessEqual;
            else if (rel == "=")
                r = Relation::Equal;
            else if (rel == ">=")
                r = Relation::GreaterEqual;
            else
                throw ParseError("LP text: unknown relation " + rel);
            lp->add_row(std::move(a), r, parse_rational(tok));
        } else if (key == "lower" || key == "upper" || key == "free") {
            std::size_t j = 0;
            need(static_cast<bool>(ls >> j) && j < n, "bad variable index");
            if (key == "free") {
                lp->lower[j].reset();
            } else {
                std::string tok;
                need(static_cast<bool>(ls >> tok), "missing bound");
                (key == "lower" ? lp->lower[j] : lp->upper[j]) = parse_rational(tok);
            }
        } else {
            throw ParseError("LP text: unknown keyword " + key);
        }
    }
    throw ParseError("LP text: missing 'end'");
}

}  // namespace nld
