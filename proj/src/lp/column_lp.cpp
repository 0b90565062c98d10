#include "nld/errors.hpp"
#include "nld/lp.hpp"

#include <algorithm>

namespace nld {

ColumnLp::ColumnLp(std::vector<Rational> rhs) : m_(rhs.size()), sign_(rhs.size(), 1), t_(rhs.size()) {
    rhs_ = std::move(rhs);
    basis_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) {
        if (rhs_[i] < 0) {
            sign_[i] = -1;
            rhs_[i] = -rhs_[i];
        }
        t_[i].assign(m_, Rational(0));
        t_[i][i] = 1;
        basis_[i] = i;
    }
    feasible_ = std::all_of(rhs_.begin(), rhs_.end(), [](const Rational& v) { return v == 0; });
}

std::size_t ColumnLp::add_column(const std::vector<Rational>& a, const Rational& cost) {
    if (a.size() != m_) throw DimensionMismatch("ColumnLp: column has wrong length");
    // tableau column = B^-1 (sign * a); B^-1 sits in the artificial block
    std::vector<Rational> sa(m_);
    for (std::size_t i = 0; i < m_; ++i) sa[i] = sign_[i] * a[i];
    for (std::size_t i = 0; i < m_; ++i) {
        Rational v = 0;
        for (std::size_t k = 0; k < m_; ++k)
            if (t_[i][k] != 0 && sa[k] != 0) v += t_[i][k] * sa[k];
        t_[i].push_back(std::move(v));
    }
    cost_.push_back(cost);
    if (!feasible_) {
        d_.clear();
    } else if (!d_.empty()) {
        // reduced cost y . a - c, y read from the artificial block
        Rational v = -cost;
        for (std::size_t k = 0; k < m_; ++k)
            if (sa[k] != 0) v += d_[k] * sa[k];
        d_.push_back(std::move(v));
    }
    return cost_.size() - 1;
}

void ColumnLp::price(bool phase_one) {
    const std::size_t cols = m_ + cost_.size();
    auto c = [&](std::size_t j) -> Rational {
        if (phase_one) return j < m_ ? Rational(-1) : Rational(0);
        return j < m_ ? Rational(0) : cost_[j - m_];
    };
    d_.assign(cols, Rational(0));
    value_ = 0;
    for (std::size_t i = 0; i < m_; ++i) {
        const Rational cb = c(basis_[i]);
        if (cb == 0) continue;
        for (std::size_t j = 0; j < cols; ++j)
            if (t_[i][j] != 0) d_[j] += cb * t_[i][j];
        value_ += cb * rhs_[i];
    }
    for (std::size_t j = 0; j < cols; ++j) d_[j] -= c(j);
}

void ColumnLp::pivot(std::size_t r, std::size_t col) {
    ++pivots_;
    const std::size_t cols = m_ + cost_.size();
    auto& pr = t_[r];
    const Rational inv = 1 / pr[col];
    std::vector<std::size_t> nz;
    for (std::size_t j = 0; j < cols; ++j)
        if (pr[j] != 0) {
            pr[j] *= inv;
            nz.push_back(j);
        }
    rhs_[r] *= inv;
    for (std::size_t i = 0; i < m_; ++i) {
        if (i == r || t_[i][col] == 0) continue;
        const Rational f = t_[i][col];
        for (std::size_t j : nz) t_[i][j] -= f * pr[j];
        rhs_[i] -= f * rhs_[r];
    }
    if (d_[col] != 0) {
        const Rational f = d_[col];
        for (std::size_t j : nz) d_[j] -= f * pr[j];
        value_ -= f * rhs_[r];
    }
    basis_[r] = col;
}

bool ColumnLp::run(bool phase_one) {
    const std::size_t cols = m_ + cost_.size();
    for (;;) {
        std::size_t enter = cols;
        for (std::size_t j = phase_one ? 0 : m_; j < cols; ++j)
            if (d_[j] < 0) {
                enter = j;
                break;
            }
        if (enter == cols) return true;
        std::size_t leave = m_;
        // an artificial still basic at level zero must not grow
        if (!phase_one)
            for (std::size_t i = 0; i < m_ && leave == m_; ++i)
                if (basis_[i] < m_ && t_[i][enter] != 0) leave = i;
        if (leave == m_) {
            Rational best;
            for (std::size_t i = 0; i < m_; ++i) {
                if (t_[i][enter] <= 0) continue;
                Rational ratio = rhs_[i] / t_[i][enter];
                if (leave == m_ || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
                    best = std::move(ratio);
                    leave = i;
                }
            }
        }
        if (leave == m_) return false;
        pivot(leave, enter);
    }
}

LpStatus ColumnLp::solve() {
    if (!feasible_) {
        price(true);
        run(true);
        if (value_ < 0) {
            d_.clear();
            return LpStatus::Infeasible;
        }
        feasible_ = true;
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] >= m_) continue;
            for (std::size_t j = m_; j < m_ + cost_.size(); ++j)
                if (t_[i][j] != 0) {
                    pivot(i, j);
                    break;
                }
        }
        price(false);
    } else if (d_.empty()) {
        price(false);
    }
    return run(false) ? LpStatus::Optimal : LpStatus::Unbounded;
}

std::vector<Rational> ColumnLp::x() const {
    std::vector<Rational> out(cost_.size());
    for (std::size_t i = 0; i < m_; ++i)
        if (basis_[i] >= m_) out[basis_[i] - m_] = rhs_[i];
    return out;
}

std::vector<Rational> ColumnLp::duals() const {
    std::vector<Rational> y(m_);
    for (std::size_t i = 0; i < m_; ++i) y[i] = sign_[i] * d_[i];
    return y;
}

}  // namespace nld
