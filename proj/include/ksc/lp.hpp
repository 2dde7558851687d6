#ifndef KSC_LP_HPP
#define KSC_LP_HPP

#include <optional>
#include <vector>

#include "rational.hpp"

namespace ksc {

// Exact two-phase tableau simplex with Bland's rule over A x = b, x >= 0.
class ExactSimplex {
public:
    ExactSimplex(std::vector<std::vector<rational>> a, std::vector<rational> b)
        : m_(a.size()), n_(a.empty() ? 0 : a.front().size()) {
        t_.assign(m_, std::vector<rational>(n_ + m_ + 1));
        for (std::size_t r = 0; r < m_; ++r) {
            bool flip = b[r] < 0;
            for (std::size_t c = 0; c < n_; ++c) t_[r][c] = flip ? rational(-a[r][c]) : a[r][c];
            t_[r][n_ + r] = 1;
            t_[r][n_ + m_] = flip ? rational(-b[r]) : b[r];
        }
        basis_.resize(m_);
        for (std::size_t r = 0; r < m_; ++r) basis_[r] = n_ + r;
    }

    // Phase 1; false when infeasible.
    bool feasible() {
        if (phase1_done_) return feasible_;
        phase1_done_ = true;
        std::vector<rational> cost(n_ + m_, 0);
        for (std::size_t r = 0; r < m_; ++r) cost[n_ + r] = -1; // maximize -sum(artificial)
        optimize(cost, n_ + m_);
        rational art = 0;
        for (std::size_t r = 0; r < m_; ++r)
            if (basis_[r] >= n_) art += rhs(r);
        feasible_ = art == 0;
        if (!feasible_) return false;
        // Drive zero-level artificials out of the basis; rows that cannot be cleared are redundant.
        for (std::size_t r = 0; r < m_; ++r) {
            if (basis_[r] < n_) continue;
            for (std::size_t c = 0; c < n_; ++c)
                if (t_[r][c] != 0) {
                    pivot(r, c);
                    break;
                }
        }
        return true;
    }

    // Maximizes c.x over the feasible set; nullopt when infeasible or unbounded.
    std::optional<rational> maximize(const std::vector<rational>& c) {
        if (!feasible()) return std::nullopt;
        std::vector<rational> cost(n_ + m_, 0);
        for (std::size_t k = 0; k < n_; ++k) cost[k] = c[k];
        if (!optimize(cost, n_)) return std::nullopt;
        rational v = 0;
        for (std::size_t r = 0; r < m_; ++r)
            if (basis_[r] < n_) v += c[basis_[r]] * rhs(r);
        return v;
    }

    std::vector<rational> solution() const {
        std::vector<rational> x(n_, 0);
        for (std::size_t r = 0; r < m_; ++r)
            if (basis_[r] < n_) x[basis_[r]] = rhs(r);
        return x;
    }

    std::size_t pivots() const { return pivots_; }

private:
    const rational& rhs(std::size_t r) const { return t_[r][n_ + m_]; }

    void pivot(std::size_t r, std::size_t c) {
        ++pivots_;
        rational p = t_[r][c];
        for (auto& x : t_[r]) x /= p;
        for (std::size_t k = 0; k < m_; ++k) {
            if (k == r || t_[k][c] == 0) continue;
            rational f = t_[k][c];
            for (std::size_t j = 0; j <= n_ + m_; ++j)
                if (t_[r][j] != 0) t_[k][j] -= f * t_[r][j];
        }
        basis_[r] = c;
    }

    // Columns >= `allowed` never enter. Returns false if unbounded.
    bool optimize(const std::vector<rational>& cost, std::size_t allowed) {
        while (true) {
            std::size_t enter = allowed;
            for (std::size_t c = 0; c < allowed && enter == allowed; ++c) {
                if (is_basic(c)) continue;
                rational reduced = cost[c];
                for (std::size_t r = 0; r < m_; ++r)
                    if (t_[r][c] != 0) reduced -= cost[basis_[r]] * t_[r][c];
                if (reduced > 0) enter = c;
            }
            if (enter == allowed) return true;
            std::size_t leave = m_;
            rational best;
            for (std::size_t r = 0; r < m_; ++r) {
                if (t_[r][enter] <= 0) continue;
                rational ratio = rhs(r) / t_[r][enter];
                if (leave == m_ || ratio < best || (ratio == best && basis_[r] < basis_[leave]))
                    leave = r, best = ratio;
            }
            if (leave == m_) return false;
            pivot(leave, enter);
        }
    }

    bool is_basic(std::size_t c) const {
        for (std::size_t b : basis_)
            if (b == c) return true;
        return false;
    }

    std::size_t m_, n_;
    std::vector<std::vector<rational>> t_;
    std::vector<std::size_t> basis_;
    bool phase1_done_ = false, feasible_ = false;
    std::size_t pivots_ = 0;
};

// A point of {x >= 0 : A x = b}, if any.
inline std::optional<std::vector<rational>> feasible_point(std::vector<std::vector<rational>> a,
                                                           std::vector<rational> b) {
    ExactSimplex lp(std::move(a), std::move(b));
    if (!lp.feasible()) return std::nullopt;
    return lp.solution();
}

} // namespace ksc

#endif
