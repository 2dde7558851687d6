#ifndef KSC_DIOPHANTINE_HPP
#define KSC_DIOPHANTINE_HPP

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "graph.hpp"
#include "rational.hpp"
#include "scenario.hpp"

namespace ksc {

using IntMatrix = std::vector<std::vector<bigint>>;

// Row-style Hermite normal form: echelon rows, positive pivots, entries above a pivot
// reduced into [0, pivot). Zero rows are dropped.
inline IntMatrix hermite_normal_form(IntMatrix a) {
    if (a.empty()) return a;
    const std::size_t cols = a.front().size();
    std::size_t row = 0;
    std::vector<std::size_t> pivots;
    for (std::size_t c = 0; c < cols && row < a.size(); ++c) {
        while (true) {
            std::size_t best = a.size();
            for (std::size_t r = row; r < a.size(); ++r)
                if (a[r][c] != 0 && (best == a.size() || abs(a[r][c]) < abs(a[best][c]))) best = r;
            if (best == a.size()) break;
            std::swap(a[row], a[best]);
            bool clean = true;
            for (std::size_t r = row + 1; r < a.size(); ++r) {
                if (a[r][c] == 0) continue;
                bigint q;
                mpz_fdiv_q(q.get_mpz_t(), a[r][c].get_mpz_t(), a[row][c].get_mpz_t());
                for (std::size_t k = c; k < cols; ++k) a[r][k] -= q * a[row][k];
                if (a[r][c] != 0) clean = false;
            }
            if (clean) break;
        }
        if (row < a.size() && a[row][c] != 0) {
            if (a[row][c] < 0)
                for (auto& x : a[row]) x = -x;
            for (std::size_t r = 0; r < row; ++r) {
                bigint q;
                mpz_fdiv_q(q.get_mpz_t(), a[r][c].get_mpz_t(), a[row][c].get_mpz_t());
                for (std::size_t k = c; k < cols; ++k) a[r][k] -= q * a[row][k];
            }
            pivots.push_back(c);
            ++row;
        }
    }
    a.resize(row);
    return a;
}

inline std::size_t integer_rank(const IntMatrix& a) { return hermite_normal_form(a).size(); }

// Homogeneous system over unknowns x_0..x_{n-1} and d = x_n; every unknown must be >= 1.
struct DimSystem {
    std::vector<std::string> names;   // one per x_i
    IntMatrix rows;                   // each row has n + 1 entries
    std::vector<long> min_size;  // smallest clique containing x_i, 0 if none
};

struct DimSolution {
    long d = 0;
    std::vector<long> dims;
};

inline DimSystem clique_system(const OrthoGraph& g, const std::vector<VertexSet>& cliques) {
    DimSystem sys;
    sys.names = g.labels;
    const std::size_t n = g.size();
    sys.min_size.assign(n, 0);
    for (const auto& c : cliques) {
        std::vector<bigint> row(n + 1, 0);
        for (int v : c) {
            row[v] = 1;
            long k = static_cast<long>(c.size());
            if (sys.min_size[v] == 0 || k < sys.min_size[v]) sys.min_size[v] = k;
        }
        row[n] = -1;
        sys.rows.push_back(std::move(row));
    }
    return sys;
}

// Context sums plus equality of every event shared by two contexts.
inline DimSystem scenario_system(const Scenario& s) {
    DimSystem sys = clique_system(compatibility_graph(s), s.contexts);
    const std::size_t n = s.atoms.size();
    for (int i = 0; i < s.num_contexts(); ++i)
        for (int j = i + 1; j < s.num_contexts(); ++j) {
            const auto& ov = s.overlap[i][j];
            if (ov.trivial()) continue;
            for (std::size_t k = 0; k < ov.left.size(); ++k) {
                std::vector<bigint> row(n + 1, 0);
                for (int a : s.key_of(i, ov.left[k])) row[a] += 1;
                for (int a : s.key_of(j, ov.right[k])) row[a] -= 1;
                if (std::any_of(row.begin(), row.end(), [](const bigint& x) { return x != 0; }))
                    sys.rows.push_back(std::move(row));
            }
        }
    return sys;
}

// Unknowns that every rational solution sets to zero; nonempty means no dimension function.
inline std::vector<std::string> forced_zero(const DimSystem& sys) {
    std::vector<std::string> out;
    const std::size_t n = sys.names.size();
    if (sys.rows.empty()) return out;
    IntMatrix h = hermite_normal_form(sys.rows);
    for (std::size_t v = 0; v <= n; ++v) {
        IntMatrix probe = h;
        std::vector<bigint> e(n + 1, 0);
        e[v] = 1;
        probe.push_back(e);
        if (integer_rank(probe) == h.size()) out.push_back(v < n ? sys.names[v] : "d");
    }
    return out;
}

namespace detail {

// Depth-first search over unknowns in index order with interval propagation on every row.
inline void dim_search(const DimSystem& sys, const IntMatrix& extra, long d,
                       const std::function<bool(const std::vector<long>&)>& emit) {
    const std::size_t n = sys.names.size();
    IntMatrix rows = sys.rows;
    rows.insert(rows.end(), extra.begin(), extra.end());
    std::vector<long> hi(n);
    for (std::size_t v = 0; v < n; ++v) hi[v] = sys.min_size[v] ? d - sys.min_size[v] + 1 : d;
    for (std::size_t v = 0; v < n; ++v)
        if (hi[v] < 1) return;
    std::vector<long> x(n, 0);
    bool stop = false;

    auto consistent = [&]() {
        for (const auto& r : rows) {
            bigint lo = r[n] * d, up = r[n] * d;
            for (std::size_t v = 0; v < n; ++v) {
                if (r[v] == 0) continue;
                if (x[v]) {
                    lo += r[v] * x[v];
                    up += r[v] * x[v];
                } else if (r[v] > 0) {
                    lo += r[v];
                    up += r[v] * hi[v];
                } else {
                    lo += r[v] * hi[v];
                    up += r[v];
                }
            }
            if (lo > 0 || up < 0) return false;
        }
        return true;
    };

    std::function<void(std::size_t)> go = [&](std::size_t v) {
        if (stop) return;
        if (v == n) {
            if (!emit(x)) stop = true;
            return;
        }
        for (long val = 1; val <= hi[v] && !stop; ++val) {
            x[v] = val;
            if (consistent()) go(v + 1);
        }
        x[v] = 0;
    };
    if (consistent()) go(0);
}

inline long lower_d(const DimSystem& sys) {
    long lo = 1;
    for (long k : sys.min_size) lo = std::max(lo, k);
    for (const auto& r : sys.rows) {
        long k = 0;
        for (std::size_t v = 0; v + 1 < r.size(); ++v)
            if (r[v] > 0) ++k;
        if (r.back() < 0) lo = std::max(lo, k);
    }
    return lo;
}

} // namespace detail

inline std::optional<DimSolution> find_dimension_function(const DimSystem& sys, long d_min, long d_max) {
    if (!forced_zero(sys).empty()) return std::nullopt;
    IntMatrix h = sys.rows.empty() ? IntMatrix{} : hermite_normal_form(sys.rows);
    for (long d = std::max(d_min, detail::lower_d(sys)); d <= d_max; ++d) {
        std::optional<DimSolution> found;
        detail::dim_search(sys, h, d, [&](const std::vector<long>& x) {
            found = DimSolution{d, x};
            return false;
        });
        if (found) return found;
    }
    return std::nullopt;
}

// Minimal d (then lexicographically least dims) satisfying every clique equation.
inline DimSolution solve_dimension_function(const OrthoGraph& g, const std::vector<VertexSet>& cliques,
                                            long d_max) {
    auto sol = find_dimension_function(clique_system(g, cliques), 1, d_max);
    if (!sol) fail(errc::no_solution_up_to, "no dimension function with d <= " + std::to_string(d_max));
    return *sol;
}

inline std::vector<DimSolution> all_solutions(const DimSystem& sys, long d, std::size_t cap) {
    std::vector<DimSolution> out;
    if (!forced_zero(sys).empty()) return out;
    IntMatrix h = sys.rows.empty() ? IntMatrix{} : hermite_normal_form(sys.rows);
    bool over = false;
    detail::dim_search(sys, h, d, [&](const std::vector<long>& x) {
        if (out.size() == cap) {
            over = true;
            return false;
        }
        out.push_back({d, x});
        return true;
    });
    if (over) fail(errc::cap_exceeded, "more than " + std::to_string(cap) + " dimension functions");
    return out;
}

inline std::vector<DimSolution> all_dimension_functions(const OrthoGraph& g, const std::vector<VertexSet>& cliques,
                                                        long d, std::size_t cap = 100000) {
    return all_solutions(clique_system(g, cliques), d, cap);
}

inline constexpr long default_d_max = 64;

// Returns s itself when it carries dimensions, otherwise s with the minimal solution attached.
inline Scenario ensure_dims(const Scenario& s, long d_max = default_d_max) {
    if (s.has_dim()) return s;
    DimSystem sys = scenario_system(s);
    std::optional<DimSolution> sol =
        s.d ? find_dimension_function(sys, s.d, s.d) : find_dimension_function(sys, 1, d_max);
    if (!sol) fail(errc::no_dimension_function, "scenario admits no dimension function");
    std::map<std::string, long> dims;
    for (std::size_t a = 0; a < s.atoms.size(); ++a) dims[s.atoms[a]] = sol->dims[a];
    return with_dims(s, dims, sol->d);
}

} // namespace ksc

#endif
