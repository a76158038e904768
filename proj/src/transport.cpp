#include "feller/transport.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "feller/errors.hpp"
#include "feller/simplex.hpp"

namespace feller {

namespace {

constexpr double kRealMassTol = 1e-12;
constexpr double kFloatReducedCostTol = 1e-12;

/// Positive-mass side of an instance: masses and union-point indices.
struct Side {
    std::vector<std::size_t> atom_index;   // into the measure's atom list
    std::vector<std::size_t> point_index;  // into the cost matrix
    std::vector<Rational> mass;
    std::size_t size() const { return mass.size(); }
};

Side positive_side(const CostMatrix& cost, const FiniteMeasure& mu) {
    Side s;
    for (std::size_t i = 0; i < mu.atoms().size(); ++i) {
        const auto& a = mu.atoms()[i];
        std::size_t p = cost.index_of(a.point);  // throws if off the cost support
        if (a.mass == 0) continue;
        s.atom_index.push_back(i);
        s.point_index.push_back(p);
        s.mass.push_back(a.mass);
    }
    return s;
}

bool exact_mode(const FiniteMeasure& mu1, const FiniteMeasure& mu2) {
    return mu1.mode() == MassMode::Exact && mu2.mode() == MassMode::Exact;
}

/// Validates the equal-mass precondition. In real mode small mismatches are
/// tolerated and mu2's masses are rescaled so the solver sees a balanced
/// instance; returns the scale factor to apply to mu2's masses.
Rational balance_or_throw(const FiniteMeasure& mu1, const FiniteMeasure& mu2) {
    Rational t1 = mu1.total(), t2 = mu2.total();
    if (exact_mode(mu1, mu2)) {
        if (t1 != t2)
            throw DataError("transport requires equal total masses (" + rational_str(t1) +
                            " vs " + rational_str(t2) + ")");
        return Rational(1);
    }
    double d1 = rational_to_double(t1), d2 = rational_to_double(t2);
    if (std::fabs(d1 - d2) > kRealMassTol * std::max(1.0, std::fabs(d1)))
        throw DataError("transport requires equal total masses");
    if (t2 == 0) return Rational(1);
    return t1 / t2;
}

template <class S>
struct TransportSolution {
    S value{};
    std::vector<S> flow;  // m x n
    bool solved = false;
};

/// Transportation simplex on the transport polytope: northwest-corner start,
/// spanning-tree potentials, Bland's entering rule (row-major scan) and
/// smallest-index leaving rule, so the pivoting terminates even under
/// degeneracy.
template <class S>
TransportSolution<S> solve_transport(const std::vector<S>& a, const std::vector<S>& b,
                                     const std::vector<std::vector<S>>& cost, S eps) {
    const std::size_t m = a.size(), n = b.size();
    TransportSolution<S> sol;
    sol.flow.assign(m * n, S{});
    if (m == 0 || n == 0) {
        sol.solved = true;
        return sol;
    }

    std::vector<char> basis(m * n, 0);
    auto flow_at = [&](std::size_t i, std::size_t j) -> S& { return sol.flow[i * n + j]; };

    // Northwest corner: m + n - 1 basis cells, zero allocations included.
    {
        std::vector<S> ra = a, rb = b;
        std::size_t i = 0, j = 0;
        while (true) {
            S q = std::min(ra[i], rb[j]);
            flow_at(i, j) = q;
            basis[i * n + j] = 1;
            ra[i] -= q;
            rb[j] -= q;
            if (i == m - 1 && j == n - 1) break;
            if (ra[i] == S{} && i < m - 1)
                ++i;
            else
                ++j;
        }
    }

    std::vector<S> u(m), v(n);
    std::vector<char> u_set(m), v_set(n);
    const std::size_t max_iter = 10000 + 50 * m * n;
    for (std::size_t iter = 0;; ++iter) {
        if (iter > max_iter) throw DataError("transport simplex exceeded its pivot budget");

        // Potentials on the basis tree: u_i + v_j = c_ij.
        std::fill(u_set.begin(), u_set.end(), 0);
        std::fill(v_set.begin(), v_set.end(), 0);
        u[0] = S{};
        u_set[0] = 1;
        for (std::size_t pass = 0, assigned = 1; pass < m + n && assigned < m + n; ++pass) {
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    if (!basis[i * n + j]) continue;
                    if (u_set[i] && !v_set[j]) {
                        v[j] = cost[i][j] - u[i];
                        v_set[j] = 1;
                        ++assigned;
                    } else if (v_set[j] && !u_set[i]) {
                        u[i] = cost[i][j] - v[j];
                        u_set[i] = 1;
                        ++assigned;
                    }
                }
        }
        for (std::size_t i = 0; i < m; ++i)
            if (!u_set[i]) throw DataError("transport basis does not span (internal error)");
        for (std::size_t j = 0; j < n; ++j)
            if (!v_set[j]) throw DataError("transport basis does not span (internal error)");

        // Entering cell: first negative reduced cost in row-major order.
        std::size_t ei = m, ej = n;
        for (std::size_t i = 0; i < m && ei == m; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if (basis[i * n + j]) continue;
                if (cost[i][j] - u[i] - v[j] < -eps) {
                    ei = i;
                    ej = j;
                    break;
                }
            }
        if (ei == m) break;  // optimal

        // Unique tree path from row ei to column ej through basis cells.
        // Nodes: rows 0..m-1, then columns m..m+n-1.
        const std::size_t nodes = m + n;
        std::vector<std::ptrdiff_t> parent(nodes, -1);
        std::vector<char> seen(nodes, 0);
        std::deque<std::size_t> queue{ei};
        seen[ei] = 1;
        while (!queue.empty()) {
            std::size_t cur = queue.front();
            queue.pop_front();
            if (cur == m + ej) break;
            if (cur < m) {
                for (std::size_t j = 0; j < n; ++j)
                    if (basis[cur * n + j] && !seen[m + j]) {
                        seen[m + j] = 1;
                        parent[m + j] = static_cast<std::ptrdiff_t>(cur);
                        queue.push_back(m + j);
                    }
            } else {
                std::size_t j = cur - m;
                for (std::size_t i = 0; i < m; ++i)
                    if (basis[i * n + j] && !seen[i]) {
                        seen[i] = 1;
                        parent[i] = static_cast<std::ptrdiff_t>(cur);
                        queue.push_back(i);
                    }
            }
        }
        if (!seen[m + ej]) throw DataError("transport basis is disconnected (internal error)");

        // Cycle cells: entering cell, then the path edges; odd positions in
        // the cycle give up flow.
        std::vector<std::pair<std::size_t, std::size_t>> cycle{{ei, ej}};
        for (std::size_t cur = m + ej; parent[cur] >= 0;
             cur = static_cast<std::size_t>(parent[cur])) {
            std::size_t par = static_cast<std::size_t>(parent[cur]);
            std::size_t i = cur < m ? cur : par;
            std::size_t j = cur < m ? par - m : cur - m;
            cycle.emplace_back(i, j);
        }

        std::size_t leave_pos = 0;
        S theta{};
        bool have_theta = false;
        for (std::size_t p = 1; p < cycle.size(); p += 2) {
            const auto [i, j] = cycle[p];
            const S f = flow_at(i, j);
            const std::size_t idx = i * n + j;
            if (!have_theta || f < theta ||
                (f == theta && idx < cycle[leave_pos].first * n + cycle[leave_pos].second)) {
                theta = f;
                leave_pos = p;
                have_theta = true;
            }
        }
        if (!have_theta) throw DataError("degenerate transport cycle (internal error)");

        for (std::size_t p = 0; p < cycle.size(); ++p) {
            const auto [i, j] = cycle[p];
            if (p % 2 == 0)
                flow_at(i, j) += theta;
            else
                flow_at(i, j) -= theta;
        }
        const auto [li, lj] = cycle[leave_pos];
        basis[li * n + lj] = 0;
        basis[ei * n + ej] = 1;
    }

    sol.value = S{};
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) sol.value += sol.flow[i * n + j] * cost[i][j];
    sol.solved = true;
    return sol;
}

}  // namespace

CostMatrix CostMatrix::from_metric(std::vector<Point> points, const SigmaFn& sigma) {
    const std::size_t k = points.size();
    std::vector<std::vector<double>> entries(k, std::vector<double>(k, 0.0));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j)
            entries[i][j] = entries[j][i] = sigma(points[i], points[j]);
    return from_entries(std::move(points), std::move(entries));
}

CostMatrix CostMatrix::from_entries(std::vector<Point> points,
                                    std::vector<std::vector<double>> entries) {
    const std::size_t k = points.size();
    if (entries.size() != k) throw DimensionError("cost matrix row count", k, entries.size());
    for (const auto& row : entries)
        if (row.size() != k) throw DimensionError("cost matrix column count", k, row.size());
    CostMatrix c;
    c.points_ = std::move(points);
    c.entries_.resize(k * k);
    c.exact_.resize(k * k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            double v = entries[i][j];
            if (!std::isfinite(v) || v < 0.0)
                throw DataError("cost entries must be finite and nonnegative");
            c.entries_[i * k + j] = v;
            c.exact_[i * k + j] = rational_from_double(v);
        }
    c.validate();
    return c;
}

CostMatrix CostMatrix::for_measures(const FiniteMeasure& mu1, const FiniteMeasure& mu2,
                                    const SigmaFn& sigma) {
    std::vector<Point> pts;
    auto add = [&](const Point& p) {
        if (std::find(pts.begin(), pts.end(), p) == pts.end()) pts.push_back(p);
    };
    for (const auto& a : mu1.atoms()) add(a.point);
    for (const auto& a : mu2.atoms()) add(a.point);
    return from_metric(std::move(pts), sigma);
}

void CostMatrix::validate() const {
    const std::size_t k = size();
    for (std::size_t i = 0; i < k; ++i) {
        if (exact_[i * k + i] != 0) throw DataError("cost matrix has a nonzero diagonal");
        for (std::size_t j = 0; j < k; ++j)
            if (exact_[i * k + j] != exact_[j * k + i])
                throw DataError("cost matrix is not symmetric");
    }
    // Exact triangle check: the Lipschitz-dual form of the transport value
    // equals the primal one only for pseudo-metric costs.
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            for (std::size_t l = 0; l < k; ++l)
                if (exact_[i * k + l] > exact_[i * k + j] + exact_[j * k + l])
                    throw DataError("cost matrix violates the triangle inequality");
}

std::size_t CostMatrix::index_of(const Point& x) const {
    for (std::size_t i = 0; i < points_.size(); ++i)
        if (points_[i] == x) return i;
    throw DataError("point is not on the cost matrix's support");
}

PrimalResult wasserstein_primal(const CostMatrix& cost, const FiniteMeasure& mu1,
                                const FiniteMeasure& mu2) {
    const Rational scale2 = balance_or_throw(mu1, mu2);
    Side s1 = positive_side(cost, mu1);
    Side s2 = positive_side(cost, mu2);
    for (auto& mss : s2.mass) mss *= scale2;

    PrimalResult out;
    out.plan.rows = mu1.size();
    out.plan.cols = mu2.size();
    out.plan.flow.assign(out.plan.rows * out.plan.cols, Rational(0));

    const std::size_t m = s1.size(), n = s2.size();
    const bool exact = exact_mode(mu1, mu2) && cost.size() <= kExactPrimalMaxSupport;
    if (exact) {
        std::vector<std::vector<Rational>> c(m, std::vector<Rational>(n));
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j)
                c[i][j] = cost.at_exact(s1.point_index[i], s2.point_index[j]);
        auto sol = solve_transport<Rational>(s1.mass, s2.mass, c, Rational(0));
        out.value_exact = sol.value;
        out.value = rational_to_double(sol.value);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j)
                out.plan.flow[s1.atom_index[i] * out.plan.cols + s2.atom_index[j]] =
                    sol.flow[i * n + j];
    } else {
        std::vector<double> a(m), b(n);
        for (std::size_t i = 0; i < m; ++i) a[i] = rational_to_double(s1.mass[i]);
        for (std::size_t j = 0; j < n; ++j) b[j] = rational_to_double(s2.mass[j]);
        std::vector<std::vector<double>> c(m, std::vector<double>(n));
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j)
                c[i][j] = cost.at(s1.point_index[i], s2.point_index[j]);
        auto sol = solve_transport<double>(a, b, c, kFloatReducedCostTol);
        out.value = sol.value;
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j)
                out.plan.flow[s1.atom_index[i] * out.plan.cols + s2.atom_index[j]] =
                    rational_from_double(sol.flow[i * n + j]);
    }
    return out;
}

DualResult wasserstein_dual(const CostMatrix& cost, const FiniteMeasure& mu1,
                            const FiniteMeasure& mu2) {
    const Rational scale2 = balance_or_throw(mu1, mu2);
    Side s1 = positive_side(cost, mu1);
    Side s2 = positive_side(cost, mu2);
    for (auto& mss : s2.mass) mss *= scale2;

    const std::size_t k = cost.size();
    const bool exact = exact_mode(mu1, mu2);
    DualResult out;
    out.potential.values.assign(k, 0.0);

    // Signed atom difference d = mu1 - mu2 on the union support.
    std::vector<Rational> d(k);
    for (std::size_t i = 0; i < s1.size(); ++i) d[s1.point_index[i]] += s1.mass[i];
    for (std::size_t j = 0; j < s2.size(); ++j) d[s2.point_index[j]] -= s2.mass[j];

    if (k == 0) {
        out.value_exact = Rational(0);
        out.potential.is_exact = true;
        return out;
    }

    // Two-Dirac fast path: sigma(., y) is 1-Lipschitz and attains the
    // supremum, no pivoting needed.
    if (s1.size() <= 1 && s2.size() <= 1) {
        const std::size_t py = s2.size() == 1 ? s2.point_index[0] : 0;
        Rational value = 0;
        for (std::size_t p = 0; p < k; ++p) value += d[p] * cost.at_exact(p, py);
        if (value < 0) value = -value;  // the pairing is a supremum of |.|
        out.potential.exact.assign(k, Rational(0));
        for (std::size_t p = 0; p < k; ++p) {
            out.potential.exact[p] = cost.at_exact(p, py);
            out.potential.values[p] = cost.at(p, py);
        }
        out.potential.is_exact = true;
        out.value = rational_to_double(value);
        if (exact) out.value_exact = value;
        return out;
    }

    // Potential LP: maximize d.phi subject to phi_i - phi_j <= c_ij for all
    // ordered pairs, with the last union point anchored at phi = 0 (the
    // objective is shift-invariant because the masses balance). Variables
    // are the positive and negative parts of each free phi_i.
    const std::size_t anchor = k - 1;
    const std::size_t nvar = 2 * (k - 1);
    std::vector<std::vector<Rational>> A;
    std::vector<Rational> b;
    A.reserve(k * (k - 1));
    b.reserve(k * (k - 1));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            if (i == j) continue;
            std::vector<Rational> row(nvar);
            if (i != anchor) {
                row[2 * i] += 1;
                row[2 * i + 1] -= 1;
            }
            if (j != anchor) {
                row[2 * j] -= 1;
                row[2 * j + 1] += 1;
            }
            A.push_back(std::move(row));
            b.push_back(cost.at_exact(i, j));
        }
    std::vector<Rational> obj(nvar);
    for (std::size_t i = 0; i + 1 < k; ++i) {
        obj[2 * i] = d[i];
        obj[2 * i + 1] = -d[i];
    }

    if (exact && k <= kExactDualMaxSupport) {
        auto res = detail::simplex_max<Rational>(A, b, obj, Rational(0));
        out.value_exact = res.value;
        out.value = rational_to_double(res.value);
        out.potential.exact.assign(k, Rational(0));
        for (std::size_t i = 0; i + 1 < k; ++i) {
            out.potential.exact[i] = res.x[2 * i] - res.x[2 * i + 1];
            out.potential.values[i] = rational_to_double(out.potential.exact[i]);
        }
        out.potential.is_exact = true;
    } else {
        std::vector<std::vector<double>> Af(A.size(), std::vector<double>(nvar));
        std::vector<double> bf(b.size()), objf(nvar);
        for (std::size_t r = 0; r < A.size(); ++r)
            for (std::size_t cidx = 0; cidx < nvar; ++cidx)
                Af[r][cidx] = rational_to_double(A[r][cidx]);
        for (std::size_t r = 0; r < b.size(); ++r) bf[r] = rational_to_double(b[r]);
        for (std::size_t cidx = 0; cidx < nvar; ++cidx) objf[cidx] = rational_to_double(obj[cidx]);
        auto res = detail::simplex_max<double>(Af, bf, objf, kFloatReducedCostTol);
        out.value = res.value;
        for (std::size_t i = 0; i + 1 < k; ++i)
            out.potential.values[i] = res.x[2 * i] - res.x[2 * i + 1];
    }
    return out;
}

GapResult duality_gap(const CostMatrix& cost, const FiniteMeasure& mu1, const FiniteMeasure& mu2) {
    PrimalResult p = wasserstein_primal(cost, mu1, mu2);
    DualResult d = wasserstein_dual(cost, mu1, mu2);
    GapResult g;
    g.primal = p.value;
    g.dual = d.value;
    g.gap = p.value - d.value;
    if (p.value_exact && d.value_exact) g.gap_exact = *p.value_exact - *d.value_exact;
    return g;
}

}  // namespace feller
