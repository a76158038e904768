#pragma once

#include <cstddef>
#include <vector>

#include "feller/errors.hpp"

namespace feller::detail {

/// Dense tableau simplex for  max c.x  s.t.  A x <= b,  x >= 0,  b >= 0.
/// With b >= 0 the all-slack basis is feasible, so no phase one is needed.
/// Entering and leaving variables follow Bland's rule, which rules out
/// cycling even on degenerate instances; with an exact Scalar the result is
/// exact. `eps` is the zero threshold (0 for exact scalars).
template <class Scalar>
struct SimplexResult {
    Scalar value{};
    std::vector<Scalar> x;
    std::size_t pivots = 0;
};

template <class Scalar>
SimplexResult<Scalar> simplex_max(const std::vector<std::vector<Scalar>>& A,
                                  const std::vector<Scalar>& b, const std::vector<Scalar>& c,
                                  Scalar eps = Scalar{}) {
    const std::size_t m = A.size();
    const std::size_t n = c.size();
    for (const auto& row : A)
        if (row.size() != n) throw DimensionError("simplex row width", n, row.size());
    if (b.size() != m) throw DimensionError("simplex rhs length", m, b.size());
    for (const auto& v : b)
        if (v < Scalar{}) throw DataError("simplex requires a nonnegative right-hand side");

    // Tableau: m rows of [structural | slack | rhs]; objective row holds
    // reduced costs of the maximization problem, negated so optimality is
    // "no entry < -eps".
    const std::size_t width = n + m + 1;
    std::vector<std::vector<Scalar>> t(m + 1, std::vector<Scalar>(width));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) t[i][j] = A[i][j];
        t[i][n + i] = Scalar(1);
        t[i][width - 1] = b[i];
    }
    for (std::size_t j = 0; j < n; ++j) t[m][j] = -c[j];

    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;

    SimplexResult<Scalar> res;
    const std::size_t max_pivots = 50000 + 200 * (m + n);
    while (true) {
        // Bland: smallest column index with a negative reduced cost.
        std::size_t enter = width;
        for (std::size_t j = 0; j + 1 < width; ++j)
            if (t[m][j] < -eps) {
                enter = j;
                break;
            }
        if (enter == width) break;

        // Ratio test; ties broken by the smallest basis variable index.
        std::size_t leave = m;
        Scalar best{};
        for (std::size_t i = 0; i < m; ++i) {
            if (t[i][enter] <= eps) continue;
            Scalar ratio = t[i][width - 1] / t[i][enter];
            if (leave == m || ratio < best ||
                (ratio == best && basis[i] < basis[leave]))
            {
                leave = i;
                best = ratio;
            }
        }
        if (leave == m) throw DataError("simplex objective is unbounded");

        Scalar piv = t[leave][enter];
        for (auto& v : t[leave]) v /= piv;
        for (std::size_t i = 0; i <= m; ++i) {
            if (i == leave) continue;
            Scalar f = t[i][enter];
            if (f == Scalar{}) continue;
            for (std::size_t j = 0; j < width; ++j) t[i][j] -= f * t[leave][j];
        }
        basis[leave] = enter;
        if (++res.pivots > max_pivots) throw DataError("simplex exceeded its pivot budget");
    }

    res.x.assign(n, Scalar{});
    for (std::size_t i = 0; i < m; ++i)
        if (basis[i] < n) res.x[basis[i]] = t[i][width - 1];
    res.value = Scalar{};
    for (std::size_t j = 0; j < n; ++j) res.value += c[j] * res.x[j];
    return res;
}

}  // namespace feller::detail
