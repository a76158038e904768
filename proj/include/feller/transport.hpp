#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "feller/rational.hpp"
#include "feller/spaces.hpp"

namespace feller {

/// Pairwise costs sigma(x_i, x_j) over a finite point set (typically the
/// union of two supports). Entries are validated as a pseudo-metric on the
/// set: symmetric, zero diagonal, and triangle inequality — checked exactly
/// on the rationalized entries, because Lipschitz-dual optimality needs it.
class CostMatrix {
public:
    using SigmaFn = std::function<double(const Point&, const Point&)>;

    static CostMatrix from_metric(std::vector<Point> points, const SigmaFn& sigma);
    static CostMatrix from_entries(std::vector<Point> points,
                                   std::vector<std::vector<double>> entries);
    /// Union of the two supports (deduplicated), costs from sigma.
    static CostMatrix for_measures(const FiniteMeasure& mu1, const FiniteMeasure& mu2,
                                   const SigmaFn& sigma);

    std::size_t size() const { return points_.size(); }
    const std::vector<Point>& points() const { return points_; }
    double at(std::size_t i, std::size_t j) const { return entries_[i * size() + j]; }
    const Rational& at_exact(std::size_t i, std::size_t j) const {
        return exact_[i * size() + j];
    }
    std::size_t index_of(const Point& x) const;

private:
    CostMatrix() = default;
    void validate() const;
    std::vector<Point> points_;
    std::vector<double> entries_;
    std::vector<Rational> exact_;
};

/// Coupling of two measures: flow[i][j] is mass moved from atom i of mu1 to
/// atom j of mu2. Row sums equal mu1's masses and column sums mu2's, exactly.
struct TransportPlan {
    std::size_t rows = 0, cols = 0;
    std::vector<Rational> flow;

    const Rational& at(std::size_t i, std::size_t j) const { return flow[i * cols + j]; }
};

/// Values of a 1-Lipschitz (w.r.t. the cost pseudo-metric) potential on the
/// union support.
struct Potential {
    std::vector<double> values;
    std::vector<Rational> exact;  // populated when solved exactly
    bool is_exact = false;
};

struct PrimalResult {
    double value = 0.0;
    std::optional<Rational> value_exact;
    TransportPlan plan;
};

struct DualResult {
    double value = 0.0;
    std::optional<Rational> value_exact;
    Potential potential;
};

struct GapResult {
    double primal = 0.0;
    double dual = 0.0;
    double gap = 0.0;
    std::optional<Rational> gap_exact;
};

// Size limits for the exact solvers. The primal tree simplex stays cheap far
// longer than the dense potential LP, whose tableau has O(k^2) rows.
inline constexpr std::size_t kExactPrimalMaxSupport = 64;
inline constexpr std::size_t kExactDualMaxSupport = 16;

/// Minimum of sum pi_ij * sigma(x_i, x_j) over couplings of (mu1, mu2).
/// Solved by simplex pivoting on the transport polytope (Bland's rule), in
/// exact rational arithmetic when both measures carry exact masses and the
/// union support is small enough, in floating point otherwise. Requires
/// equal total masses.
PrimalResult wasserstein_primal(const CostMatrix& cost, const FiniteMeasure& mu1,
                                const FiniteMeasure& mu2);

/// Maximum of sum phi_i d_i, d = mu1 - mu2, over potentials with
/// |phi_i - phi_j| <= sigma(x_i, x_j); the Wasserstein pseudo-metric in its
/// Lipschitz-dual form. Solved as an explicit linear program over the
/// potential values — independent of the primal pivoting — except for the
/// two-Dirac case, where phi = sigma(., y) attains the optimum directly.
DualResult wasserstein_dual(const CostMatrix& cost, const FiniteMeasure& mu1,
                            const FiniteMeasure& mu2);

/// primal - dual. Zero exactly when both sides were solved exactly; with the
/// floating solvers callers should accept |gap| <= 1e-9.
GapResult duality_gap(const CostMatrix& cost, const FiniteMeasure& mu1, const FiniteMeasure& mu2);

}  // namespace feller
