#pragma once

#include "fsu/core.hpp"

#include <map>
#include <span>
#include <vector>

namespace fsu {

/// Scalar signal known at scattered 2D positions.
struct ScatteredSamples
{
    std::vector<Vec2> positions;
    std::vector<double> values;
};

/// Separable half-cosine basis over a rectangle:
/// phi_{k,l}(m, n) = cos(pi k u) cos(pi l v), with u, v the position mapped
/// onto [0,1] by the extent.
struct BasisSpec
{
    double m_min = 0.0;
    double m_max = 1.0;
    double n_min = 0.0;
    double n_max = 1.0;
    int max_freq = 8;

    void validate() const;
};

/// Spatial and spectral weighting of the greedy selection.
struct WeightingSpec
{
    double spatial_decay = 0.7;  ///< rho: weight at distance unit_radius from center
    double spectral_decay = 0.8; ///< sigma
    Vec2 center{0.5, 0.5};
    double unit_radius = 1.0;
};

struct FrequencyIndex
{
    int k = 0;
    int l = 0;

    friend auto operator<=>(const FrequencyIndex&, const FrequencyIndex&) = default;
};

/// One iteration of the greedy loop, kept for inspection.
struct SelectionStep
{
    FrequencyIndex index;
    double coefficient = 0.0;
    double energy_decrease = 0.0; ///< c^2 * sum w phi^2 of the chosen candidate
    double energy_before = 0.0;
    double energy_after = 0.0;
};

struct SparseModel
{
    std::map<FrequencyIndex, double> terms; ///< accumulated coefficients
    int iterations_used = 0;
    double initial_energy = 0.0;
    double final_residual_energy = 0.0;
    std::vector<SelectionStep> steps;
};

double basis_value(const BasisSpec& spec, int k, int l, double m, double n);

/// rho^(d / unit_radius), d the Euclidean distance to the center.
double spatial_weight(const WeightingSpec& spec, double m, double n);

/// sigma^sqrt(k^2 + l^2).
double spectral_weight(const WeightingSpec& spec, int k, int l);

/// Candidates with sum w phi^2 below this are never selected.
inline constexpr double kMinBasisEnergy = 1e-12;

/// Greedy frequency-selective approximation of `samples`.
///
/// Starting from the zero model, every iteration picks the candidate (u, v)
/// maximizing dE(k,l) * w_f(k,l), where dE = c^2 * sum w phi^2 and
/// c = sum w r phi / sum w phi^2 is the weighted least-squares coefficient
/// for the current residual r. The coefficient is added to the model
/// (re-selection accumulates) and the residual is updated.
///
/// The loop ends when the iteration budget is spent, when the weighted
/// residual energy drops to `residual_threshold` (or to 1e-24 of the initial
/// energy), or when the best decrease is no longer significant (not above
/// 1e-12 of the current energy). Ties are broken toward the lowest k^2+l^2,
/// then the lowest k, then the lowest l.
SparseModel estimate(const ScatteredSamples& samples, const BasisSpec& basis, const WeightingSpec& weights,
                     int max_iterations, double residual_threshold);

/// Model value at each position. Throws Error for positions outside the basis
/// extent (beyond a 1e-9 relative slack).
std::vector<double> evaluate(const SparseModel& model, const BasisSpec& basis, std::span<const Vec2> positions);

/// Weighted residual energy sum w (f - g)^2 of `model` on `samples`.
double residual_energy(const SparseModel& model, const ScatteredSamples& samples, const BasisSpec& basis,
                       const WeightingSpec& weights);

} // namespace fsu
