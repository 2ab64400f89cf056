#include "fsu/fsmodel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fsu {

namespace {

constexpr double kEnergyFloor = 1e-24;
constexpr double kStagnation = 1e-12;
constexpr double kExtentSlack = 1e-9;

struct Candidate
{
    FrequencyIndex index;
    double spectral = 1.0;
    double denominator = 0.0; // sum w phi^2
};

double unit_coord(double x, double lo, double hi)
{
    return (x - lo) / (hi - lo);
}

// cos(pi f t) for f = 0..K-1 at every sample; row-major [f][i].
std::vector<double> cosine_table(int K, const std::vector<double>& t)
{
    const std::size_t n = t.size();
    std::vector<double> table(static_cast<std::size_t>(K) * n);
    for (int f = 0; f < K; ++f)
        for (std::size_t i = 0; i < n; ++i)
            table[f * n + i] = std::cos(std::numbers::pi * f * t[i]);
    return table;
}

} // namespace

void BasisSpec::validate() const
{
    if (!(m_max > m_min) || !(n_max > n_min))
        throw Error("basis extent must have positive width");
    if (max_freq <= 0)
        throw Error("max frequency must be positive");
}

double basis_value(const BasisSpec& spec, int k, int l, double m, double n)
{
    const double u = unit_coord(m, spec.m_min, spec.m_max);
    const double v = unit_coord(n, spec.n_min, spec.n_max);
    return std::cos(std::numbers::pi * k * u) * std::cos(std::numbers::pi * l * v);
}

double spatial_weight(const WeightingSpec& spec, double m, double n)
{
    const double d = std::hypot(m - spec.center[0], n - spec.center[1]);
    return std::pow(spec.spatial_decay, d / spec.unit_radius);
}

double spectral_weight(const WeightingSpec& spec, int k, int l)
{
    return std::pow(spec.spectral_decay, std::sqrt(static_cast<double>(k * k + l * l)));
}

SparseModel estimate(const ScatteredSamples& samples, const BasisSpec& basis, const WeightingSpec& weights,
                     int max_iterations, double residual_threshold)
{
    basis.validate();
    if (samples.positions.size() != samples.values.size())
        throw Error("sample positions and values differ in length");

    SparseModel model;
    const std::size_t n = samples.values.size();
    if (n == 0)
        return model;

    const int K = basis.max_freq;
    std::vector<double> u(n), v(n), w(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& p = samples.positions[i];
        u[i] = unit_coord(p[0], basis.m_min, basis.m_max);
        v[i] = unit_coord(p[1], basis.n_min, basis.n_max);
        w[i] = spatial_weight(weights, p[0], p[1]);
    }
    const std::vector<double> cu = cosine_table(K, u);
    const std::vector<double> cv = cosine_table(K, v);

    std::vector<Candidate> candidates;
    candidates.reserve(static_cast<std::size_t>(K) * K);
    for (int k = 0; k < K; ++k)
        for (int l = 0; l < K; ++l) {
            Candidate c;
            c.index = {k, l};
            c.spectral = spectral_weight(weights, k, l);
            for (std::size_t i = 0; i < n; ++i) {
                const double phi = cu[k * n + i] * cv[l * n + i];
                c.denominator += w[i] * phi * phi;
            }
            if (c.denominator >= kMinBasisEnergy)
                candidates.push_back(c);
        }
    // Scan order realizes the tie-break: first strictly better wins.
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        const int ra = a.index.k * a.index.k + a.index.l * a.index.l;
        const int rb = b.index.k * b.index.k + b.index.l * b.index.l;
        return ra != rb ? ra < rb : a.index < b.index;
    });

    std::vector<double> residual(samples.values);
    auto energy_of = [&] {
        double e = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            e += w[i] * residual[i] * residual[i];
        return e;
    };

    double energy = energy_of();
    model.initial_energy = energy;
    const double floor = std::max(residual_threshold, kEnergyFloor * energy);

    std::vector<double> wr(n);
    std::vector<double> row(n);
    for (int iter = 0; iter < max_iterations; ++iter) {
        if (energy <= floor)
            break;

        for (std::size_t i = 0; i < n; ++i)
            wr[i] = w[i] * residual[i];

        const Candidate* best = nullptr;
        double best_score = 0.0;
        double best_coef = 0.0;
        double best_decrease = 0.0;
        int cached_k = -1;
        for (const auto& c : candidates) {
            const int k = c.index.k;
            const int l = c.index.l;
            if (k != cached_k) {
                for (std::size_t i = 0; i < n; ++i)
                    row[i] = wr[i] * cu[k * n + i];
                cached_k = k;
            }
            double numerator = 0.0;
            const double* col = &cv[l * n];
            for (std::size_t i = 0; i < n; ++i)
                numerator += row[i] * col[i];
            const double coef = numerator / c.denominator;
            const double decrease = coef * numerator;
            const double score = decrease * c.spectral;
            if (score > best_score) {
                best = &c;
                best_score = score;
                best_coef = coef;
                best_decrease = decrease;
            }
        }
        if (!best || !(best_decrease > kStagnation * energy))
            break;

        const int k = best->index.k;
        const int l = best->index.l;
        for (std::size_t i = 0; i < n; ++i)
            residual[i] -= best_coef * cu[k * n + i] * cv[l * n + i];
        model.terms[best->index] += best_coef;

        SelectionStep step;
        step.index = best->index;
        step.coefficient = best_coef;
        step.energy_decrease = best_decrease;
        step.energy_before = energy;
        energy = energy_of();
        step.energy_after = energy;
        model.steps.push_back(step);
        ++model.iterations_used;
    }
    model.final_residual_energy = energy;
    return model;
}

std::vector<double> evaluate(const SparseModel& model, const BasisSpec& basis, std::span<const Vec2> positions)
{
    basis.validate();
    const double sm = kExtentSlack * std::max(1.0, basis.m_max - basis.m_min);
    const double sn = kExtentSlack * std::max(1.0, basis.n_max - basis.n_min);

    std::vector<double> out;
    out.reserve(positions.size());
    for (const auto& p : positions) {
        if (p[0] < basis.m_min - sm || p[0] > basis.m_max + sm || p[1] < basis.n_min - sn || p[1] > basis.n_max + sn)
            throw Error("evaluation position outside the basis extent");
        double value = 0.0;
        for (const auto& [idx, coef] : model.terms)
            value += coef * basis_value(basis, idx.k, idx.l, p[0], p[1]);
        out.push_back(value);
    }
    return out;
}

double residual_energy(const SparseModel& model, const ScatteredSamples& samples, const BasisSpec& basis,
                       const WeightingSpec& weights)
{
    const auto fitted = evaluate(model, basis, samples.positions);
    double e = 0.0;
    for (std::size_t i = 0; i < fitted.size(); ++i) {
        const double r = samples.values[i] - fitted[i];
        e += spatial_weight(weights, samples.positions[i][0], samples.positions[i][1]) * r * r;
    }
    return e;
}

} // namespace fsu
