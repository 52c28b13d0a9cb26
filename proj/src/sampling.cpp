#include "podsketch/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_set>

#include "podsketch/error.hpp"

namespace podsketch {

Distribution::Distribution(std::vector<Index> indices, std::vector<double> weights)
    : indices_(std::move(indices)), weights_(std::move(weights))
{
    if (indices_.size() != weights_.size())
        throw ParameterError("Distribution: index and weight counts differ");
    if (indices_.empty())
        throw ParameterError("Distribution: empty candidate set");
    std::unordered_set<Index> seen;
    seen.reserve(indices_.size());
    for (Index i : indices_) {
        if (!seen.insert(i).second)
            throw ParameterError("Distribution: duplicate index " + std::to_string(i));
    }
    double total = 0.0;
    for (double w : weights_) {
        if (!std::isfinite(w) || w < 0.0)
            throw ParameterError("Distribution: weights must be finite and nonnegative");
        total += w;
    }
    if (!(total > 0.0))
        throw DegenerateDistribution("Distribution: all weights are zero");
    for (double& w : weights_)
        w /= total;
}

std::vector<Index> all_indices(Index n)
{
    std::vector<Index> out(static_cast<std::size_t>(n));
    std::iota(out.begin(), out.end(), Index{0});
    return out;
}

namespace {

void check_candidates(std::span<const Index> candidates, Index limit, const char* who)
{
    if (candidates.empty())
        throw ParameterError(std::string(who) + ": empty candidate set");
    for (Index i : candidates) {
        if (i < 0 || i >= limit)
            throw ParameterError(std::string(who) + ": candidate index " + std::to_string(i) + " out of range");
    }
}

}  // namespace

Distribution column_norm_distribution(const DenseMatrix& a, std::span<const Index> candidates)
{
    check_candidates(candidates, a.cols(), "column_norm_distribution");
    std::vector<double> weights;
    weights.reserve(candidates.size());
    for (Index i : candidates)
        weights.push_back(a.col(i).squaredNorm());
    try {
        return Distribution({candidates.begin(), candidates.end()}, std::move(weights));
    } catch (const DegenerateDistribution&) {
        throw DegenerateDistribution("column_norm_distribution: every candidate column is zero");
    }
}

Distribution uniform_distribution(std::span<const Index> candidates)
{
    if (candidates.empty())
        throw ParameterError("uniform_distribution: empty candidate set");
    const double w = 1.0 / static_cast<double>(candidates.size());
    return Distribution({candidates.begin(), candidates.end()}, std::vector<double>(candidates.size(), w));
}

Distribution residual_distribution(const DenseMatrix& a, const DenseMatrix& u, std::span<const Index> candidates)
{
    check_candidates(candidates, a.cols(), "residual_distribution");
    if (u.cols() > 0 && u.rows() != a.rows())
        throw ParameterError("residual_distribution: basis row count does not match matrix");
    if (u.cols() == 0)
        return column_norm_distribution(a, candidates);

    constexpr std::size_t kChunk = 32;
    std::vector<double> weights(candidates.size());
    DenseMatrix block;
    for (std::size_t start = 0; start < candidates.size(); start += kChunk) {
        const std::size_t width = std::min(kChunk, candidates.size() - start);
        block.resize(a.rows(), static_cast<Index>(width));
        for (std::size_t j = 0; j < width; ++j)
            block.col(static_cast<Index>(j)) = a.col(candidates[start + j]);
        block.noalias() -= u * (u.transpose() * block);
        for (std::size_t j = 0; j < width; ++j)
            weights[start + j] = block.col(static_cast<Index>(j)).squaredNorm();
    }
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (total <= 1e-14 * a.squaredNorm())
        throw DegenerateDistribution("residual_distribution: candidates lie in the span of the basis");
    return Distribution({candidates.begin(), candidates.end()}, std::move(weights));
}

Distribution leverage_distribution(const DenseMatrix& u)
{
    if (u.cols() == 0 || u.rows() == 0)
        throw ParameterError("leverage_distribution: empty basis");
    const double k = static_cast<double>(u.cols());
    std::vector<double> weights(static_cast<std::size_t>(u.rows()));
    for (Index i = 0; i < u.rows(); ++i)
        weights[static_cast<std::size_t>(i)] = u.row(i).squaredNorm() / k;
    return Distribution(all_indices(u.rows()), std::move(weights));
}

Distribution row_norm_distribution(const DenseMatrix& d)
{
    if (d.rows() == 0)
        throw ParameterError("row_norm_distribution: matrix has no rows");
    std::vector<double> weights(static_cast<std::size_t>(d.rows()));
    for (Index i = 0; i < d.rows(); ++i)
        weights[static_cast<std::size_t>(i)] = d.row(i).squaredNorm();
    try {
        return Distribution(all_indices(d.rows()), std::move(weights));
    } catch (const DegenerateDistribution&) {
        throw DegenerateDistribution("row_norm_distribution: every row is zero");
    }
}

SampleDraw sample_with_replacement(const Distribution& dist, std::int64_t count, Rng& rng)
{
    if (count < 1)
        throw ParameterError("sample_with_replacement: count must be positive");
    const auto& weights = dist.weights();
    std::vector<double> cumulative(weights.size());
    std::partial_sum(weights.begin(), weights.end(), cumulative.begin());
    const double total = cumulative.back();

    // last slot with positive weight, for the u * total == total rounding case
    std::size_t last_positive = weights.size() - 1;
    while (last_positive > 0 && weights[last_positive] == 0.0)
        --last_positive;

    std::vector<std::int64_t> hits(weights.size(), 0);
    for (std::int64_t draw = 0; draw < count; ++draw) {
        const double target = rng.uniform() * total;
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
        std::size_t slot = it == cumulative.end() ? last_positive : static_cast<std::size_t>(it - cumulative.begin());
        ++hits[slot];
    }

    SampleDraw out;
    out.total = count;
    for (std::size_t slot = 0; slot < hits.size(); ++slot) {
        if (hits[slot] > 0)
            out.positions.push_back(slot);
    }
    const auto& indices = dist.indices();
    std::sort(out.positions.begin(), out.positions.end(),
              [&](std::size_t x, std::size_t y) { return indices[x] < indices[y]; });
    for (std::size_t slot : out.positions) {
        out.unique_indices.push_back(indices[slot]);
        out.counts.push_back(hits[slot]);
    }
    return out;
}

namespace {

double drawn_weight(const SampleDraw& draw, const Distribution& dist, std::size_t j)
{
    const std::size_t slot = draw.positions.at(j);
    if (slot >= dist.size() || dist.indices()[slot] != draw.unique_indices[j])
        throw ParameterError("sample draw does not belong to the given distribution");
    const double p = dist.weights()[slot];
    if (!(p > 0.0))
        throw NumericalError("drawn index " + std::to_string(draw.unique_indices[j]) + " has zero weight");
    return p;
}

}  // namespace

DenseMatrix scale_sampled_columns(const DenseMatrix& a, const SampleDraw& draw, const Distribution& dist,
                                  std::int64_t c, bool dedup)
{
    if (c < 1)
        throw ParameterError("scale_sampled_columns: c must be positive");
    const double cd = static_cast<double>(c);
    if (dedup) {
        DenseMatrix d(a.rows(), static_cast<Index>(draw.distinct()));
        for (std::size_t j = 0; j < draw.distinct(); ++j) {
            const double p = drawn_weight(draw, dist, j);
            const double scale = std::sqrt(static_cast<double>(draw.counts[j])) / std::sqrt(cd * p);
            d.col(static_cast<Index>(j)) = a.col(draw.unique_indices[j]) * scale;
        }
        return d;
    }
    const std::int64_t width = std::accumulate(draw.counts.begin(), draw.counts.end(), std::int64_t{0});
    DenseMatrix out(a.rows(), static_cast<Index>(width));
    Index col = 0;
    for (std::size_t j = 0; j < draw.distinct(); ++j) {
        const double p = drawn_weight(draw, dist, j);
        const double scale = 1.0 / std::sqrt(cd * p);
        for (std::int64_t t = 0; t < draw.counts[j]; ++t)
            out.col(col++) = a.col(draw.unique_indices[j]) * scale;
    }
    return out;
}

DenseMatrix scale_sampled_rows(const DenseMatrix& c, const SampleDraw& draw, const Distribution& dist,
                               std::int64_t w)
{
    if (w < 1)
        throw ParameterError("scale_sampled_rows: w must be positive");
    DenseMatrix y(static_cast<Index>(draw.distinct()), c.cols());
    for (std::size_t j = 0; j < draw.distinct(); ++j) {
        const double q = drawn_weight(draw, dist, j);
        const double scale = std::sqrt(static_cast<double>(draw.counts[j]) / (static_cast<double>(w) * q));
        y.row(static_cast<Index>(j)) = c.row(draw.unique_indices[j]) * scale;
    }
    return y;
}

DenseMatrix scale_sampled_rows_with_duplicates(const DenseMatrix& c, const SampleDraw& draw,
                                               const Distribution& dist, std::int64_t w)
{
    if (w < 1)
        throw ParameterError("scale_sampled_rows_with_duplicates: w must be positive");
    const std::int64_t height = std::accumulate(draw.counts.begin(), draw.counts.end(), std::int64_t{0});
    DenseMatrix out(static_cast<Index>(height), c.cols());
    Index row = 0;
    for (std::size_t j = 0; j < draw.distinct(); ++j) {
        const double q = drawn_weight(draw, dist, j);
        const double scale = 1.0 / std::sqrt(static_cast<double>(w) * q);
        for (std::int64_t t = 0; t < draw.counts[j]; ++t)
            out.row(row++) = c.row(draw.unique_indices[j]) * scale;
    }
    return out;
}

namespace {

void check_count_params(std::int64_t k, double epsilon, double delta)
{
    if (k < 1)
        throw ParameterError("sample count: k must be >= 1");
    if (!(epsilon > 0.0) || !std::isfinite(epsilon))
        throw ParameterError("sample count: epsilon must be positive");
    if (!(delta > 0.0 && delta < 1.0))
        throw ParameterError("sample count: delta must lie in (0, 1)");
}

std::int64_t round_up(double raw)
{
    if (!(raw < 9.0e18))
        throw ParameterError("sample count overflows");
    return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(raw)));
}

}  // namespace

double ltsvd_sample_count_raw(std::int64_t k, double epsilon, double delta)
{
    check_count_params(k, epsilon, delta);
    const double factor = 1.0 + std::sqrt(8.0 * std::log(1.0 / delta));
    return 4.0 * static_cast<double>(k) * factor * factor / (epsilon * epsilon);
}

double ctsvd_sample_count_raw(std::int64_t k, double epsilon, double delta)
{
    check_count_params(k, epsilon, delta);
    const double factor = 1.0 + std::sqrt(std::log(2.0 / delta));
    const double kd = static_cast<double>(k);
    const double eps2 = epsilon * epsilon;
    return kd * kd * factor * factor / (eps2 * eps2);
}

std::int64_t ltsvd_sample_count(std::int64_t k, double epsilon, double delta)
{
    return round_up(ltsvd_sample_count_raw(k, epsilon, delta));
}

std::int64_t ctsvd_sample_count(std::int64_t k, double epsilon, double delta)
{
    return round_up(ctsvd_sample_count_raw(k, epsilon, delta));
}

}  // namespace podsketch
