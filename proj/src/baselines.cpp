#include "podsketch/baselines.hpp"

#include <algorithm>
#include <iostream>

#include "podsketch/error.hpp"
#include "podsketch/gram.hpp"

namespace podsketch {

namespace {

void check_common(const DenseMatrix& a, std::int64_t k, std::int64_t c)
{
    check_finite(a);
    if (k < 1)
        throw ParameterError("k must be >= 1");
    if (c < 1)
        throw ParameterError("c must be >= 1");
}

SampledSvd finish(TruncatedFactor factor, std::int64_t k, std::size_t columns, std::size_t rows)
{
    SampledSvd out;
    factor.v.reset();
    out.empty = factor.empty();
    out.short_rank = factor.modes() < k;
    out.factor = std::move(factor);
    out.distinct_columns = columns;
    out.distinct_rows = rows;
    return out;
}

}  // namespace

SampledSvd ltsvd_from_draw(const DenseMatrix& a, const Distribution& dist, const SampleDraw& draw, std::int64_t k,
                           std::int64_t c, bool dedup)
{
    check_common(a, k, c);
    const DenseMatrix sample = scale_sampled_columns(a, draw, dist, c, dedup);
    TruncatedFactor factor = factor_from_gram(gram_of(sample), sample, k);
    return finish(std::move(factor), k, draw.distinct(), 0);
}

SampledSvd ltsvd(const DenseMatrix& a, const Distribution& dist, std::int64_t k, std::int64_t c, Rng& rng, bool dedup)
{
    check_common(a, k, c);
    if (c < k)
        std::cerr << "warning: ltsvd sampling c=" << c << " columns for k=" << k << " modes\n";
    const SampleDraw draw = sample_with_replacement(dist, c, rng);
    return ltsvd_from_draw(a, dist, draw, k, c, dedup);
}

SampledSvd ctsvd_from_draws(const DenseMatrix& a, const Distribution& dist, const SampleDraw& column_draw,
                            const Distribution& row_dist, const SampleDraw& row_draw, std::int64_t k,
                            std::int64_t c, std::int64_t w, std::optional<double> filter_epsilon, bool dedup)
{
    check_common(a, k, c);
    if (w < 1)
        throw ParameterError("w must be >= 1");
    const DenseMatrix columns = scale_sampled_columns(a, column_draw, dist, c, dedup);
    const DenseMatrix rows = dedup ? scale_sampled_rows(columns, row_draw, row_dist, w)
                                   : scale_sampled_rows_with_duplicates(columns, row_draw, row_dist, w);
    const DenseMatrix gram = gram_of(rows);
    TruncatedFactor factor = factor_from_gram(gram, columns, k);

    if (filter_epsilon) {
        const double gamma = *filter_epsilon / (100.0 * static_cast<double>(k));
        const double threshold = gamma * gram.trace();
        Index keep = 0;
        while (keep < factor.modes() && factor.sigma(keep) * factor.sigma(keep) >= threshold)
            ++keep;
        factor = factor.leading(keep);
    }
    return finish(std::move(factor), k, column_draw.distinct(), row_draw.distinct());
}

SampledSvd ctsvd(const DenseMatrix& a, const Distribution& dist, std::int64_t k, std::int64_t c, std::int64_t w,
                 std::optional<double> filter_epsilon, Rng& rng, bool dedup)
{
    check_common(a, k, c);
    if (c < k)
        std::cerr << "warning: ctsvd sampling c=" << c << " columns for k=" << k << " modes\n";
    const SampleDraw column_draw = sample_with_replacement(dist, c, rng);
    // Row norms of the scaled sample are the same with and without duplicates.
    const DenseMatrix scaled = scale_sampled_columns(a, column_draw, dist, c, true);
    const Distribution row_dist = row_norm_distribution(scaled);
    const SampleDraw row_draw = sample_with_replacement(row_dist, w, rng);
    return ctsvd_from_draws(a, dist, column_draw, row_dist, row_draw, k, c, w, filter_epsilon, dedup);
}

}  // namespace podsketch
