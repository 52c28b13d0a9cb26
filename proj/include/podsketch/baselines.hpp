#ifndef PODSKETCH_BASELINES_HPP
#define PODSKETCH_BASELINES_HPP

#include <cstdint>
#include <optional>

#include "podsketch/matrix.hpp"
#include "podsketch/rng.hpp"
#include "podsketch/sampling.hpp"

namespace podsketch {

struct SampledSvd {
    TruncatedFactor factor;    // left vectors and sigma only
    bool short_rank = false;   // fewer than k modes survived
    bool empty = false;        // the sample had numerical rank 0
    std::size_t distinct_columns = 0;
    std::size_t distinct_rows = 0;
};

// Single round of column-norm style sampling (linear-time SVD).
// Samples c columns from dist, scales them, and lifts the right singular
// vectors of the sample (from C^T C) back to u_i = C v_i / sigma_i.
SampledSvd ltsvd(const DenseMatrix& a, const Distribution& dist, std::int64_t k, std::int64_t c, Rng& rng,
                 bool dedup);

SampledSvd ltsvd_from_draw(const DenseMatrix& a, const Distribution& dist, const SampleDraw& draw, std::int64_t k,
                           std::int64_t c, bool dedup);

// Column and row sampling (constant-time SVD). When filter_epsilon is set,
// modes with sigma^2 < eps/(100k) |W|_F^2 are discarded.
SampledSvd ctsvd(const DenseMatrix& a, const Distribution& dist, std::int64_t k, std::int64_t c, std::int64_t w,
                 std::optional<double> filter_epsilon, Rng& rng, bool dedup);

// Same as ctsvd with both draws supplied. row_dist must be a distribution over
// the rows of the scaled column sample.
SampledSvd ctsvd_from_draws(const DenseMatrix& a, const Distribution& dist, const SampleDraw& column_draw,
                            const Distribution& row_dist, const SampleDraw& row_draw, std::int64_t k,
                            std::int64_t c, std::int64_t w, std::optional<double> filter_epsilon, bool dedup);

}  // namespace podsketch

#endif  // PODSKETCH_BASELINES_HPP
