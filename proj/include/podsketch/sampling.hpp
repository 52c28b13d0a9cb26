#ifndef PODSKETCH_SAMPLING_HPP
#define PODSKETCH_SAMPLING_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "podsketch/matrix.hpp"
#include "podsketch/rng.hpp"

namespace podsketch {

//
// Probability vector over an ordered set of candidate indices.
//
// Weights are normalized on construction; negative or non-finite weights and
// duplicate indices are rejected, and a zero total raises DegenerateDistribution.
//
class Distribution {
public:
    Distribution(std::vector<Index> indices, std::vector<double> weights);

    const std::vector<Index>& indices() const noexcept { return indices_; }
    const std::vector<double>& weights() const noexcept { return weights_; }
    std::size_t size() const noexcept { return indices_.size(); }

private:
    std::vector<Index> indices_;
    std::vector<double> weights_;
};

// Distinct draws with multiplicities. positions[j] is the slot of
// unique_indices[j] inside the Distribution it was drawn from.
struct SampleDraw {
    std::vector<Index> unique_indices;
    std::vector<std::int64_t> counts;
    std::vector<std::size_t> positions;
    std::int64_t total = 0;

    std::size_t distinct() const noexcept { return unique_indices.size(); }
};

std::vector<Index> all_indices(Index n);

// weight_i = |a_i|^2 / sum over candidates
Distribution column_norm_distribution(const DenseMatrix& a, std::span<const Index> candidates);

Distribution uniform_distribution(std::span<const Index> candidates);

// weight_i proportional to |a_i - U U^T a_i|^2. Raises DegenerateDistribution
// when the total residual is below 1e-14 |A|_F^2.
Distribution residual_distribution(const DenseMatrix& a, const DenseMatrix& u,
                                   std::span<const Index> candidates);

// Row leverage scores |u^i|^2 / k of an orthonormal m x k basis.
Distribution leverage_distribution(const DenseMatrix& u);

Distribution row_norm_distribution(const DenseMatrix& d);

// count i.i.d. draws by inverse CDF; result sorted by index.
SampleDraw sample_with_replacement(const Distribution& dist, std::int64_t count, Rng& rng);

// dedup == false: one column per draw, each scaled by 1/sqrt(c p).
// dedup == true: one column per distinct index, scaled by sqrt(t)/sqrt(c p),
// which leaves D D^T equal to C C^T.
DenseMatrix scale_sampled_columns(const DenseMatrix& a, const SampleDraw& draw, const Distribution& dist,
                                  std::int64_t c, bool dedup);

// One row per distinct drawn row, scaled by sqrt(t / (w q)).
DenseMatrix scale_sampled_rows(const DenseMatrix& c, const SampleDraw& draw, const Distribution& dist,
                               std::int64_t w);

// Row sampling with duplicates kept, scaled by 1/sqrt(w q). Reference form of
// scale_sampled_rows.
DenseMatrix scale_sampled_rows_with_duplicates(const DenseMatrix& c, const SampleDraw& draw,
                                               const Distribution& dist, std::int64_t w);

// Sample counts for the single-round samplers. Natural logarithm, rounded up.
//   LTSVD: c = 4k (1 + sqrt(8 ln(1/delta)))^2 / eps^2
//   CTSVD: c = w = k^2 (1 + sqrt(ln(2/delta)))^2 / eps^4
double ltsvd_sample_count_raw(std::int64_t k, double epsilon, double delta);
double ctsvd_sample_count_raw(std::int64_t k, double epsilon, double delta);
std::int64_t ltsvd_sample_count(std::int64_t k, double epsilon, double delta);
std::int64_t ctsvd_sample_count(std::int64_t k, double epsilon, double delta);

}  // namespace podsketch

#endif  // PODSKETCH_SAMPLING_HPP
