#ifndef PODSKETCH_ISMA_HPP
#define PODSKETCH_ISMA_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "podsketch/matrix.hpp"
#include "podsketch/rng.hpp"
#include "podsketch/sampling.hpp"

namespace podsketch {

// Column strategy from the second iteration on. The first round always uses
// column norms (and row norms when rows are sampled).
enum class Strategy {
    l2n,  // column norms, renormalized over the remaining columns
    unf,  // uniform over the remaining columns
    ort,  // norms of the part orthogonal to the current modes
    ls    // uniform columns, leverage-score rows
};

enum class Criterion {
    modes,     // |u_i^T u'_i| per mode
    subspace   // principal cosines between successive top-k subspaces
};

enum class FinalizeMode {
    automatic,  // only when the criterion converged with columns left unsampled
    always,
    never
};

std::string to_string(Strategy s);
std::string to_string(Criterion c);
std::string to_string(FinalizeMode f);
Strategy parse_strategy(const std::string& text);
Criterion parse_criterion(const std::string& text);

struct IsmaConfig {
    std::int64_t k = 10;
    std::optional<std::int64_t> r;  // merge rank, 3k when unset
    double epsilon = 0.7;
    double delta = 0.6;
    double tau = 0.99;
    Strategy strategy = Strategy::unf;
    bool rows = false;              // ICRS when set, ICS otherwise
    Criterion criterion = Criterion::modes;
    std::uint64_t seed = 0;
    FinalizeMode finalize = FinalizeMode::automatic;
    // Per-round sample sizes; by default c (and w) come from the LTSVD count
    // for column sampling and the CTSVD count when rows are sampled.
    std::optional<std::int64_t> columns_per_round;
    std::optional<std::int64_t> rows_per_round;

    std::int64_t merge_rank() const { return r.value_or(3 * k); }
    std::int64_t column_budget() const;
    std::int64_t row_budget() const;

    // Throws ParameterError on an inconsistent configuration.
    void validate() const;
};

struct IterationTrace {
    std::int64_t iteration = 0;        // 0 is the first sampling round
    std::int64_t distinct_columns = 0; // g
    std::int64_t distinct_rows = 0;    // h, 0 without row sampling
    std::int64_t remaining = 0;        // |S| after this round
    std::vector<double> cosines;       // empty for round 0
    std::vector<Index> columns;        // distinct columns drawn this round
    double seconds = 0.0;
};

struct UpdateResult {
    TruncatedFactor factor;       // up to r modes of the new columns (no V)
    std::vector<Index> remaining; // S without the drawn columns
    std::vector<Index> drawn;     // distinct columns, ascending
    std::int64_t distinct_rows = 0;
};

//
// One sampling round: draw c columns of a from dist (over the remaining set),
// keep the distinct ones unscaled as D and drop them from the remaining set.
// Without row sampling the factor comes from D^T D. With row sampling, w rows
// of D are drawn under row norms of D (or leverage scores of leverage_basis
// when given), deduplicated and scaled into Y, and u_i = D v_i / sigma_i with
// (v, sigma) from Y^T Y. Returns nullopt when remaining is empty.
//
std::optional<UpdateResult> get_update(const DenseMatrix& a, const std::vector<Index>& remaining,
                                       const Distribution& dist, std::int64_t c, std::int64_t w, bool rows,
                                       const DenseMatrix* leverage_basis, Index r, Rng& rng);

// Cosines between the top-k modes of two successive iterates; modes missing
// from either factor count as 0.
std::vector<double> convergence_cosines(const TruncatedFactor& prev, const TruncatedFactor& next, Index k,
                                        Criterion criterion);

struct IsmaResult {
    // All retained modes (at most r), sorted; V present iff finalized.
    TruncatedFactor factor;
    std::vector<IterationTrace> traces;
    bool converged = false;     // criterion met before the columns ran out
    bool exhausted = false;     // every column was sampled
    bool finalized = false;
    std::int64_t columns_per_round = 0;
    std::int64_t rows_per_round = 0;

    TruncatedFactor top(Index k) const { return factor.leading(k); }
    std::int64_t total_distinct_columns() const;
};

// Iterative sampling and merging. a is expected to be mean-centered already.
IsmaResult isma_run(const DenseMatrix& a, const IsmaConfig& config);

// Recompute sigma and V from the current left modes: QR of A^T U, SVD of R.
TruncatedFactor finalize_factor(const DenseMatrix& a, const TruncatedFactor& factor);

}  // namespace podsketch

#endif  // PODSKETCH_ISMA_HPP
