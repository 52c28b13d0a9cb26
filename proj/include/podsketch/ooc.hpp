#ifndef PODSKETCH_OOC_HPP
#define PODSKETCH_OOC_HPP

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <utility>

#include "podsketch/isma.hpp"
#include "podsketch/matrix.hpp"

namespace podsketch {

//
// Sequential reader of contiguous column blocks of a PODM file.
//
// Block i covers columns [floor(i n / t), floor((i+1) n / t)), so the t
// blocks partition the columns and widths differ by at most one.
//
class BlockReader {
public:
    BlockReader(const std::filesystem::path& path, std::int64_t blocks);

    Index rows() const noexcept { return rows_; }
    Index cols() const noexcept { return cols_; }
    std::int64_t block_count() const noexcept { return blocks_; }
    std::int64_t cursor() const noexcept { return cursor_; }
    std::int64_t blocks_read() const noexcept { return blocks_read_; }
    std::uint64_t bytes_read() const noexcept { return bytes_read_; }

    // [first, last) column range of block i
    std::pair<Index, Index> block_range(std::int64_t i) const;

    // Next block, or nullopt once all t blocks were returned.
    std::optional<DenseMatrix> read_block();

private:
    std::ifstream in_;
    Index rows_ = 0;
    Index cols_ = 0;
    std::int64_t blocks_ = 1;
    std::int64_t cursor_ = 0;
    std::int64_t blocks_read_ = 0;
    std::uint64_t bytes_read_ = 0;
};

struct IncrementalOptions {
    // Divide the per-round column budget by the block count (plain sampled-SVD
    // splitting) instead of using the full-matrix budget in every block.
    bool split_column_budget = false;
};

struct IncrementalResult {
    TruncatedFactor factor;                  // up to r modes, no V
    std::vector<IsmaResult> block_results;   // per-block runs (factors cleared)
    std::int64_t blocks = 0;
};

//
// One-pass POD: ISMA on each block in turn (without the finalize step, which
// would need a second pass), folded left to right with block_merge at rank r.
// Block i > 0 uses a seed derived from config.seed and i.
//
IncrementalResult incremental_pod(BlockReader& reader, const IsmaConfig& config,
                                  const IncrementalOptions& options = {});

// Passes over the full matrix after i iterations: i+1 for column sampling,
// at most 3i+1 with row sampling, and 1 for the incremental scheme.
std::int64_t pass_count(bool incremental, bool rows, std::int64_t iterations);

}  // namespace podsketch

#endif  // PODSKETCH_OOC_HPP
