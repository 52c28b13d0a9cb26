#include "podsketch/ooc.hpp"

#include "podsketch/error.hpp"
#include "podsketch/merge.hpp"
#include "podsketch/podm.hpp"
#include "podsketch/rng.hpp"

namespace podsketch {

BlockReader::BlockReader(const std::filesystem::path& path, std::int64_t blocks)
    : in_(path, std::ios::binary), blocks_(blocks)
{
    if (!in_)
        throw ParameterError("cannot open " + path.string());
    const PodmHeader header = read_podm_header(in_, 0);
    rows_ = static_cast<Index>(header.rows);
    cols_ = static_cast<Index>(header.cols);
    if (blocks_ < 1 || blocks_ > cols_)
        throw ParameterError("block count must lie in [1, n] = [1, " + std::to_string(cols_) + "]");
    const auto expected = kPodmHeaderBytes + header.rows * header.cols * 8;
    const auto size = static_cast<std::uint64_t>(std::filesystem::file_size(path));
    if (size < expected)
        throw FormatError("file shorter than its header declares", size);
}

std::pair<Index, Index> BlockReader::block_range(std::int64_t i) const
{
    if (i < 0 || i >= blocks_)
        throw ParameterError("block index out of range");
    const auto n = static_cast<std::int64_t>(cols_);
    return {static_cast<Index>(i * n / blocks_), static_cast<Index>((i + 1) * n / blocks_)};
}

std::optional<DenseMatrix> BlockReader::read_block()
{
    if (cursor_ >= blocks_)
        return std::nullopt;
    const auto [first, last] = block_range(cursor_);
    const auto offset = kPodmHeaderBytes + static_cast<std::uint64_t>(first) * static_cast<std::uint64_t>(rows_) * 8;
    in_.clear();
    in_.seekg(static_cast<std::streamoff>(offset));
    if (!in_)
        throw FormatError("seek failed", offset);
    DenseMatrix block(rows_, last - first);
    read_podm_values(in_, block.data(), static_cast<std::uint64_t>(block.size()), offset);
    if (!block.allFinite())
        throw FormatError("non-finite value in block " + std::to_string(cursor_), offset);
    ++cursor_;
    ++blocks_read_;
    bytes_read_ += static_cast<std::uint64_t>(block.size()) * 8;
    return block;
}

IncrementalResult incremental_pod(BlockReader& reader, const IsmaConfig& config, const IncrementalOptions& options)
{
    config.validate();
    if (config.k > reader.rows())
        throw ParameterError("k exceeds the row count");
    const Index r = config.merge_rank();

    IncrementalResult result;
    result.blocks = reader.block_count();
    TruncatedFactor acc = TruncatedFactor::empty_factor(reader.rows());

    std::int64_t index = 0;
    while (auto block = reader.read_block()) {
        IsmaConfig block_config = config;
        block_config.finalize = FinalizeMode::never;
        block_config.seed = index == 0 ? config.seed : derive_seed(config.seed, static_cast<std::uint64_t>(index));
        block_config.k = std::min<std::int64_t>(config.k, std::min(block->rows(), block->cols()));
        block_config.r = r;
        if (options.split_column_budget) {
            const std::int64_t c = config.column_budget();
            block_config.columns_per_round = std::max<std::int64_t>(1, (c + result.blocks - 1) / result.blocks);
        }

        IsmaResult block_result = isma_run(*block, block_config);
        block.reset();
        acc = index == 0 ? block_result.factor.leading(r) : block_merge(acc, std::move(block_result.factor), r);
        block_result.factor = TruncatedFactor{};
        result.block_results.push_back(std::move(block_result));
        ++index;
    }
    acc.v.reset();
    result.factor = std::move(acc);
    return result;
}

std::int64_t pass_count(bool incremental, bool rows, std::int64_t iterations)
{
    if (incremental)
        return 1;
    if (iterations < 0)
        throw ParameterError("pass_count: negative iteration count");
    return rows ? 3 * iterations + 1 : iterations + 1;
}

}  // namespace podsketch
