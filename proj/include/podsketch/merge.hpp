#ifndef PODSKETCH_MERGE_HPP
#define PODSKETCH_MERGE_HPP

#include <cstdint>
#include <span>

#include "podsketch/matrix.hpp"

namespace podsketch {

//
// Merge-and-truncate of two left factors of adjacent column blocks [X Y].
//
// Both inputs are cut to r modes first. With M = U1^T U2 and the QR
// U2 - U1 M = Uo R, the block matrix
//
//     E = [ S1   M S2 ]
//         [ 0    R S2 ]
//
// has the same singular values as [U1 S1, U2 S2]. The result is
// [U1 Uo] U_E with sigma(E), cut to min(r, #nonzero sigma). V is not formed.
//
TruncatedFactor block_merge(const TruncatedFactor& f1, const TruncatedFactor& f2, Index r);

// Same result; reuses the storage of f2 for the complement.
TruncatedFactor block_merge(const TruncatedFactor& f1, TruncatedFactor&& f2, Index r);

// Left fold of block_merge over the list.
TruncatedFactor merge_chain(std::span<const TruncatedFactor> factors, Index r);

struct MergeBoundInput {
    std::int64_t partitions = 1;  // P
    double sigma_r_plus_1 = 0.0;  // sigma_{r+1} of the full matrix
};

struct MergeBound {
    double value = 0.0;
    bool saturated = false;  // P too large for an exact power of two
};

// Spectral-norm bound (2^{P+1} - 3) sigma_{r+1} on |X - Z_r| after P-1 merges.
MergeBound mat_error_bound(const MergeBoundInput& input);

// Approximate flops for a rank-r approximation through P blocks:
// 14 m n^2 / P + 192 n^3 / P^2.
double mat_flops_estimate(double m, double n, double partitions);

}  // namespace podsketch

#endif  // PODSKETCH_MERGE_HPP
