#ifndef PODSKETCH_GRAM_HPP
#define PODSKETCH_GRAM_HPP

#include <span>

#include "podsketch/matrix.hpp"

namespace podsketch {

//
// Left factor from the eigendecomposition of a Gram matrix.
//
// gram is the symmetric matrix B^T B of some (possibly row-sampled) matrix B
// whose right singular vectors approximate those of lift. Returns up to
// max_modes modes with sigma_i = sqrt(lambda_i), v_i the eigenvectors and
// u_i = lift v_i / sigma_i. Eigenvalues below gram_rank_tolerance(dim) * lambda_1
// are treated as zero and stop the mode list. u is NOT re-orthonormalized.
//
TruncatedFactor factor_from_gram(const DenseMatrix& gram, const DenseMatrix& lift, Index max_modes);

// Same with lift = a(:, columns), read in row chunks so the m x |columns|
// copy is never formed.
TruncatedFactor factor_from_gram(const DenseMatrix& gram, const DenseMatrix& a, std::span<const Index> columns,
                                 Index max_modes);

// B^T B, computed as a symmetric rank update.
DenseMatrix gram_of(const DenseMatrix& b);

// Gram matrix of a(:, columns), accumulated over row chunks.
DenseMatrix gram_of_columns(const DenseMatrix& a, std::span<const Index> columns);

}  // namespace podsketch

#endif  // PODSKETCH_GRAM_HPP
