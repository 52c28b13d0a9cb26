#ifndef PODSKETCH_MATRIX_HPP
#define PODSKETCH_MATRIX_HPP

#include <optional>
#include <utility>

#include <Eigen/Dense>

namespace podsketch {

using Index = Eigen::Index;

// Column-major dense storage; sampled columns are contiguous copies.
using DenseMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

//
// Truncated SVD factor  A ~ U diag(sigma) V^T.
//
// sigma is nonincreasing and nonnegative, U (and V when present) have
// orthonormal columns. A factor with zero columns is a valid "empty"
// factor; merge and iteration code treat it as the identity element.
//
struct TruncatedFactor {
    DenseMatrix u;
    Vector sigma;
    std::optional<DenseMatrix> v;

    Index rows() const { return u.rows(); }
    Index modes() const { return sigma.size(); }
    bool empty() const { return sigma.size() == 0; }

    // leading min(count, modes()) modes
    TruncatedFactor leading(Index count) const;

    static TruncatedFactor empty_factor(Index rows);
};

// Relative threshold below which a singular value counts as zero when the
// singular values come from a direct (non-Gram) SVD.
inline constexpr double kZeroSigmaTolerance = 1e-14;

// Relative eigenvalue threshold for Gram-matrix SVDs (sigma^2 = eigenvalue).
// Rounding in C^T C is of order dim * eps * sigma_1^2, so the cut sits above it.
double gram_rank_tolerance(Index dim);

void check_finite(const DenseMatrix& a);

// Make the largest-magnitude entry of each column of u positive; the matching
// column of v (if given) is flipped with it.
void normalize_signs(DenseMatrix& u, DenseMatrix* v = nullptr);

DenseMatrix mean_center_rows(const DenseMatrix& a);

// Full thin SVD: u is m x q, v is n x q, q = min(m, n). Sign-normalized.
TruncatedFactor dense_svd(const DenseMatrix& a);

struct QrResult {
    DenseMatrix q;  // m x n, orthonormal columns
    DenseMatrix r;  // n x n, upper triangular
};

// Householder thin QR; requires rows >= cols.
QrResult thin_qr(const DenseMatrix& a);

// Exact reference POD path through the Gram matrix A^T A (SVD-A^TA).
// Squares the condition number; fine for the dominant modes, not for the tail.
// Modes whose eigenvalue falls under gram_rank_tolerance are dropped.
TruncatedFactor pod_via_gram(const DenseMatrix& a, Index k);

struct Orthonormalized {
    DenseMatrix q;
    Vector s;
};

// QR of u followed by SVD of R; q = Q U_R, s = singular values of R.
Orthonormalized orthonormalize(const DenseMatrix& u);

double max_orthonormality_error(const DenseMatrix& u);

}  // namespace podsketch

#endif  // PODSKETCH_MATRIX_HPP
