#ifndef PODSKETCH_QUALITY_HPP
#define PODSKETCH_QUALITY_HPP

#include <vector>

#include "podsketch/matrix.hpp"

namespace podsketch {

// arccos(clamp(|u_i^T u~_i|, 0, 1)) in degrees, i < k.
std::vector<double> mode_angles(const TruncatedFactor& exact, const TruncatedFactor& approx, Index k);

// Principal angles between the top-k subspaces, degrees, nondecreasing.
std::vector<double> principal_angles(const TruncatedFactor& exact, const TruncatedFactor& approx, Index k);

// Same, for explicit orthonormal bases.
std::vector<double> principal_angles(const DenseMatrix& basis_a, const DenseMatrix& basis_b);

//
// Wedin-type a-posteriori measure for a factor carrying V:
//
//   R = A V_k - U_k S_k,   S = A^T U_k - V_k S_k
//   omega_hat = min(|s_k - s_{k+1}|, s_k)
//   measure = sqrt(|R|_F^2 + |S|_F^2) / omega_hat
//
// The combined sine norm of the left and right subspace angles is at most
// sqrt(2k), which is reported as the ceiling. When omega_hat is numerically
// zero the measure is +inf and degenerate is set; raising k by one or two
// usually separates the clustered singular values.
//
struct WedinReport {
    double r_norm = 0.0;
    double s_norm = 0.0;
    double omega_hat = 0.0;
    double measure = 0.0;
    double ceiling = 0.0;
    bool degenerate = false;
};

WedinReport wedin_measure(const DenseMatrix& a, const TruncatedFactor& factor, Index k);

}  // namespace podsketch

#endif  // PODSKETCH_QUALITY_HPP
