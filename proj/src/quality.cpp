#include "podsketch/quality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "podsketch/error.hpp"

namespace podsketch {

namespace {

double degrees_from_cosine(double c)
{
    return std::acos(std::clamp(c, 0.0, 1.0)) * 180.0 / std::numbers::pi;
}

void check_pair(const TruncatedFactor& exact, const TruncatedFactor& approx, Index k, const char* who)
{
    if (k < 1)
        throw ParameterError(std::string(who) + ": k must be >= 1");
    if (exact.rows() != approx.rows())
        throw ParameterError(std::string(who) + ": factors have different row counts");
    if (exact.modes() < k || approx.modes() < k)
        throw ParameterError(std::string(who) + ": both factors need at least k = " + std::to_string(k) +
                             " modes (have " + std::to_string(exact.modes()) + " and " +
                             std::to_string(approx.modes()) + ")");
}

}  // namespace

std::vector<double> mode_angles(const TruncatedFactor& exact, const TruncatedFactor& approx, Index k)
{
    check_pair(exact, approx, k, "mode_angles");
    std::vector<double> out(static_cast<std::size_t>(k));
    for (Index i = 0; i < k; ++i)
    {
        const auto x = exact.u.col(i);
        const auto y = approx.u.col(i);
        const double c = x.dot(y);
        out[static_cast<std::size_t>(i)] = std::atan2((y - c * x).norm(), std::abs(c)) * 180.0 / std::numbers::pi;
    }
    return out;
}

std::vector<double> principal_angles(const DenseMatrix& basis_a, const DenseMatrix& basis_b)
{
    if (basis_a.rows() != basis_b.rows())
        throw ParameterError("principal_angles: bases have different row counts");
    const DenseMatrix cross = basis_a.transpose() * basis_b;
    const Vector s = Eigen::JacobiSVD<DenseMatrix>(cross).singularValues();
    std::vector<double> out(static_cast<std::size_t>(s.size()));
    for (Index i = 0; i < s.size(); ++i)
        out[static_cast<std::size_t>(i)] = degrees_from_cosine(s(i));
    if (basis_a.cols() == basis_b.cols() && s.size() > 0) {
        // arccos loses accuracy near 1; small angles come from the sines instead
        const DenseMatrix residual = basis_b - basis_a * cross;
        Vector sines = Eigen::JacobiSVD<DenseMatrix>(residual).singularValues();
        std::sort(sines.data(), sines.data() + sines.size());
        for (Index i = 0; i < s.size() && i < sines.size(); ++i)
            if (s(i) * s(i) >= 0.5)
                out[static_cast<std::size_t>(i)] = std::asin(std::min(sines(i), 1.0)) * 180.0 / std::numbers::pi;
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<double> principal_angles(const TruncatedFactor& exact, const TruncatedFactor& approx, Index k)
{
    check_pair(exact, approx, k, "principal_angles");
    return principal_angles(DenseMatrix(exact.u.leftCols(k)), DenseMatrix(approx.u.leftCols(k)));
}

WedinReport wedin_measure(const DenseMatrix& a, const TruncatedFactor& factor, Index k)
{
    if (k < 1)
        throw ParameterError("wedin_measure: k must be >= 1");
    if (!factor.v)
        throw ParameterError("wedin_measure: factor has no right singular vectors");
    if (factor.modes() < k + 1)
        throw ParameterError("wedin_measure: need k+1 = " + std::to_string(k + 1) + " singular values, have " +
                             std::to_string(factor.modes()));
    if (factor.rows() != a.rows() || factor.v->rows() != a.cols())
        throw ParameterError("wedin_measure: factor shape does not match matrix");

    const auto uk = factor.u.leftCols(k);
    const auto vk = factor.v->leftCols(k);
    const auto sk = factor.sigma.head(k).asDiagonal();

    WedinReport out;
    out.r_norm = (a * vk - uk * sk).norm();
    out.s_norm = (a.transpose() * uk - vk * sk).norm();
    const double sigma_k = factor.sigma(k - 1);
    const double sigma_next = factor.sigma(k);
    out.omega_hat = std::min(std::abs(sigma_k - sigma_next), sigma_k);
    out.ceiling = std::sqrt(2.0 * static_cast<double>(k));
    out.degenerate = out.omega_hat <= 1e-14 * factor.sigma(0);
    out.measure = out.degenerate ? std::numeric_limits<double>::infinity()
                                 : std::hypot(out.r_norm, out.s_norm) / out.omega_hat;
    return out;
}

}  // namespace podsketch
