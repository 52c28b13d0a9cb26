#include "podsketch/merge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "podsketch/error.hpp"

namespace podsketch {

namespace {

TruncatedFactor left_only(const TruncatedFactor& f, Index r)
{
    TruncatedFactor out = f.leading(r);
    out.v.reset();
    return out;
}

void check_merge_args(const TruncatedFactor& f1, const TruncatedFactor& f2, Index r)
{
    if (r < 1)
        throw ParameterError("block_merge: r must be >= 1");
    if (f1.u.rows() != f2.u.rows())
        throw ParameterError("block_merge: factors have different row counts (" + std::to_string(f1.u.rows()) +
                             " vs " + std::to_string(f2.u.rows()) + ")");
}

// Q factor of an in-place Householder QR, R with a nonnegative diagonal.
void householder_in_place(DenseMatrix& work, DenseMatrix& q, DenseMatrix& r_factor)
{
    const Index m = work.rows();
    const Index n = work.cols();
    Eigen::HouseholderQR<Eigen::Ref<DenseMatrix>> qr(work);
    r_factor = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
    q = qr.householderQ() * DenseMatrix::Identity(m, n);
    for (Index j = 0; j < n; ++j) {
        if (r_factor(j, j) < 0.0) {
            r_factor.row(j) *= -1.0;
            q.col(j) *= -1.0;
        }
    }
}

// comp holds the leading columns of U2 on entry and is consumed.
TruncatedFactor merge_core(const TruncatedFactor& f1, DenseMatrix comp, const Vector& s2, Index r)
{
    const Index r1 = std::min(r, f1.modes());
    const Index r2 = comp.cols();
    const auto u1 = f1.u.leftCols(r1);
    const auto s1 = f1.sigma.head(r1);

    DenseMatrix overlap = u1.transpose() * comp;  // U1^T U2
    comp.noalias() -= u1 * overlap;
    DenseMatrix q;
    DenseMatrix rf;
    householder_in_place(comp, q, rf);
    comp = DenseMatrix();

    // second Gram-Schmidt pass when the complement lost orthogonality to U1
    const DenseMatrix leak = u1.transpose() * q;
    if (leak.size() > 0 && leak.cwiseAbs().maxCoeff() > 1e-8) {
        q.noalias() -= u1 * leak;
        DenseMatrix again_r;
        DenseMatrix again_q;
        householder_in_place(q, again_q, again_r);
        overlap += leak * rf;
        rf = again_r * rf;
        q = std::move(again_q);
    }

    DenseMatrix e = DenseMatrix::Zero(r1 + r2, r1 + r2);
    e.topLeftCorner(r1, r1) = s1.asDiagonal();
    e.topRightCorner(r1, r2) = overlap * s2.asDiagonal();
    e.bottomRightCorner(r2, r2) = rf * s2.asDiagonal();

    const TruncatedFactor inner = dense_svd(e);
    Index nonzero = 0;
    const double cut = inner.sigma.size() > 0 ? kZeroSigmaTolerance * inner.sigma(0) : 0.0;
    while (nonzero < inner.sigma.size() && inner.sigma(nonzero) > cut)
        ++nonzero;
    const Index keep = std::min(r, nonzero);

    // [U1 Uo] U_E without forming [U1 Uo]
    TruncatedFactor out;
    out.u.noalias() = u1 * inner.u.topLeftCorner(r1, keep);
    out.u.noalias() += q * inner.u.bottomLeftCorner(r2, keep);
    out.sigma = inner.sigma.head(keep);
    normalize_signs(out.u);
    return out;
}

}  // namespace

TruncatedFactor block_merge(const TruncatedFactor& f1, const TruncatedFactor& f2, Index r)
{
    check_merge_args(f1, f2, r);
    if (f2.empty())
        return left_only(f1, r);
    if (f1.empty())
        return left_only(f2, r);
    const Index r2 = std::min(r, f2.modes());
    return merge_core(f1, f2.u.leftCols(r2), f2.sigma.head(r2), r);
}

TruncatedFactor block_merge(const TruncatedFactor& f1, TruncatedFactor&& f2, Index r)
{
    check_merge_args(f1, f2, r);
    if (f2.empty())
        return left_only(f1, r);
    if (f1.empty())
        return left_only(f2, r);
    const Index r2 = std::min(r, f2.modes());
    DenseMatrix comp = r2 == f2.u.cols() ? std::move(f2.u) : DenseMatrix(f2.u.leftCols(r2));
    const Vector s2 = f2.sigma.head(r2);
    f2 = TruncatedFactor{};
    return merge_core(f1, std::move(comp), s2, r);
}

TruncatedFactor merge_chain(std::span<const TruncatedFactor> factors, Index r)
{
    if (factors.empty())
        throw ParameterError("merge_chain: empty factor list");
    TruncatedFactor acc = left_only(factors.front(), r);
    for (std::size_t i = 1; i < factors.size(); ++i)
        acc = block_merge(acc, factors[i], r);
    return acc;
}

MergeBound mat_error_bound(const MergeBoundInput& input)
{
    if (input.partitions < 1)
        throw ParameterError("mat_error_bound: P must be >= 1");
    if (!(input.sigma_r_plus_1 >= 0.0))
        throw ParameterError("mat_error_bound: sigma must be nonnegative");
    MergeBound out;
    if (input.partitions > 60) {
        out.saturated = true;
        out.value = input.sigma_r_plus_1 == 0.0 ? 0.0 : std::numeric_limits<double>::max();
        return out;
    }
    const double factor = std::ldexp(1.0, static_cast<int>(input.partitions + 1)) - 3.0;
    out.value = factor * input.sigma_r_plus_1;
    return out;
}

double mat_flops_estimate(double m, double n, double partitions)
{
    if (!(m >= 1.0 && n >= 1.0 && partitions >= 1.0))
        throw ParameterError("mat_flops_estimate: m, n, P must be >= 1");
    return 14.0 * m * n * n / partitions + 192.0 * n * n * n / (partitions * partitions);
}

}  // namespace podsketch
