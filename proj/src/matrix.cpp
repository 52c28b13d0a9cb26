#include "podsketch/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "podsketch/error.hpp"
#include "podsketch/gram.hpp"

namespace podsketch {

TruncatedFactor TruncatedFactor::leading(Index count) const
{
    const Index keep = std::clamp<Index>(count, 0, modes());
    TruncatedFactor out;
    out.u = u.leftCols(keep);
    out.sigma = sigma.head(keep);
    if (v)
        out.v = v->leftCols(keep);
    return out;
}

TruncatedFactor TruncatedFactor::empty_factor(Index rows)
{
    TruncatedFactor out;
    out.u.resize(rows, 0);
    out.sigma.resize(0);
    return out;
}

double gram_rank_tolerance(Index dim)
{
    return std::max(1e-12, 10.0 * static_cast<double>(std::max<Index>(dim, 1)) *
                               std::numeric_limits<double>::epsilon());
}

void check_finite(const DenseMatrix& a)
{
    if (!a.allFinite())
        throw ParameterError("matrix contains NaN or Inf entries");
}

void normalize_signs(DenseMatrix& u, DenseMatrix* v)
{
    for (Index j = 0; j < u.cols(); ++j) {
        if (u.rows() == 0)
            break;
        Index at = 0;
        u.col(j).cwiseAbs().maxCoeff(&at);
        if (u(at, j) < 0.0) {
            u.col(j) *= -1.0;
            if (v && j < v->cols())
                v->col(j) *= -1.0;
        }
    }
}

DenseMatrix mean_center_rows(const DenseMatrix& a)
{
    if (a.size() == 0)
        throw ParameterError("mean_center_rows: empty matrix");
    const Vector means = a.rowwise().mean();
    return a.colwise() - means;
}

TruncatedFactor dense_svd(const DenseMatrix& a)
{
    check_finite(a);
    TruncatedFactor out;
    if (a.size() == 0) {
        out.u.resize(a.rows(), 0);
        out.v = DenseMatrix(a.cols(), 0);
        return out;
    }
    Eigen::BDCSVD<DenseMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success)
        throw NumericalError("dense_svd: SVD backend did not converge");
    out.u = svd.matrixU();
    out.sigma = svd.singularValues();
    DenseMatrix v = svd.matrixV();
    normalize_signs(out.u, &v);
    out.v = std::move(v);
    return out;
}

QrResult thin_qr(const DenseMatrix& a)
{
    const Index m = a.rows();
    const Index n = a.cols();
    if (m < n)
        throw ParameterError("thin_qr: needs rows >= cols");
    QrResult out;
    if (n == 0) {
        out.q.resize(m, 0);
        out.r.resize(0, 0);
        return out;
    }
    Eigen::HouseholderQR<DenseMatrix> qr(a);
    out.q = qr.householderQ() * DenseMatrix::Identity(m, n);
    out.r = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
    // nonnegative diagonal in R
    for (Index j = 0; j < n; ++j) {
        if (out.r(j, j) < 0.0) {
            out.r.row(j) *= -1.0;
            out.q.col(j) *= -1.0;
        }
    }
    return out;
}

TruncatedFactor pod_via_gram(const DenseMatrix& a, Index k)
{
    check_finite(a);
    if (k < 1 || k > std::min(a.rows(), a.cols()))
        throw ParameterError("pod_via_gram: k must lie in [1, min(m, n)], got " + std::to_string(k));
    return factor_from_gram(gram_of(a), a, k);
}

Orthonormalized orthonormalize(const DenseMatrix& u)
{
    const QrResult qr = thin_qr(u);
    Orthonormalized out;
    if (u.cols() == 0) {
        out.q = qr.q;
        out.s.resize(0);
        return out;
    }
    const TruncatedFactor inner = dense_svd(qr.r);
    out.q = qr.q * inner.u;
    out.s = inner.sigma;
    normalize_signs(out.q);
    return out;
}

double max_orthonormality_error(const DenseMatrix& u)
{
    if (u.cols() == 0)
        return 0.0;
    const DenseMatrix gram = u.transpose() * u;
    return (gram - DenseMatrix::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff();
}

}  // namespace podsketch
