#include "podsketch/gram.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "podsketch/error.hpp"

namespace podsketch {

namespace {

constexpr Index kRowChunk = 256;

struct GramModes {
    Vector sigma;
    DenseMatrix v;
};

GramModes leading_eigenpairs(const DenseMatrix& gram, Index max_modes)
{
    const Index dim = gram.rows();
    GramModes out;
    out.v.resize(dim, 0);
    if (dim == 0 || max_modes <= 0)
        return out;

    Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(gram);
    if (eig.info() != Eigen::Success)
        throw NumericalError("factor_from_gram: eigensolver did not converge");

    // ascending -> take from the back
    const Vector& lambda = eig.eigenvalues();
    const double top = lambda(dim - 1);
    if (!(top > 0.0))
        return out;
    const double cut = gram_rank_tolerance(dim) * top;

    Index count = 0;
    while (count < std::min(max_modes, dim) && lambda(dim - 1 - count) > cut)
        ++count;

    out.sigma.resize(count);
    out.v.resize(dim, count);
    for (Index i = 0; i < count; ++i) {
        out.sigma(i) = std::sqrt(lambda(dim - 1 - i));
        out.v.col(i) = eig.eigenvectors().col(dim - 1 - i);
    }
    return out;
}

TruncatedFactor finish_factor(DenseMatrix u, GramModes modes)
{
    TruncatedFactor out;
    for (Index i = 0; i < modes.sigma.size(); ++i)
        u.col(i) /= modes.sigma(i);
    normalize_signs(u, &modes.v);
    out.u = std::move(u);
    out.sigma = std::move(modes.sigma);
    out.v = std::move(modes.v);
    return out;
}

void gather_rows(const DenseMatrix& a, std::span<const Index> columns, Index first, Index count, DenseMatrix& buf)
{
    buf.resize(count, static_cast<Index>(columns.size()));
    for (std::size_t j = 0; j < columns.size(); ++j)
        buf.col(static_cast<Index>(j)) = a.col(columns[j]).segment(first, count);
}

void check_columns(const DenseMatrix& a, std::span<const Index> columns)
{
    for (Index j : columns)
        if (j < 0 || j >= a.cols())
            throw ParameterError("column index " + std::to_string(j) + " out of range");
}

}  // namespace

TruncatedFactor factor_from_gram(const DenseMatrix& gram, const DenseMatrix& lift, Index max_modes)
{
    const Index dim = gram.rows();
    if (gram.cols() != dim || lift.cols() != dim)
        throw ParameterError("factor_from_gram: shape mismatch");
    GramModes modes = leading_eigenpairs(gram, max_modes);
    if (modes.sigma.size() == 0)
        return TruncatedFactor::empty_factor(lift.rows());
    DenseMatrix u;
    u.noalias() = lift * modes.v;
    return finish_factor(std::move(u), std::move(modes));
}

TruncatedFactor factor_from_gram(const DenseMatrix& gram, const DenseMatrix& a, std::span<const Index> columns,
                                 Index max_modes)
{
    const Index dim = gram.rows();
    if (gram.cols() != dim || static_cast<Index>(columns.size()) != dim)
        throw ParameterError("factor_from_gram: shape mismatch");
    check_columns(a, columns);
    GramModes modes = leading_eigenpairs(gram, max_modes);
    if (modes.sigma.size() == 0)
        return TruncatedFactor::empty_factor(a.rows());
    DenseMatrix u(a.rows(), modes.sigma.size());
    DenseMatrix buf;
    for (Index first = 0; first < a.rows(); first += kRowChunk) {
        const Index count = std::min(kRowChunk, a.rows() - first);
        gather_rows(a, columns, first, count, buf);
        u.middleRows(first, count).noalias() = buf * modes.v;
    }
    return finish_factor(std::move(u), std::move(modes));
}

DenseMatrix gram_of(const DenseMatrix& b)
{
    DenseMatrix gram = DenseMatrix::Zero(b.cols(), b.cols());
    gram.selfadjointView<Eigen::Lower>().rankUpdate(b.transpose());
    gram.triangularView<Eigen::StrictlyUpper>() = gram.transpose();
    return gram;
}

DenseMatrix gram_of_columns(const DenseMatrix& a, std::span<const Index> columns)
{
    check_columns(a, columns);
    const auto dim = static_cast<Index>(columns.size());
    DenseMatrix gram = DenseMatrix::Zero(dim, dim);
    DenseMatrix buf;
    for (Index first = 0; first < a.rows(); first += kRowChunk) {
        const Index count = std::min(kRowChunk, a.rows() - first);
        gather_rows(a, columns, first, count, buf);
        gram.selfadjointView<Eigen::Lower>().rankUpdate(buf.transpose());
    }
    gram.triangularView<Eigen::StrictlyUpper>() = gram.transpose();
    return gram;
}

}  // namespace podsketch
