#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "podsketch/error.hpp"
#include "podsketch/matrix.hpp"
#include "podsketch/quality.hpp"
#include "podsketch/sampling.hpp"
#include "test_support.hpp"

namespace pt = podsketch::testing;
using namespace podsketch;

namespace {

double weight_sum(const Distribution& d)
{
    return std::accumulate(d.weights().begin(), d.weights().end(), 0.0);
}

// Rebuilds the with-duplicates sample C draw by draw from the counts.
DenseMatrix duplicated_columns(const DenseMatrix& a, const SampleDraw& draw, const Distribution& dist,
                               std::int64_t c)
{
    DenseMatrix out(a.rows(), draw.total);
    Index col = 0;
    for (std::size_t j = 0; j < draw.distinct(); ++j) {
        const double p = dist.weights()[draw.positions[j]];
        for (std::int64_t t = 0; t < draw.counts[j]; ++t)
            out.col(col++) = a.col(draw.unique_indices[j]) / std::sqrt(static_cast<double>(c) * p);
    }
    return out;
}

}  // namespace

TEST(DistributionTest, NormalizesAndValidates)
{
    const Distribution d({0, 1, 2}, {1.0, 1.0, 2.0});
    EXPECT_DOUBLE_EQ(d.weights()[2], 0.5);
    EXPECT_THROW(Distribution({0, 0}, {1.0, 1.0}), ParameterError);
    EXPECT_THROW(Distribution({0, 1}, {1.0, -1.0}), ParameterError);
    EXPECT_THROW(Distribution({0, 1}, {1.0, std::nan("")}), ParameterError);
    EXPECT_THROW(Distribution({}, {}), ParameterError);
    EXPECT_THROW(Distribution({0, 1}, {0.0, 0.0}), DegenerateDistribution);
}

TEST(ColumnNorm, WeightsAreSquaredNorms)
{
    DenseMatrix a(2, 2);
    a << 3, 0, 4, 1;  // column norms 5 and 1
    const auto idx = all_indices(2);
    const auto d = column_norm_distribution(a, idx);
    EXPECT_NEAR(d.weights()[0], 25.0 / 26.0, 1e-15);
    EXPECT_NEAR(d.weights()[1], 1.0 / 26.0, 1e-15);
}

TEST(ColumnNorm, ZeroMatrixIsDegenerate)
{
    const auto idx = all_indices(3);
    EXPECT_THROW(column_norm_distribution(DenseMatrix::Zero(4, 3), idx), DegenerateDistribution);
}

TEST(ColumnNorm, SubsetRenormalizes)
{
    const DenseMatrix a = pt::gaussian(5, 6, 3);
    const std::vector<Index> subset{1, 4};
    const auto d = column_norm_distribution(a, subset);
    const double total = a.col(1).squaredNorm() + a.col(4).squaredNorm();
    EXPECT_NEAR(d.weights()[0], a.col(1).squaredNorm() / total, 1e-15);
    EXPECT_NEAR(weight_sum(d), 1.0, 1e-15);
}

TEST(Uniform, TenCandidatesSumToOne)
{
    const auto idx = all_indices(10);
    const auto d = uniform_distribution(idx);
    EXPECT_DOUBLE_EQ(weight_sum(d), 1.0);
    EXPECT_DOUBLE_EQ(d.weights()[3], 0.1);
}

TEST(Residual, SpannedColumnHasZeroWeight)
{
    DenseMatrix a = pt::gaussian(6, 3, 1);
    DenseMatrix u = a.col(0).normalized();
    const auto idx = all_indices(3);
    const auto d = residual_distribution(a, u, idx);
    EXPECT_NEAR(d.weights()[0], 0.0, 1e-15);
}

TEST(Residual, EmptyBasisMatchesColumnNorms)
{
    const DenseMatrix a = pt::gaussian(6, 4, 2);
    const auto idx = all_indices(4);
    const auto d = residual_distribution(a, DenseMatrix(6, 0), idx);
    const auto e = column_norm_distribution(a, idx);
    for (std::size_t i = 0; i < 4; ++i)
        EXPECT_NEAR(d.weights()[i], e.weights()[i], 1e-15);
}

TEST(Residual, MatchesBruteForce)
{
    const DenseMatrix a = pt::gaussian(30, 8, 5);
    const auto exact = pt::jacobi_svd(a);
    const DenseMatrix u = exact.u.leftCols(2);
    const auto idx = all_indices(8);
    const auto d = residual_distribution(a, u, idx);
    std::vector<double> brute(8);
    double total = 0.0;
    for (Index i = 0; i < 8; ++i) {
        pt::Vec r = a.col(i);
        for (Index j = 0; j < 2; ++j)
            r -= u.col(j).dot(a.col(i)) * u.col(j);
        brute[static_cast<std::size_t>(i)] = r.squaredNorm();
        total += r.squaredNorm();
    }
    for (std::size_t i = 0; i < 8; ++i)
        EXPECT_NEAR(d.weights()[i], brute[i] / total, 1e-12);
}

TEST(Residual, FullyCapturedIsDegenerate)
{
    const DenseMatrix a = pt::with_spectrum(10, 6, pt::linear_spectrum(2), 4);
    const auto exact = pt::jacobi_svd(a);
    const auto idx = all_indices(6);
    EXPECT_THROW(residual_distribution(a, exact.u.leftCols(2), idx), DegenerateDistribution);
}

TEST(Leverage, IdentityColumns)
{
    const DenseMatrix u = DenseMatrix::Identity(5, 5).leftCols(2);
    const auto d = leverage_distribution(u);
    EXPECT_DOUBLE_EQ(d.weights()[0], 0.5);
    EXPECT_DOUBLE_EQ(d.weights()[1], 0.5);
    EXPECT_DOUBLE_EQ(d.weights()[4], 0.0);
}

TEST(Leverage, SquareOrthogonalIsUniform)
{
    const auto d = leverage_distribution(pt::random_orthonormal(6, 6, 3));
    for (double w : d.weights())
        EXPECT_NEAR(w, 1.0 / 6.0, 1e-12);
}

TEST(Leverage, RandomSumsToOne)
{
    const auto d = leverage_distribution(pt::random_orthonormal(20, 3, 8));
    EXPECT_NEAR(weight_sum(d), 1.0, 1e-12);
}

TEST(RowNorm, NormsThreeAndFour)
{
    DenseMatrix d(2, 2);
    d << 3, 0, 0, 4;
    const auto dist = row_norm_distribution(d);
    EXPECT_NEAR(dist.weights()[0], 9.0 / 25.0, 1e-15);
    EXPECT_NEAR(dist.weights()[1], 16.0 / 25.0, 1e-15);
}

TEST(RowNorm, EqualsColumnNormOfTranspose)
{
    const DenseMatrix d = pt::gaussian(7, 3, 9);
    const auto r = row_norm_distribution(d);
    const DenseMatrix dt = d.transpose();
    const auto idx = all_indices(7);
    const auto c = column_norm_distribution(dt, idx);
    for (std::size_t i = 0; i < 7; ++i)
        EXPECT_NEAR(r.weights()[i], c.weights()[i], 1e-15);
}

TEST(Sample, SingleCandidate)
{
    Rng rng(1);
    const Distribution d({4}, {1.0});
    const auto draw = sample_with_replacement(d, 5, rng);
    ASSERT_EQ(draw.distinct(), 1u);
    EXPECT_EQ(draw.unique_indices[0], 4);
    EXPECT_EQ(draw.counts[0], 5);
    EXPECT_EQ(draw.total, 5);
}

TEST(Sample, CountOne)
{
    Rng rng(2);
    const auto idx = all_indices(10);
    const auto draw = sample_with_replacement(uniform_distribution(idx), 1, rng);
    EXPECT_EQ(draw.distinct(), 1u);
    EXPECT_EQ(draw.counts[0], 1);
}

TEST(Sample, EmpiricalFrequency)
{
    Rng rng(3);
    const Distribution d({0, 1}, {0.5, 0.5});
    const auto draw = sample_with_replacement(d, 1000000, rng);
    ASSERT_EQ(draw.distinct(), 2u);
    EXPECT_NEAR(static_cast<double>(draw.counts[0]) / 1e6, 0.5, 0.003);
}

TEST(Sample, NeverDrawsZeroWeight)
{
    Rng rng(4);
    const Distribution d({0, 1, 2, 3}, {0.0, 1.0, 0.0, 1.0});
    const auto draw = sample_with_replacement(d, 10000, rng);
    for (Index i : draw.unique_indices)
        EXPECT_TRUE(i == 1 || i == 3);
}

TEST(Sample, DeterministicForSeed)
{
    const auto idx = all_indices(50);
    const DenseMatrix a = pt::gaussian(5, 50, 1);
    const auto d = column_norm_distribution(a, idx);
    Rng r1(77);
    Rng r2(77);
    const auto x = sample_with_replacement(d, 40, r1);
    const auto y = sample_with_replacement(d, 40, r2);
    EXPECT_EQ(x.unique_indices, y.unique_indices);
    EXPECT_EQ(x.counts, y.counts);
    EXPECT_EQ(x.positions, y.positions);
    EXPECT_TRUE(std::is_sorted(x.unique_indices.begin(), x.unique_indices.end()));
}

TEST(ScaleColumns, UniformSingleColumn)
{
    DenseMatrix a(3, 1);
    a << 1, 2, 3;
    Rng rng(5);
    const Distribution d({0}, {1.0});
    const auto draw = sample_with_replacement(d, 4, rng);
    const DenseMatrix dd = scale_sampled_columns(a, draw, d, 4, true);
    ASSERT_EQ(dd.cols(), 1);
    EXPECT_NEAR((dd - a).norm(), 0.0, 1e-15);
}

TEST(ScaleColumns, TwiceUnderHalf)
{
    DenseMatrix a = DenseMatrix::Identity(2, 2);
    SampleDraw draw;
    draw.unique_indices = {1};
    draw.counts = {2};
    draw.positions = {1};
    draw.total = 2;
    const Distribution d({0, 1}, {0.5, 0.5});
    const DenseMatrix dd = scale_sampled_columns(a, draw, d, 2, true);
    EXPECT_NEAR(dd(1, 0), std::sqrt(2.0), 1e-15);
    const DenseMatrix cc = scale_sampled_columns(a, draw, d, 2, false);
    ASSERT_EQ(cc.cols(), 2);
    EXPECT_NEAR(cc(1, 0), 1.0, 1e-15);
}

// D D^T = C C^T for random draws; singular values agree.
TEST(ScaleColumns, GramPreservationProperty)
{
    for (std::uint64_t trial = 0; trial < 50; ++trial) {
        const DenseMatrix a = pt::gaussian(12, 30, 100 + trial);
        const auto idx = all_indices(30);
        const auto dist = column_norm_distribution(a, idx);
        Rng rng(trial);
        const std::int64_t c = 25;
        const auto draw = sample_with_replacement(dist, c, rng);
        const DenseMatrix d = scale_sampled_columns(a, draw, dist, c, true);
        const DenseMatrix cdup = scale_sampled_columns(a, draw, dist, c, false);
        const DenseMatrix oracle = duplicated_columns(a, draw, dist, c);
        EXPECT_LE((cdup - oracle).norm(), 1e-14 * oracle.norm());
        const DenseMatrix ccT = oracle * oracle.transpose();
        EXPECT_LE((d * d.transpose() - ccT).norm(), 1e-12 * ccT.norm());
        const auto sd = pt::jacobi_svd(d.transpose());
        const auto sc = pt::jacobi_svd(oracle.transpose());
        for (Index i = 0; i < std::min<Index>(sd.sigma.size(), 12); ++i)
            EXPECT_NEAR(sd.sigma(i), sc.sigma(i), 1e-12 * sc.sigma(0));
    }
}

TEST(ScaleRows, OneRowDrawnWTimes)
{
    DenseMatrix c(1, 3);
    c << 1, 2, 3;
    Rng rng(1);
    const Distribution d({0}, {1.0});
    const auto draw = sample_with_replacement(d, 6, rng);
    const DenseMatrix y = scale_sampled_rows(c, draw, d, 6);
    EXPECT_NEAR((y - c).norm(), 0.0, 1e-15);
}

TEST(ScaleRows, OnceUnderQuarter)
{
    DenseMatrix c = DenseMatrix::Identity(4, 4);
    SampleDraw draw;
    draw.unique_indices = {2};
    draw.counts = {1};
    draw.positions = {2};
    draw.total = 1;
    const Distribution d({0, 1, 2, 3}, {0.25, 0.25, 0.25, 0.25});
    const DenseMatrix y = scale_sampled_rows(c, draw, d, 2);
    EXPECT_NEAR(y(0, 2), std::sqrt(2.0), 1e-15);
}

// Y^T Y = W^T W, so sigma and right vectors agree, and the left vectors of X
// and W span the same subspace.
TEST(ScaleRows, DedupEquivalenceProperty)
{
    for (std::uint64_t trial = 0; trial < 30; ++trial) {
        const DenseMatrix c = pt::gaussian(40, 6, 500 + trial);
        const auto dist = row_norm_distribution(c);
        Rng rng(trial + 9);
        const std::int64_t w = 30;
        const auto draw = sample_with_replacement(dist, w, rng);
        const DenseMatrix y = scale_sampled_rows(c, draw, dist, w);
        const DenseMatrix wdup = scale_sampled_rows_with_duplicates(c, draw, dist, w);
        const DenseMatrix ytY = y.transpose() * y;
        EXPECT_LE((ytY - wdup.transpose() * wdup).norm(), 1e-12 * ytY.norm());
        const auto sy = pt::jacobi_svd(y);
        const auto sw = pt::jacobi_svd(wdup);
        for (Index i = 0; i < 6; ++i)
            EXPECT_NEAR(sy.sigma(i), sw.sigma(i), 1e-12 * sw.sigma(0));
        for (double x : pt::principal_angles_oracle(sy.v.leftCols(3), sw.v.leftCols(3)))
            EXPECT_LT(x, 1e-6);
    }
}

TEST(SampleCounts, PreRegisteredValues)
{
    EXPECT_EQ(ltsvd_sample_count(10, 0.7, 0.45), 1016);
    EXPECT_NEAR(ltsvd_sample_count_raw(10, 0.7, 0.45), 1015.7538403530886, 1e-9);
    EXPECT_EQ(ctsvd_sample_count(2, 1.0, 0.8), 16);
    EXPECT_NEAR(ctsvd_sample_count_raw(2, 1.0, 0.8), 15.323009024144549, 1e-11);
}

TEST(SampleCounts, Scalings)
{
    EXPECT_NEAR(ltsvd_sample_count_raw(1, 1.0, 1.0 - 1e-12), 4.0, 1e-4);
    EXPECT_NEAR(ltsvd_sample_count_raw(6, 0.5, 0.3), 2.0 * ltsvd_sample_count_raw(3, 0.5, 0.3), 1e-9);
    EXPECT_NEAR(ctsvd_sample_count_raw(3, 0.2, 0.5), 256.0 * ctsvd_sample_count_raw(3, 0.8, 0.5), 1e-6);
    EXPECT_NEAR(ctsvd_sample_count_raw(6, 0.8, 0.5), 4.0 * ctsvd_sample_count_raw(3, 0.8, 0.5), 1e-9);
}

TEST(SampleCounts, RejectBadParameters)
{
    EXPECT_THROW(ltsvd_sample_count(10, 0.7, 1.0), ParameterError);
    EXPECT_THROW(ltsvd_sample_count(10, 0.0, 0.5), ParameterError);
    EXPECT_THROW(ctsvd_sample_count(0, 0.7, 0.5), ParameterError);
    EXPECT_THROW(ctsvd_sample_count(1, 0.7, 0.0), ParameterError);
}
