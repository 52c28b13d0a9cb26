#include "podsketch/isma.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "podsketch/error.hpp"
#include "podsketch/gram.hpp"
#include "podsketch/merge.hpp"

namespace podsketch {

std::string to_string(Strategy s)
{
    switch (s) {
    case Strategy::l2n: return "l2n";
    case Strategy::unf: return "unf";
    case Strategy::ort: return "ort";
    case Strategy::ls: return "ls";
    }
    return "?";
}

std::string to_string(Criterion c)
{
    return c == Criterion::modes ? "modes" : "subspace";
}

std::string to_string(FinalizeMode f)
{
    switch (f) {
    case FinalizeMode::automatic: return "auto";
    case FinalizeMode::always: return "always";
    case FinalizeMode::never: return "never";
    }
    return "?";
}

Strategy parse_strategy(const std::string& text)
{
    if (text == "l2n") return Strategy::l2n;
    if (text == "unf") return Strategy::unf;
    if (text == "ort") return Strategy::ort;
    if (text == "ls") return Strategy::ls;
    throw ParameterError("unknown strategy '" + text + "' (expected l2n, unf, ort or ls)");
}

Criterion parse_criterion(const std::string& text)
{
    if (text == "modes") return Criterion::modes;
    if (text == "subspace") return Criterion::subspace;
    throw ParameterError("unknown criterion '" + text + "' (expected modes or subspace)");
}

std::int64_t IsmaConfig::column_budget() const
{
    if (columns_per_round)
        return *columns_per_round;
    return rows ? ctsvd_sample_count(k, epsilon, delta) : ltsvd_sample_count(k, epsilon, delta);
}

std::int64_t IsmaConfig::row_budget() const
{
    if (!rows)
        return 0;
    if (rows_per_round)
        return *rows_per_round;
    return ctsvd_sample_count(k, epsilon, delta);
}

void IsmaConfig::validate() const
{
    if (k < 1)
        throw ParameterError("k must be >= 1");
    if (merge_rank() < k)
        throw ParameterError("merge rank r must be >= k");
    if (!(tau >= 0.0 && tau <= 1.0))
        throw ParameterError("tau must lie in [0, 1]");
    if (strategy == Strategy::ls && !rows)
        throw ParameterError("strategy ls samples rows by leverage scores; enable row sampling");
    if (columns_per_round && *columns_per_round < 1)
        throw ParameterError("columns per round must be >= 1");
    if (rows_per_round && *rows_per_round < 1)
        throw ParameterError("rows per round must be >= 1");
    if (!columns_per_round || (rows && !rows_per_round)) {
        // validates epsilon and delta through the count formulas
        (void)column_budget();
        (void)row_budget();
    }
}

std::int64_t IsmaResult::total_distinct_columns() const
{
    std::int64_t total = 0;
    for (const auto& t : traces)
        total += t.distinct_columns;
    return total;
}

std::optional<UpdateResult> get_update(const DenseMatrix& a, const std::vector<Index>& remaining,
                                       const Distribution& dist, std::int64_t c, std::int64_t w, bool rows,
                                       const DenseMatrix* leverage_basis, Index r, Rng& rng)
{
    if (remaining.empty())
        return std::nullopt;
    if (dist.size() != remaining.size())
        throw ParameterError("get_update: distribution is not over the remaining columns");

    const SampleDraw draw = sample_with_replacement(dist, c, rng);

    UpdateResult out;
    out.drawn = draw.unique_indices;
    out.remaining.reserve(remaining.size() - std::min(remaining.size(), out.drawn.size()));
    std::set_difference(remaining.begin(), remaining.end(), out.drawn.begin(), out.drawn.end(),
                        std::back_inserter(out.remaining));

    if (!rows) {
        out.factor = factor_from_gram(gram_of_columns(a, out.drawn), a, out.drawn, r);
        out.factor.v.reset();
        return out;
    }

    DenseMatrix d(a.rows(), static_cast<Index>(out.drawn.size()));
    for (std::size_t j = 0; j < out.drawn.size(); ++j)
        d.col(static_cast<Index>(j)) = a.col(out.drawn[j]);

    std::optional<Distribution> row_dist;
    try {
        row_dist.emplace(leverage_basis ? leverage_distribution(*leverage_basis) : row_norm_distribution(d));
    } catch (const DegenerateDistribution&) {
        out.factor = TruncatedFactor::empty_factor(a.rows());
        return out;
    }
    const SampleDraw row_draw = sample_with_replacement(*row_dist, w, rng);
    out.distinct_rows = static_cast<std::int64_t>(row_draw.distinct());
    const DenseMatrix y = scale_sampled_rows(d, row_draw, *row_dist, w);
    out.factor = factor_from_gram(gram_of(y), d, r);
    out.factor.v.reset();
    return out;
}

std::vector<double> convergence_cosines(const TruncatedFactor& prev, const TruncatedFactor& next, Index k,
                                        Criterion criterion)
{
    std::vector<double> out(static_cast<std::size_t>(std::max<Index>(k, 0)), 0.0);
    const Index kp = std::min(k, prev.modes());
    const Index kn = std::min(k, next.modes());
    if (kp == 0 || kn == 0)
        return out;
    if (prev.rows() != next.rows())
        throw ParameterError("convergence_cosines: factors have different row counts");

    if (criterion == Criterion::modes) {
        for (Index i = 0; i < std::min(kp, kn); ++i) {
            const double c = std::abs(prev.u.col(i).dot(next.u.col(i)));
            out[static_cast<std::size_t>(i)] = std::clamp(c, 0.0, 1.0);
        }
        return out;
    }
    const DenseMatrix cross = prev.u.leftCols(kp).transpose() * next.u.leftCols(kn);
    const Vector s = Eigen::JacobiSVD<DenseMatrix>(cross).singularValues();
    for (Index i = 0; i < s.size(); ++i)
        out[static_cast<std::size_t>(i)] = std::clamp(s(i), 0.0, 1.0);
    return out;
}

TruncatedFactor finalize_factor(const DenseMatrix& a, const TruncatedFactor& factor)
{
    if (factor.empty()) {
        TruncatedFactor out = TruncatedFactor::empty_factor(a.rows());
        out.v = DenseMatrix(a.cols(), 0);
        return out;
    }
    if (factor.rows() != a.rows())
        throw ParameterError("finalize_factor: factor row count does not match matrix");
    const QrResult qr = thin_qr(a.transpose() * factor.u);
    const TruncatedFactor inner = dense_svd(qr.r);
    TruncatedFactor out;
    out.u = factor.u * (*inner.v);
    out.sigma = inner.sigma;
    DenseMatrix v = qr.q * inner.u;
    normalize_signs(out.u, &v);
    out.v = std::move(v);
    return out;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

bool all_at_least(const std::vector<double>& values, double tau)
{
    return std::all_of(values.begin(), values.end(), [tau](double x) { return x >= tau; });
}

TruncatedFactor cut_zero_modes(TruncatedFactor f)
{
    if (f.empty())
        return f;
    const double cut = kZeroSigmaTolerance * f.sigma(0);
    Index keep = 0;
    while (keep < f.modes() && f.sigma(keep) > cut)
        ++keep;
    return f.leading(keep);
}

Distribution strategy_distribution(const DenseMatrix& a, const IsmaConfig& config,
                                   const std::vector<Index>& remaining, const std::vector<double>& column_norms,
                                   const TruncatedFactor& current)
{
    switch (config.strategy) {
    case Strategy::l2n: {
        std::vector<double> weights;
        weights.reserve(remaining.size());
        for (Index i : remaining)
            weights.push_back(column_norms[static_cast<std::size_t>(i)]);
        try {
            return Distribution(remaining, std::move(weights));
        } catch (const DegenerateDistribution&) {
            return uniform_distribution(remaining);
        }
    }
    case Strategy::ort:
        try {
            return residual_distribution(a, current.u, remaining);
        } catch (const DegenerateDistribution&) {
            return uniform_distribution(remaining);
        }
    case Strategy::unf:
    case Strategy::ls:
        break;
    }
    return uniform_distribution(remaining);
}

}  // namespace

IsmaResult isma_run(const DenseMatrix& a, const IsmaConfig& config)
{
    config.validate();
    check_finite(a);
    const Index m = a.rows();
    const Index n = a.cols();
    if (config.k > std::min(m, n))
        throw ParameterError("k = " + std::to_string(config.k) + " exceeds min(m, n) = " +
                             std::to_string(std::min(m, n)));

    const Index k = config.k;
    const Index r = config.merge_rank();
    const std::int64_t c = config.column_budget();
    const std::int64_t w = config.row_budget();

    IsmaResult result;
    result.columns_per_round = c;
    result.rows_per_round = w;
    Rng rng(config.seed);

    std::vector<double> column_norms(static_cast<std::size_t>(n));
    for (Index j = 0; j < n; ++j)
        column_norms[static_cast<std::size_t>(j)] = a.col(j).squaredNorm();

    std::vector<Index> remaining = all_indices(n);

    // first round: column norms (and row norms of the sample)
    auto start = Clock::now();
    const Distribution first_dist = column_norm_distribution(a, remaining);
    std::optional<UpdateResult> update = get_update(a, remaining, first_dist, c, w, config.rows, nullptr, r, rng);
    TruncatedFactor current = std::move(update->factor);
    if (config.rows && !current.empty()) {
        // u_i = D v_i / sigma_i is not orthonormal; re-factor U diag(sigma) = D V
        const Orthonormalized ortho = orthonormalize(current.u * current.sigma.asDiagonal());
        current.u = ortho.q;
        current.sigma = ortho.s;
        current = cut_zero_modes(std::move(current));
    }
    remaining = std::move(update->remaining);
    {
        IterationTrace trace;
        trace.iteration = 0;
        trace.distinct_columns = static_cast<std::int64_t>(update->drawn.size());
        trace.distinct_rows = update->distinct_rows;
        trace.remaining = static_cast<std::int64_t>(remaining.size());
        trace.columns = std::move(update->drawn);
        trace.seconds = seconds_since(start);
        result.traces.push_back(std::move(trace));
    }

    std::vector<double> cosines;
    bool iterated = false;
    while (!remaining.empty() && (!iterated || !all_at_least(cosines, config.tau))) {
        start = Clock::now();
        const Distribution dist = strategy_distribution(a, config, remaining, column_norms, current);

        std::optional<DenseMatrix> basis;
        if (config.rows && config.strategy == Strategy::ls && !current.empty())
            basis = current.u.leftCols(std::min(k, current.modes()));

        update = get_update(a, remaining, dist, c, w, config.rows, basis ? &*basis : nullptr, r, rng);
        TruncatedFactor merged = block_merge(current, std::move(update->factor), r);
        cosines = convergence_cosines(current, merged, k, config.criterion);
        current = std::move(merged);
        remaining = std::move(update->remaining);
        iterated = true;

        IterationTrace trace;
        trace.iteration = static_cast<std::int64_t>(result.traces.size());
        trace.distinct_columns = static_cast<std::int64_t>(update->drawn.size());
        trace.distinct_rows = update->distinct_rows;
        trace.remaining = static_cast<std::int64_t>(remaining.size());
        trace.cosines = cosines;
        trace.columns = std::move(update->drawn);
        trace.seconds = seconds_since(start);
        result.traces.push_back(std::move(trace));
    }

    result.exhausted = remaining.empty();
    result.converged = iterated && all_at_least(cosines, config.tau);

    bool finalize = false;
    switch (config.finalize) {
    case FinalizeMode::always: finalize = true; break;
    case FinalizeMode::never: finalize = false; break;
    case FinalizeMode::automatic: finalize = result.converged && !result.exhausted; break;
    }
    if (finalize) {
        current = finalize_factor(a, current);
        result.finalized = true;
    }
    result.factor = std::move(current);
    return result;
}

}  // namespace podsketch
