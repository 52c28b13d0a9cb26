#include "podsketch/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>

#include <CLI11.hpp>

#include "podsketch/baselines.hpp"
#include "podsketch/error.hpp"
#include "podsketch/isma.hpp"
#include "podsketch/ooc.hpp"
#include "podsketch/podm.hpp"
#include "podsketch/quality.hpp"
#include "podsketch/report.hpp"
#include "podsketch/sampling.hpp"

namespace podsketch {

namespace {

struct ConvertOptions {
    std::string input;
    std::string format;
    std::string out;
    bool center = false;
};

struct RunOptions {
    std::string algorithm;
    std::string matrix;
    std::string out;
    std::string reference;
    std::string save_factor;
    std::int64_t k = 10;
    std::optional<std::int64_t> r;
    double epsilon = 0.7;
    double delta = 0.6;
    double tau = 0.99;
    std::string strategy = "unf";
    bool rows = false;
    std::string criterion = "modes";
    std::optional<std::uint64_t> seed;
    std::int64_t blocks = 1;
    bool finalize = false;
    bool no_finalize = false;
    int threads = 1;
    std::optional<std::int64_t> columns;
    bool keep_duplicates = false;
    bool split_budget = false;
    bool center = false;
};

struct CompareOptions {
    std::string first;
    std::string second;
    std::string matrix;
    std::string out;
    std::int64_t k = 1;
};

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag)
{
    if (flag)
        return *flag;
    if (const char* env = std::getenv("PODSKETCH_SEED")) {
        const std::string text(env);
        try {
            std::size_t used = 0;
            const unsigned long long value = std::stoull(text, &used, 10);
            if (used == text.size() && !text.empty() && text.front() != '-')
                return value;
        } catch (const std::exception&) {
        }
        throw ParameterError("PODSKETCH_SEED is not an unsigned integer: '" + text + "'");
    }
    return 0;
}

void emit(const json& report, const std::string& path, std::ostream& out)
{
    const std::string text = report.dump(2) + "\n";
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(path, std::ios::trunc);
    if (!file)
        throw ParameterError("cannot open " + path + " for writing");
    file << text;
    if (!file)
        throw ParameterError("write failed: " + path);
}

// Factor from a PODF file, or the exact factor of a PODM matrix.
TruncatedFactor load_factor(const std::string& path)
{
    switch (sniff_file_kind(path)) {
    case FileKind::podf: return read_podf(path);
    case FileKind::podm: return dense_svd(read_podm(path));
    case FileKind::unknown: break;
    }
    // let the PODM reader produce the precise format error
    (void)read_podm(std::filesystem::path(path));
    throw FormatError("unrecognized factor file " + path, 0);
}

int cmd_convert(const ConvertOptions& opt, std::ostream& out)
{
    std::string format = opt.format;
    if (format.empty())
        format = std::filesystem::path(opt.input).extension() == ".csv" ? "csv" : "podm";
    DenseMatrix a = format == "csv" ? read_csv(std::filesystem::path(opt.input)) : read_podm(opt.input);
    check_finite(a);
    if (opt.center)
        a = mean_center_rows(a);
    write_podm(opt.out, a);
    out << "m " << a.rows() << "\nn " << a.cols() << "\nfrobenius " << std::setprecision(17) << a.norm() << "\n";
    return kExitOk;
}

IsmaConfig make_config(const RunOptions& opt, std::uint64_t seed)
{
    IsmaConfig config;
    config.k = opt.k;
    config.r = opt.r;
    config.epsilon = opt.epsilon;
    config.delta = opt.delta;
    config.tau = opt.tau;
    config.strategy = parse_strategy(opt.strategy);
    config.rows = opt.rows;
    config.criterion = parse_criterion(opt.criterion);
    config.seed = seed;
    config.finalize = opt.finalize ? FinalizeMode::always : opt.no_finalize ? FinalizeMode::never
                                                                            : FinalizeMode::automatic;
    config.columns_per_round = opt.columns;
    return config;
}

json config_to_json(const RunOptions& opt, const IsmaConfig& config, Index m, Index n)
{
    json j;
    j["algorithm"] = opt.algorithm;
    j["matrix"] = opt.matrix;
    j["m"] = m;
    j["n"] = n;
    j["k"] = config.k;
    j["r"] = config.merge_rank();
    j["epsilon"] = config.epsilon;
    j["delta"] = config.delta;
    j["tau"] = config.tau;
    j["strategy"] = to_string(config.strategy);
    j["row_sampling"] = config.rows;
    j["criterion"] = to_string(config.criterion);
    j["seed"] = config.seed;
    j["blocks"] = opt.blocks;
    j["finalize"] = to_string(config.finalize);
    j["threads"] = opt.threads;
    j["dedup"] = !opt.keep_duplicates;
    j["center"] = opt.center;
    if (opt.columns)
        j["columns_per_round"] = *opt.columns;
    if (!opt.reference.empty())
        j["reference"] = opt.reference;
    return j;
}

IterationTrace single_round_trace(const SampledSvd& s)
{
    IterationTrace t;
    t.distinct_columns = static_cast<std::int64_t>(s.distinct_columns);
    t.distinct_rows = static_cast<std::int64_t>(s.distinct_rows);
    return t;
}

int cmd_run(const RunOptions& opt, std::ostream& out, std::ostream& err)
{
    const auto wall_start = std::chrono::steady_clock::now();
    const std::clock_t cpu_start = std::clock();

    if (opt.threads < 1)
        throw ParameterError("--threads must be >= 1");
    Eigen::setNbThreads(opt.threads);

    const std::uint64_t seed = resolve_seed(opt.seed);
    IsmaConfig config = make_config(opt, seed);
    config.validate();
    if (opt.blocks < 1)
        throw ParameterError("--blocks must be >= 1");

    json report;
    TruncatedFactor factor;
    std::vector<IterationTrace> traces;
    std::int64_t passes = 0;
    json outcome = json::object();
    std::optional<DenseMatrix> a;
    Index m = 0;
    Index n = 0;

    if (opt.algorithm == "incremental") {
        if (opt.center)
            throw ParameterError("--center is not available for the one-pass incremental run; convert with --center");
        BlockReader reader(opt.matrix, opt.blocks);
        m = reader.rows();
        n = reader.cols();
        if (config.k > std::min(m, n))
            throw ParameterError("k exceeds min(m, n)");
        IncrementalOptions inc;
        inc.split_column_budget = opt.split_budget;
        IncrementalResult result = incremental_pod(reader, config, inc);
        factor = std::move(result.factor);
        for (std::size_t b = 0; b < result.block_results.size(); ++b) {
            // block-local column numbers -> global ones
            const Index first = reader.block_range(static_cast<std::int64_t>(b)).first;
            for (auto t : result.block_results[b].traces) {
                for (Index& c : t.columns)
                    c += first;
                traces.push_back(std::move(t));
            }
        }
        passes = pass_count(true, config.rows, 0);
        outcome["blocks_read"] = reader.blocks_read();
    } else {
        a = read_podm(opt.matrix);
        if (!a->allFinite())
            throw FormatError("matrix contains non-finite values", kPodmHeaderBytes);
        if (opt.center)
            *a = mean_center_rows(*a);
        m = a->rows();
        n = a->cols();
        if (config.k > std::min(m, n))
            throw ParameterError("k = " + std::to_string(config.k) + " exceeds min(m, n) = " +
                                 std::to_string(std::min(m, n)));

        if (opt.algorithm == "gram") {
            factor = pod_via_gram(*a, std::min<Index>(config.k + 1, std::min(m, n)));
            passes = 2;
        } else if (opt.algorithm == "ltsvd" || opt.algorithm == "ctsvd") {
            Rng rng(seed);
            const Distribution dist = column_norm_distribution(*a, all_indices(n));
            SampledSvd s;
            if (opt.algorithm == "ltsvd") {
                const std::int64_t c = opt.columns.value_or(ltsvd_sample_count(config.k, config.epsilon, config.delta));
                s = ltsvd(*a, dist, config.k, c, rng, !opt.keep_duplicates);
                passes = pass_count(false, false, 1);
                outcome["columns_sampled"] = c;
            } else {
                const std::int64_t c = opt.columns.value_or(ctsvd_sample_count(config.k, config.epsilon, config.delta));
                s = ctsvd(*a, dist, config.k, c, c, config.epsilon, rng, !opt.keep_duplicates);
                passes = pass_count(false, true, 1);
                outcome["columns_sampled"] = c;
                outcome["rows_sampled"] = c;
            }
            outcome["short_rank"] = s.short_rank;
            outcome["empty"] = s.empty;
            traces.push_back(single_round_trace(s));
            factor = std::move(s.factor);
        } else if (opt.algorithm == "isma") {
            IsmaResult result = isma_run(*a, config);
            outcome["converged"] = result.converged;
            outcome["exhausted"] = result.exhausted;
            outcome["finalized"] = result.finalized;
            outcome["columns_per_round"] = result.columns_per_round;
            outcome["rows_per_round"] = result.rows_per_round;
            outcome["total_distinct_columns"] = result.total_distinct_columns();
            passes = pass_count(false, config.rows, static_cast<std::int64_t>(result.traces.size()));
            traces = std::move(result.traces);
            factor = std::move(result.factor);
        } else {
            throw ParameterError("unknown algorithm '" + opt.algorithm + "'");
        }
    }

    report["config"] = config_to_json(opt, config, m, n);
    report["config"]["outcome"] = outcome;
    report["sigma"] = sigma_to_json(factor.sigma.head(std::min<Index>(config.k, factor.modes())));
    report["traces"] = traces_to_json(traces);
    report["passes"] = passes;

    if (!opt.reference.empty()) {
        const TruncatedFactor exact = load_factor(opt.reference);
        if (exact.rows() != m)
            throw ParameterError("reference has " + std::to_string(exact.rows()) + " rows, matrix has " +
                                 std::to_string(m));
        const Index k = config.k;
        if (factor.modes() < k)
            throw ParameterError("run produced only " + std::to_string(factor.modes()) + " modes, fewer than k");
        report["angles"] = angles_to_json(mode_angles(exact, factor, k), principal_angles(exact, factor, k));
        if (a && factor.v && factor.modes() > k)
            report["wedin"] = wedin_to_json(wedin_measure(*a, factor, k));
        else
            err << "note: wedin measure needs V and k+1 modes (use --finalize with isma, or gram)\n";
    }

    if (!opt.save_factor.empty())
        write_podf(opt.save_factor, factor);

    json timing;
    timing["wall_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
    timing["cpu_seconds"] = static_cast<double>(std::clock() - cpu_start) / CLOCKS_PER_SEC;
    report["timing"] = timing;

    emit(report, opt.out, out);
    if (!opt.out.empty())
        out << "wrote " << opt.out << "\n";
    return kExitOk;
}

int cmd_compare(const CompareOptions& opt, std::ostream& out)
{
    const TruncatedFactor first = load_factor(opt.first);
    const TruncatedFactor second = load_factor(opt.second);
    const Index k = opt.k;

    json report;
    report["k"] = k;
    report["first"] = opt.first;
    report["second"] = opt.second;
    report["angles"] = angles_to_json(mode_angles(first, second, k), principal_angles(first, second, k));
    report["ceiling"] = std::sqrt(2.0 * static_cast<double>(k));
    if (!opt.matrix.empty()) {
        const DenseMatrix a = read_podm(opt.matrix);
        report["wedin"] = wedin_to_json(wedin_measure(a, second, k));
    }
    emit(report, opt.out, out);
    return kExitOk;
}

int exit_code_for(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::parameter: return kExitParameter;
    case ErrorKind::format: return kExitFormat;
    case ErrorKind::degenerate: return kExitDegenerate;
    case ErrorKind::numerical: return kExitFailure;
    }
    return kExitFailure;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"podsketch: dominant POD modes by iterative sampling and merging"};
    app.require_subcommand(1);

    ConvertOptions convert;
    auto* convert_cmd = app.add_subcommand("convert", "convert CSV or PODM input to a PODM file");
    convert_cmd->add_option("input", convert.input, "input file")->required();
    convert_cmd->add_option("--format", convert.format, "input format")->check(CLI::IsMember({"csv", "podm"}));
    convert_cmd->add_flag("--center", convert.center, "subtract the row means");
    convert_cmd->add_option("--out", convert.out, "output PODM file")->required();

    RunOptions run;
    auto* run_cmd = app.add_subcommand("run", "compute POD modes and write a JSON report");
    run_cmd->add_option("algorithm", run.algorithm, "gram | ltsvd | ctsvd | isma | incremental")
        ->required()
        ->check(CLI::IsMember({"gram", "ltsvd", "ctsvd", "isma", "incremental"}));
    run_cmd->add_option("matrix", run.matrix, "PODM input")->required();
    run_cmd->add_option("--k", run.k, "number of modes")->check(CLI::PositiveNumber);
    run_cmd->add_option("--r", run.r, "merge rank (default 3k)");
    run_cmd->add_option("--epsilon", run.epsilon, "sampling error parameter");
    run_cmd->add_option("--delta", run.delta, "sampling failure parameter");
    run_cmd->add_option("--tau", run.tau, "convergence tolerance on the cosines");
    run_cmd->add_option("--strategy", run.strategy, "column strategy after the first round")
        ->check(CLI::IsMember({"l2n", "unf", "ort", "ls"}));
    run_cmd->add_flag("--rows", run.rows, "also sample rows (ICRS)");
    run_cmd->add_option("--criterion", run.criterion, "convergence criterion")
        ->check(CLI::IsMember({"modes", "subspace"}));
    run_cmd->add_option("--seed", run.seed, "random seed (falls back to PODSKETCH_SEED, then 0)");
    run_cmd->add_option("--blocks", run.blocks, "column blocks for the incremental run");
    run_cmd->add_option("--reference", run.reference, "PODM matrix or PODF factor to compare against");
    auto* fin = run_cmd->add_flag("--finalize", run.finalize, "always recompute sigma and V at the end");
    run_cmd->add_flag("--no-finalize", run.no_finalize, "never recompute sigma and V")->excludes(fin);
    run_cmd->add_option("--threads", run.threads, "threads for dense kernels");
    run_cmd->add_option("--columns", run.columns, "columns sampled per round (overrides the formula)");
    run_cmd->add_flag("--keep-duplicates", run.keep_duplicates, "ltsvd/ctsvd: keep duplicate samples");
    run_cmd->add_flag("--split-budget", run.split_budget, "incremental: divide the column budget by --blocks");
    run_cmd->add_flag("--center", run.center, "subtract row means before running");
    run_cmd->add_option("--out", run.out, "report file (stdout when omitted)");
    run_cmd->add_option("--save-factor", run.save_factor, "write the factor as PODF");

    CompareOptions compare;
    auto* compare_cmd = app.add_subcommand("compare", "angles and Wedin measure between two factors");
    compare_cmd->add_option("first", compare.first, "reference factor (PODF) or matrix (PODM)")->required();
    compare_cmd->add_option("second", compare.second, "approximate factor (PODF) or matrix (PODM)")->required();
    compare_cmd->add_option("--k", compare.k, "number of modes")->required()->check(CLI::PositiveNumber);
    compare_cmd->add_option("--matrix", compare.matrix, "data matrix for the Wedin measure");
    compare_cmd->add_option("--out", compare.out, "report file (stdout when omitted)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitParameter;
    }

    try {
        if (*convert_cmd)
            return cmd_convert(convert, out);
        if (*run_cmd)
            return cmd_run(run, out, err);
        if (*compare_cmd)
            return cmd_compare(compare, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        if (e.kind() == ErrorKind::degenerate)
            err << "hint: the sampling distribution has zero mass (is the matrix all zeros?)\n";
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitFailure;
}

}  // namespace podsketch
