#include <gtest/gtest.h>

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include "podsketch/cli.hpp"
#include "podsketch/matrix.hpp"
#include "podsketch/podm.hpp"
#include "podsketch/report.hpp"
#include "test_support.hpp"

namespace pt = podsketch::testing;
using namespace podsketch;

namespace {

struct CliResult {
    int code = 0;
    std::string out;
    std::string err;
};

CliResult cli(const std::vector<std::string>& args)
{
    std::ostringstream out;
    std::ostringstream err;
    CliResult r;
    r.code = run_cli(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

json run_json(std::vector<std::string> args)
{
    const auto r = cli(args);
    EXPECT_EQ(r.code, 0) << r.err;
    return json::parse(r.out);
}

std::string matrix_file(const DenseMatrix& a, const std::string& name)
{
    const auto path = pt::temp_path(name);
    write_podm(path, a);
    return path.string();
}

std::vector<std::vector<Index>> trace_columns(const json& report)
{
    std::vector<std::vector<Index>> out;
    for (const auto& t : report.at("traces"))
        out.push_back(t.at("columns").get<std::vector<Index>>());
    return out;
}

}  // namespace

TEST(CliConvert, CsvLayoutAndSummary)
{
    const auto csv = pt::temp_path("two.csv");
    {
        std::ofstream f(csv);
        f << "1,2\n3,4\n";
    }
    const auto out = pt::temp_path("two.podm");
    const auto r = cli({"convert", csv.string(), "--out", out.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("m 2"), std::string::npos);
    EXPECT_NE(r.out.find("n 2"), std::string::npos);
    const DenseMatrix a = read_podm(out);
    EXPECT_EQ(a(0, 0), 1.0);
    EXPECT_EQ(a(1, 0), 3.0);
    EXPECT_EQ(a(0, 1), 2.0);
    EXPECT_EQ(a(1, 1), 4.0);
}

TEST(CliConvert, CenterConstantMatrixGivesZero)
{
    const auto in = matrix_file(DenseMatrix::Constant(4, 3, 2.5), "const.podm");
    const auto out = pt::temp_path("const_centered.podm");
    ASSERT_EQ(cli({"convert", in, "--format", "podm", "--center", "--out", out.string()}).code, 0);
    EXPECT_EQ(read_podm(out).cwiseAbs().maxCoeff(), 0.0);
}

TEST(CliConvert, RoundTripBitIdentical)
{
    const DenseMatrix a = pt::gaussian(9, 4, 3);
    const auto in = matrix_file(a, "rt_in.podm");
    const auto out = pt::temp_path("rt_out.podm");
    ASSERT_EQ(cli({"convert", in, "--out", out.string()}).code, 0);
    const DenseMatrix b = read_podm(out);
    EXPECT_EQ(std::memcmp(a.data(), b.data(), sizeof(double) * 36), 0);
}

TEST(CliConvert, RaggedCsvIsFormatError)
{
    const auto csv = pt::temp_path("ragged.csv");
    {
        std::ofstream f(csv);
        f << "1,2\n3\n";
    }
    const auto r = cli({"convert", csv.string(), "--out", pt::temp_path("x.podm").string()});
    EXPECT_EQ(r.code, kExitFormat);
    EXPECT_NE(r.err.find("line 2"), std::string::npos);
}

TEST(CliRun, GramOnDiagonal)
{
    DenseMatrix a = DenseMatrix::Zero(3, 3);
    a(0, 0) = 3;
    a(1, 1) = 2;
    a(2, 2) = 1;
    const auto path = matrix_file(a, "diag.podm");
    const json rep = run_json({"run", "gram", path, "--k", "3"});
    EXPECT_TRUE(validate_run_report(rep).empty());
    const auto sigma = rep.at("sigma").get<std::vector<double>>();
    ASSERT_EQ(sigma.size(), 3u);
    EXPECT_NEAR(sigma[0], 3.0, 1e-14);
    EXPECT_NEAR(sigma[1], 2.0, 1e-14);
    EXPECT_NEAR(sigma[2], 1.0, 1e-14);
}

TEST(CliRun, AllAlgorithmsProduceValidReports)
{
    const DenseMatrix a = pt::signal_plus_noise(60, 48, 3, 0.1, 4);
    const auto path = matrix_file(a, "all.podm");
    for (const std::string alg : {"gram", "ltsvd", "ctsvd", "isma", "incremental"}) {
        std::vector<std::string> args{"run", alg, path, "--k", "3", "--seed", "5", "--reference", path};
        if (alg == "incremental") {
            args.push_back("--blocks");
            args.push_back("3");
        }
        if (alg == "isma")
            args.push_back("--finalize");
        const json rep = run_json(args);
        const auto problems = validate_run_report(rep);
        EXPECT_TRUE(problems.empty()) << alg << ": " << (problems.empty() ? "" : problems.front());
        EXPECT_TRUE(rep.contains("angles")) << alg;
        if (alg == "gram" || alg == "isma")
            EXPECT_TRUE(rep.contains("wedin")) << alg;
        if (alg == "incremental")
            EXPECT_EQ(rep.at("passes"), 1);
    }
}

TEST(CliRun, SeedDeterminesReport)
{
    const DenseMatrix a = pt::signal_plus_noise(120, 90, 10, 0.1, 6);
    const auto path = matrix_file(a, "det.podm");
    const std::vector<std::string> args{"run",   "isma", path,  "--k",  "10",   "--r",    "30",
                                        "--strategy", "unf", "--tau", "0.99", "--seed", "7", "--columns", "20"};
    const json x = strip_timing(run_json(args));
    const json y = strip_timing(run_json(args));
    EXPECT_EQ(x.dump(), y.dump());

    auto other = args;
    other[12] = "8";
    EXPECT_NE(trace_columns(x), trace_columns(run_json(other)));
}

TEST(CliRun, EnvSeedFallback)
{
    const auto path = matrix_file(pt::gaussian(30, 40, 2), "env.podm");
    ::setenv("PODSKETCH_SEED", "99", 1);
    const json env = run_json({"run", "isma", path, "--k", "2", "--columns", "5"});
    ::unsetenv("PODSKETCH_SEED");
    const json flag = run_json({"run", "isma", path, "--k", "2", "--columns", "5", "--seed", "99"});
    EXPECT_EQ(env.at("config").at("seed"), 99);
    EXPECT_EQ(trace_columns(env), trace_columns(flag));
    ::setenv("PODSKETCH_SEED", "abc", 1);
    EXPECT_EQ(cli({"run", "isma", path, "--k", "2"}).code, kExitParameter);
    ::unsetenv("PODSKETCH_SEED");
}

TEST(CliRun, SubspaceCriterionSamplesNoMoreColumns)
{
    pt::Vec s(6);
    s << 10.0, 9.95, 5, 3, 2, 1;
    DenseMatrix a = pt::with_spectrum(150, 120, s, 12);
    a += 0.02 * pt::gaussian(150, 120, 13);
    const auto path = matrix_file(a, "close.podm");
    int total_modes = 0;
    int total_subspace = 0;
    for (int seed = 0; seed < 5; ++seed) {
        auto base = std::vector<std::string>{"run", "isma", path, "--k", "2", "--columns", "10",
                                             "--seed", std::to_string(seed), "--criterion"};
        auto modes = base;
        modes.push_back("modes");
        auto subspace = base;
        subspace.push_back("subspace");
        const auto cm = run_json(modes).at("config").at("outcome").at("total_distinct_columns").get<int>();
        const auto cs = run_json(subspace).at("config").at("outcome").at("total_distinct_columns").get<int>();
        total_modes += cm;
        total_subspace += cs;
    }
    EXPECT_LE(total_subspace, total_modes);
}

TEST(CliRun, ErrorsMapToExitCodes)
{
    const auto path = matrix_file(pt::gaussian(5, 4, 1), "small.podm");
    EXPECT_EQ(cli({"run", "isma", path, "--k", "9"}).code, kExitParameter);
    EXPECT_EQ(cli({"run", "isma", path, "--bogus"}).code, kExitParameter);
    EXPECT_EQ(cli({"run", "isma", pt::temp_path("missing.podm").string()}).code, kExitParameter);
    EXPECT_EQ(cli({"run", "isma", path, "--k", "2", "--strategy", "zzz"}).code, kExitParameter);

    const auto zero = matrix_file(DenseMatrix::Zero(5, 4), "zero.podm");
    EXPECT_EQ(cli({"run", "isma", zero, "--k", "2"}).code, kExitDegenerate);

    const auto junk = pt::temp_path("junk.podm");
    {
        std::ofstream f(junk, std::ios::binary);
        f << "NOPE" << std::string(30, '\0');
    }
    const auto r = cli({"run", "isma", junk.string(), "--k", "2"});
    EXPECT_EQ(r.code, kExitFormat);
    EXPECT_NE(r.err.find("byte offset"), std::string::npos);
}

TEST(CliRun, ThreadCountDoesNotChangeSampling)
{
    const auto path = matrix_file(pt::signal_plus_noise(100, 80, 4, 0.1, 9), "threads.podm");
    const std::vector<std::string> base{"run", "isma", path, "--k", "4", "--columns", "12", "--seed", "3"};
    auto one = base;
    one.insert(one.end(), {"--threads", "1"});
    auto four = base;
    four.insert(four.end(), {"--threads", "4"});
    EXPECT_EQ(trace_columns(run_json(one)), trace_columns(run_json(four)));
}

TEST(CliCompare, IdenticalAndDisjoint)
{
    const DenseMatrix a = pt::gaussian(30, 10, 2);
    const auto path = matrix_file(a, "cmp.podm");
    const json same = run_json({"compare", path, path, "--k", "3", "--matrix", path});
    EXPECT_TRUE(validate_compare_report(same).empty());
    for (double x : same.at("angles").at("principal_degrees").get<std::vector<double>>())
        EXPECT_NEAR(x, 0.0, 1e-5);
    EXPECT_NEAR(same.at("wedin").at("measure").get<double>(), 0.0, 1e-9);

    DenseMatrix x = DenseMatrix::Zero(8, 2);
    x(0, 0) = 2;
    x(1, 1) = 1;
    DenseMatrix y = DenseMatrix::Zero(8, 2);
    y(4, 0) = 2;
    y(5, 1) = 1;
    const auto px = matrix_file(x, "cmp_x.podm");
    const auto py = matrix_file(y, "cmp_y.podm");
    const json disjoint = run_json({"compare", px, py, "--k", "2"});
    for (double v : disjoint.at("angles").at("mode_degrees").get<std::vector<double>>())
        EXPECT_NEAR(v, 90.0, 1e-10);
    EXPECT_NEAR(disjoint.at("ceiling").get<double>(), 2.0, 1e-15);
}

TEST(CliCompare, DegenerateGapCarriesAdvice)
{
    // sigma_2 = sigma_3 makes omega_hat vanish for k = 2
    DenseMatrix a = DenseMatrix::Zero(6, 4);
    a(0, 0) = 3;
    a(1, 1) = 2;
    a(2, 2) = 2;
    a(3, 3) = 1;
    const auto path = matrix_file(a, "degen.podm");
    const json rep = run_json({"compare", path, path, "--k", "2", "--matrix", path});
    EXPECT_TRUE(validate_compare_report(rep).empty());
    EXPECT_TRUE(rep.at("wedin").at("degenerate").get<bool>());
    EXPECT_TRUE(rep.at("wedin").at("measure").is_null());
    EXPECT_EQ(rep.at("wedin").at("advice"), kIncreaseKAdvice);
}

TEST(CliRun, SaveFactorRoundTrip)
{
    const DenseMatrix a = pt::gaussian(20, 12, 1);
    const auto path = matrix_file(a, "save.podm");
    const auto factor = pt::temp_path("save.podf");
    ASSERT_EQ(cli({"run", "gram", path, "--k", "3", "--save-factor", factor.string()}).code, 0);
    EXPECT_EQ(sniff_file_kind(factor), FileKind::podf);
    const json rep = run_json({"compare", path, factor.string(), "--k", "3"});
    for (double x : rep.at("angles").at("principal_degrees").get<std::vector<double>>())
        EXPECT_LT(x, 1e-5);
}

TEST(ReportSchema, RejectsBrokenReports)
{
    json good = {{"config", {{"algorithm", "isma"}, {"k", 2}, {"seed", 1}}},
                 {"sigma", {2.0, 1.0}},
                 {"traces", json::array()},
                 {"timing", {{"wall_seconds", 0.1}, {"cpu_seconds", 0.1}}},
                 {"passes", 2}};
    EXPECT_TRUE(validate_run_report(good).empty());

    json extra = good;
    extra["surprise"] = 1;
    EXPECT_FALSE(validate_run_report(extra).empty());

    json unsorted = good;
    unsorted["sigma"] = {1.0, 2.0};
    EXPECT_FALSE(validate_run_report(unsorted).empty());

    json missing = good;
    missing.erase("passes");
    EXPECT_FALSE(validate_run_report(missing).empty());

    json bad_angle = good;
    bad_angle["angles"] = {{"mode_degrees", {91.0}}, {"principal_degrees", {0.0}}};
    EXPECT_FALSE(validate_run_report(bad_angle).empty());

    json bad_cos = good;
    bad_cos["traces"] = json::array({{{"iteration", 1},
                                      {"distinct_columns", 3},
                                      {"distinct_rows", 0},
                                      {"remaining", 4},
                                      {"cosines", {1.5}},
                                      {"seconds", 0.0}}});
    EXPECT_FALSE(validate_run_report(bad_cos).empty());
}

TEST(ReportSchema, SigmaRoundTripsExactly)
{
    pt::Vec s(3);
    s << 0.1, 1.0 / 3.0, 2.0 / 7.0;
    const json j = json::parse(sigma_to_json(s).dump());
    for (Index i = 0; i < 3; ++i)
        EXPECT_EQ(j[static_cast<std::size_t>(i)].get<double>(), s(i));
}
