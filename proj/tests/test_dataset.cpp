#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "fixture_tables.hpp"
#include "oracles.hpp"
#include "perfwall/dataset.hpp"
#include "perfwall/errors.hpp"

using namespace perfwall;
using perfwall::oracle::kEps;
using perfwall::oracle::rel_err;

namespace {

constexpr const char* kHeader = "name,year,rank,cores,rpeak_gflops,rmax_gflops,benchmark,accelerator\n";

IngestResult ingest_text(const std::string& text) {
  std::istringstream in(text);
  return ingest(in, "mem");
}

std::vector<ScalingPoint> constant_alpha_points(double one_minus_alpha, double k_lo, double k_hi, int n) {
  std::vector<ScalingPoint> pts;
  const auto a = AlphaFraction::from_one_minus_alpha(one_minus_alpha);
  for (int i = 0; i < n; ++i) {
    const double k = k_lo * std::pow(k_hi / k_lo, static_cast<double>(i) / (n - 1));
    pts.push_back({k, efficiency_value(a, k)});
  }
  return pts;
}

}  // namespace

TEST_SUITE("dataset") {
  TEST_CASE("ingest a well-formed row") {
    const auto r = ingest_text(std::string(kHeader) + "Taihulight,2017,1,10649600,125436000,93014600,HPL,none\n");
    CHECK(r.errors.empty());
    CHECK(r.warnings.empty());
    REQUIRE(r.records.size() == 1);
    const auto& rec = r.records[0];
    CHECK(rec.name == "Taihulight");
    CHECK(rec.year == 2017);
    CHECK(rec.rank == 1);
    CHECK(rec.cores == 10649600);
    CHECK(rec.r_peak == 125436000.0);
    CHECK(rec.r_max == 93014600.0);
    CHECK(rec.benchmark == Benchmark::hpl);
    CHECK(rec.accelerator == Accelerator::none);
  }

  TEST_CASE("ingest rejects bad rows with line numbers and keeps the rest") {
    const auto r = ingest_text(std::string(kHeader) +
                               "ok,2017,1,100,1000,900,HPL,gpu\n"
                               "over,2017,2,100,1000,1001,HPL,none\n"
                               "\n"
                               "zero,2017,3,0,1000,900,HPL,none\n"
                               "short,2017,4,100\n"
                               "bench,2017,5,100,1000,900,LINPACK,none\n"
                               "acc,2017,6,100,1000,900,HPCG,fpga\n"
                               "\"Quoted, Inc.\",2018,,64,10,5,hpcg,coprocessor\n");
    REQUIRE(r.records.size() == 2);
    CHECK(r.records[1].name == "Quoted, Inc.");
    CHECK_FALSE(r.records[1].rank.has_value());
    CHECK(r.records[1].benchmark == Benchmark::hpcg);
    CHECK(r.records[1].accelerator == Accelerator::coprocessor);
    REQUIRE(r.errors.size() == 5);
    CHECK(r.errors[0].line == 3);
    CHECK(r.errors[0].message.find("exceeds") != std::string::npos);
    CHECK(r.errors[1].line == 5);
    CHECK(r.errors[2].line == 6);
    CHECK(r.errors[3].line == 7);
    CHECK(r.errors[4].line == 8);
  }

  TEST_CASE("ingest of an empty file warns") {
    const auto r = ingest_text("");
    CHECK(r.records.empty());
    CHECK(r.errors.empty());
    CHECK(r.warnings.size() == 1);
  }

  TEST_CASE("missing accelerator column defaults to none with one warning") {
    const auto r = ingest_text("name,year,rank,cores,rpeak_gflops,rmax_gflops,benchmark\n"
                               "a,2017,1,100,1000,900,HPL\n"
                               "b,2017,2,100,1000,800,HPL\n");
    REQUIRE(r.records.size() == 2);
    CHECK(r.warnings.size() == 1);
    for (const auto& rec : r.records) CHECK(rec.accelerator == Accelerator::none);
  }

  TEST_CASE("wrong header and missing file") {
    CHECK_THROWS_AS(ingest_text("a,b,c\n1,2,3\n"), ParseError);
    CHECK_THROWS_AS(ingest(std::filesystem::path(PERFWALL_DATA_DIR "/does_not_exist.csv")), InputError);
  }

  TEST_CASE("derive examples") {
    BenchmarkRecord t{"Taihulight", 2017, 1, 10649600, 125436000.0, 93014600.0, Benchmark::hpl, Accelerator::none};
    const auto m = derive(t);
    CHECK(rel_err(m.alpha.one_minus_alpha(), 3.27e-8) < 0.01);
    CHECK(rel_err(m.gain.value, 3.06e7) < 0.01);
    CHECK(m.p_single == doctest::Approx(125436000.0 / 10649600.0));

    BenchmarkRecord perfect{"p", 2017, 1, 100, 1000.0, 1000.0, Benchmark::hpl, Accelerator::none};
    CHECK_THROWS_AS(derive(perfect), UnboundedGain);

    BenchmarkRecord two{"two", 2017, 1, 2, 2.0, 1.0, Benchmark::hpl, Accelerator::none};
    CHECK(derive(two).alpha.one_minus_alpha() == 1.0);
    CHECK(derive(two).alpha.alpha() == 0.0);

    BenchmarkRecord one{"one", 2017, 1, 1, 2.0, 1.0, Benchmark::hpl, Accelerator::none};
    CHECK_THROWS_AS(derive(one), UndefinedQuantity);
  }

  TEST_CASE("reconstructed fixture returns the source pairs") {
    const auto r = ingest(std::filesystem::path(PERFWALL_DATA_DIR "/top50_2017_reconstructed.csv"));
    REQUIRE(r.records.size() == 50);
    CHECK(r.errors.empty());
    for (std::size_t i = 0; i < 50; ++i) {
      const auto m = derive(r.records[i]);
      REQUIRE(rel_err(m.alpha.one_minus_alpha(), fixture::kTop50CoresAlpha[i].one_minus_alpha) < 1e-12);
      const double e = r.records[i].r_max / r.records[i].r_peak;
      const double via_core = alpha_from_efficiency(e, static_cast<double>(r.records[i].cores)).one_minus_alpha();
      REQUIRE(m.alpha.one_minus_alpha() == via_core);
      const auto back = efficiency(m.alpha, r.records[i].cores).value;
      REQUIRE(rel_err(back, e) < 1e-12);
    }
  }

  TEST_CASE("derive over ingest is order independent") {
    const auto r = ingest(std::filesystem::path(PERFWALL_DATA_DIR "/top50_2017_reconstructed.csv"));
    auto shuffled = r.records;
    std::mt19937_64 rng(8);
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    for (const auto& rec : shuffled) {
      const auto it = std::find_if(r.records.begin(), r.records.end(),
                                   [&](const BenchmarkRecord& o) { return o.rank == rec.rank; });
      REQUIRE(derive(rec).alpha == derive(*it).alpha);
    }
  }

  TEST_CASE("regression examples") {
    const std::vector<Point> two{{1.0, 3.0}, {2.0, 5.0}};
    const auto f2 = fit_regression(two, Transform::linear);
    CHECK(f2.slope == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(f2.intercept == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(f2.r_squared == 1.0);

    std::vector<Point> line;
    for (int i = -5; i <= 20; ++i) line.push_back({static_cast<double>(i), 2.0 * i + 1.0});
    const auto fl = fit_regression(line, Transform::linear);
    CHECK(fl.slope == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(fl.intercept == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(fl.r_squared == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(fl.predict(100.0) == doctest::Approx(201.0).epsilon(1e-13));

    std::vector<Point> pl;
    for (const double x : {1.0, 10.0, 100.0, 1000.0}) pl.push_back({x, 3.0 * std::pow(x, -0.5)});
    const auto fpl = fit_regression(pl, Transform::log_log);
    CHECK(fpl.slope == doctest::Approx(-0.5).epsilon(1e-13));
    CHECK(fpl.predict(10000.0) == doctest::Approx(0.03).epsilon(1e-12));
  }

  TEST_CASE("regression errors") {
    const std::vector<Point> same_x{{1.0, 1.0}, {1.0, 2.0}};
    CHECK_THROWS_AS(fit_regression(same_x, Transform::linear), InputError);
    const std::vector<Point> one{{1.0, 1.0}};
    CHECK_THROWS_AS(fit_regression(one, Transform::linear), InputError);
    const std::vector<Point> neg{{1.0, -1.0}, {2.0, 1.0}};
    CHECK_THROWS_AS(fit_regression(neg, Transform::log_y), InputError);
    CHECK_NOTHROW(fit_regression(neg, Transform::linear));
  }

  TEST_CASE("more cores go with a smaller (1 - alpha) in the TOP50 table") {
    std::vector<Point> pts;
    for (const auto& p : fixture::kTop50CoresAlpha) pts.push_back({p.cores_millions, p.one_minus_alpha});
    const auto fit = fit_regression(pts, Transform::log_log);
    CHECK(fit.slope < 0.0);
    CHECK(fit.r_squared >= 0.0);
    CHECK(fit.r_squared <= 1.0);
  }

  TEST_CASE("alpha_delta on constant-alpha data") {
    const std::vector<ScalingPoint> pts = constant_alpha_points(1e-3, 1e3, 1e5, 3);
    const auto r = alpha_delta(pts);
    REQUIRE(r.alpha_delta.has_value());
    CHECK(rel_err(r.alpha_delta->one_minus_alpha(), 1e-3) <= 16 * kEps);
    CHECK(r.fit.intercept == doctest::Approx(0.999).epsilon(1e-12));
    CHECK(r.warnings.empty());

    for (const double one_minus : {0.1, 1e-3, 1e-7}) {
      const double k_lo = std::max(2.0, 0.1 / one_minus);
      const auto exact = alpha_delta(constant_alpha_points(one_minus, k_lo, k_lo * 1e4, 41));
      REQUIRE(exact.alpha_delta.has_value());
      CHECK(rel_err(exact.alpha_delta->one_minus_alpha(), one_minus) <= 16 * kEps);
    }
  }

  TEST_CASE("alpha_delta with 0.1% multiplicative noise") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> noise(-1e-3, 1e-3);
    for (const double one_minus : {0.1, 1e-3, 1e-7}) {
      for (int trial = 0; trial < 20; ++trial) {
        const double k_lo = std::max(2.0, 0.1 / one_minus);
        auto pts = constant_alpha_points(one_minus, k_lo, k_lo * 1e4, 41);
        for (auto& p : pts) p.efficiency = std::min(1.0, p.efficiency * (1.0 + noise(rng)));
        const auto r = alpha_delta(pts);
        REQUIRE(r.alpha_delta.has_value());
        REQUIRE(rel_err(r.alpha_delta->one_minus_alpha(), one_minus) < 0.01);
      }
    }
  }

  TEST_CASE("alpha_delta on flat and superlinear data") {
    const std::vector<ScalingPoint> flat{{10.0, 0.8}, {100.0, 0.8}, {1000.0, 0.8}};
    const auto f = alpha_delta(flat);
    CHECK(f.fit.slope == 0.0);
    REQUIRE(f.alpha_delta.has_value());
    CHECK(f.alpha_delta->one_minus_alpha() == 0.0);
    CHECK(f.warnings.size() == 1);

    const std::vector<ScalingPoint> super{{10.0, 0.5}, {100.0, 0.6}, {1000.0, 0.7}};
    const auto s = alpha_delta(super);
    CHECK(s.fit.slope < 0.0);
    CHECK_FALSE(s.alpha_delta.has_value());
    CHECK(s.warnings.size() == 1);

    const std::vector<ScalingPoint> bad{{10.0, 1.5}, {100.0, 0.6}};
    CHECK_THROWS_AS(alpha_delta(bad), InconsistentMeasurement);
  }

  TEST_CASE("year trend examples") {
    const std::vector<YearValue> anchors{{1993, 1e-3}, {2018, 1e-7}};
    const auto fit = fit_year_trend(anchors);
    CHECK(fit.slope == doctest::Approx(-0.16).epsilon(1e-14));
    CHECK(fit.r_squared == 1.0);

    const std::vector<YearValue> flat{{2000, 1e-5}, {2001, 1e-5}, {2002, 1e-5}};
    CHECK(fit_year_trend(flat).slope == 0.0);

    std::vector<YearValue> decay;
    for (int y = 1990; y <= 2020; ++y) decay.push_back({y, 1e-3 * std::pow(10.0, -0.2 * (y - 1990))});
    const auto fd = fit_year_trend(decay);
    CHECK(fd.r_squared == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fd.slope == doctest::Approx(-0.2).epsilon(1e-12));
  }

  TEST_CASE("trend over the synthetic timeline") {
    const auto r = ingest(std::filesystem::path(PERFWALL_DATA_DIR "/synthetic_timeline.csv"));
    const auto t = trend_over_years(r.records);
    CHECK(t.best_per_year.size() == 26);
    CHECK(t.fit.slope == doctest::Approx(-0.16).epsilon(1e-9));
    CHECK(t.fit.r_squared == doctest::Approx(1.0).epsilon(1e-9));
    for (const auto& b : t.best_per_year) CHECK(b.name.find("-1") != std::string::npos);
  }

  TEST_CASE("trend ties on (1 - alpha) go to more cores") {
    // (E = 0.5, k = 5) and (E = 0.25, k = 13) both give (1 - alpha) = 0.25 exactly.
    const BenchmarkRecord five{"five", 2000, 1, 5, 10.0, 5.0, Benchmark::hpl, Accelerator::none};
    const BenchmarkRecord thirteen{"thirteen", 2000, 2, 13, 26.0, 6.5, Benchmark::hpl, Accelerator::none};
    const BenchmarkRecord later{"later", 2001, 1, 100, 1000.0, 600.0, Benchmark::hpl, Accelerator::none};
    REQUIRE(derive(five).alpha == derive(thirteen).alpha);
    for (const auto& recs : {std::vector<BenchmarkRecord>{five, thirteen, later},
                             std::vector<BenchmarkRecord>{thirteen, five, later}}) {
      const auto t = trend_over_years(recs);
      REQUIRE(t.best_per_year.size() == 2);
      CHECK(t.best_per_year[0].name == "thirteen");
    }
  }

  TEST_CASE("trend needs HPL records from two years") {
    const BenchmarkRecord x{"x", 2000, 1, 100, 1000.0, 600.0, Benchmark::hpl, Accelerator::none};
    const BenchmarkRecord y{"y", 2000, 2, 200, 2000.0, 600.0, Benchmark::hpl, Accelerator::none};
    CHECK_THROWS_AS(trend_over_years(std::vector<BenchmarkRecord>{x, y}), InputError);
    auto later = y;
    later.year = 2001;
    auto x_hpcg = x;
    auto later_hpcg = later;
    x_hpcg.benchmark = Benchmark::hpcg;
    later_hpcg.benchmark = Benchmark::hpcg;
    CHECK_THROWS_AS(trend_over_years(std::vector<BenchmarkRecord>{x_hpcg, later_hpcg}), InputError);
    CHECK_NOTHROW(trend_over_years(std::vector<BenchmarkRecord>{x, later}));
  }

  TEST_CASE("property: regression is invariant under permutation") {
    std::mt19937_64 rng(13);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
      std::vector<Point> pts;
      const int n = 2 + static_cast<int>(rng() % 40);
      for (int i = 0; i < n; ++i) {
        const double x = oracle::log_uniform(rng, 1.0, 1e6);
        pts.push_back({x, std::exp(gauss(rng))});
      }
      for (const auto t : {Transform::linear, Transform::log_y, Transform::log_x, Transform::log_log}) {
        const auto f0 = fit_regression(pts, t);
        auto perm = pts;
        std::shuffle(perm.begin(), perm.end(), rng);
        const auto f1 = fit_regression(perm, t);
        REQUIRE(f1.slope == f0.slope);
        REQUIRE(f1.intercept == f0.intercept);
        REQUIRE(f1.r_squared == f0.r_squared);
        REQUIRE(f0.r_squared >= 0.0);
        REQUIRE(f0.r_squared <= 1.0);
      }
    }
  }

  TEST_CASE("property: a point on the fitted line never lowers r^2") {
    std::mt19937_64 rng(19);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
      std::vector<Point> pts;
      const int n = 3 + static_cast<int>(rng() % 30);
      for (int i = 0; i < n; ++i) {
        const double x = gauss(rng) * 10.0;
        pts.push_back({x, 0.5 * x + gauss(rng)});
      }
      const auto f0 = fit_regression(pts, Transform::linear);
      const double x = gauss(rng) * 20.0;
      pts.push_back({x, f0.predict(x)});
      const auto f1 = fit_regression(pts, Transform::linear);
      REQUIRE(f1.r_squared >= f0.r_squared - 1e-12);
    }
  }

  TEST_CASE("median") {
    CHECK(median({3.0, 1.0, 2.0}) == 2.0);
    CHECK(median({4.0, 1.0, 2.0, 3.0}) == 2.5);
    CHECK(median({7.0}) == 7.0);
    CHECK_THROWS_AS(median({}), InputError);
  }

  TEST_CASE("class summaries of the Nov-2017 per-core performance and gain tables") {
    const auto perf = summarize_by_class(fixture::processor_performance_by_class(), Transform::linear);
    const auto* gpu = fixture::find_class(perf, Accelerator::gpu);
    const auto* none = fixture::find_class(perf, Accelerator::none);
    REQUIRE(gpu != nullptr);
    REQUIRE(none != nullptr);
    CHECK(gpu->median == 70.0);
    CHECK(none->median == doctest::Approx(34.4).epsilon(1e-12));
    CHECK(gpu->count == 9);
    CHECK(none->count == 38);
    const double ratio = gpu->median / none->median;
    CHECK(ratio >= 2.0);
    CHECK(ratio <= 3.0);

    const auto gains = summarize_by_class(fixture::gain_by_class(), Transform::log_y);
    CHECK(fixture::find_class(gains, Accelerator::gpu)->median < fixture::find_class(gains, Accelerator::none)->median);
    CHECK(fixture::find_class(gains, Accelerator::gpu)->median == doctest::Approx(0.162e6));
  }

  TEST_CASE("single-class input gives one summary") {
    const std::vector<ClassSample> only{{Accelerator::gpu, 1.0, 10.0}, {Accelerator::gpu, 2.0, 20.0}};
    const auto stats = summarize_by_class(only, Transform::linear);
    REQUIRE(stats.size() == 1);
    CHECK(stats[0].median == 15.0);
    REQUIRE(stats[0].vs_rank.has_value());
    CHECK(stats[0].vs_rank->slope == doctest::Approx(10.0));
  }

  TEST_CASE("group_by_accelerator on the reconstructed file") {
    const auto r = ingest(std::filesystem::path(PERFWALL_DATA_DIR "/top50_2017_reconstructed.csv"));
    const auto report = group_by_accelerator(r.records);
    REQUIRE(report.classes.size() == 3);
    const AcceleratorSummary* gpu = nullptr;
    const AcceleratorSummary* none = nullptr;
    for (const auto& c : report.classes) {
      if (c.accelerator == Accelerator::gpu) gpu = &c;
      if (c.accelerator == Accelerator::none) none = &c;
    }
    REQUIRE(gpu != nullptr);
    REQUIRE(none != nullptr);
    CHECK(gpu->median_p_single / none->median_p_single >= 2.0);
    CHECK(gpu->median_p_single / none->median_p_single <= 3.0);
    CHECK(gpu->median_gain < none->median_gain);

    std::vector<BenchmarkRecord> only_none;
    for (const auto& rec : r.records) {
      if (rec.accelerator == Accelerator::none) only_none.push_back(rec);
    }
    const auto single = group_by_accelerator(only_none);
    CHECK(single.classes.size() == 1);
    CHECK(single.notes.size() == 2);
  }

  TEST_CASE("derived CSV columns") {
    const auto r = ingest_text(std::string(kHeader) + "\"A, B\",2017,1,100,1000,900,HPL,gpu\n");
    std::ostringstream out;
    write_derived_csv(out, r.records);
    std::istringstream in(out.str());
    std::string header;
    std::string row;
    std::getline(in, header);
    std::getline(in, row);
    CHECK(header == "name,year,rank,cores,rpeak_gflops,rmax_gflops,benchmark,accelerator,efficiency,"
                    "one_minus_alpha,gain,p_single_gflops");
    CHECK(row.rfind("\"A, B\",2017,1,100,", 0) == 0);
  }
}
