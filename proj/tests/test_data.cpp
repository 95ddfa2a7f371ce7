#include "oracles.hpp"

#include "predacgan/common/csv.hpp"
#include "predacgan/common/errors.hpp"
#include "predacgan/data/dataset.hpp"
#include "predacgan/data/features.hpp"
#include "predacgan/data/prices.hpp"
#include "predacgan/data/synth.hpp"

#include <gtest/gtest.h>

#include <filesystem>

using namespace predacgan;
using namespace predacgan::data;

namespace {

PriceSeries series(std::vector<double> closes, TimeIndex start = 0, std::string id = "X") {
    PriceSeries s;
    s.asset_id = std::move(id);
    for (std::size_t i = 0; i < closes.size(); ++i) s.dates.push_back(start + static_cast<TimeIndex>(i));
    s.closes = std::move(closes);
    return s;
}

PriceSeries scaled(const PriceSeries& s, double k) {
    auto out = s;
    for (auto& c : out.closes) c *= k;
    return out;
}

}  // namespace

TEST(Discretize, Boundaries) {
    EXPECT_EQ(discretize(-0.05, -0.03, 0.03), Category::minus);
    EXPECT_EQ(discretize(-0.03, -0.03, 0.03), Category::zero);
    EXPECT_EQ(discretize(0.0, -0.03, 0.03), Category::zero);
    EXPECT_EQ(discretize(0.03, -0.03, 0.03), Category::plus);
    EXPECT_EQ(discretize(std::nextafter(0.03, 0.0), -0.03, 0.03), Category::zero);
    EXPECT_EQ(discretize(std::nextafter(-0.03, -1.0), -0.03, 0.03), Category::minus);
    EXPECT_THROW(discretize(0.0, 0.03, 0.03), ConfigError);
}

TEST(Discretize, PiecewiseConstantScan) {
    Category prev = discretize(-1.0, -0.03, 0.03);
    int changes = 0;
    for (int i = -1000; i <= 1000; ++i) {
        const auto c = discretize(i * 1e-3, -0.03, 0.03);
        if (c != prev) ++changes;
        prev = c;
    }
    EXPECT_EQ(changes, 2);
}

TEST(Category, OneHotAndNames) {
    for (auto c : {Category::minus, Category::zero, Category::plus}) {
        const auto h = one_hot(c);
        EXPECT_EQ(h[index_of(c)], 1.0);
        EXPECT_EQ(h[0] + h[1] + h[2], 1.0);
        EXPECT_EQ(category_from_string(to_string(c)), c);
    }
}

TEST(Features, ConstantPricesAreZero) {
    const auto f = build_features(series(std::vector<double>(10, 42.0)), 9, 5);
    for (double v : f.values) EXPECT_EQ(v, 0.0);
}

TEST(Features, OneStepByHand) {
    const auto f = build_features(series({100.0, 110.0}), 1, 1);
    ASSERT_EQ(f.values.size(), 1u);
    EXPECT_NEAR(f.values[0], (100.0 - 110.0) / 110.0, 1e-15);
    EXPECT_NEAR(f.values[0], -0.0909, 1e-4);
}

TEST(Features, ElementOrderIsMostRecentFirst) {
    const auto f = build_features(series({50.0, 80.0, 90.0, 100.0}), 3, 3);
    EXPECT_DOUBLE_EQ(f.values[0], -0.1);
    EXPECT_DOUBLE_EQ(f.values[1], -0.2);
    EXPECT_DOUBLE_EQ(f.values[2], -0.5);
}

TEST(Features, InsufficientHistory) {
    EXPECT_THROW(build_features(series({1.0, 2.0}), 1, 2), WindowError);
    EXPECT_FALSE(has_feature_window(series({1.0, 2.0}), 1, 2));
}

TEST(Features, GapBreaksWindow) {
    auto s = series({1.0, 2.0, 3.0, 4.0});
    s.dates = {0, 1, 3, 4};
    EXPECT_THROW(build_features(s, 4, 3), WindowError);
    EXPECT_NO_THROW(build_features(s, 4, 1));
}

TEST(Labels, ByHand) {
    EXPECT_NEAR(build_label(series({100.0, 101.0, 103.0}), 0, 2), 0.03, 1e-15);
    EXPECT_EQ(build_label(series({100.0, 50.0, 100.0}), 0, 2), 0.0);
    EXPECT_NEAR(build_label(series({200.0, 7.0, 190.0}), 0, 2), -0.05, 1e-15);
    EXPECT_THROW(build_label(series({1.0, 2.0}), 0, 2), WindowError);
}

TEST(Features, ScaleInvariance) {
    const auto base = synth_market([] {
                          SynthConfig c;
                          c.n_signal_assets = 2;
                          c.n_noise_assets = 1;
                          c.n_days = 120;
                          c.rng_seed = 4;
                          return c;
                      }())
                          .series;
    for (const auto& s : base) {
        for (TimeIndex t = 20; t < 110; t += 7) {
            const auto f = build_features(s, t, 16);
            const double r = build_label(s, t, 5);
            // power-of-two factors are exact in binary floating point
            for (double k : {0.25, 8.0, 1024.0}) {
                EXPECT_EQ(build_features(scaled(s, k), t, 16).values, f.values);
                EXPECT_EQ(build_label(scaled(s, k), t, 5), r);
            }
            for (double k : {3.0, 0.37, 1e4}) {
                const auto g = build_features(scaled(s, k), t, 16).values;
                for (std::size_t j = 0; j < g.size(); ++j) EXPECT_NEAR(g[j], f.values[j], 1e-12 * (1 + std::abs(f.values[j])));
                EXPECT_NEAR(build_label(scaled(s, k), t, 5), r, 1e-12 * (1 + std::abs(r)));
            }
        }
    }
}

TEST(Dataset, BoundaryCount) {
    const std::size_t ti = 4, to = 3;
    const auto s = series(std::vector<double>(ti + to + 1, 10.0));
    DatasetParams p;
    p.input_window = ti;
    p.horizon = to;
    const std::vector<TimeIndex> times{0, 1, 2, 3, 4, 5, 6, 7};
    const auto ds = build_dataset({s}, times, p);
    ASSERT_EQ(ds.pairs.size(), 1u);
    EXPECT_EQ(ds.pairs[0].t, 4);
    EXPECT_EQ(ds.skipped.size(), times.size() - 1);
}

TEST(Dataset, EmptyResultIsDataError) {
    DatasetParams p;
    p.input_window = 5;
    p.horizon = 5;
    const std::vector<TimeIndex> times{0, 1};
    EXPECT_THROW(build_dataset({series({1.0, 2.0, 3.0})}, times, p), DataError);
}

TEST(Dataset, HistogramAndBoundsAgainstScan) {
    SynthConfig c;
    c.n_signal_assets = 3;
    c.n_noise_assets = 3;
    c.n_days = 300;
    c.rng_seed = 8;
    const auto m = synth_market(c);
    DatasetParams p;
    p.input_window = 16;
    p.horizon = 5;
    const auto times = stride_times(-10, 320, 3);
    const auto ds = build_dataset(m.series, times, p);

    std::array<std::size_t, 3> recount{0, 0, 0};
    std::size_t expected_pairs = 0;
    for (const auto& s : m.series) {
        for (const auto t : times) {
            if (t - 16 < 0 || t + 5 > 299) continue;
            ++expected_pairs;
            const double r = (s.closes[static_cast<std::size_t>(t + 5)] - s.closes[static_cast<std::size_t>(t)]) /
                             s.closes[static_cast<std::size_t>(t)];
            ++recount[r < -0.03 ? 0 : (r < 0.03 ? 1 : 2)];
        }
    }
    EXPECT_EQ(ds.pairs.size(), expected_pairs);
    EXPECT_EQ(category_histogram(ds.pairs), recount);
    for (const auto& pair : ds.pairs) {
        EXPECT_GE(pair.t - 16, 0);
        EXPECT_LE(pair.t + 5, 299);
        EXPECT_EQ(pair.c, discretize(pair.r, -0.03, 0.03));
        EXPECT_EQ(pair.x.values.size(), 16u);
    }
}

TEST(Synth, ShapesAndManifest) {
    SynthConfig c;
    c.n_signal_assets = 5;
    c.n_noise_assets = 5;
    c.n_days = 600;
    c.rng_seed = 7;
    const auto m = synth_market(c);
    ASSERT_EQ(m.series.size(), 10u);
    for (const auto& s : m.series) {
        EXPECT_EQ(s.size(), 600u);
        EXPECT_NO_THROW(s.validate());
    }
    EXPECT_EQ(m.manifest[0].kind, AssetKind::signal);
    EXPECT_EQ(m.manifest[9].kind, AssetKind::noise);
    EXPECT_EQ(m.manifest[3].asset_id, "A003");
}

TEST(Synth, Reproducible) {
    SynthConfig c;
    c.rng_seed = 12;
    c.n_days = 200;
    const auto a = synth_market(c), b = synth_market(c);
    for (std::size_t i = 0; i < a.series.size(); ++i) EXPECT_EQ(a.series[i].closes, b.series[i].closes);
    c.rng_seed = 13;
    EXPECT_NE(synth_market(c).series[0].closes, a.series[0].closes);
}

TEST(Synth, ZeroStrengthMakesKindsIdentical) {
    SynthConfig c;
    c.signal_strength = 0.0;
    c.n_signal_assets = 1;
    c.n_noise_assets = 1;
    c.rng_seed = 3;
    const auto m = synth_market(c);
    // same law: swapping the kind of asset 0 does not change its path
    SynthConfig all_noise = c;
    all_noise.n_signal_assets = 0;
    all_noise.n_noise_assets = 2;
    EXPECT_EQ(synth_market(all_noise).series[0].closes, m.series[0].closes);
}

TEST(Synth, SignalIsLearnableBySimpleOracle) {
    SynthConfig c;
    c.signal_strength = 1.0;
    c.n_signal_assets = 10;
    c.n_noise_assets = 10;
    c.rng_seed = 21;
    const auto m = synth_market(c);
    DatasetParams p;
    p.input_window = 16;
    p.horizon = 5;
    const auto train = build_dataset(m.series, stride_times(16, 500, 2), p);
    const auto test = build_dataset(m.series, stride_times(520, 790, 5), p);

    auto to_matrix = [](const std::vector<TrainingPair>& pairs, bool signal_only, std::vector<int>& y) {
        std::vector<const TrainingPair*> keep;
        for (const auto& pr : pairs) {
            if (!signal_only || pr.asset_id < "A010") keep.push_back(&pr);
        }
        Eigen::MatrixXd x(static_cast<Eigen::Index>(keep.size()), 16);
        for (std::size_t i = 0; i < keep.size(); ++i) {
            for (int j = 0; j < 16; ++j) x(static_cast<Eigen::Index>(i), j) = keep[i]->x.values[static_cast<std::size_t>(j)] * 10.0;
            y.push_back(static_cast<int>(index_of(keep[i]->c)));
        }
        return x;
    };
    std::vector<int> ytr, yte;
    const auto xtr = to_matrix(train.pairs, true, ytr);
    const auto xte = to_matrix(test.pairs, true, yte);
    const auto model = oracle::fit_logistic(xtr, ytr, 3);
    int hits = 0;
    for (Eigen::Index i = 0; i < xte.rows(); ++i) hits += model.predict(xte.row(i).transpose()) == yte[static_cast<std::size_t>(i)];
    EXPECT_GT(static_cast<double>(hits) / static_cast<double>(xte.rows()), 1.0 / 3.0 + 0.1);
}

TEST(Synth, ManifestRoundTrip) {
    const auto dir = std::filesystem::temp_directory_path() / "predacgan_test_manifest";
    std::vector<ManifestEntry> m{{"A000", AssetKind::signal}, {"A001", AssetKind::noise}};
    write_manifest(m, dir / "manifest.csv");
    const auto back = load_manifest(dir / "manifest.csv");
    ASSERT_EQ(back.size(), 2u);
    EXPECT_EQ(back[1].kind, AssetKind::noise);
    std::filesystem::remove_all(dir);
}

TEST(Prices, TwoAssetsThreeDays) {
    const auto t = parse_prices({"date,asset_id,close", "0,A,1", "0,B,2", "1,A,1.5", "1,B,2.5", "2,A,2", "2,B,3"});
    ASSERT_EQ(t.series.size(), 2u);
    EXPECT_EQ(t.series[0].size(), 3u);
    EXPECT_EQ(t.series[1].closes[2], 3.0);
}

TEST(Prices, UnsortedRowsAreSorted) {
    const auto t = parse_prices({"date,asset_id,close", "2,A,3", "0,A,1", "1,A,2"});
    EXPECT_EQ(t.series[0].dates, (std::vector<TimeIndex>{0, 1, 2}));
    EXPECT_EQ(t.series[0].closes, (std::vector<double>{1, 2, 3}));
}

TEST(Prices, NonPositiveCloseNamesAssetAndLine) {
    try {
        parse_prices({"date,asset_id,close", "0,A,1", "1,ZZ,-4"});
        FAIL();
    } catch (const DataError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("ZZ"), std::string::npos);
        EXPECT_NE(msg.find("3"), std::string::npos);
    }
}

TEST(Prices, MalformedRowReportsLine) {
    try {
        parse_prices({"date,asset_id,close", "0,A,1", "1,A"});
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
    }
    EXPECT_THROW(parse_prices({"day,asset,price", "0,A,1"}), ParseError);
    EXPECT_THROW(parse_prices({"date,asset_id,close", "0,A,abc"}), ParseError);
    EXPECT_THROW(parse_prices({"date,asset_id,close", "0,A,1", "0,A,2"}), ParseError);
}

TEST(Prices, MissingValuesLeaveGaps) {
    const auto t = parse_prices({"date,asset_id,close", "0,A,1", "1,A,NA", "2,A,", "3,A,4"});
    EXPECT_EQ(t.missing_rows, 2u);
    EXPECT_EQ(t.series[0].dates, (std::vector<TimeIndex>{0, 3}));
    EXPECT_FALSE(has_feature_window(t.series[0], 3, 1));
}

TEST(Prices, IsoDatesUseUnionCalendar) {
    const auto t = parse_prices(
        {"date,asset_id,close", "2020-01-03,A,3", "2020-01-02,A,2", "2020-01-02,B,5", "2020-01-06,B,6"});
    EXPECT_EQ(t.calendar, (std::vector<std::string>{"2020-01-02", "2020-01-03", "2020-01-06"}));
    EXPECT_EQ(t.series[1].dates, (std::vector<TimeIndex>{0, 2}));
    EXPECT_THROW(parse_prices({"date,asset_id,close", "2020-01-03,A,3", "4,A,2"}), ParseError);
}

TEST(Prices, WriteReadRoundTrip) {
    SynthConfig c;
    c.n_days = 50;
    c.rng_seed = 2;
    const auto m = synth_market(c);
    const auto path = std::filesystem::temp_directory_path() / "predacgan_test_prices.csv";
    write_prices(m.series, path);
    const auto back = load_prices(path);
    ASSERT_EQ(back.series.size(), m.series.size());
    for (std::size_t i = 0; i < m.series.size(); ++i) EXPECT_EQ(back.series[i].closes, m.series[i].closes);
    std::filesystem::remove(path);
}
