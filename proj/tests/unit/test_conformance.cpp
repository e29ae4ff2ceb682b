#include <gtest/gtest.h>

#include <random>

#include "slpn/conformance.hpp"
#include "slpn/oracle.hpp"
#include "support.hpp"

namespace {

using namespace slpn;
using slpn::testing::data_path;
using slpn::testing::load_lsp;
using slpn::testing::Rational;
using slpn::testing::read_text;

TEST(LogCsv, Basic) {
  auto log = parse_log_csv("3 ; a,b\n1 ; a,c\n");
  EXPECT_EQ(log.total(), 4u);
  EXPECT_EQ(log.distinct(), 2u);
  EXPECT_DOUBLE_EQ(log.likelihood({"a", "b"}), 0.75);
  EXPECT_DOUBLE_EQ(log.likelihood({"z"}), 0.0);
}

TEST(LogCsv, MergesAndEmptyTrace) {
  auto log = parse_log_csv("2 ; a\n\n3 ;   a  \n1 ;\n");
  EXPECT_EQ(log.count({"a"}), 5u);
  EXPECT_EQ(log.count({}), 1u);
  EXPECT_EQ(log.total(), 6u);
}

TEST(LogCsv, QuotedLabelsAndTrim) {
  auto log = parse_log_csv("1 ; \"ack, reject\",\" pay\"\n");
  EXPECT_EQ(log.count({"ack, reject", " pay"}), 1u);
  auto trimmed = parse_log_csv("1 ; \"ack, reject\",\" pay\"\n", LogOptions{true});
  EXPECT_EQ(trimmed.count({"ack, reject", "pay"}), 1u);
}

TEST(LogCsv, Errors) {
  EXPECT_THROW(parse_log_csv("0 ; a\n"), ParseError);
  EXPECT_THROW(parse_log_csv("-1 ; a\n"), ParseError);
  EXPECT_THROW(parse_log_csv("x ; a\n"), ParseError);
  EXPECT_THROW(parse_log_csv("3 a,b\n"), ParseError);
  EXPECT_THROW(parse_log_csv("1 ; a,,b\n"), ParseError);
  EXPECT_THROW(parse_log_csv("1 ; tau\n"), ParseError);
  StochasticLog log;
  EXPECT_THROW(log.add({"a"}, 0), Error);
}

TEST(LogCsv, RoundTrip) {
  auto log = parse_log_csv("2 ; a,b\n1 ; \"x,y\",\"q\"\"t\"\n4 ;\n");
  EXPECT_EQ(parse_log_csv(write_log_csv(log)), log);
}

TEST(Xes, SmallLog) {
  auto log = parse_xes(read_text(data_path("small.xes")));
  EXPECT_EQ(log.total(), 3u);
  EXPECT_EQ(log.count({"a", "b"}), 2u);
  EXPECT_EQ(log.count({"a", "c"}), 1u);
}

TEST(Xes, SingleTrace) {
  auto log = parse_xes(
      "<log><trace><event><string key=\"concept:name\" value=\"a\"/></event>"
      "<event><string key=\"concept:name\" value=\"b\"/><date key=\"time:timestamp\" "
      "value=\"2020-01-01\"/></event></trace></log>");
  EXPECT_EQ(log.total(), 1u);
  EXPECT_EQ(log.count({"a", "b"}), 1u);
}

TEST(Xes, SkipsUnnamedEvents) {
  Diagnostics diags;
  auto log = parse_xes(
      "<log><trace><event><string key=\"concept:name\" value=\"a\"/></event>"
      "<event><string key=\"org:resource\" value=\"x\"/></event></trace></log>",
      {}, &diags);
  EXPECT_EQ(log.count({"a"}), 1u);
  ASSERT_EQ(diags.size(), 1u);
}

TEST(Xes, Errors) {
  EXPECT_THROW(parse_xes("<log><trace>"), ParseError);
  EXPECT_THROW(parse_xes("<log></log>"), Error);
}

TEST(Uemsc, ExactLogIsPerfect) {
  auto lsp = load_lsp("fig1a.slpn");
  auto report = uemsc(parse_log_csv(read_text(data_path("exact.csv"))), lsp);
  EXPECT_NEAR(report.value, 1.0, 1e-9);
  ASSERT_EQ(report.rows.size(), 2u);
  EXPECT_EQ(report.rows[0].trace, (Trace{"a", "b"}));
  EXPECT_NEAR(report.rows[0].model_probability, 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(report.rows[1].model_probability, 1.0 / 3.0, 1e-12);
}

TEST(Uemsc, ImpossibleTrace) {
  StochasticLog log;
  log.add({"z", "z"}, 7);
  EXPECT_DOUBLE_EQ(uemsc(log, load_lsp("fig1a.slpn")).value, 0.0);
}

TEST(Uemsc, HandComputed) {
  StochasticLog log;
  log.add({"a", "b"}, 1);
  log.add({"a", "c"}, 3);
  // 1 - max(1/4 - 2/3, 0) - max(3/4 - 1/3, 0) = 7/12
  EXPECT_NEAR(uemsc(log, load_lsp("fig1a.slpn")).value, 7.0 / 12.0, 1e-12);
}

TEST(Uemsc, ThreadsGiveSameRows) {
  auto lsp = load_lsp("order.slpn");
  auto sample = sample_playout(lsp, PlayoutOptions{500, 3, 1000}).log;
  UemscOptions serial;
  UemscOptions parallel;
  parallel.threads = 4;
  auto a = uemsc(sample, lsp, serial);
  auto b = uemsc(sample, lsp, parallel);
  EXPECT_EQ(a.value, b.value);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].trace, b.rows[i].trace);
    EXPECT_EQ(a.rows[i].model_probability, b.rows[i].model_probability);
  }
}

TEST(UemscProperties, Bounds) {
  std::mt19937_64 rng(71);
  for (int i = 0; i < 30; ++i) {
    auto lsp = slpn::testing::random_lsp(rng);
    StochasticLog log;
    for (int j = 0; j < 6; ++j) {
      log.add(slpn::testing::random_word(rng, 4), std::uniform_int_distribution<std::uint64_t>(1, 9)(rng));
    }
    auto value = uemsc(log, lsp).value;
    EXPECT_GE(value, 0.0);
    EXPECT_LE(value, 1.0);
  }
}

TEST(UemscProperties, CountScalingInvariance) {
  std::mt19937_64 rng(72);
  for (int i = 0; i < 20; ++i) {
    auto lsp = slpn::testing::random_lsp(rng);
    StochasticLog log;
    StochasticLog scaled;
    for (int j = 0; j < 5; ++j) {
      auto t = slpn::testing::random_word(rng, 3);
      auto c = std::uniform_int_distribution<std::uint64_t>(1, 9)(rng);
      log.add(t, c);
      scaled.add(t, c * 13);
    }
    EXPECT_NEAR(uemsc(log, lsp).value, uemsc(scaled, lsp).value, 1e-12);
  }
}

TEST(UemscProperties, PerfectFitOnAcyclicModels) {
  // Exact rational trace distribution of the model as the log: counts are
  // the probabilities scaled to a common denominator.
  std::mt19937_64 rng(73);
  slpn::testing::RandomNetOptions options;
  options.acyclic = true;
  options.min_places = 3;
  options.integer_weights = true;
  for (int i = 0; i < 20; ++i) {
    auto lsp = slpn::testing::random_lsp(rng, options);
    auto traces = slpn::testing::enumerate_traces<Rational>(
        lsp, 64, [](double w) { return Rational(static_cast<long long>(w)); });
    boost::multiprecision::cpp_int lcm = 1;
    for (const auto& [trace, p] : traces) {
      lcm = boost::multiprecision::lcm(lcm, boost::multiprecision::denominator(p));
    }
    ASSERT_LT(lcm, boost::multiprecision::cpp_int(1) << 62);
    StochasticLog log;
    Rational total = 0;
    for (const auto& [trace, p] : traces) {
      total += p;
      Rational scaled = p * lcm;
      log.add(trace, static_cast<std::uint64_t>(boost::multiprecision::numerator(scaled)));
    }
    ASSERT_EQ(total, 1);
    EXPECT_NEAR(uemsc(log, lsp).value, 1.0, 1e-9);
  }
}

}  // namespace
