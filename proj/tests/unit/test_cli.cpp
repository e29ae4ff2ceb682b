#include <gtest/gtest.h>

#include <cstdio>
#include <json.hpp>
#include <string>
#include <sys/wait.h>

#include "slpn/log.hpp"
#include "slpn/text.hpp"
#include "support.hpp"

namespace {

using slpn::testing::data_path;

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  std::string command = std::string(SLPN_CLI_PATH) + " " + args + " 2>/dev/null";
  Run result;
  FILE* pipe = popen(command.c_str(), "r");
  if (pipe == nullptr) return result;
  char buffer[4096];
  std::size_t n;
  while ((n = fread(buffer, 1, sizeof buffer, pipe)) > 0) result.out.append(buffer, n);
  int status = pclose(pipe);
  result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string net(const char* name) { return "'" + data_path(name) + "'"; }

TEST(Cli, InspectOrderNet) {
  auto r = run("inspect " + net("order.slpn"));
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')),
            "16 states, 3 final, 0 livelock, language mass 1.000000000");
}

TEST(Cli, InspectLivelockNet) {
  auto r = run("inspect " + net("livelock.slpn"));
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("6 states, 2 final, 2 livelock", 0), 0u) << r.out;
}

TEST(Cli, InspectUnboundedFails) {
  auto path = std::string(::testing::TempDir()) + "unbounded.slpn";
  FILE* f = fopen(path.c_str(), "w");
  ASSERT_NE(f, nullptr);
  fputs("place p\ntransition g timed 1 a\narc g p\n", f);
  fclose(f);
  auto r = run("inspect --max-states 100 '" + path + "'");
  EXPECT_EQ(r.code, 1);
  EXPECT_TRUE(r.out.empty());
}

TEST(Cli, Outcome) {
  EXPECT_EQ(run("outcome " + net("order.slpn") + " --final h:1").out, "0.090909091\n");
  EXPECT_EQ(run("outcome " + net("order.slpn") + " --final h:1 --final r:1 --final c:1").out,
            "1.000000000\n");
  EXPECT_EQ(run("outcome " + net("livelock.slpn") + " --final p1:1 --final p5:1").out,
            "0.666666667\n");
  EXPECT_EQ(run("outcome " + net("order.slpn") + " --final h:1 --digits 4").out, "0.0909\n");
}

TEST(Cli, TraceProb) {
  auto r = run("trace-prob " + net("order.slpn") +
               " --trace 'open,finalize,ack accept,finalize,ack reject'");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "0.020833333");
}

TEST(Cli, TraceProbWithOracle) {
  auto r = run("trace-prob " + net("fig1a.slpn") + " --trace a,b --oracle --format json");
  ASSERT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  double value = j["results"]["value"];
  EXPECT_NEAR(value, 2.0 / 3.0, 1e-9);
  double lower = j["results"]["bracket"]["lower"];
  double upper = j["results"]["bracket"]["upper"];
  EXPECT_LE(lower - 1e-9, value);
  EXPECT_LE(value, upper + 1e-9);
}

TEST(Cli, SpecProb) {
  EXPECT_EQ(run("spec-prob " + net("fig1a.slpn") + " --dfa " + net("universal.dfa")).out,
            "1.000000000\n");
  EXPECT_EQ(run("spec-prob " + net("order.slpn") + " --dfa " + net("response.dfa")).out,
            "0.090909091\n");
}

TEST(Cli, Compliance) {
  auto r = run("compliance " + net("order.slpn") + " --spec " + net("order.pdecl") + " --format json");
  ASSERT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  const auto& rows = j["results"]["constraints"];
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0]["holds"], true);
  EXPECT_EQ(rows[1]["holds"], true);
  EXPECT_EQ(rows[2]["holds"], false);
  EXPECT_NEAR(rows[2]["value"].get<double>(), 3.0 / 11.0, 1e-9);
  EXPECT_EQ(j["results"]["compliant"], false);
}

TEST(Cli, Uemsc) {
  EXPECT_EQ(run("uemsc " + net("fig1a.slpn") + " --log " + net("exact.csv")).out.substr(0, 12),
            "1.000000000\n");
  EXPECT_EQ(run("uemsc " + net("fig1a.slpn") + " --xes --log " + net("small.xes")).out.substr(0, 12),
            "1.000000000\n");
}

TEST(Cli, SampleIsDeterministic) {
  auto a = run("sample " + net("order.slpn") + " --n 200 --seed 4");
  auto b = run("sample " + net("order.slpn") + " --n 200 --seed 4");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  auto log = slpn::parse_log_csv(a.out);
  EXPECT_EQ(log.total(), 200u);
}

TEST(Cli, Export) {
  auto dot = run("export " + net("order.slpn") + " --what dot");
  EXPECT_EQ(dot.code, 0);
  EXPECT_NE(dot.out.find("digraph"), std::string::npos);
  auto system = run("export " + net("order.slpn") + " --what system");
  EXPECT_NE(system.out.find("x_0 = "), std::string::npos);
}

TEST(Cli, JsonMatchesText) {
  auto text = run("outcome " + net("livelock.slpn") + " --final p1:1 --final p5:1");
  auto json = run("outcome " + net("livelock.slpn") + " --final p1:1 --final p5:1 --format json");
  auto j = nlohmann::json::parse(json.out);
  EXPECT_EQ(slpn::text::format_fixed(j["results"]["value"].get<double>(), 9) + "\n", text.out);
}

TEST(Cli, UsageErrors) {
  for (const std::string& args :
       {std::string(""), std::string("bogus"), "outcome " + net("order.slpn"),
        "trace-prob " + net("order.slpn"), "inspect " + net("order.slpn") + " --format xml",
        "sample " + net("order.slpn") + " --n x"}) {
    auto r = run(args);
    EXPECT_EQ(r.code, 2) << args;
    EXPECT_TRUE(r.out.empty()) << args;
  }
}

TEST(Cli, AnalysisErrors) {
  EXPECT_EQ(run("inspect /nonexistent/net.slpn").code, 1);
  EXPECT_EQ(run("outcome " + net("order.slpn") + " --final q3:1").code, 1);
  EXPECT_EQ(run("spec-prob " + net("order.slpn") + " --dfa " + net("order.slpn")).code, 1);
}

}  // namespace
