#include "qinfer/cli.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "golden_values.hpp"

namespace qinfer::cli {
namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return std::string(QINFER_FIXTURE_DIR) + "/" + name; }

std::filesystem::path temp_file(const std::string& name) { return std::filesystem::temp_directory_path() / name; }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

TEST(FormatNumber, TwelveSignificantDigits) {
  EXPECT_EQ(format_number(1.0 / 3), "0.333333333333");
  EXPECT_EQ(format_number(2.0 / 3), "0.666666666667");
  EXPECT_EQ(format_number(0.5000000000000011), "0.5");
  EXPECT_EQ(format_number(1e-17), "0");
  EXPECT_EQ(format_number(1.0), "1");
}

TEST(Play, ClassicalTable) {
  const auto r = run_cli({"play", "--scenario", "classical", "--pick", "0", "--open", "1"});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_NE(r.out.find("by_door   0.333333333333 0 0.666666666667"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("switch    0.666666666667 (door 2)"), std::string::npos);
  EXPECT_TRUE(r.err.empty());
}

TEST(Play, SamePickAndOpenIsUsageError) {
  const auto r = run_cli({"play", "--scenario", "classical", "--pick", "0", "--open", "0"});
  EXPECT_EQ(r.code, kUsage);
  EXPECT_TRUE(r.out.empty());
  EXPECT_NE(r.err.find("must differ"), std::string::npos);
}

TEST(Play, BreveJson) {
  const auto r = run_cli({"play", "--scenario", "breve", "--pick", "1", "--open", "0", "--format", "json"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["by_door"], nlohmann::json({0.0, 1.0, 0.0}));
  EXPECT_EQ(doc["stay_win"], 1.0);
  EXPECT_EQ(doc["scenario"], "breve");
}

TEST(Play, BarVariantsAndCsv) {
  const auto a = run_cli({"play", "--scenario", "bar(0.6)", "--pick", "2", "--open", "0", "--format", "csv"});
  ASSERT_EQ(a.code, kOk) << a.err;
  EXPECT_EQ(lines(a.out).at(1), "bar(0.6),2,0,0,0.5,0.5,0.5,0.5");
  const auto b = run_cli({"play", "--scenario", "bar", "--lambda", "0.6", "--pick", "2", "--open", "0", "--format", "csv"});
  EXPECT_EQ(b.out, a.out);
  EXPECT_EQ(run_cli({"play", "--scenario", "bar", "--pick", "0", "--open", "1"}).code, kUsage);
  EXPECT_EQ(run_cli({"play", "--scenario", "bar(2)", "--pick", "0", "--open", "1"}).code, kUsage);
  EXPECT_EQ(run_cli({"play", "--scenario", "nope", "--pick", "0", "--open", "1"}).code, kUsage);
  EXPECT_EQ(run_cli({"play", "--scenario", "classical", "--pick", "0"}).code, kUsage);
}

TEST(Table, SixRowsPerScenario) {
  const auto breve = run_cli({"table", "--scenario", "breve", "--format", "csv"});
  ASSERT_EQ(breve.code, kOk) << breve.err;
  const auto rows = lines(breve.out);
  ASSERT_EQ(rows.size(), 7u);
  EXPECT_EQ(rows[0], "scenario,pick,open,p0,p1,p2,stay_win,switch_win");
  EXPECT_EQ(rows[1], "breve,0,1,0.25,0,0.75,0.25,0.75");
  EXPECT_EQ(rows[2], "breve,0,2,1,0,0,1,0");
  EXPECT_EQ(rows[3], "breve,1,0,0,1,0,1,0");
  EXPECT_EQ(rows[4], "breve,1,2,0.75,0.25,0,0.25,0.75");
  EXPECT_EQ(rows[5], "breve,2,0,0,0.75,0.25,0.25,0.75");
  EXPECT_EQ(rows[6], "breve,2,1,0,0,1,1,0");

  const auto classical = run_cli({"table", "--scenario", "classical", "--format", "json"});
  const auto doc = nlohmann::json::parse(classical.out);
  ASSERT_EQ(doc.size(), 6u);
  for (const auto& row : doc) {
    EXPECT_EQ(row["stay_win"], 0.333333333333);
    EXPECT_EQ(row["switch_win"], 0.666666666667);
  }

  const auto hat = run_cli({"table", "--scenario", "hat"});
  ASSERT_EQ(hat.code, kOk);
  const auto hat_rows = lines(hat.out);
  ASSERT_EQ(hat_rows.size(), 8u);
  for (std::size_t k = 2; k < hat_rows.size(); ++k) EXPECT_EQ(hat_rows[k].substr(hat_rows[k].size() - 1), "1");
}

TEST(Host, BreveMinimizer) {
  const auto r = run_cli({"host", "--scenario", "breve", "--pick", "0", "--format", "json"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["minimizing_opens"], nlohmann::json({1}));
  EXPECT_EQ(doc["minimized_best_response"], 0.75);
  EXPECT_FALSE(doc["tie"].get<bool>());
}

TEST(Sweep, CsvRowsAndRoundTrip) {
  const auto path = temp_file("qinfer_sweep_11.csv");
  const auto r = run_cli({"sweep", "--steps", "11", "--out", path.string()});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto rows = lines(slurp(path));
  ASSERT_EQ(rows.size(), 12u);
  EXPECT_EQ(rows[0], "lambda,stay_win");
  EXPECT_EQ(rows[1], "0,0");
  EXPECT_EQ(rows[7], "0.6,0.5");
  EXPECT_EQ(rows[11], "1,1");

  const auto points = monty::lambda_sweep(11);
  for (std::size_t k = 0; k < points.size(); ++k) {
    const auto& row = rows[k + 1];
    const auto comma = row.find(',');
    const double lambda = std::stod(row.substr(0, comma));
    const double stay = std::stod(row.substr(comma + 1));
    EXPECT_EQ(format_number(lambda), format_number(points[k].lambda));
    EXPECT_EQ(format_number(stay), format_number(points[k].stay_win));
    EXPECT_NEAR(stay, points[k].stay_win, 5e-13);
  }
  std::filesystem::remove(path);
}

TEST(Sweep, TwoStepsAndSvg) {
  const auto csv = temp_file("qinfer_sweep_2.csv");
  ASSERT_EQ(run_cli({"sweep", "--steps", "2", "--out", csv.string()}).code, kOk);
  EXPECT_EQ(slurp(csv), "lambda,stay_win\n0,0\n1,1\n");
  std::filesystem::remove(csv);

  const auto svg = temp_file("qinfer_sweep.svg");
  ASSERT_EQ(run_cli({"sweep", "--steps", "5", "--out", svg.string()}).code, kOk);
  const std::string doc = slurp(svg);
  EXPECT_EQ(doc.rfind("<svg", 0), 0u);
  std::size_t count = 0;
  for (auto pos = doc.find("<polyline"); pos != std::string::npos; pos = doc.find("<polyline", pos + 1)) ++count;
  EXPECT_EQ(count, 1u);
  // lambda = 0 maps to the lower-left plot corner, lambda = 1 to the upper right.
  EXPECT_NE(doc.find("points=\"60,310 "), std::string::npos);
  EXPECT_NE(doc.find(" 460,20\""), std::string::npos);
  std::filesystem::remove(svg);

  EXPECT_EQ(run_cli({"sweep", "--steps", "1", "--out", csv.string()}).code, kUsage);
  EXPECT_EQ(run_cli({"sweep", "--steps", "3", "--out", "/nonexistent-dir/x.csv"}).code, kIo);
}

TEST(Infer, ShippedFixture) {
  const auto r = run_cli({"infer", "--network", fixture("classical_monty.json"), "--evidence", "B=0", "C=1", "--query",
                          "A"});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_NE(r.out.find("diagonal 0.333333333333 0 0.666666666667"), std::string::npos) << r.out;

  const auto root = run_cli({"infer", "--network", fixture("classical_monty.json"), "--query", "A", "--format", "json"});
  ASSERT_EQ(root.code, kOk) << root.err;
  const auto doc = nlohmann::json::parse(root.out);
  EXPECT_EQ(doc["diagonal"], nlohmann::json({0.333333333333, 0.333333333333, 0.333333333333}));

  const auto breve = run_cli({"infer", "--network", fixture("breve_monty.json"), "--evidence", "B=0", "C=1", "--query",
                              "A", "--format", "csv"});
  ASSERT_EQ(breve.code, kOk) << breve.err;
  EXPECT_NE(breve.out.find("0,0,0.25,0"), std::string::npos);
  EXPECT_NE(breve.out.find("2,2,0.75,0"), std::string::npos);
}

TEST(Infer, ErrorCodes) {
  const auto impossible = run_cli({"infer", "--network", fixture("classical_monty.json"), "--evidence", "B=0", "C=0",
                                   "--query", "A"});
  EXPECT_EQ(impossible.code, kImpossibleEvidence);
  EXPECT_NE(impossible.err.find("C=0"), std::string::npos);
  EXPECT_TRUE(impossible.out.empty());

  EXPECT_EQ(run_cli({"infer", "--network", "/nonexistent.json", "--query", "A"}).code, kIo);
  EXPECT_EQ(run_cli({"infer", "--network", fixture("classical_monty.json"), "--evidence", "B0", "--query", "A"}).code,
            kUsage);

  const auto bad = temp_file("qinfer_bad.json");
  {
    std::ofstream out(bad);
    out << "{ not json";
  }
  EXPECT_EQ(run_cli({"infer", "--network", bad.string(), "--query", "A"}).code, kValidation);
  std::filesystem::remove(bad);
}

TEST(Validate, GoodAndBadFiles) {
  const auto ok = run_cli({"validate", "--network", fixture("classical_monty.json")});
  EXPECT_EQ(ok.code, kOk);
  EXPECT_NE(ok.out.find("valid: 3 nodes"), std::string::npos);

  const auto bad = temp_file("qinfer_cycle.json");
  {
    std::ofstream out(bad);
    out << R"({"nodes": [{"id": "A", "dim": 1, "parents": ["B"]}, {"id": "B", "dim": 1, "parents": ["A"]}],
               "factors": {"A": [[1]], "B": [[1]]}})";
  }
  const auto r = run_cli({"validate", "--network", bad.string()});
  EXPECT_EQ(r.code, kValidation);
  EXPECT_NE(r.err.find("acyclic"), std::string::npos);
  std::filesystem::remove(bad);
}

TEST(Export, WritesLoadableNetwork) {
  const auto path = temp_file("qinfer_export_bar.json");
  ASSERT_EQ(run_cli({"export", "--scenario", "bar(0.6)", "--out", path.string()}).code, kOk);
  const auto r = run_cli({"infer", "--network", path.string(), "--evidence", "B=0", "C=1", "--query", "A"});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_NE(r.out.find("diagonal 0.5 0 0.5"), std::string::npos) << r.out;
  std::filesystem::remove(path);
}

TEST(Usage, UnknownCommandAndHelp) {
  EXPECT_EQ(run_cli({"frobnicate"}).code, kUsage);
  EXPECT_EQ(run_cli({}).code, kUsage);
  EXPECT_EQ(run_cli({"--help"}).code, kOk);
}

TEST(Binary, ExitCodesPropagate) {
  const std::string bin = QINFER_CLI_PATH;
  const auto status = [&](const std::string& args) {
    const int raw = std::system((bin + " " + args + " > /dev/null 2>&1").c_str());
    return WEXITSTATUS(raw);
  };
  EXPECT_EQ(status("play --scenario classical --pick 0 --open 1"), 0);
  EXPECT_EQ(status("play --scenario classical --pick 0 --open 0"), 1);
  EXPECT_EQ(status("infer --network " + fixture("classical_monty.json") + " --evidence B=0 C=0 --query A"), 3);
  EXPECT_EQ(status("validate --network /nonexistent.json"), 4);
}

}  // namespace
}  // namespace qinfer::cli
