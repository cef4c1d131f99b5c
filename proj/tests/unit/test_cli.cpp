/*
   Copyright 2026 The hyptrace Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"

#include "hyptrace/cli.hpp"
#include "support/brute.hpp"

using namespace hyptrace;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), {"--log-level", "off"});
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, sep)) out.push_back(cell);
  return out;
}

// Rows of the first table in a CSV document, keyed by column name.
std::vector<std::map<std::string, std::string>> csv_rows(const std::string& text) {
  std::vector<std::map<std::string, std::string>> rows;
  std::vector<std::string> header;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (line.empty()) {
      if (!header.empty()) break;
      continue;
    }
    if (line[0] == '#' || line.find(',') == std::string::npos) continue;
    if (header.empty()) {
      header = split(line, ',');
      continue;
    }
    const auto cells = split(line, ',');
    std::map<std::string, std::string> row;
    for (std::size_t i = 0; i < header.size(); ++i) row[header[i]] = i < cells.size() ? cells[i] : "";
    rows.push_back(row);
  }
  return rows;
}

std::string strip_wall_time(const std::string& text) {
  std::stringstream ss(text);
  std::string line, out;
  while (std::getline(ss, line))
    if (line.rfind("# wall_time_s=", 0) != 0) out += line + "\n";
  return out;
}

}  // namespace

TEST_CASE("avg-trace matches the golden sums") {
  const brute::Golden gold = brute::load_golden("q3_g2.json");
  const Outcome r = run_cli({"avg-trace", "--q", "3", "--g", "2", "--n-max", "10"});
  REQUIRE(r.code == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 10);
  for (const auto& row : rows) {
    const int n = std::stoi(row.at("n"));
    CHECK(BigInt(row.at("sum_s_n")) == gold.sum_s.at(n));
    CHECK(row.at("curves") == "162");
    CHECK(row.at("std_error") == "0");
  }
  CHECK(r.out.rfind("# tool=hyptrace version=1.0.0\n", 0) == 0);
  CHECK(r.out.find("# config command=avg-trace q=3 g=2 n_max=10") != std::string::npos);
}

TEST_CASE("pair matches the golden sums") {
  const brute::Golden gold = brute::load_golden("q3_g1.json");
  const Outcome r = run_cli({"pair", "--g", "1", "--n-max", "4"});
  REQUIRE(r.code == 0);
  const auto rows = csv_rows(r.out);
  CHECK(rows.size() == 10);
  for (const auto& row : rows)
    CHECK(BigInt(row.at("sum_s_m_s_n")) == gold.sum_pairs.at({std::stoi(row.at("m")), std::stoi(row.at("n"))}));
  const Outcome one = run_cli({"pair", "--g", "1", "--m", "2", "--n", "2"});
  REQUIRE(csv_rows(one.out).size() == 1);
  CHECK(BigInt(csv_rows(one.out)[0].at("sum_s_m_s_n")) == gold.sum_pairs.at({2, 2}));
}

TEST_CASE("sampled runs report a standard error and do not depend on threads") {
  const std::vector<std::string> base{"avg-trace", "--q", "5", "--g", "2", "--n-max", "4", "--sample", "3000", "--seed", "11"};
  auto with_threads = [&](const std::string& t) {
    std::vector<std::string> args{"--threads", t};
    args.insert(args.end(), base.begin(), base.end());
    return run_cli(args);
  };
  const Outcome a = with_threads("1");
  const Outcome b = with_threads("3");
  REQUIRE(a.code == 0);
  CHECK(strip_wall_time(a.out) == strip_wall_time(b.out));
  for (const auto& row : csv_rows(a.out)) CHECK(std::stod(row.at("std_error")) > 0);
  CHECK(a.out.find("mode=sample") != std::string::npos);
  CHECK(a.out.find("threads") == std::string::npos);
}

TEST_CASE("lfun json") {
  const Outcome r = run_cli({"lfun", "--q", "3", "--poly", "0,1,0,1", "--n-max", "4"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["tool"] == "hyptrace");
  CHECK(j["result"]["Lstar"] == nlohmann::json::array({1, 0, 3}));
  CHECK(j["result"]["s"] == nlohmann::json::array({0, -6, 0, 18}));
  CHECK(j["result"]["points"] == nlohmann::json::array({4, 16, 28, 64}));
  CHECK(j["tables"]["power_sums"][1]["s_n"] == "-6");
  const Outcome csv = run_cli({"--format", "csv", "lfun", "--poly", "0,1,0,1"});
  CHECK(csv.out.find("# table=Lstar") != std::string::npos);
  CHECK(run_cli({"lfun", "--poly", "0,0,1,1"}).code == cli::kExitInvalid);
}

TEST_CASE("charsum tables") {
  const Outcome r = run_cli({"charsum", "--q", "3", "--n", "5"});
  REQUIRE(r.code == 0);
  std::vector<std::string> s;
  for (const auto& row : csv_rows(r.out)) s.push_back(row.at("S"));
  CHECK(s == std::vector<std::string>{"48", "0", "144", "0", "432"});
  CHECK(r.out.find("# table=duality") != std::string::npos);
  CHECK(r.out.find("# table=bounds") != std::string::npos);
}

TEST_CASE("verify, one-level and rmt") {
  const Outcome v = run_cli({"verify", "--q", "3", "--g", "1"});
  CHECK(v.code == 0);
  CHECK(v.out.find("all exact identities passed") != std::string::npos);
  for (const auto& row : csv_rows(v.out)) CHECK(row.at("status") == "pass");

  const Outcome one = run_cli({"one-level", "--poly", "0,1,0,1", "--fhat", "triangle:1.5"});
  REQUIRE(one.code == 0);
  const auto rows = csv_rows(one.out);
  REQUIRE(rows.size() == 1);
  CHECK(std::stod(rows[0].at("fourier")) == doctest::Approx(1.0 / 3));
  CHECK(std::stod(rows[0].at("direct")) == doctest::Approx(1.0 / 3));

  const Outcome ens = run_cli({"one-level", "--g", "2", "--fhat", "cosine:1.2"});
  REQUIRE(ens.code == 0);
  CHECK(csv_rows(ens.out).size() == 2);
  CHECK(run_cli({"one-level", "--g", "1", "--fhat", "triangle:2"}).code == cli::kExitInvalid);

  const Outcome rm = run_cli({"--format", "json", "rmt", "--g", "2"});
  REQUIRE(rm.code == 0);
  const auto j = nlohmann::json::parse(rm.out);
  CHECK(j["tables"]["trace_moments"][1]["moment"] == -1);
}

TEST_CASE("csv escaping and json strings") {
  CHECK(cli::csv_escape("plain") == "plain");
  CHECK(cli::csv_escape("a,b") == "\"a,b\"");
  CHECK(cli::csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(cli::csv_escape("two\nlines") == "\"two\nlines\"");

  cli::Document doc;
  doc.config = {{"command", "test"}};
  doc.notes = {{"note", "x,y"}};
  doc.tables.push_back({"t", {"a", "b"}, {{cli::Cell{std::int64_t{1}}, cli::Cell{std::string("123456789012345678901234567890")}},
                                          {cli::Cell{}, cli::Cell{0.5}}}});
  std::ostringstream csv;
  cli::write_csv(csv, doc);
  CHECK(csv.str().find("a,b\n1,123456789012345678901234567890\n,0.5\n") != std::string::npos);
  std::ostringstream js;
  cli::write_json(js, doc);
  const auto j = nlohmann::json::parse(js.str());
  CHECK(j["tables"]["t"][0]["b"] == "123456789012345678901234567890");
  CHECK(j["tables"]["t"][1]["a"].is_null());
  CHECK(j["tables"]["t"][1]["b"] == 0.5);
}

TEST_CASE("exit codes and errors") {
  CHECK(run_cli({"--help"}).code == cli::kExitOk);
  CHECK(run_cli({"avg-trace", "--bogus"}).code == cli::kExitInvalid);
  CHECK(run_cli({}).code == cli::kExitInvalid);
  const Outcome even = run_cli({"avg-trace", "--q", "2"});
  CHECK(even.code == cli::kExitInvalid);
  CHECK(even.err.find("odd q required") != std::string::npos);
  CHECK(run_cli({"avg-trace", "--q", "6"}).code == cli::kExitInvalid);
  CHECK(run_cli({"avg-trace", "--q", "5", "--g", "4", "--budget", "1000"}).code == cli::kExitInvalid);
  CHECK(run_cli({"avg-trace", "--g", "0"}).code == cli::kExitInvalid);
  CHECK(run_cli({"charsum"}).code == cli::kExitInvalid);
  CHECK(run_cli({"--format", "xml", "rmt"}).code == cli::kExitInvalid);
}

TEST_CASE("output file") {
  const auto path = std::filesystem::temp_directory_path() / "hyptrace_cli_out.csv";
  std::filesystem::remove(path);
  const Outcome r = run_cli({"--out", path.string(), "rmt", "--g", "1"});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::stringstream body;
  body << in.rdbuf();
  CHECK(body.str().rfind("# tool=hyptrace", 0) == 0);
  CHECK(run_cli({"--out", "/nonexistent/dir/x.csv", "rmt"}).code == cli::kExitInvalid);
}
