#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gostrata_cli/cli.hpp"
#include "json.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = gos::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(GOSTRATA_DATA_DIR) + "/" + name; }

std::string golden(const std::string& name) {
  std::ifstream in(std::string(GOSTRATA_GOLDEN_DIR) + "/" + name);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string temp_file(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("gostrata_cli_" + name);
  std::ofstream(path) << text;
  return path.string();
}

}  // namespace

TEST_CASE("golden outputs") {
  CHECK(run({"strata-table", "--datum", data("quartic.json"), "--format", "csv"}).out == golden("quartic_table.csv"));
  CHECK(run({"strata-table", "--datum", data("quartic.json"), "--format", "ascii"}).out ==
        golden("quartic_table.txt"));
  CHECK(run({"strata", "--datum", data("f10_example.json"), "--T", "p1:7,p1:5,p1:3"}).out ==
        golden("f10_stratum.json"));
  CHECK(run({"link", "--standard", "EtaTauMinusPlus", "--datum", data("band_f5.json"), "--tau", "2", "--p", "3"}).out ==
        golden("band_f5_eta.json"));
  CHECK(run({"picard", "--datum", data("quartic.json"), "--matrix", "--format", "ascii"}).out ==
        golden("quartic_hasse.txt"));
  CHECK(run({"ample", "--datum", data("quartic.json"), "--format", "csv"}).out == golden("quartic_ample.csv"));
}

TEST_CASE("place arguments accept bare indices") {
  CHECK(run({"strata", "--datum", data("f10_example.json"), "--T", "7,5,3"}).out == golden("f10_stratum.json"));
}

TEST_CASE("links from files") {
  const Result ok = run({"link", "--validate", data("figure_link.json")});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("\"v\": 9") != std::string::npos);

  const Result comp = run({"link", "--compose", data("figure_link_inverse.json"), data("figure_link.json")});
  CHECK(comp.code == 0);
  CHECK(comp.out.find("\"v\": 0") != std::string::npos);

  const std::string crossing =
      temp_file("crossing.json", R"({"n":4,"source_nodes":[0,1],"target_nodes":[0,1],"disp":{"0":1,"1":-1}})");
  const Result bad = run({"link", "--validate", crossing});
  CHECK(bad.code == gos::cli::kExitDomain);
  CHECK(bad.out.find("\"ok\": false") != std::string::npos);
}

TEST_CASE("exit codes") {
  CHECK(run({}).code == gos::cli::kExitUsage);
  CHECK(run({"no-such-verb"}).code == gos::cli::kExitUsage);
  CHECK(run({"strata", "--no-such-flag"}).code == gos::cli::kExitUsage);
  CHECK(run({"dieudonne", "--roundtrip", "--p", "3", "--f", "2"}).code == gos::cli::kExitUsage);
  CHECK(run({"link", "--frobenius", "2"}).code == gos::cli::kExitUsage);

  const Result missing = run({"strata-table", "--datum", data("does_not_exist.json")});
  CHECK(missing.code != 0);
  CHECK_FALSE(missing.err.empty());

  const std::string broken = temp_file("broken.json", "{\"primes\": [");
  CHECK(run({"strata-table", "--datum", broken}).code == gos::cli::kExitDomain);
  // T must avoid S.
  CHECK(run({"strata", "--datum", data("f10_example.json"), "--T", "p1:4"}).code == gos::cli::kExitDomain);
  CHECK(run({"dieudonne", "--classify", "--datum", data("quartic.json"), "--format", "csv"}).code ==
        gos::cli::kExitUsage);
}

TEST_CASE("worker count does not change output") {
  const auto one = run({"strata-table", "--datum", data("f10_example.json"), "--jobs", "1"});
  const auto four = run({"strata-table", "--datum", data("f10_example.json"), "--jobs", "4"});
  CHECK(one.code == 0);
  CHECK(one.out == four.out);

  const std::vector<std::string> rt{"dieudonne", "--roundtrip", "--seed", "11", "--p", "2", "--f", "3", "--trials", "12",
                                    "--format", "json"};
  auto with_jobs = [&](const char* j) {
    auto args = rt;
    args.push_back("--jobs");
    args.push_back(j);
    return run(args);
  };
  const Result a = with_jobs("1"), b = with_jobs("3");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("roundtrip summary and point files") {
  const Result r = run({"dieudonne", "--roundtrip", "--seed", "7", "--p", "3", "--f", "2", "--trials", "20"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("20/20 roundtrips exact", 0) == 0);

  const Result pt =
      run({"dieudonne", "--classify", "--emit-point", "--seed", "5", "--p", "2", "--f", "2", "--trial", "3"});
  REQUIRE(pt.code == 0);
  const std::string file = temp_file("point.json", nlohmann::json::parse(pt.out).at("point").dump());
  const Result cls = run({"dieudonne", "--classify", "--point", file});
  CHECK(cls.code == 0);
  CHECK(cls.out.find("stratum") != std::string::npos);
  const Result tw = run({"dieudonne", "--twist", "--point", file});
  CHECK(tw.code == 0);
}

TEST_CASE("picard verbs") {
  const Result fd = run({"picard", "--datum", data("band_f5.json"), "--fiber-degree", "--p", "3"});
  CHECK(fd.code == 0);
  const Result nb = run({"picard", "--datum", data("quartic.json"), "--fiber-degree"});
  CHECK(nb.code == 0);
  CHECK(nb.out.find("\"fiber_degree\": \"-6\"") != std::string::npos);
  const Result cls = run({"picard", "--datum", data("quartic.json"), "--class", "p1:1"});
  CHECK(cls.code == 0);
  CHECK(cls.out.find("\"class\": [\n    \"3\",\n    \"-1\"") != std::string::npos);
  const Result viol = run({"ample", "--datum", data("quartic.json"), "--t", "1,5,1,1"});
  CHECK(viol.code == 0);
  CHECK(viol.out.find("false") != std::string::npos);
}

TEST_CASE("selftest") {
  const Result r = run({"selftest", "--quick"});
  CHECK(r.code == 0);
  CHECK(r.out.find("[FAIL]") == std::string::npos);
}
