#include <doctest.h>

#include "disktau/cli.hpp"
#include "disktau/stable_graphs.hpp"

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = disktau::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("disktau_test_" + name);
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("bracket") {
    const auto a = run({"bracket", "--sector", "open", "--genus", "0", "--a", "1,1", "--k", "3"});
    CHECK(a.code == 0);
    CHECK(first_line(a.out) == "6");
    const auto b = run({"bracket", "--sector", "closed", "--genus", "1", "--a", "1"});
    CHECK(b.code == 0);
    CHECK(first_line(b.out) == "1/24");
    const auto c = run({"bracket", "--sector", "open", "--genus", "1", "--a", "1,1", "--k", "2", "--format", "json"});
    CHECK(c.code == 0);
    const auto j = nlohmann::json::parse(c.out);
    CHECK(j.at("status").get<std::string>().find("conjectural") != std::string::npos);
  }

  TEST_CASE("usage errors") {
    CHECK(run({"bracket", "--genus", "x"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"nonsense"}).code == 2);
    CHECK(run({"verify", "no-such-identity"}).code == 2);
    CHECK(run({"bracket", "--genus", "0", "--a", "1,-2"}).code == 2);
  }

  TEST_CASE("verify") {
    const auto v = run({"verify", "virasoro-genus0", "--n", "2", "--degree", "8"});
    CHECK(v.code == 0);
    CHECK(first_line(v.out) == "PASS");
    const auto csv = run({"verify", "xxz", "--max-A", "2", "--max-l", "1", "--max-n", "1", "--format", "csv", "--verbose"});
    CHECK(csv.code == 0);
    CHECK(first_line(csv.out) == "identity,params,lhs,rhs,pass");
    CHECK(csv.out.find("FAIL") == std::string::npos);
    const auto single = run({"verify", "open-dilaton", "--a", "1", "--k", "3"});
    CHECK(single.code == 0);
  }

  TEST_CASE("series") {
    const auto s = run({"series", "Fo", "--degree", "3", "--ncap", "1"});
    CHECK(s.code == 0);
    CHECK(s.out.find("u^-1 s^3 : 1/6") != std::string::npos);
    const auto k = run({"series", "Fo", "--degree", "3", "--ncap", "1", "--route", "kdv"});
    CHECK(k.out == s.out);
  }

  TEST_CASE("graphs") {
    const auto in = temp_file("in.json");
    const auto out = temp_file("out.json");
    {
      std::ofstream f(in);
      f << disktau::graph_to_json(disktau::StableGraph::gamma(5, 1));
    }
    const auto v = run({"graphs", "validate", "--input", in.string()});
    CHECK(v.code == 0);
    const auto b = run({"graphs", "boundary", "--k", "5", "--l", "1", "--codim", "1", "--boundary-edge-only",
                        "--output", out.string()});
    CHECK(b.code == 0);
    std::ifstream f(out);
    std::stringstream ss;
    ss << f.rdbuf();
    CHECK(disktau::graphs_from_json(ss.str()).size() == 26);
    const auto base = run({"graphs", "base", "--input", out.string(), "--format", "json"});
    CHECK(base.code == 0);
    CHECK(nlohmann::json::parse(base.out).is_array());
    CHECK(run({"graphs", "validate", "--input", temp_file("missing.json").string()}).code != 0);
    std::filesystem::remove(in);
    std::filesystem::remove(out);
  }
}
