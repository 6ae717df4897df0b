#include <catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "layergraph/cli.hpp"

using namespace layergraph;
using nlohmann::json;

namespace {

cli::JobResult run_json(const std::string& line) { return cli::run_line(line, 42, std::nullopt); }

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("distinguish command with rational widths") {
  const auto res = run_json(R"({"command":"distinguish","params":{"eps1":"3/5","eps2":"7/10"}})");
  REQUIRE(res.ok);
  CHECK(res.payload.at("kind") == "comb");
  CHECK(res.payload.at("N") == 3);
  CHECK(res.payload.at("M") == 2);
  CHECK(res.payload.at("threshold") == "sqrt(7)/4");
  CHECK(res.payload.at("present_in") == 2);
  CHECK(res.diagnostics.empty());  // rational inputs carry no float caveat
}

TEST_CASE("float widths get a tolerance caveat") {
  const auto res = run_json(R"({"command":"signature","params":{"eps":1.92}})");
  REQUIRE(res.ok);
  CHECK(res.payload.at("integer_part") == 1);
  CHECK(res.payload.at("fractional_part").get<double>() == Catch::Approx(0.92));
  REQUIRE_FALSE(res.diagnostics.empty());
  CHECK(res.diagnostics.front().find("float") != std::string::npos);
}

TEST_CASE("dist command reproduces the far-pair interval") {
  const auto res = run_json(
      R"({"command":"dist","params":{"eps":0.5,"p":2,"n":1,"m":1,"a":[0,0],"b":[20.5,0]}})");
  REQUIRE(res.ok);
  CHECK(res.payload.at("lower") == 21);
  CHECK(res.payload.at("upper") == 21);
  CHECK(res.payload.at("exact") == true);
  CHECK(res.payload.contains("witness"));
}

TEST_CASE("requests are deterministic given the seed") {
  const std::string line =
      R"({"command":"dist","params":{"eps":0.5,"p":2,"n":1,"m":1,"a":[0,0],"b":[13.7,0.2]},"seed":9})";
  const auto r1 = cli::run_line(line, std::nullopt, std::nullopt);
  const auto r2 = cli::run_line(line, std::nullopt, std::nullopt);
  CHECK(r1.to_json().dump() == r2.to_json().dump());
}

TEST_CASE("payloads re-parse under dump") {
  const auto res = run_json(R"({"command":"width-witness","params":{"n":2,"m":1,"p":2,"eps":0.5}})");
  REQUIRE(res.ok);
  const auto round = json::parse(res.to_json().dump());
  CHECK(round.at("payload").at("k") == 1);
  CHECK(round.at("payload").at("delta").get<double>() == Catch::Approx(std::sqrt(0.75)));
}

TEST_CASE("error handling and exit codes") {
  const auto bad_json = cli::run_line("{nope", std::nullopt, std::nullopt);
  CHECK_FALSE(bad_json.ok);
  CHECK(bad_json.exit_code == 2);
  REQUIRE_FALSE(bad_json.diagnostics.empty());
  CHECK(bad_json.diagnostics.front().rfind("E_PARSE", 0) == 0);

  const auto unknown = run_json(R"({"command":"frobnicate"})");
  CHECK(unknown.exit_code == 2);
  CHECK(unknown.diagnostics.front().rfind("E_COMMAND", 0) == 0);

  const auto missing = run_json(R"({"command":"dist","params":{"eps":0.5}})");
  CHECK(missing.exit_code == 2);
  CHECK(missing.diagnostics.front().rfind("E_PARAMS", 0) == 0);

  const auto invalid = run_json(R"({"command":"comb","params":{"N":4,"M":2,"eps":"1/2"}})");
  CHECK(invalid.exit_code == 2);
}

TEST_CASE("midpoints command") {
  const auto res = run_json(
      R"({"command":"midpoints","params":{"n":2,"m":1,"p":2,"eps":1,"x":[0,0,0],"y":[2,0,0]}})");
  REQUIRE(res.ok);
  CHECK(res.payload.at("kind") == "unique-midpoint");
  CHECK(res.payload.at("z")[0].get<double>() == Catch::Approx(1.0));
}

TEST_CASE("cycle command without eps reports the minimal width") {
  const auto res = run_json(R"({"command":"cycle","params":{"k":3}})");
  REQUIRE(res.ok);
  CHECK(res.payload.at("min_width").get<double>() ==
        Catch::Approx(std::sqrt(3.0) / 2.0).margin(1e-3));
}

TEST_CASE("verify commands") {
  const auto planar = run_json(
      R"({"command":"verify-gamma-omega","params":{"eps":0.5,"x1":[0,0],"x2":[2,0.3],"y":[1,0.1]}})");
  REQUIRE(planar.ok);
  CHECK(planar.payload.at("omega") == true);
  CHECK(planar.payload.at("gamma") == true);

  const auto hat = run_json(
      R"({"command":"verify-gamma-hat","params":{"n":2,"m":1,"p":2,"eps":0.4,
          "xs":[[0,0,0.1],[4,0,0.2],[0,4,0.3]],"y":[1,1,0.2]}})");
  REQUIRE(hat.ok);
  CHECK(hat.payload.at("omega") == true);
  CHECK(hat.payload.at("gamma") == true);
  CHECK(hat.payload.at("samples").get<long long>() >= 512);
}

TEST_CASE("isometry command") {
  const auto ok = run_json(
      R"({"command":"isometry","params":{"n":2,"m":1,"p":2,"eps":0.7,
          "transform":{"h_translate":[5,-3]},"samples":50}})");
  REQUIRE(ok.ok);
  CHECK(ok.payload.at("isometry") == true);

  const auto bad = run_json(
      R"({"command":"isometry","params":{"n":2,"m":1,"p":2,"eps":0.5,
          "transform":{"v_shift":0.1},"samples":50}})");
  REQUIRE(bad.ok);
  CHECK(bad.payload.at("isometry") == false);
}

TEST_CASE("render writes deterministic svg") {
  const std::string out = "test_render_comb.svg";
  const std::string line =
      R"({"command":"render","params":{"object":"comb","N":4,"M":5,"eps":0.92,"out":"test_render_comb.svg"}})";
  const auto r1 = run_json(line);
  REQUIRE(r1.ok);
  const std::string first = slurp(out);
  CHECK(first.rfind("<?xml", 0) == 0);
  CHECK(first.find("<svg") != std::string::npos);
  // Teeth edges (2M) plus baseline (N) plus two strip boundary lines.
  const std::size_t lines = [&] {
    std::size_t count = 0, pos = 0;
    while ((pos = first.find("<line", pos)) != std::string::npos) {
      ++count;
      pos += 5;
    }
    return count;
  }();
  CHECK(lines == 2u + 4u + 10u);
  const auto r2 = run_json(line);
  REQUIRE(r2.ok);
  CHECK(slurp(out) == first);
  std::remove(out.c_str());
}

TEST_CASE("sandwich command marks the border") {
  const auto res = run_json(
      R"({"command":"sandwich","params":{"rows":3,"eps":3.2,"shift":[0.25,0.1],"half_width":3}})");
  REQUIRE(res.ok);
  CHECK(res.payload.at("fits") == true);
  CHECK(res.payload.at("points").size() == 7u * 4u);
  CHECK(res.payload.at("border").size() == 7u * 2u);
}

TEST_CASE("schemas cover every command") {
  const auto doc = cli::schemas();
  for (const char* cmd :
       {"dist", "path", "midpoints", "comb", "modified-comb", "sandwich", "signature",
        "distinguish", "width-witness", "verify-gamma-omega", "verify-gamma-hat", "cycle",
        "isometry", "render"})
    CHECK(doc.at("commands").contains(cmd));
}
