#include <doctest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <nlohmann/json.hpp>

namespace {

struct Result {
  int status = -1;
  std::string out;
};

std::string quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

Result run(const std::string& command, const std::string& config, const std::string& extra = "") {
  const std::string line =
      std::string(BILLIARDS_CLI) + " " + command + " --config " + quote(config) + " " + extra + " 2>&1";
  Result r;
  FILE* pipe = popen(line.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int st = pclose(pipe);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

const std::string kDisk = R"({"type":"circle","r":1})";
const std::string kEllipse = R"({"type":"ellipse","a":2,"b":1})";
const std::string kTable = R"({"type":"liouville","family":"ellipse","c":1,"N":1})";

}  // namespace

TEST_CASE("map on the unit circle") {
  const auto r = run("map", R"({"domain":)" + kDisk + R"(,"s":0,"xi":0.5,"m":3})");
  REQUIRE(r.status == 0);
  const auto l = lines(r.out);
  REQUIRE(l.size() == 4);
  CHECK(l[0] == "bounce_index,s,xi,chord_length,x,y");
  CHECK(std::stod(l[2].substr(2)) == doctest::Approx(2 * M_PI / 3).epsilon(1e-13));
  CHECK(std::stod(l[3].substr(2)) == doctest::Approx(4 * M_PI / 3).epsilon(1e-13));
}

TEST_CASE("radon over ten ellipse circles is positive") {
  const auto r = run("radon", R"({"domain":)" + kEllipse +
                                  R"(,"K":{"terms":[{"kind":"cos","n":0,"amp":1}]},"xi_values":[0.1,0.2,0.3,0.4,0.5,0.55,0.6,0.7,0.8,0.9]})");
  REQUIRE(r.status == 0);
  const auto l = lines(r.out);
  REQUIRE(l.size() == 11);
  CHECK(l[0] == "h_or_omega,invariant_value,quadrature_nodes,est_error");
  for (std::size_t i = 1; i < l.size(); ++i) {
    const auto comma = l[i].find(',');
    CHECK(std::stod(l[i].substr(comma + 1)) > 0.0);
  }
}

TEST_CASE("cluster on the shipped disk spectrum") {
  const std::string cfg =
      R"({"spectrum":")" + std::string(BILLIARDS_DATA_DIR) + R"(/disk_dirichlet.txt","n":2,"c":1,"d":1.2,"alpha":10})";
  const auto r = run("cluster", cfg);
  REQUIRE(r.status == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["H1"]["pass"] == true);
  const auto csv = run("cluster", cfg, "--format csv");
  CHECK(lines(csv.out).at(0) == "k,a_k,b_k,gap_margin,length");
}

TEST_CASE("outputs are reproducible") {
  const std::string cfg = R"({"domain":)" + kEllipse + R"(,"s":0,"xi":0.35,"modes":32})";
  const auto a = run("circle", cfg), b = run("circle", cfg);
  REQUIRE(a.status == 0);
  CHECK(a.out == b.out);
  const auto j = nlohmann::json::parse(a.out);
  CHECK(j["rotation"]["omega"].get<double>() == doctest::Approx(-0.27405970145073718).epsilon(1e-8));
}

TEST_CASE("quasimode, potential, rigidity, validate") {
  auto r = run("quasimode", R"({"theta":1.0471975511965976,"d_n":4,"k_min":100,"k_max":102,"M":2})");
  REQUIRE(r.status == 0);
  CHECK(lines(r.out).size() == 4);
  CHECK(lines(r.out)[0] == "k,k_n,mu0,c0,c1,c2,mu,mu_squared");

  r = run("potential", R"({"domain":)" + kDisk +
                           R"(,"s":0,"xi":0.5,"exact_disk":true,"V":{"terms":[{"amp":1}]}})",
          "--format json");
  REQUIRE(r.status == 0);
  CHECK(nlohmann::json::parse(r.out)["value"].get<double>() == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));

  r = run("rigidity", R"({"domain":)" + kTable + R"(,"h_grid":{"from":-1.3,"to":-0.1,"count":6}})");
  REQUIRE(r.status == 0);
  CHECK(nlohmann::json::parse(r.out)["sigma_min"].get<double>() > 0.0);

  r = run("validate-liouville", R"({"domain":)" + kTable + "}");
  REQUIRE(r.status == 0);
  CHECK(nlohmann::json::parse(r.out)["classical_type"] == true);
}

TEST_CASE("homological round trip through files") {
  const std::string path = "cli_coeffs.txt";
  {
    std::ofstream f(path);
    f << "1 0.1 0\n-1 0.1 0\n3 0 0.05\n-3 0 -0.05\n";
  }
  const auto r = run("homological", R"({"omega":[0.6180339887498949],"coefficients":")" + path + R"("})");
  REQUIRE(r.status == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["bound_holds"] == true);
  CHECK(j["roundtrip_error"].get<double>() < 1e-12);
  std::remove(path.c_str());
}

TEST_CASE("exit codes") {
  auto r = run("map", R"({"domain":)" + kDisk + R"(,"s":0,"xi":0.5,"m":3,"extra":1})");
  CHECK(r.status == 2);
  CHECK(nlohmann::json::parse(r.out)["error"] == "ConfigError");
  r = run("map", "{not json");
  CHECK(r.status == 2);
  r = run("map", R"({"domain":{"type":"triangle"},"s":0,"xi":0.5,"m":3})");
  CHECK(r.status == 2);
  // resonant circle: numerical failure
  r = run("circle", R"({"domain":)" + kDisk + R"(,"s":0,"xi":0.5})");
  CHECK(r.status == 3);
  CHECK(nlohmann::json::parse(r.out)["error"] == "ResonantRotation");
  r = run("map", R"({"domain":)" + kDisk + R"(,"s":0,"xi":0.5,"m":3})", "--format xml");
  CHECK(r.status == 2);
}
