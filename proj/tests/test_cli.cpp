#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <numbers>
#include <sstream>

#include "lgr/cli.hpp"
#include "lgr/io.hpp"

namespace fs = std::filesystem;
using lgr::cplx;
using nlohmann::json;
constexpr double kPi = std::numbers::pi;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args, const std::string& stdin_text = "") {
  std::istringstream in(stdin_text);
  std::ostringstream out, err;
  const int code = lgr::cli::run(args, in, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("lgradial_test_" + name);
  fs::remove_all(p);
  return p;
}

// Pixel (x, y) of a P5 file with a "P5\nW H\n255\n" header.
int pixel(const std::string& pgm, int width, int x, int y) {
  std::size_t pos = 0;
  for (int i = 0; i < 3; ++i) pos = pgm.find('\n', pos) + 1;
  return static_cast<unsigned char>(pgm[pos + static_cast<std::size_t>(y) * width + x]);
}

}  // namespace

TEST_CASE("number formatting") {
  CHECK(lgr::format_number(0.1) == "0.10000000000000001");
  CHECK(lgr::format_number(1.0) == "1");
  CHECK(lgr::format_number(-2.5e-300) == "-2.5e-300");
  CHECK(lgr::format_number(1e21 / 3) == "3.3333333333333331e+20");
  CHECK(lgr::format_number(std::nan("")) == "nan");
  CHECK(lgr::format_number(-INFINITY) == "-inf");
  // 17 digits round-trip every double.
  for (double v : {kPi, 1.0 / 3.0, 6.02214076e23, 5e-324}) CHECK(std::strtod(lgr::format_number(v).c_str(), nullptr) == v);
}

TEST_CASE("CSV") {
  lgr::CsvTable t;
  t.header = {"a", "b", "c"};
  t.add_row({0.5, 3LL, std::string("x,y")});
  t.add_row({-1.0, -7LL, std::string("q\"")});
  CHECK(lgr::format_csv(t) == "a,b,c\n0.5,3,\"x,y\"\n-1,-7,\"q\"\"\"\n");
  lgr::CsvTable empty;
  empty.header = {"only"};
  CHECK(lgr::format_csv(empty) == "only\n");
  t.add_row({1.0});
  CHECK_THROWS_AS(lgr::format_csv(t), lgr::DomainError);
}

TEST_CASE("PGM images") {
  std::vector<cplx> f{0.0, 1.0, cplx(0, 2), cplx(-1, 0), cplx(0, -1), 0.5};
  auto in = lgr::intensity_image(f, 3, 2);
  CHECK(in.pixels == std::vector<std::uint8_t>{0, 64, 255, 64, 64, 16});
  auto ph = lgr::phase_image(f, 3, 2);
  // arg -> [0, 255]: 0 -> 127.5 rounds up, pi -> 255, -pi/2 -> 63.75, pi/2 -> 191.25.
  CHECK(ph.pixels == std::vector<std::uint8_t>{128, 128, 191, 255, 64, 128});
  CHECK(lgr::intensity_image(std::vector<cplx>(4, 0.0), 2, 2).pixels == std::vector<std::uint8_t>(4, 0));

  const std::string bytes = lgr::format_pgm(in);
  CHECK(bytes.substr(0, 11) == "P5\n3 2\n255\n");
  CHECK(bytes.size() == 11 + 6);
  CHECK(pixel(bytes, 3, 2, 0) == 255);

  lgr::GrayImage a{1, 1, {1}}, b{1, 1, {2}}, c{1, 1, {3}}, d{1, 1, {4}};
  auto m = lgr::mosaic({a, b, c, d}, 2, 2);
  CHECK(m.width == 2);
  CHECK(m.pixels == std::vector<std::uint8_t>{1, 2, 3, 4});
  CHECK_THROWS_AS(lgr::mosaic({a, b, c}, 2, 2), lgr::DomainError);
  CHECK_THROWS_AS(lgr::intensity_image(f, 2, 2), lgr::DomainError);
}

TEST_CASE("file I/O errors name the path") {
  try {
    lgr::write_file("/proc/no_such_dir/x.csv", "x");
    FAIL("expected IoError");
  } catch (const lgr::IoError& e) {
    CHECK(std::string(e.what()).find("/proc/no_such_dir/x.csv") != std::string::npos);
  }
  CHECK_THROWS_AS(lgr::read_file("/no/such/file.json"), lgr::IoError);
}

TEST_CASE("config merging and overrides") {
  auto cfg = lgr::cli::merge_config(json{{"mode", {{"n", 2}}}});
  CHECK(cfg["mode"]["n"] == 2);
  CHECK(cfg["mode"]["l"] == 0);
  CHECK(cfg["render"]["window_m"] == 6e-3);
  CHECK_THROWS_AS(lgr::cli::merge_config(json{{"mode", {{"nn", 2}}}}), lgr::cli::ConfigError);
  CHECK_THROWS_AS(lgr::cli::merge_config(json{{"bogus", 1}}), lgr::cli::ConfigError);

  lgr::cli::apply_override(cfg, "mode.l", "-2");
  CHECK(cfg["mode"]["l"] == -2);
  lgr::cli::apply_override(cfg, "policy", "verbatim");
  CHECK(cfg["policy"] == "verbatim");
  lgr::cli::apply_override(cfg, "phexp.n_list", "[1,3]");
  CHECK(cfg["phexp"]["n_list"] == json::array({1, 3}));
  CHECK_THROWS_AS(lgr::cli::apply_override(cfg, "mode.q", "1"), lgr::cli::ConfigError);
  CHECK_THROWS_AS(lgr::cli::apply_override(cfg, "mode", "1"), lgr::cli::ConfigError);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"fly"}).code == 2);
  CHECK(run({"render", "--mode.n"}).code == 2);
  CHECK(run({"render", "--mode.colour", "3"}).code == 2);
  auto bad = run({"render", "--config", "-"}, "{ not json");
  CHECK(bad.code == 2);
  CHECK(bad.err.find("not valid JSON") != std::string::npos);
  CHECK(run({"render", "--config", "-"}, R"({"mode": {"n": -1}})").code == 2);
  CHECK(run({"render", "--config", "-"}, R"({"mode": {"n": "two"}})").code == 2);
  CHECK(run({"phexp", "--phexp.axis", "r"}).code == 2);
  CHECK(run({"render", "--help"}).code == 0);
}

TEST_CASE("I/O errors exit with 3") {
  CHECK(run({"render", "--config", "/no/such/config.json"}).code == 3);
  auto r = run({"render", "--out", "/proc/no_such_dir", "--render.pixels", "8"});
  CHECK(r.code == 3);
  CHECK(r.err.find("/proc/no_such_dir") != std::string::npos);
}

TEST_CASE("render") {
  auto dir = scratch("render");
  auto r = run({"render", "--out", dir.string(), "--render.pixels", "64"});
  REQUIRE(r.code == 0);
  // n = 0, l = 0: one central spot and a flat phase map.
  const std::string in = lgr::read_file(dir / "lg_n0_l0_intensity.pgm");
  const std::string ph = lgr::read_file(dir / "lg_n0_l0_phase.pgm");
  CHECK(in.substr(0, 13) == "P5\n64 64\n255\n");
  CHECK(pixel(in, 64, 31, 31) > 250);
  CHECK(pixel(in, 64, 0, 0) == 0);
  for (int y = 0; y < 64; y += 7)
    for (int x = 0; x < 64; x += 7) CHECK(pixel(ph, 64, x, y) == 128);

  // Default window is 6 mm across.
  auto meta = json::parse(lgr::read_file(dir / "lg_render.json"));
  CHECK(meta["window_m"] == 6e-3);

  auto r2 = run({"render", "--out", dir.string(), "--mode.n", "2", "--mode.l", "1", "--render.pixels", "32"});
  REQUIRE(r2.code == 0);
  meta = json::parse(lgr::read_file(dir / "lg_render.json"));
  CHECK(meta["modes"][0]["rings"] == 3);

  auto b = run({"render", "--out", dir.string(), "--render.batch", "true", "--render.pixels", "16"});
  REQUIRE(b.code == 0);
  const std::string mos = lgr::read_file(dir / "lg_batch_intensity.pgm");
  CHECK(mos.substr(0, 11) == "P5\n48 48\n25");
  meta = json::parse(lgr::read_file(dir / "lg_render.json"));
  REQUIRE(meta["modes"].size() == 9);
  for (int i = 0; i < 9; ++i) CHECK(meta["modes"][i]["rings"] == i / 3 + 1);
  // The tile for (n, l) matches the single render of that mode.
  auto single = run({"render", "--out", (dir / "one").string(), "--mode.n", "1", "--mode.l", "2", "--render.pixels", "16"});
  REQUIRE(single.code == 0);
  const std::string one = lgr::read_file(dir / "one" / "lg_n1_l2_intensity.pgm");
  for (int y = 0; y < 16; ++y)
    for (int x = 0; x < 16; ++x) CHECK(pixel(one, 16, x, y) == pixel(mos, 48, 32 + x, 16 + y));
}

TEST_CASE("phexp and overlap outputs") {
  auto dir = scratch("series");
  auto r = run({"phexp", "--out", dir.string(), "--phexp.n_list", "[0,2]", "--phexp.z_points", "5"});
  REQUIRE(r.code == 0);
  const std::string csv = lgr::read_file(dir / "lg_phexp.csv");
  CHECK(csv.rfind("z_m,value,n\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 11);
  auto fits = json::parse(lgr::read_file(dir / "lg_phexp.json"));
  REQUIRE(fits["series"].size() == 2);
  CHECK(fits["series"][1]["fit"]["r_squared"].get<double>() > 0.999999);

  auto w = run({"phexp", "--out", dir.string(), "--phexp.axis", "w0", "--phexp.n_list", "[1]"});
  REQUIRE(w.code == 0);
  fits = json::parse(lgr::read_file(dir / "lg_phexp.json"));
  CHECK(fits["series"][0]["decay"]["strictly_decreasing"] == true);
  CHECK(lgr::read_file(dir / "lg_phexp.csv").rfind("w0_m,value,n\n", 0) == 0);

  auto o = run({"overlap", "--out", dir.string(), "--overlap.n_max", "6", "--overlap.dz_list_m", "[0, 5]"});
  REQUIRE(o.code == 0);
  const std::string ov = lgr::read_file(dir / "lg_overlap.csv");
  CHECK(ov.rfind("dz_m,n,n_prime,re,im,abs2\n", 0) == 0);
  CHECK(std::count(ov.begin(), ov.end(), '\n') == 1 + 2 * 49);
  CHECK(lgr::read_file(dir / "lg_completeness.csv").rfind("dz_m,n_prime,completeness,modes_for_threshold\n", 0) == 0);
  auto summary = json::parse(lgr::read_file(dir / "lg_overlap.json"));
  CHECK(summary["columns"][0]["modes_for_threshold"] == 1);
}

TEST_CASE("verify report flags the verbatim sign on negative l") {
  auto dir = scratch("verify");
  auto r = run({"verify", "--out", dir.string(), "--policy", "verbatim", "--mode.l", "-2", "--mode.n", "1",
                "--verify.suites", R"(["negative_index"])"});
  CHECK(r.code == 0);
  auto rep = json::parse(lgr::read_file(dir / "lg_verify.json"));
  CHECK(rep["passed"] == true);
  CHECK(rep["policy"] == "verbatim");
  bool saw_config = false;
  int both = 0;
  for (const auto& c : rep["checks"]) {
    const auto name = c["name"].get<std::string>();
    if (name == "configured_mode.n0") {
      saw_config = true;
      CHECK(c["note"].get<std::string>().find("n+|l|") != std::string::npos);
      CHECK(c["note"].get<std::string>().find("3") != std::string::npos);
    }
    if (name.rfind("negative_index.l-", 0) == 0) ++both;
  }
  CHECK(saw_config);
  CHECK(both == 4);
  CHECK(run({"verify", "--verify.suites", R"(["nope"])"}).code == 2);
}

TEST_CASE("outputs are byte-identical across runs and thread counts") {
  auto a = scratch("det_a"), b = scratch("det_b");
  const std::vector<std::string> extra{"--render.pixels", "40", "--mode.n", "1", "--mode.l", "2"};
  auto args = [&](const fs::path& d) {
    std::vector<std::string> v{"render", "--out", d.string()};
    v.insert(v.end(), extra.begin(), extra.end());
    return v;
  };
  setenv("LG_RADIAL_THREADS", "1", 1);
  REQUIRE(run(args(a)).code == 0);
  setenv("LG_RADIAL_THREADS", "3", 1);
  REQUIRE(run(args(b)).code == 0);
  unsetenv("LG_RADIAL_THREADS");
  for (const char* f : {"lg_n1_l2_intensity.pgm", "lg_n1_l2_phase.pgm", "lg_render.json"})
    CHECK(lgr::read_file(a / f) == lgr::read_file(b / f));
}
