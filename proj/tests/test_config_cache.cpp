#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <random>
#include <sstream>

#include "congamma/cache.hpp"
#include "congamma/config.hpp"
#include "congamma/error.hpp"
#include "congamma/run.hpp"

using namespace congamma;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "congamma_tests";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  fs::remove(p);
  return p;
}

std::vector<std::string> lines_of(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

void write_lines(const fs::path& p, const std::vector<std::string>& lines) {
  std::ofstream out(p, std::ios::trunc);
  for (const auto& l : lines) out << l << '\n';
}

struct Captured {
  int code;
  std::string out, err;
};

Captured run_capture(const ExperimentConfig& c) {
  Captured cap{};
  cap.code = run(c, [&](std::string_view s) { cap.out += s; }, [&](std::string_view s) { cap.err += s; });
  return cap;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::stringstream ss(text);
  for (std::string line; std::getline(ss, line);) {
    std::vector<std::string> f;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
    rows.push_back(f);
  }
  return rows;
}

}  // namespace

TEST_CASE("config defaults and round trip") {
  const ExperimentConfig d;
  CHECK(d.digits == 50);
  CHECK(d.tail_tol == 1e-12);
  CHECK(d.format == "csv");
  CHECK(ExperimentConfig::parse(d.serialize()) == d);

  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  const auto& cmds = ExperimentConfig::commands();
  for (int k = 0; k < 300; ++k) {
    ExperimentConfig c;
    c.command = cmds[rng() % cmds.size()];
    c.x = std::to_string(rng() % 1000 + 1) + ":1e7:log10:" + std::to_string(rng() % 5 + 1);
    c.i = rng() % 50 + 1;
    c.digits = 16 + static_cast<int>(rng() % 200);
    c.tail_tol = std::pow(10.0, -static_cast<double>(rng() % 40)) * (1 + u(rng) / 1e4);
    c.auto_raise = rng() % 2;
    c.mode = (rng() % 2) ? "direct" : "paper_lower_bound";
    c.format = (rng() % 2) ? "json" : "csv";
    c.threads = 1 + rng() % 8;
    c.cache_path = "dir/c" + std::to_string(k) + ".cache";
    c.v0 = u(rng);
    c.x_a = u(rng) / 3;
    c.x_b = u(rng) * 1e-7;
    c.width = std::fabs(u(rng)) + 0.1;
    c.well_depth = (rng() % 2) ? "inf" : format_double(std::fabs(u(rng)) + 1e-3);
    c.emax = u(rng);
    c.tol = 1e-9 * (1 + std::fabs(u(rng)));
    CHECK(ExperimentConfig::parse(c.serialize()) == c);
  }
}

TEST_CASE("config parsing") {
  const auto c = ExperimentConfig::parse("# experiment\ncommand = primes  # trailing\n\nx=1e3:1e7:log10\ndigits=30\n");
  CHECK(c.command == "primes");
  CHECK(c.x == "1e3:1e7:log10");
  CHECK(c.digits == 30);
  auto check_param = [](const std::string& text, const std::string& param) {
    try {
      (void)ExperimentConfig::parse(text);
      FAIL("expected ValidationError for " << text);
    } catch (const ValidationError& e) {
      CHECK(e.parameter() == param);
    }
  };
  check_param("digits=8\n", "digits");
  check_param("format=xml\n", "format");
  check_param("bogus=1\n", "bogus");
  check_param("tail_tol=-1\n", "tail_tol");
  check_param("command=launch\n", "command");
  ExperimentConfig d;
  CHECK_THROWS_AS(d.set("cache_path", "a#b"), ValidationError);
}

TEST_CASE("grids") {
  CHECK(parse_grid("1e3:1e7:log10", "x") == std::vector<double>{1e3, 1e4, 1e5, 1e6, 1e7});
  CHECK(parse_grid("1e3:1e7:log10:10", "x").size() == 41);
  CHECK(parse_grid("0:1:lin:0.25", "x") == std::vector<double>{0, 0.25, 0.5, 0.75, 1.0});
  CHECK(parse_grid("10, 2.5,7", "x") == std::vector<double>{10, 2.5, 7});
  CHECK_THROWS_AS(parse_grid("1:0:lin:1", "x"), ValidationError);
  CHECK_THROWS_AS(parse_grid("0:1e7:log10", "x"), ValidationError);
  CHECK_THROWS_AS(parse_grid("1:2:cubic", "x"), ValidationError);
  CHECK_THROWS_AS(parse_grid("0:1e9:lin:1", "energy"), ValidationError);
  for (double v : {0.1, 1e-300, 123456.789, 5e-324, 1.7976931348623157e308}) {
    CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
  }
}

TEST_CASE("cache files") {
  const auto path = scratch("c2i.cache");
  CHECK(read_cache(path.string()).empty());

  C2iSweepOptions opts;
  opts.block = 100'000;
  opts.checkpoint_every = 1'000'000;
  {
    C2iCache cache(path.string());
    CHECK_FALSE(cache.resume_for(2'500'000, opts).has_value());
    opts.on_checkpoint = [&](const C2iCheckpoint& c) { cache.append(c); };
    (void)c2i_normalized_sum(2'500'000, 40, opts);
  }
  auto recs = read_cache(path.string());
  REQUIRE(recs.size() == 2);
  CHECK(recs[0].kind == kC2iKind);
  CHECK(recs[1].checkpoint_i == 2'000'000);
  CHECK(format_record(recs[0]) == lines_of(path)[0]);

  // Resume picks the largest checkpoint below the limit and only sweeps past it.
  C2iCache cache(path.string());
  opts.on_checkpoint = nullptr;
  const auto r1 = cache.resume_for(1'999'999, opts);
  REQUIRE(r1.has_value());
  CHECK(r1->i == 1'000'000);
  const auto r2 = cache.resume_for(3'000'000, opts);
  REQUIRE(r2.has_value());
  CHECK(r2->i == 2'000'000);
  std::vector<std::uint64_t> fired;
  C2iSweepOptions resumed = opts;
  resumed.resume = r2;
  resumed.on_checkpoint = [&](const C2iCheckpoint& c) { fired.push_back(c.i); };
  const BigReal warm = c2i_normalized_sum(3'000'000, 40, resumed);
  CHECK(fired == std::vector<std::uint64_t>{3'000'000});
  C2iSweepOptions cold = opts;
  CHECK(abs(warm - c2i_normalized_sum(3'000'000, 40, cold)) < BigReal(1e-30, 40));
}

TEST_CASE("cache corruption is detected with line numbers") {
  const auto path = scratch("tamper.cache");
  C2iSweepOptions opts;
  opts.block = 100'000;
  opts.checkpoint_every = 500'000;
  {
    C2iCache cache(path.string());
    opts.on_checkpoint = [&](const C2iCheckpoint& c) { cache.append(c); };
    (void)c2i_normalized_sum(1'500'000, 40, opts);
  }
  opts.on_checkpoint = nullptr;
  const auto good = lines_of(path);
  REQUIRE(good.size() == 3);

  auto expect_line = [&](const std::vector<std::string>& lines, long line, std::uint64_t limit) {
    write_lines(path, lines);
    try {
      C2iCache cache(path.string());
      (void)cache.resume_for(limit, opts);
      FAIL("expected CorruptionError");
    } catch (const CorruptionError& e) {
      CHECK(e.line() == line);
      CHECK(e.parameter() == "cache");
    }
  };

  // Change one digit of the last stored sum.
  auto tampered = good;
  {
    auto& l = tampered[2];
    const auto tab = l.find('\t', l.find('\t') + 1);
    char& c = l[tab + 6];
    c = c == '9' ? '8' : static_cast<char>(c + 1);
  }
  expect_line(tampered, 3, 1'600'000);

  auto malformed = good;
  malformed[1] = "c2i_square_sum\t1000000\tnot-a-number\t40";
  expect_line(malformed, 2, 1'600'000);

  auto unordered = good;
  std::swap(unordered[0], unordered[1]);
  expect_line(unordered, 2, 1'600'000);

  auto unknown = good;
  unknown[0] = "mystery\t500000\t0.1\t40";
  expect_line(unknown, 1, 1'600'000);

  write_lines(path, good);
  C2iCache cache(path.string());
  CHECK(cache.resume_for(1'600'000, opts)->i == 1'500'000);
}

TEST_CASE("cache path resolution") {
  ::unsetenv("CONGAMMA_CACHE_DIR");
  CHECK(resolve_cache_path("").empty());
  CHECK(resolve_cache_path("c2i.cache") == "c2i.cache");
  ::setenv("CONGAMMA_CACHE_DIR", "/var/tmp/cg", 1);
  CHECK(resolve_cache_path("") == "/var/tmp/cg/c2i.cache");
  CHECK(resolve_cache_path("mine.cache") == "/var/tmp/cg/mine.cache");
  CHECK(resolve_cache_path("/abs/mine.cache") == "/abs/mine.cache");
  CHECK(resolve_cache_path("rel/mine.cache") == "rel/mine.cache");
  ::unsetenv("CONGAMMA_CACHE_DIR");
}

TEST_CASE("reports: schema, CSV/JSON equivalence, exit codes") {
  ExperimentConfig c;
  c.command = "primes";
  c.x = "1e3,1e6";
  c.compare = "sieve";
  c.digits = 30;
  auto csv = run_capture(c);
  CHECK(csv.code == 0);
  const auto rows = parse_csv(csv.out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == std::vector<std::string>{"x", "pi1_bar", "Pi_exact", "rel_err", "terms", "digits"});

  c.format = "json";
  const auto js = run_capture(c);
  CHECK(js.code == 0);
  const auto j = nlohmann::json::parse(js.out);
  REQUIRE(j.size() == 2);
  for (std::size_t r = 0; r < 2; ++r) {
    CHECK(j[r].size() == rows[0].size());
    for (std::size_t k = 0; k < rows[0].size(); ++k) CHECK(j[r][rows[0][k]].get<std::string>() == rows[r + 1][k]);
  }

  ExperimentConfig bad;
  bad.command = "identity";
  bad.x = "0:1:nope";
  const auto v = run_capture(bad);
  CHECK(v.code == 2);
  CHECK(v.err.find("[parameter: x]") != std::string::npos);

  ExperimentConfig strict;
  strict.command = "doubles";
  strict.x = "1e12";
  strict.digits = 16;
  strict.auto_raise = false;
  const auto pe = run_capture(strict);
  CHECK(pe.code == 3);
  CHECK(pe.err.find("suggested: --digits") != std::string::npos);

  ExperimentConfig terms;
  terms.command = "identity";
  terms.x = "100";
  terms.max_terms = 3;
  const auto te = run_capture(terms);
  CHECK(te.code == 3);
  CHECK(te.err.find("--max-terms") != std::string::npos);
}

TEST_CASE("reports are byte-identical for any thread count") {
  for (const char* cmd : {"primes", "doubles", "cramer", "prop-spectrum"}) {
    ExperimentConfig c;
    c.command = cmd;
    // cramer takes integer p only.
    c.x = std::string(cmd) == "cramer" ? "1000,31623,1000000" : "1e3:1e6:log10:3";
    c.digits = 25;
    c.threads = 1;
    const auto a = run_capture(c);
    c.threads = 4;
    const auto b = run_capture(c);
    CAPTURE(cmd);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
  }
}
