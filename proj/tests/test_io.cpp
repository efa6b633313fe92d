#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "loewner/csv.hpp"
#include "loewner/parallel.hpp"
#include "loewner/sha256.hpp"
#include "loewner/svg.hpp"

using namespace loewner;

namespace {

std::string temp_path(const char* name) {
  return std::string("/tmp/loewner_unit_") + name;
}

}  // namespace

TEST_SUITE_BEGIN("io");

TEST_CASE("format_double round-trips awkward values exactly") {
  for (const double x : {0.1, 1.0 / 3.0, -2.5e-300, 7.1e300, 0.0, -0.0,
                         123456789.123456789, 5e-324}) {
    CHECK(std::stod(format_double(x)) == x);
  }
}

TEST_CASE("csv write/read round trip is bit exact") {
  CsvTable t;
  t.header = {"a", "b", "c"};
  t.rows = {{0.1, -3.0, 1e-12}, {2.0 / 3.0, 4.5e7, -0.0}};
  const std::string path = temp_path("roundtrip.csv");
  write_csv(path, t);
  const CsvTable back = read_csv(path);
  REQUIRE(back.header == t.header);
  REQUIRE(back.rows.size() == t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    for (std::size_t j = 0; j < t.rows[i].size(); ++j) {
      CHECK(back.rows[i][j] == t.rows[i][j]);
    }
  }
  std::remove(path.c_str());
}

TEST_CASE("csv rejects ragged rows, bad numbers, and missing files") {
  CsvTable ragged;
  ragged.header = {"a", "b"};
  ragged.rows = {{1.0}};
  CHECK_THROWS_AS(write_csv(temp_path("ragged.csv"), ragged), std::runtime_error);

  const std::string bad = temp_path("bad.csv");
  {
    std::ofstream out(bad);
    out << "x,y\n1.0,not_a_number\n";
  }
  CHECK_THROWS_AS(read_csv(bad), std::runtime_error);
  std::remove(bad.c_str());

  CHECK_THROWS_AS(read_csv(temp_path("does_not_exist.csv")), std::runtime_error);
}

TEST_CASE("sha256 matches the published test vectors") {
  CHECK(sha256_hex(std::string{}) ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex(std::string{"abc"}) ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex(std::string{
            "abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq"}) ==
        "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
}

TEST_CASE("sha256 of a file equals sha256 of its bytes") {
  const std::string path = temp_path("digest.bin");
  const std::string payload("loewner\n\0forge", 14);  // embedded NUL kept
  {
    std::ofstream out(path, std::ios::binary);
    out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
  }
  CHECK(sha256_file_hex(path) == sha256_hex(payload));
  std::remove(path.c_str());
}

TEST_CASE("svg writer emits a parseable document") {
  const std::string path = temp_path("scene.svg");
  SvgWriter svg(-1.0, -1.0, 1.0, 1.0, 200.0);
  svg.add_rect(-0.5, -0.5, 1.0, 1.0, "#334455");
  svg.add_circle(0.0, 0.0, 0.25, heat_color(0.5));
  svg.add_polyline({{-1.0, 0.0}, {1.0, 0.0}}, "#000000", 1.0);
  svg.save(path);
  std::ifstream in(path);
  std::string body((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  CHECK(body.find("<svg") != std::string::npos);
  CHECK(body.find("</svg>") != std::string::npos);
  CHECK(body.find("polyline") != std::string::npos);
  std::remove(path.c_str());

  // heat colors are #rrggbb and the endpoints differ
  CHECK(heat_color(0.0).size() == 7);
  CHECK(heat_color(0.0)[0] == '#');
  CHECK(heat_color(0.0) != heat_color(1.0));
}

TEST_CASE("run_indexed covers every index once for any worker count") {
  for (const std::size_t workers : {std::size_t{1}, std::size_t{3}, std::size_t{8}}) {
    std::vector<std::atomic<int>> hits(257);
    for (auto& h : hits) h = 0;
    run_indexed(hits.size(), workers, [&](std::size_t i) { ++hits[i]; });
    for (auto& h : hits) CHECK(h == 1);
  }
  // zero workers is a caller error; zero tasks is a no-op
  CHECK_THROWS_AS(run_indexed(4, 0, [](std::size_t) {}), std::invalid_argument);
  run_indexed(0, 4, [](std::size_t) { REQUIRE(false); });
}

TEST_CASE("run_indexed propagates the first task exception") {
  CHECK_THROWS_AS(run_indexed(16, 4,
                              [](std::size_t i) {
                                if (i == 7) throw std::runtime_error("boom");
                              }),
                  std::runtime_error);
}

TEST_CASE("worker count honors the environment override") {
  char saved[64] = {0};
  const char* old = std::getenv("LOEWNER_FORGE_WORKERS");
  if (old) std::snprintf(saved, sizeof saved, "%s", old);

  setenv("LOEWNER_FORGE_WORKERS", "5", 1);
  CHECK(default_worker_count() == 5);
  setenv("LOEWNER_FORGE_WORKERS", "junk", 1);
  CHECK(default_worker_count() >= 1);  // falls back to hardware concurrency

  if (old) {
    setenv("LOEWNER_FORGE_WORKERS", saved, 1);
  } else {
    unsetenv("LOEWNER_FORGE_WORKERS");
  }
}

TEST_SUITE_END();
