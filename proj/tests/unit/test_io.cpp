#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>

#include "qtalbot/checksum.hpp"
#include "qtalbot/csv.hpp"
#include "qtalbot/error.hpp"
#include "qtalbot/frame.hpp"
#include "qtalbot/snapshot_io.hpp"
#include "qtalbot/wavefield.hpp"

using namespace qtalbot;

namespace {

std::filesystem::path scratch(const char* name) {
  auto p = std::filesystem::temp_directory_path() / "qtalbot_test_io";
  std::filesystem::create_directories(p);
  return p / name;
}

template <class T>
T read_le(const std::vector<std::uint8_t>& b, std::size_t at) {
  T v;
  std::memcpy(&v, b.data() + at, sizeof v);
  return v;
}

SnapshotData sample() {
  const GridSpec g{80, 60, 0.5, 0.5, -20.0, -15.0};
  WaveField f = init_packet({3.0, 2.5, -1.0, 0.5, 0.7}, g, 0.05);
  f.step_index = 17;
  return make_snapshot(f, build_frame(0.332e-3 * kElectronVolt));
}

}  // namespace

TEST_CASE("snapshot layout") {
  const SnapshotData s = sample();
  const auto bytes = encode_snapshot(s);
  REQUIRE(bytes.size() == kSnapshotHeaderBytes + 2 * 8 * 80 * 60);
  CHECK(std::memcmp(bytes.data(), "QTALBOT1", 8) == 0);
  CHECK(read_le<std::uint32_t>(bytes, 8) == 1);
  CHECK(read_le<std::uint64_t>(bytes, 16) == 80);
  CHECK(read_le<std::uint64_t>(bytes, 24) == 60);
  CHECK(read_le<double>(bytes, 32) == 0.5);
  CHECK(read_le<double>(bytes, 48) == s.header.time);
  CHECK(read_le<std::uint64_t>(bytes, 80) == 17);
  CHECK(read_le<double>(bytes, 88) == s.real[0]);
  CHECK(read_le<double>(bytes, 88 + 8 * 80 * 60) == s.imag[0]);
}

TEST_CASE("snapshot round trip is bit exact") {
  const SnapshotData s = sample();
  CHECK(decode_snapshot(encode_snapshot(s)) == s);
  const auto path = scratch("a.qsnap").string();
  write_snapshot(path, s);
  CHECK(read_snapshot(path) == s);
  // norm of psi(T) survives
  double n = 0.0;
  for (std::size_t i = 0; i < s.real.size(); ++i) n += s.real[i] * s.real[i] + s.imag[i] * s.imag[i];
  CHECK(n * s.header.dx * s.header.dy == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("corrupt snapshots are rejected") {
  auto bytes = encode_snapshot(sample());
  SUBCASE("magic") {
    bytes[0] = 'X';
    CHECK_THROWS_AS(decode_snapshot(bytes), IoError);
  }
  SUBCASE("truncated") {
    bytes.resize(bytes.size() - 8);
    CHECK_THROWS_AS(decode_snapshot(bytes), IoError);
  }
  SUBCASE("header only") {
    bytes.resize(40);
    CHECK_THROWS_AS(decode_snapshot(bytes), IoError);
  }
  SUBCASE("version") {
    bytes[8] = 9;
    CHECK_THROWS_AS(decode_snapshot(bytes), IoError);
  }
  CHECK_THROWS_AS(read_snapshot(scratch("missing.qsnap").string()), IoError);
}

TEST_CASE("csv") {
  const std::string text = format_csv({{"E0", "V/m"}, {"shift", "d"}}, {{0.0, 0.1}, {50.0, -1.25e-7}});
  CHECK(text == "# column: E0 [V/m]\n# column: shift [d]\n0,0.1\n50,-1.25e-07\n");
  CHECK_THROWS_AS(format_csv({{"a", "1"}}, {{1.0, 2.0}}), UsageError);
  for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300, 0.0}) {
    CHECK(std::stod(format_number(v)) == v);
  }
  CHECK(format_number(std::numeric_limits<double>::quiet_NaN()) == "nan");
}

TEST_CASE("sha256") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  const auto path = scratch("abc.txt");
  std::ofstream(path) << "abc";
  CHECK(sha256_file(path.string()) == sha256_hex("abc"));
  CHECK_THROWS_AS(sha256_file(scratch("missing.txt").string()), IoError);
}
