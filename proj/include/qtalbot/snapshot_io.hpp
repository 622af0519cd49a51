#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qtalbot/frame.hpp"
#include "qtalbot/wavefield.hpp"

namespace qtalbot {

// Binary layout, little-endian, 88-byte header:
//   char[8] "QTALBOT1", u32 version, u32 reserved, u64 nx, u64 ny,
//   f64 dX, dY, T, gamma, tau, V0, u64 step
// then nx*ny f64 real part, nx*ny f64 imaginary part (row-major).
inline constexpr char kSnapshotMagic[8] = {'Q', 'T', 'A', 'L', 'B', 'O', 'T', '1'};
inline constexpr std::uint32_t kSnapshotVersion = 1;
inline constexpr std::size_t kSnapshotHeaderBytes = 88;

struct SnapshotHeader {
  std::uint32_t version = kSnapshotVersion;
  std::uint64_t nx = 0;
  std::uint64_t ny = 0;
  double dx = 0.0;
  double dy = 0.0;
  double time = 0.0;
  double gamma = 0.0;
  double tau = 0.0;
  double V0 = 0.0;
  std::uint64_t step = 0;

  bool operator==(const SnapshotHeader&) const = default;
};

struct SnapshotData {
  SnapshotHeader header;
  std::vector<double> real;
  std::vector<double> imag;

  bool operator==(const SnapshotData&) const = default;
};

// psi(T) of the field with the imaginary part synchronized to integer time.
SnapshotData make_snapshot(const WaveField& field, const ScalingFrame& frame);

std::vector<std::uint8_t> encode_snapshot(const SnapshotData& snap);
SnapshotData decode_snapshot(const std::vector<std::uint8_t>& bytes);

void write_snapshot(const std::string& path, const SnapshotData& snap);
SnapshotData read_snapshot(const std::string& path);

}  // namespace qtalbot
