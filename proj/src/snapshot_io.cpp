#include "qtalbot/snapshot_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "qtalbot/error.hpp"

namespace qtalbot {

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
}
void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
}
void put_f64(std::vector<std::uint8_t>& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

class Cursor {
 public:
  explicit Cursor(const std::vector<std::uint8_t>& b) : bytes_(b) {}
  std::uint64_t u(int width) {
    if (pos_ + static_cast<std::size_t>(width) > bytes_.size()) throw IoError("snapshot is truncated");
    std::uint64_t v = 0;
    for (int b = 0; b < width; ++b) v |= static_cast<std::uint64_t>(bytes_[pos_++]) << (8 * b);
    return v;
  }
  double f() { return std::bit_cast<double>(u(8)); }
  std::size_t pos() const { return pos_; }
  void skip(std::size_t n) { pos_ += n; }

 private:
  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

SnapshotData make_snapshot(const WaveField& field, const ScalingFrame& frame) {
  SnapshotData s;
  s.header.nx = field.grid.nx;
  s.header.ny = field.grid.ny;
  s.header.dx = field.grid.dx;
  s.header.dy = field.grid.dy;
  s.header.time = field.time();
  s.header.gamma = frame.gamma;
  s.header.tau = frame.tau;
  s.header.V0 = frame.V0;
  s.header.step = static_cast<std::uint64_t>(field.step_index);
  s.real.reserve(field.grid.size());
  s.imag.reserve(field.grid.size());
  for (std::size_t j = 0; j < field.grid.ny; ++j) {
    for (std::size_t i = 0; i < field.grid.nx; ++i) {
      const auto z = field.at(i, j);
      s.real.push_back(z.real());
      s.imag.push_back(z.imag());
    }
  }
  return s;
}

std::vector<std::uint8_t> encode_snapshot(const SnapshotData& s) {
  const std::size_t n = s.header.nx * s.header.ny;
  if (s.real.size() != n || s.imag.size() != n) throw UsageError("snapshot payload does not match its header");
  std::vector<std::uint8_t> out;
  out.reserve(kSnapshotHeaderBytes + 16 * n);
  for (char c : kSnapshotMagic) out.push_back(static_cast<std::uint8_t>(c));
  put_u32(out, s.header.version);
  put_u32(out, 0);
  put_u64(out, s.header.nx);
  put_u64(out, s.header.ny);
  for (double v : {s.header.dx, s.header.dy, s.header.time, s.header.gamma, s.header.tau, s.header.V0}) put_f64(out, v);
  put_u64(out, s.header.step);
  for (double v : s.real) put_f64(out, v);
  for (double v : s.imag) put_f64(out, v);
  return out;
}

SnapshotData decode_snapshot(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < kSnapshotHeaderBytes || std::memcmp(bytes.data(), kSnapshotMagic, 8) != 0) {
    throw IoError("not a QTALBOT1 snapshot");
  }
  Cursor c(bytes);
  c.skip(8);
  SnapshotData s;
  s.header.version = static_cast<std::uint32_t>(c.u(4));
  if (s.header.version != kSnapshotVersion) {
    throw IoError("unsupported snapshot version " + std::to_string(s.header.version));
  }
  c.u(4);
  s.header.nx = c.u(8);
  s.header.ny = c.u(8);
  s.header.dx = c.f();
  s.header.dy = c.f();
  s.header.time = c.f();
  s.header.gamma = c.f();
  s.header.tau = c.f();
  s.header.V0 = c.f();
  s.header.step = c.u(8);
  const std::size_t n = s.header.nx * s.header.ny;
  if (bytes.size() != kSnapshotHeaderBytes + 16 * n) {
    throw IoError("snapshot payload length does not match nx*ny");
  }
  s.real.resize(n);
  s.imag.resize(n);
  for (auto& v : s.real) v = c.f();
  for (auto& v : s.imag) v = c.f();
  return s;
}

void write_snapshot(const std::string& path, const SnapshotData& snap) {
  const auto bytes = encode_snapshot(snap);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write snapshot '" + path + "'");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing snapshot '" + path + "'");
}

SnapshotData read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read snapshot '" + path + "'");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_snapshot(bytes);
}

}  // namespace qtalbot
