#include "bdiv/field_io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "bdiv/error.hpp"

namespace bdiv {
namespace {

constexpr char kMagic[5] = {'B', 'D', 'I', 'V', '1'};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_f64(std::vector<std::uint8_t>& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
}

class Reader {
public:
  explicit Reader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

  void need(std::size_t n, const char* what) const {
    if (pos_ + n > bytes_.size()) throw IoError(std::string("truncated field file: missing ") + what);
  }
  std::uint8_t u8(const char* what) {
    need(1, what);
    return bytes_[pos_++];
  }
  std::uint32_t u32(const char* what) {
    need(4, what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
  }
  double f64(const char* what) {
    need(8, what);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes_[pos_ + i]) << (8 * i);
    pos_ += 8;
    return std::bit_cast<double>(v);
  }
  std::size_t remaining() const { return bytes_.size() - pos_; }

private:
  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> encode_field(const ScalarField& f) {
  const Grid& g = f.grid();
  std::vector<std::uint8_t> out;
  out.reserve(5 + 1 + g.dim() * 20 + 1 + 8 * f.size());
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  out.push_back(static_cast<std::uint8_t>(g.dim()));
  for (int a = 0; a < g.dim(); ++a) put_u32(out, static_cast<std::uint32_t>(g.n(a)));
  for (int a = 0; a < g.dim(); ++a) put_f64(out, g.lo(a));
  for (int a = 0; a < g.dim(); ++a) put_f64(out, g.hi(a));
  out.push_back(static_cast<std::uint8_t>(g.periodic_mask()));
  for (double v : f.values()) put_f64(out, v);
  return out;
}

ScalarField decode_field(const std::vector<std::uint8_t>& bytes) {
  Reader rd(bytes);
  rd.need(5, "magic");
  if (std::memcmp(bytes.data(), kMagic, 5) != 0) throw IoError("not a field file (bad magic)");
  for (int i = 0; i < 5; ++i) rd.u8("magic");
  const int d = rd.u8("dimension");
  if (d < 1 || d > kMaxDim) throw IoError("field file has unsupported dimension " + std::to_string(d));
  std::array<std::size_t, kMaxDim> n{1, 1, 1};
  std::array<double, kMaxDim> lo{0, 0, 0}, hi{1, 1, 1};
  std::array<bool, kMaxDim> per{false, false, false};
  for (int a = 0; a < d; ++a) n[a] = rd.u32("sizes");
  for (int a = 0; a < d; ++a) lo[a] = rd.f64("lower bounds");
  for (int a = 0; a < d; ++a) hi[a] = rd.f64("upper bounds");
  const unsigned mask = rd.u8("periodic mask");
  if (mask >> d) throw IoError("periodic mask has bits beyond the dimension");
  for (int a = 0; a < d; ++a) per[a] = (mask >> a) & 1u;

  Grid grid;
  try {
    grid = Grid(d, n, lo, hi, per);
  } catch (const InvalidArgument& e) {
    throw IoError(std::string("field file header describes an invalid grid: ") + e.what());
  }
  if (rd.remaining() < grid.size() * 8) throw IoError("truncated field file: missing values");
  if (rd.remaining() > grid.size() * 8) throw IoError("field file has trailing bytes");
  std::vector<double> values(grid.size());
  for (double& v : values) {
    v = rd.f64("values");
    if (!std::isfinite(v)) throw IoError("field file contains non-finite values");
  }
  return ScalarField(grid, std::move(values));
}

ScalarField read_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_field(bytes);
}

void write_field(const ScalarField& f, const std::string& path) {
  const auto bytes = encode_field(f);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace bdiv
