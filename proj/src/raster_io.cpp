#include <lem/raster_io.hpp>

#include <bit>
#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

#include <lem/error.hpp>

namespace lem {
namespace {

constexpr char kMagic[] = "LEM1";

void put_le64(std::uint64_t v, char* out) {
  for (int i = 0; i < 8; ++i) out[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
}

std::uint64_t get_le64(const char* in) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i)
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[i])) << (8 * i);
  return v;
}

}  // namespace

void write_raster(const Raster<double>& r, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << kMagic << ' ' << r.width() << ' ' << r.height() << '\n';
  std::vector<char> buf(r.size() * 8);
  for (std::size_t i = 0; i < r.size(); ++i)
    put_le64(std::bit_cast<std::uint64_t>(r[static_cast<CellIndex>(i)]), buf.data() + 8 * i);
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw IoError("short write to '" + path + "'");
}

Raster<double> read_raster(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");

  std::string header;
  if (!std::getline(in, header)) throw IoError(path + ": missing header");
  std::istringstream hs(header);
  std::string magic;
  std::uint64_t w = 0;
  std::uint64_t h = 0;
  if (!(hs >> magic >> w >> h) || magic != kMagic)
    throw IoError(path + ": malformed header '" + header + "' (expected 'LEM1 <w> <h>')");
  std::string trailing;
  if (hs >> trailing) throw IoError(path + ": trailing junk in header '" + header + "'");
  constexpr std::uint64_t kMaxCells = std::numeric_limits<CellIndex>::max();
  if (w < 3 || h < 3 || w > kMaxCells || h > kMaxCells || w * h > kMaxCells)
    throw IoError(path + ": unsupported dimensions " + std::to_string(w) + "x" +
                  std::to_string(h));

  Raster<double> r(static_cast<int>(w), static_cast<int>(h));
  std::vector<char> buf(r.size() * 8);
  in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (static_cast<std::size_t>(in.gcount()) != buf.size())
    throw IoError(path + ": truncated payload (" + std::to_string(in.gcount() / 8) + " of " +
                  std::to_string(r.size()) + " values)");
  for (std::size_t i = 0; i < r.size(); ++i)
    r[static_cast<CellIndex>(i)] = std::bit_cast<double>(get_le64(buf.data() + 8 * i));
  return r;
}

void write_raster_text(const Raster<double>& r, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.precision(std::numeric_limits<double>::max_digits10);
  for (int y = 0; y < r.height(); ++y) {
    for (int x = 0; x < r.width(); ++x) {
      if (x) out << ' ';
      out << r.at(x, y);
    }
    out << '\n';
  }
  if (!out) throw IoError("short write to '" + path + "'");
}

std::optional<CellIndex> first_difference(const Raster<double>& a, const Raster<double>& b) {
  if (a.width() != b.width() || a.height() != b.height()) return CellIndex{0};
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto c = static_cast<CellIndex>(i);
    if (std::bit_cast<std::uint64_t>(a[c]) != std::bit_cast<std::uint64_t>(b[c]))
      return c;
  }
  return std::nullopt;
}

}  // namespace lem
