#include "atomcorr/mode_grid_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "atomcorr/errors.hpp"

namespace atomcorr {

namespace {

constexpr std::uint64_t kMaxPoints = std::uint64_t{1} << 28;

template <typename T>
T from_le(std::array<unsigned char, 8> bytes) {
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  T value;
  std::memcpy(&value, bytes.data(), sizeof(T));
  return value;
}

template <typename T>
std::array<unsigned char, 8> to_le(T value) {
  std::array<unsigned char, 8> bytes;
  std::memcpy(bytes.data(), &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  return bytes;
}

template <typename T>
T read_le(std::istream& in) {
  static_assert(sizeof(T) == 8);
  std::array<unsigned char, 8> bytes;
  if (!in.read(reinterpret_cast<char*>(bytes.data()), 8))
    throw SimError(ErrorCode::MalformedModeGrid, "truncated binary mode grid");
  return from_le<T>(bytes);
}

template <typename T>
void write_le(std::ostream& out, T value) {
  const auto bytes = to_le(value);
  out.write(reinterpret_cast<const char*>(bytes.data()), 8);
}

void check_size(std::uint64_t nx, std::uint64_t ny) {
  if (nx == 0 || ny == 0 || nx > kMaxPoints / ny)
    throw SimError(ErrorCode::MalformedModeGrid, "implausible grid dimensions");
}

bool next_data_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    return true;
  }
  return false;
}

}  // namespace

ModeGrid read_mode_grid_text(std::istream& in) {
  std::string line;
  if (!next_data_line(in, line)) throw SimError(ErrorCode::MalformedModeGrid, "missing header");
  std::istringstream header(line);
  std::uint64_t nx = 0, ny = 0;
  ModeGrid grid;
  if (!(header >> nx >> ny >> grid.dx >> grid.dy))
    throw SimError(ErrorCode::MalformedModeGrid, "header must read 'nx ny dx dy'");
  check_size(nx, ny);
  grid.nx = nx;
  grid.ny = ny;
  grid.samples.reserve(nx * ny);
  for (std::uint64_t k = 0; k < nx * ny; ++k) {
    if (!next_data_line(in, line))
      throw SimError(ErrorCode::MalformedModeGrid, "expected " + std::to_string(nx * ny) + " points, got " +
                                                       std::to_string(k));
    std::istringstream row(line);
    std::array<double, 6> v{};
    for (double& x : v)
      if (!(row >> x)) throw SimError(ErrorCode::MalformedModeGrid, "point " + std::to_string(k) + ": need 6 numbers");
    grid.samples.emplace_back(cplx(v[0], v[1]), cplx(v[2], v[3]), cplx(v[4], v[5]));
  }
  grid.validate();
  return grid;
}

void write_mode_grid_text(std::ostream& out, const ModeGrid& grid) {
  grid.validate();
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  out << grid.nx << ' ' << grid.ny << ' ' << grid.dx << ' ' << grid.dy << '\n';
  for (const CVec3& s : grid.samples) {
    out << s.x().real() << ' ' << s.x().imag() << ' ' << s.y().real() << ' ' << s.y().imag() << ' '
        << s.z().real() << ' ' << s.z().imag() << '\n';
  }
}

ModeGrid read_mode_grid_binary(std::istream& in) {
  const auto nx = read_le<std::uint64_t>(in);
  const auto ny = read_le<std::uint64_t>(in);
  check_size(nx, ny);
  ModeGrid grid;
  grid.nx = nx;
  grid.ny = ny;
  grid.dx = read_le<double>(in);
  grid.dy = read_le<double>(in);
  grid.samples.reserve(nx * ny);
  for (std::uint64_t k = 0; k < nx * ny; ++k) {
    std::array<double, 6> v{};
    for (double& x : v) x = read_le<double>(in);
    grid.samples.emplace_back(cplx(v[0], v[1]), cplx(v[2], v[3]), cplx(v[4], v[5]));
  }
  grid.validate();
  return grid;
}

void write_mode_grid_binary(std::ostream& out, const ModeGrid& grid) {
  grid.validate();
  write_le<std::uint64_t>(out, grid.nx);
  write_le<std::uint64_t>(out, grid.ny);
  write_le(out, grid.dx);
  write_le(out, grid.dy);
  for (const CVec3& s : grid.samples) {
    for (int c = 0; c < 3; ++c) {
      write_le(out, s(c).real());
      write_le(out, s(c).imag());
    }
  }
}

ModeGrid load_mode_grid(const std::filesystem::path& path) {
  const bool binary = path.extension() == ".bin";
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw SimError(ErrorCode::MalformedModeGrid, "cannot open " + path.string());
  return binary ? read_mode_grid_binary(in) : read_mode_grid_text(in);
}

ModeGrid sample_mode(const ModeSpec& mode, std::size_t nx, std::size_t ny, double dx, double dy) {
  ModeGrid grid{nx, ny, dx, dy, {}};
  grid.samples.reserve(nx * ny);
  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t i = 0; i < nx; ++i) grid.samples.push_back(mode.field(grid.x(i), grid.y(j)));
  grid.validate();
  return grid;
}

}  // namespace atomcorr
