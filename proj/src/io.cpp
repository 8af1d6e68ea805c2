#include "lgr/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace lgr {

void CsvTable::add_row(std::vector<CsvCell> row) { rows.push_back(std::move(row)); }

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

std::string cell_text(const CsvCell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  const auto& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + '"';
}

}  // namespace

std::string format_csv(const CsvTable& table) {
  std::string out;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (i) out += ',';
    out += cell_text(table.header[i]);
  }
  out += '\n';
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size()) throw DomainError("format_csv: row width differs from header");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += cell_text(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string format_pgm(const GrayImage& image) {
  if (image.width <= 0 || image.height <= 0 ||
      image.pixels.size() != static_cast<std::size_t>(image.width) * image.height) {
    throw DomainError("format_pgm: pixel count does not match the size");
  }
  std::string out = "P5\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
  out.append(reinterpret_cast<const char*>(image.pixels.data()), image.pixels.size());
  return out;
}

namespace {

void check_size(const std::vector<cplx>& field, int width, int height) {
  if (width <= 0 || height <= 0 || field.size() != static_cast<std::size_t>(width) * height) {
    throw DomainError("image: field size does not match width x height");
  }
}

std::uint8_t to_byte(double x) { return static_cast<std::uint8_t>(std::clamp(std::lround(x), 0L, 255L)); }

}  // namespace

GrayImage intensity_image(const std::vector<cplx>& field, int width, int height) {
  check_size(field, width, height);
  double peak = 0.0;
  for (auto v : field) peak = std::max(peak, std::norm(v));
  GrayImage img{width, height, std::vector<std::uint8_t>(field.size(), 0)};
  if (peak > 0.0)
    for (std::size_t i = 0; i < field.size(); ++i) img.pixels[i] = to_byte(255.0 * std::norm(field[i]) / peak);
  return img;
}

GrayImage phase_image(const std::vector<cplx>& field, int width, int height) {
  check_size(field, width, height);
  constexpr double pi = std::numbers::pi;
  GrayImage img{width, height, std::vector<std::uint8_t>(field.size(), 0)};
  for (std::size_t i = 0; i < field.size(); ++i) img.pixels[i] = to_byte(255.0 * (std::arg(field[i]) + pi) / (2 * pi));
  return img;
}

GrayImage mosaic(const std::vector<GrayImage>& tiles, int cols, int rows) {
  if (cols <= 0 || rows <= 0 || tiles.size() != static_cast<std::size_t>(cols) * rows) {
    throw DomainError("mosaic: need cols x rows tiles");
  }
  const int w = tiles.front().width, h = tiles.front().height;
  for (const auto& t : tiles)
    if (t.width != w || t.height != h) throw DomainError("mosaic: tiles differ in size");
  GrayImage out{w * cols, h * rows, std::vector<std::uint8_t>(static_cast<std::size_t>(w) * cols * h * rows)};
  for (int ty = 0; ty < rows; ++ty)
    for (int tx = 0; tx < cols; ++tx) {
      const auto& t = tiles[ty * cols + tx];
      for (int y = 0; y < h; ++y)
        std::copy_n(t.pixels.begin() + static_cast<std::ptrdiff_t>(y) * w, w,
                    out.pixels.begin() + (static_cast<std::ptrdiff_t>(ty) * h + y) * out.width + tx * w);
    }
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open for writing: " + path.string());
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw IoError("write failed: " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open for reading: " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace lgr
