#pragma once

// Output files: CSV tables, 8-bit PGM images, JSON documents. Every writer
// produces the same bytes for the same input.

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "lgr/error.hpp"
#include "lgr/specfun.hpp"

namespace lgr {

/// A file could not be read or written. The message names the path.
class IoError : public Error {
 public:
  using Error::Error;
};

using CsvCell = std::variant<double, long long, std::string>;

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<CsvCell>> rows;

  void add_row(std::vector<CsvCell> row);
};

/// 17 significant digits, shortest exponent form, '.' separator regardless
/// of locale. Non-finite values print as nan / inf / -inf.
std::string format_number(double v);

/// Header row first, one '\n' per row. Throws DomainError on ragged rows.
std::string format_csv(const CsvTable& table);

struct GrayImage {
  int width{0};
  int height{0};
  std::vector<std::uint8_t> pixels;  // row-major, top row first
};

/// Binary P5 with maxval 255.
std::string format_pgm(const GrayImage& image);

/// |f|^2 scaled so the maximum maps to 255 (all-zero input stays black).
GrayImage intensity_image(const std::vector<cplx>& field, int width, int height);

/// arg f in [-pi, pi] mapped linearly onto [0, 255].
GrayImage phase_image(const std::vector<cplx>& field, int width, int height);

/// Tiles images of equal size into a cols x rows mosaic, row-major.
GrayImage mosaic(const std::vector<GrayImage>& tiles, int cols, int rows);

/// Creates parent directories as needed. Throws IoError.
void write_file(const std::filesystem::path& path, const std::string& bytes);
std::string read_file(const std::filesystem::path& path);

}  // namespace lgr
