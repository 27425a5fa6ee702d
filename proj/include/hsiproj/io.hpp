#pragma once

#include "hsiproj/types.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace hsiproj::io {

enum class CubeFormat { EnviBsq, EnviBil, EnviBip, CsvBands };

/// ENVI "data type" codes understood by the reader.
enum class EnviDataType : int {
  UInt8 = 1,
  Int16 = 2,
  Float32 = 4,
  Float64 = 5,
  UInt16 = 12,
};

struct EnviHeader {
  int samples = 0;  // columns
  int lines = 0;    // rows
  int bands = 0;
  std::string interleave = "bsq";
  EnviDataType data_type = EnviDataType::Float64;
  int byte_order = 0;  // 0 little endian, 1 big endian
  std::size_t header_offset = 0;
};

CubeFormat parse_cube_format(std::string_view name);
std::string_view to_string(CubeFormat format);

/// Parses the text of an ENVI .hdr file. Unknown keys are appended to
/// `warnings` when it is non-null.
EnviHeader parse_envi_header(const std::string& text, std::vector<std::string>* warnings = nullptr);

/// The header file for an ENVI payload: `<path>.hdr` if it exists, else the
/// path with its extension replaced by `.hdr`.
std::filesystem::path envi_header_path(const std::filesystem::path& data_path);

/// For ENVI formats `path` names the binary payload; the interleave in the
/// header wins over the requested ENVI variant (a mismatch is reported as a
/// warning). For csv_bands every line holds one pixel's spectrum in
/// row-major pixel order; an optional first line `# rows R cols C` fixes the
/// spatial shape, otherwise the cube is (lines x 1).
HyperCube load_cube(const std::filesystem::path& path, CubeFormat format,
                    std::vector<std::string>* warnings = nullptr);

/// ENVI writes a payload plus header (BSQ/BIL only, little endian). CSV uses
/// 17 significant digits so reloading is bit-exact.
void write_cube(const std::filesystem::path& path, const HyperCube& cube, CubeFormat format,
                EnviDataType data_type = EnviDataType::Float64);

/// Ground truth as a CSV grid (one image row per line) or, when `path` has an
/// ENVI header next to it, an 8/16-bit single-band raster.
GroundTruth load_ground_truth(const std::filesystem::path& path);
void write_ground_truth_csv(const std::filesystem::path& path, const GroundTruth& gt);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace hsiproj::io
