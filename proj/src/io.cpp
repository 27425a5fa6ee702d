#include "hsiproj/io.hpp"

#include "hsiproj/error.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace hsiproj::io {

namespace fs = std::filesystem;

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

int parse_int(const std::string& key, const std::string& value) {
  char* end = nullptr;
  errno = 0;
  const long v = std::strtol(value.c_str(), &end, 10);
  if (errno != 0 || end == value.c_str() || trim(end).size() != 0 || v < 0 ||
      v > std::numeric_limits<int>::max())
    throw Error(ErrorCode::MalformedHeader, "ENVI header: bad integer for '" + key + "': " + value);
  return static_cast<int>(v);
}

double parse_double(std::string_view token, std::size_t line_no) {
  const std::string t = trim(token);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE)
    throw Error(ErrorCode::MalformedHeader,
                "line " + std::to_string(line_no) + ": not a number: '" + t + "'");
  return v;
}

std::size_t type_size(EnviDataType t) {
  switch (t) {
    case EnviDataType::UInt8: return 1;
    case EnviDataType::Int16:
    case EnviDataType::UInt16: return 2;
    case EnviDataType::Float32: return 4;
    case EnviDataType::Float64: return 8;
  }
  return 0;
}

template <class T>
T load_scalar(const unsigned char* p, bool swap) {
  std::array<unsigned char, sizeof(T)> bytes;
  std::memcpy(bytes.data(), p, sizeof(T));
  if (swap) std::reverse(bytes.begin(), bytes.end());
  T v;
  std::memcpy(&v, bytes.data(), sizeof(T));
  return v;
}

template <class T>
void store_scalar(std::vector<unsigned char>& out, T v) {
  std::array<unsigned char, sizeof(T)> bytes;
  std::memcpy(bytes.data(), &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  out.insert(out.end(), bytes.begin(), bytes.end());
}

double decode(const unsigned char* p, EnviDataType t, bool swap) {
  switch (t) {
    case EnviDataType::UInt8: return *p;
    case EnviDataType::Int16: return load_scalar<std::int16_t>(p, swap);
    case EnviDataType::UInt16: return load_scalar<std::uint16_t>(p, swap);
    case EnviDataType::Float32: return load_scalar<float>(p, swap);
    case EnviDataType::Float64: return load_scalar<double>(p, swap);
  }
  return 0.0;
}

template <class T>
T checked_integer(double v) {
  const double r = std::nearbyint(v);
  if (r < static_cast<double>(std::numeric_limits<T>::min()) ||
      r > static_cast<double>(std::numeric_limits<T>::max()))
    throw Error(ErrorCode::UnsupportedDataType, "value out of range for integer ENVI data type");
  return static_cast<T>(r);
}

void encode(std::vector<unsigned char>& out, double v, EnviDataType t) {
  switch (t) {
    case EnviDataType::UInt8: out.push_back(checked_integer<std::uint8_t>(v)); return;
    case EnviDataType::Int16: store_scalar(out, checked_integer<std::int16_t>(v)); return;
    case EnviDataType::UInt16: store_scalar(out, checked_integer<std::uint16_t>(v)); return;
    case EnviDataType::Float32: store_scalar(out, static_cast<float>(v)); return;
    case EnviDataType::Float64: store_scalar(out, v); return;
  }
}

bool host_is_little() { return std::endian::native == std::endian::little; }

std::vector<unsigned char> read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_bytes(const fs::path& path, const std::vector<unsigned char>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

// Flat payload index of (row, col, band) for a given interleave.
std::size_t payload_index(const std::string& interleave, std::size_t r, std::size_t c,
                          std::size_t b, std::size_t rows, std::size_t cols, std::size_t bands) {
  if (interleave == "bsq") return (b * rows + r) * cols + c;
  if (interleave == "bil") return (r * bands + b) * cols + c;
  return (r * cols + c) * bands + b;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

HyperCube load_envi(const fs::path& path, CubeFormat requested, std::vector<std::string>* warnings) {
  const fs::path hdr_path = envi_header_path(path);
  const EnviHeader h = parse_envi_header(read_text(hdr_path), warnings);
  const std::string wanted = requested == CubeFormat::EnviBsq   ? "bsq"
                             : requested == CubeFormat::EnviBil ? "bil"
                                                                : "bip";
  if (warnings && wanted != h.interleave)
    warnings->push_back("requested " + wanted + " but header says " + h.interleave +
                        "; using the header");

  const auto bytes = read_bytes(path);
  const std::size_t rows = static_cast<std::size_t>(h.lines);
  const std::size_t cols = static_cast<std::size_t>(h.samples);
  const std::size_t bands = static_cast<std::size_t>(h.bands);
  const std::size_t count = rows * cols * bands;
  const std::size_t width = type_size(h.data_type);
  const std::size_t needed = h.header_offset + count * width;
  if (bytes.size() < needed)
    throw Error(ErrorCode::SizeMismatch, path.string() + ": payload has " +
                                             std::to_string(bytes.size()) + " bytes, header implies " +
                                             std::to_string(needed));
  if (bytes.size() > needed && warnings)
    warnings->push_back(path.string() + ": " + std::to_string(bytes.size() - needed) +
                        " trailing bytes ignored");

  const bool swap = (h.byte_order == 1) == host_is_little();
  std::vector<double> values(count);
  const unsigned char* base = bytes.data() + h.header_offset;
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      for (std::size_t b = 0; b < bands; ++b) {
        const std::size_t src = payload_index(h.interleave, r, c, b, rows, cols, bands);
        values[(r * cols + c) * bands + b] = decode(base + src * width, h.data_type, swap);
      }
  return HyperCube(h.lines, h.samples, h.bands, std::move(values));
}

HyperCube load_csv_bands(const fs::path& path) {
  std::istringstream in(read_text(path));
  std::string line;
  std::size_t line_no = 0;
  int rows = -1, cols = -1, bands = -1;
  std::vector<double> values;
  std::size_t pixels = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      std::istringstream hs(t.substr(1));
      std::string k1, k2;
      int v1 = 0, v2 = 0;
      if (pixels == 0 && (hs >> k1 >> v1 >> k2 >> v2) && k1 == "rows" && k2 == "cols") {
        rows = v1;
        cols = v2;
      }
      continue;
    }
    std::size_t start = 0;
    int n = 0;
    while (true) {
      const auto comma = t.find(',', start);
      values.push_back(parse_double(std::string_view(t).substr(start, comma - start), line_no));
      ++n;
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (bands < 0) bands = n;
    if (n != bands)
      throw Error(ErrorCode::SizeMismatch, "line " + std::to_string(line_no) + " has " +
                                               std::to_string(n) + " bands, expected " +
                                               std::to_string(bands));
    ++pixels;
  }
  if (pixels == 0) throw Error(ErrorCode::SizeMismatch, path.string() + ": no spectra");
  if (rows < 0) {
    rows = static_cast<int>(pixels);
    cols = 1;
  }
  if (static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols) != pixels)
    throw Error(ErrorCode::SizeMismatch, path.string() + ": declared " + std::to_string(rows) +
                                             "x" + std::to_string(cols) + " pixels but found " +
                                             std::to_string(pixels));
  return HyperCube(rows, cols, bands, std::move(values));
}

}  // namespace

CubeFormat parse_cube_format(std::string_view name) {
  const std::string n = lower(std::string(name));
  if (n == "envi_bsq" || n == "bsq") return CubeFormat::EnviBsq;
  if (n == "envi_bil" || n == "bil") return CubeFormat::EnviBil;
  if (n == "envi_bip" || n == "bip") return CubeFormat::EnviBip;
  if (n == "csv_bands" || n == "csv") return CubeFormat::CsvBands;
  throw Error(ErrorCode::BadSpec, "unknown cube format '" + std::string(name) + "'");
}

std::string_view to_string(CubeFormat format) {
  switch (format) {
    case CubeFormat::EnviBsq: return "envi_bsq";
    case CubeFormat::EnviBil: return "envi_bil";
    case CubeFormat::EnviBip: return "envi_bip";
    case CubeFormat::CsvBands: return "csv_bands";
  }
  return "?";
}

EnviHeader parse_envi_header(const std::string& text, std::vector<std::string>* warnings) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || trim(line) != "ENVI")
    throw Error(ErrorCode::MalformedHeader, "ENVI header must start with 'ENVI'");

  std::map<std::string, std::string> fields;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (trim(line).empty()) continue;
    if (eq == std::string::npos)
      throw Error(ErrorCode::MalformedHeader, "ENVI header: expected 'key = value': " + line);
    const std::string key = lower(trim(line.substr(0, eq)));
    std::string value = trim(line.substr(eq + 1));
    if (!value.empty() && value.front() == '{') {
      while (value.find('}') == std::string::npos) {
        std::string more;
        if (!std::getline(in, more))
          throw Error(ErrorCode::MalformedHeader, "ENVI header: unterminated '{' for " + key);
        value += " " + trim(more);
      }
    }
    fields[key] = value;
  }

  static const std::set<std::string> known = {"samples", "lines", "bands", "interleave",
                                              "data type", "byte order", "header offset"};
  EnviHeader h;
  for (const auto& [key, value] : fields) {
    if (!known.count(key)) {
      if (warnings) warnings->push_back("ENVI header: ignoring '" + key + "'");
      continue;
    }
    if (key == "samples") h.samples = parse_int(key, value);
    else if (key == "lines") h.lines = parse_int(key, value);
    else if (key == "bands") h.bands = parse_int(key, value);
    else if (key == "header offset") h.header_offset = static_cast<std::size_t>(parse_int(key, value));
    else if (key == "byte order") {
      h.byte_order = parse_int(key, value);
      if (h.byte_order > 1) throw Error(ErrorCode::MalformedHeader, "ENVI header: byte order must be 0 or 1");
    } else if (key == "interleave") {
      h.interleave = lower(value);
      if (h.interleave != "bsq" && h.interleave != "bil" && h.interleave != "bip")
        throw Error(ErrorCode::MalformedHeader, "ENVI header: unknown interleave " + value);
    } else if (key == "data type") {
      const int t = parse_int(key, value);
      switch (t) {
        case 1: case 2: case 4: case 5: case 12: h.data_type = static_cast<EnviDataType>(t); break;
        default:
          throw Error(ErrorCode::UnsupportedDataType, "ENVI data type " + value + " not supported");
      }
    }
  }
  for (const char* k : {"samples", "lines", "bands", "data type"})
    if (!fields.count(k)) throw Error(ErrorCode::MalformedHeader, std::string("ENVI header: missing '") + k + "'");
  if (h.samples < 1 || h.lines < 1 || h.bands < 1)
    throw Error(ErrorCode::MalformedHeader, "ENVI header: dimensions must be positive");
  return h;
}

fs::path envi_header_path(const fs::path& data_path) {
  fs::path appended = data_path;
  appended += ".hdr";
  if (fs::exists(appended)) return appended;
  fs::path replaced = data_path;
  replaced.replace_extension(".hdr");
  if (fs::exists(replaced)) return replaced;
  return appended;
}

HyperCube load_cube(const fs::path& path, CubeFormat format, std::vector<std::string>* warnings) {
  if (format == CubeFormat::CsvBands) return load_csv_bands(path);
  return load_envi(path, format, warnings);
}

void write_cube(const fs::path& path, const HyperCube& cube, CubeFormat format,
                EnviDataType data_type) {
  if (format == CubeFormat::CsvBands) {
    std::string text = "# rows " + std::to_string(cube.rows()) + " cols " +
                       std::to_string(cube.cols()) + "\n";
    for (int r = 0; r < cube.rows(); ++r)
      for (int c = 0; c < cube.cols(); ++c) {
        for (int b = 0; b < cube.bands(); ++b) {
          if (b) text += ',';
          text += fmt17(cube.at(r, c, b));
        }
        text += '\n';
      }
    write_text(path, text);
    return;
  }
  if (format == CubeFormat::EnviBip)
    throw Error(ErrorCode::BadSpec, "writing BIP is not supported");
  const std::string interleave = format == CubeFormat::EnviBsq ? "bsq" : "bil";
  const std::size_t rows = static_cast<std::size_t>(cube.rows());
  const std::size_t cols = static_cast<std::size_t>(cube.cols());
  const std::size_t bands = static_cast<std::size_t>(cube.bands());
  std::vector<double> ordered(rows * cols * bands);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      for (std::size_t b = 0; b < bands; ++b)
        ordered[payload_index(interleave, r, c, b, rows, cols, bands)] =
            cube.at(static_cast<int>(r), static_cast<int>(c), static_cast<int>(b));
  std::vector<unsigned char> bytes;
  bytes.reserve(ordered.size() * type_size(data_type));
  for (double v : ordered) encode(bytes, v, data_type);
  write_bytes(path, bytes);

  fs::path hdr = path;
  hdr += ".hdr";
  write_text(hdr, "ENVI\nsamples = " + std::to_string(cube.cols()) +
                      "\nlines = " + std::to_string(cube.rows()) +
                      "\nbands = " + std::to_string(cube.bands()) +
                      "\nheader offset = 0\ndata type = " +
                      std::to_string(static_cast<int>(data_type)) + "\ninterleave = " + interleave +
                      "\nbyte order = 0\n");
}

GroundTruth load_ground_truth(const fs::path& path) {
  fs::path hdr = path;
  hdr += ".hdr";
  if (fs::exists(hdr)) {
    const EnviHeader h = parse_envi_header(read_text(hdr));
    if (h.bands != 1) throw Error(ErrorCode::MalformedHeader, "ground truth raster must have 1 band");
    if (h.data_type != EnviDataType::UInt8 && h.data_type != EnviDataType::UInt16)
      throw Error(ErrorCode::UnsupportedDataType, "ground truth raster must be 8 or 16-bit unsigned");
    const HyperCube raw = load_envi(path, CubeFormat::EnviBsq, nullptr);
    std::vector<int> labels(raw.values().size());
    std::transform(raw.values().begin(), raw.values().end(), labels.begin(),
                   [](double v) { return static_cast<int>(v); });
    return GroundTruth(raw.rows(), raw.cols(), std::move(labels));
  }

  std::istringstream in(read_text(path));
  std::string line;
  std::vector<int> labels;
  int rows = 0, cols = -1;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    int n = 0;
    std::size_t start = 0;
    while (true) {
      const auto comma = t.find(',', start);
      const double v = parse_double(std::string_view(t).substr(start, comma - start), line_no);
      if (v != std::floor(v) || v < 0 || v > std::numeric_limits<int>::max())
        throw Error(ErrorCode::BadSpec, "line " + std::to_string(line_no) + ": class ids must be non-negative integers");
      labels.push_back(static_cast<int>(v));
      ++n;
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (cols < 0) cols = n;
    if (n != cols)
      throw Error(ErrorCode::SizeMismatch, "ground truth line " + std::to_string(line_no) +
                                               " has " + std::to_string(n) + " columns");
    ++rows;
  }
  if (rows == 0) throw Error(ErrorCode::SizeMismatch, path.string() + ": empty ground truth");
  return GroundTruth(rows, cols, std::move(labels));
}

void write_ground_truth_csv(const fs::path& path, const GroundTruth& gt) {
  std::string text;
  for (int r = 0; r < gt.rows(); ++r) {
    for (int c = 0; c < gt.cols(); ++c) {
      if (c) text += ',';
      text += std::to_string(gt.at({r, c}));
    }
    text += '\n';
  }
  write_text(path, text);
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

}  // namespace hsiproj::io
