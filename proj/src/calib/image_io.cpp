#include <cctype>
#include <sstream>

#include "dexrecon/calib/calib.hpp"
#include "dexrecon/error.hpp"
#include "dexrecon/io/json_util.hpp"

namespace dexrecon {

namespace {
constexpr std::string_view kGridMagic = "VMGRID1\n";
}

std::string format_depth_grid(const DepthGrid& grid) {
  grid.validate();
  std::string out(kGridMagic);
  out += std::to_string(grid.rows) + " " + std::to_string(grid.cols) + "\n";
  for (double v : grid.values) append_f32_le(out, static_cast<float>(v));
  return out;
}

DepthGrid parse_depth_grid(const std::string& bytes) {
  if (bytes.compare(0, kGridMagic.size(), kGridMagic) != 0) fail(ErrorCode::IoFormat, "depth grid: bad magic");
  const std::size_t eol = bytes.find('\n', kGridMagic.size());
  if (eol == std::string::npos) fail(ErrorCode::IoFormat, "depth grid: missing dimension line");
  std::istringstream dims(bytes.substr(kGridMagic.size(), eol - kGridMagic.size()));
  DepthGrid grid;
  if (!(dims >> grid.rows >> grid.cols) || grid.rows <= 0 || grid.cols <= 0) {
    fail(ErrorCode::IoFormat, "depth grid: bad dimensions");
  }
  const std::size_t count = static_cast<std::size_t>(grid.rows) * static_cast<std::size_t>(grid.cols);
  if (bytes.size() - eol - 1 != 4 * count) fail(ErrorCode::IoFormat, "depth grid: payload size mismatch");
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data()) + eol + 1;
  grid.values.resize(count);
  for (std::size_t i = 0; i < count; ++i) grid.values[i] = read_f32_le(p + 4 * i);
  try {
    grid.validate();
  } catch (const Error& e) {
    fail(ErrorCode::IoFormat, std::string("depth grid: ") + e.what());
  }
  return grid;
}

DepthGrid read_depth_grid(const std::filesystem::path& path) { return parse_depth_grid(read_text_file(path)); }

void write_depth_grid(const std::filesystem::path& path, const DepthGrid& grid) {
  write_text_file(path, format_depth_grid(grid));
}

std::string format_pgm(const MaskImage& mask) {
  std::string out = "P5\n" + std::to_string(mask.cols) + " " + std::to_string(mask.rows) + "\n255\n";
  for (std::uint8_t p : mask.pixels) out.push_back(static_cast<char>(p ? 255 : 0));
  return out;
}

MaskImage parse_pgm(const std::string& bytes) {
  std::size_t pos = 0;
  // Header tokens are separated by whitespace; '#' starts a comment line.
  auto token = [&]() {
    while (pos < bytes.size()) {
      if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
        ++pos;
      } else if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else {
        break;
      }
    }
    const std::size_t start = pos;
    while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
    return bytes.substr(start, pos - start);
  };
  auto number = [&](const char* what) {
    const std::string t = token();
    if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos) {
      fail(ErrorCode::IoFormat, std::string("PGM: bad ") + what);
    }
    return std::stol(t);
  };
  if (token() != "P5") fail(ErrorCode::IoFormat, "PGM: expected binary P5 magic");
  MaskImage mask;
  const long cols = number("width"), rows = number("height"), maxval = number("maxval");
  if (cols <= 0 || rows <= 0 || maxval <= 0 || maxval > 65535) fail(ErrorCode::IoFormat, "PGM: bad header values");
  ++pos;  // single whitespace byte before the raster
  const std::size_t bpp = maxval > 255 ? 2 : 1;
  const std::size_t count = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
  if (pos > bytes.size() || bytes.size() - pos != count * bpp) fail(ErrorCode::IoFormat, "PGM: raster size mismatch");
  mask.rows = static_cast<int>(rows);
  mask.cols = static_cast<int>(cols);
  mask.pixels.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    bool on = bytes[pos + bpp * i] != 0;
    if (bpp == 2) on = on || bytes[pos + 2 * i + 1] != 0;
    mask.pixels[i] = on ? 1 : 0;
  }
  return mask;
}

MaskImage read_pgm(const std::filesystem::path& path) { return parse_pgm(read_text_file(path)); }

void write_pgm(const std::filesystem::path& path, const MaskImage& mask) { write_text_file(path, format_pgm(mask)); }

std::string format_intrinsics(const CameraIntrinsics& K) {
  Json j;
  j["fx"] = K.fx;
  j["fy"] = K.fy;
  j["cx"] = K.cx;
  j["cy"] = K.cy;
  j["width"] = K.width;
  j["height"] = K.height;
  return j.dump(2) + "\n";
}

CameraIntrinsics parse_intrinsics(const std::string& text) {
  const Json j = parse_json(text, "intrinsics");
  CameraIntrinsics K;
  try {
    K.fx = j.at("fx").get<double>();
    K.fy = j.at("fy").get<double>();
    K.cx = j.at("cx").get<double>();
    K.cy = j.at("cy").get<double>();
    K.width = j.at("width").get<int>();
    K.height = j.at("height").get<int>();
  } catch (const Json::exception& e) {
    fail(ErrorCode::IoFormat, std::string("intrinsics: ") + e.what());
  }
  K.validate();
  return K;
}

CameraIntrinsics read_intrinsics(const std::filesystem::path& path) { return parse_intrinsics(read_text_file(path)); }

}  // namespace dexrecon
