#include <cmath>
#include <cstring>
#include <sstream>

#include "dexrecon/error.hpp"
#include "dexrecon/grasp/grasp.hpp"
#include "dexrecon/io/json_util.hpp"

namespace dexrecon {

namespace {
constexpr std::string_view kMagic = "VMDM1\n";
}

DistanceMatrix::DistanceMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows_ * cols_) fail(ErrorCode::DimensionMismatch, "distance matrix size mismatch");
  for (double v : values_) {
    if (!(v >= 0.0) || !std::isfinite(v)) fail(ErrorCode::InvalidArgument, "distances must be finite and >= 0");
  }
}

DistanceMatrix distance_matrix(std::span<const Vec3> robot_points, std::span<const Vec3> object_points) {
  std::vector<double> values;
  values.reserve(robot_points.size() * object_points.size());
  for (const Vec3& r : robot_points) {
    for (const Vec3& o : object_points) values.push_back((r - o).norm());
  }
  return {robot_points.size(), object_points.size(), std::move(values)};
}

std::string format_distance_matrix(const DistanceMatrix& D) {
  std::string out(kMagic);
  out += std::to_string(D.rows()) + " " + std::to_string(D.cols()) + "\n";
  out.reserve(out.size() + 4 * D.values().size());
  for (double v : D.values()) append_f32_le(out, static_cast<float>(v));
  return out;
}

DistanceMatrix parse_distance_matrix(const std::string& bytes) {
  if (bytes.compare(0, kMagic.size(), kMagic) != 0) fail(ErrorCode::IoFormat, "distance matrix: bad magic");
  const std::size_t eol = bytes.find('\n', kMagic.size());
  if (eol == std::string::npos) fail(ErrorCode::IoFormat, "distance matrix: missing dimension line");
  std::istringstream dims(bytes.substr(kMagic.size(), eol - kMagic.size()));
  long long rows = -1, cols = -1;
  if (!(dims >> rows >> cols) || rows < 0 || cols < 0) fail(ErrorCode::IoFormat, "distance matrix: bad dimensions");
  const std::size_t count = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
  if (bytes.size() - eol - 1 != 4 * count) fail(ErrorCode::IoFormat, "distance matrix: payload size mismatch");
  std::vector<double> values(count);
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data()) + eol + 1;
  for (std::size_t i = 0; i < count; ++i) values[i] = read_f32_le(p + 4 * i);
  try {
    return {static_cast<std::size_t>(rows), static_cast<std::size_t>(cols), std::move(values)};
  } catch (const Error& e) {
    fail(ErrorCode::IoFormat, std::string("distance matrix: ") + e.what());
  }
}

DistanceMatrix read_distance_matrix(const std::filesystem::path& path) {
  return parse_distance_matrix(read_text_file(path));
}

void write_distance_matrix(const std::filesystem::path& path, const DistanceMatrix& D) {
  write_text_file(path, format_distance_matrix(D));
}

}  // namespace dexrecon
