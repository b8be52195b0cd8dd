#include "dexrecon/geom/obj_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "dexrecon/error.hpp"
#include "dexrecon/io/json_util.hpp"

namespace dexrecon {

namespace {

std::string_view next_token(std::string_view& line) {
  std::size_t start = line.find_first_not_of(" \t\r");
  if (start == std::string_view::npos) {
    line = {};
    return {};
  }
  line.remove_prefix(start);
  std::size_t end = line.find_first_of(" \t\r");
  std::string_view token = line.substr(0, end);
  line.remove_prefix(end == std::string_view::npos ? line.size() : end);
  return token;
}

double parse_double(std::string_view token, std::size_t line_no) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    fail(ErrorCode::IoFormat, "OBJ line " + std::to_string(line_no) + ": bad number '" + std::string(token) + "'");
  }
  return value;
}

}  // namespace

TriMesh parse_obj(std::string_view text) {
  std::vector<Vec3> vertices;
  std::vector<std::vector<long>> polygons;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text.remove_prefix(eol == std::string_view::npos ? text.size() : eol + 1);
    ++line_no;
    const std::string_view tag = next_token(line);
    if (tag == "v") {
      Vec3 p;
      for (int a = 0; a < 3; ++a) {
        const std::string_view tok = next_token(line);
        if (tok.empty()) fail(ErrorCode::IoFormat, "OBJ line " + std::to_string(line_no) + ": vertex needs 3 coordinates");
        p[a] = parse_double(tok, line_no);
      }
      vertices.push_back(p);
    } else if (tag == "f") {
      std::vector<long> poly;
      for (std::string_view tok = next_token(line); !tok.empty(); tok = next_token(line)) {
        const std::string_view idx = tok.substr(0, tok.find('/'));
        long value = 0;
        auto [ptr, ec] = std::from_chars(idx.data(), idx.data() + idx.size(), value);
        if (ec != std::errc() || ptr != idx.data() + idx.size() || value == 0) {
          fail(ErrorCode::IoFormat, "OBJ line " + std::to_string(line_no) + ": bad face index");
        }
        poly.push_back(value);
      }
      if (poly.size() < 3) fail(ErrorCode::IoFormat, "OBJ line " + std::to_string(line_no) + ": face needs >= 3 vertices");
      polygons.push_back(std::move(poly));
    }
  }

  std::vector<Face> faces;
  const auto n = static_cast<long>(vertices.size());
  for (const auto& poly : polygons) {
    std::vector<std::uint32_t> idx;
    for (long v : poly) {
      const long resolved = v > 0 ? v - 1 : n + v;
      if (resolved < 0 || resolved >= n) fail(ErrorCode::IoFormat, "OBJ face index out of range");
      idx.push_back(static_cast<std::uint32_t>(resolved));
    }
    for (std::size_t k = 1; k + 1 < idx.size(); ++k) faces.push_back({idx[0], idx[k], idx[k + 1]});
  }
  try {
    return TriMesh(std::move(vertices), std::move(faces));
  } catch (const Error& e) {
    fail(ErrorCode::IoFormat, std::string("OBJ: ") + e.what());
  }
}

TriMesh read_obj(const std::filesystem::path& path) {
  return parse_obj(read_text_file(path));
}

std::string format_obj(const TriMesh& mesh) {
  std::string out;
  for (const Vec3& v : mesh.vertices()) {
    out += "v " + format_double(v.x()) + " " + format_double(v.y()) + " " + format_double(v.z()) + "\n";
  }
  for (const Face& f : mesh.faces()) {
    out += "f " + std::to_string(f[0] + 1) + " " + std::to_string(f[1] + 1) + " " + std::to_string(f[2] + 1) + "\n";
  }
  return out;
}

void write_obj(const std::filesystem::path& path, const TriMesh& mesh) {
  write_text_file(path, format_obj(mesh));
}

}  // namespace dexrecon
