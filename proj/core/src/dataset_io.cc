#include "srmvs/dataset_io.h"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "srmvs/errors.h"

namespace srmvs {
namespace fs = std::filesystem;

namespace {

static_assert(std::endian::native == std::endian::little,
              "binary formats assume a little-endian host");

constexpr char kDepthMagic[8] = {'S', 'R', 'M', 'V', 'S', 'D', 'M', '1'};
constexpr std::uint32_t kDepthHasNormals = 1u << 0;
constexpr std::uint32_t kDepthHasCosts = 1u << 1;

std::string ReadBytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteBytes(const fs::path& path, const std::string& bytes) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

template <typename T>
void Append(std::string* out, T value) {
  char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  out->append(buf, sizeof(T));
}

// Sequential reader over a byte buffer that reports offsets on failure.
class ByteReader {
 public:
  ByteReader(const std::string& bytes, std::string source)
      : bytes_(bytes), source_(std::move(source)) {}

  std::size_t Offset() const { return pos_; }
  bool AtEnd() const { return pos_ >= bytes_.size(); }

  template <typename T>
  T Read() {
    if (bytes_.size() - pos_ < sizeof(T)) Fail("unexpected end of data");
    T value;
    std::memcpy(&value, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return value;
  }

  std::string Line() {
    const std::size_t end = bytes_.find('\n', pos_);
    if (end == std::string::npos) Fail("unterminated header line");
    std::string line = bytes_.substr(pos_, end - pos_);
    pos_ = end + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  }

  // Whitespace-separated token, skipping `#` comments (PNM style).
  std::string Token() {
    while (pos_ < bytes_.size()) {
      const char c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
    const std::size_t start = pos_;
    while (pos_ < bytes_.size() &&
           !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
      ++pos_;
    }
    if (start == pos_) Fail("unexpected end of data");
    return bytes_.substr(start, pos_ - start);
  }

  void Skip(std::size_t n) {
    if (bytes_.size() - pos_ < n) Fail("unexpected end of data");
    pos_ += n;
  }

  [[noreturn]] void Fail(const std::string& what, std::size_t at) const {
    throw FormatError(source_ + ": " + what + " at byte offset " +
                      std::to_string(at));
  }
  [[noreturn]] void Fail(const std::string& what) const { Fail(what, pos_); }

 private:
  const std::string& bytes_;
  std::string source_;
  std::size_t pos_ = 0;
};

bool ParseDouble(std::string_view token, double* out) {
  const char* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, *out);
  return ec == std::errc() && ptr == end;
}

bool ParseInt(std::string_view token, long long* out) {
  const char* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, *out);
  return ec == std::errc() && ptr == end;
}

std::vector<std::string> SplitWhitespace(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream in(line);
  std::string t;
  while (in >> t) tokens.push_back(t);
  return tokens;
}

std::string FormatDouble(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::uint8_t Quantize(double v) {
  const double c = std::isnan(v) ? 0.0 : std::clamp(v, 0.0, 1.0);
  return static_cast<std::uint8_t>(std::lround(c * 255.0));
}

// PLY scalar types by name; size 0 for unknown names.
struct PlyType {
  std::size_t size = 0;
  bool is_float = false;
  bool is_signed = false;
};

PlyType PlyTypeOf(const std::string& name) {
  static const std::map<std::string, PlyType> types = {
      {"char", {1, false, true}},    {"int8", {1, false, true}},
      {"uchar", {1, false, false}},  {"uint8", {1, false, false}},
      {"short", {2, false, true}},   {"int16", {2, false, true}},
      {"ushort", {2, false, false}}, {"uint16", {2, false, false}},
      {"int", {4, false, true}},     {"int32", {4, false, true}},
      {"uint", {4, false, false}},   {"uint32", {4, false, false}},
      {"float", {4, true, true}},    {"float32", {4, true, true}},
      {"double", {8, true, true}},   {"float64", {8, true, true}},
  };
  const auto it = types.find(name);
  return it == types.end() ? PlyType{} : it->second;
}

double ReadPlyScalar(ByteReader& in, const PlyType& t) {
  if (t.is_float) {
    return t.size == 4 ? static_cast<double>(in.Read<float>()) : in.Read<double>();
  }
  switch (t.size) {
    case 1: return t.is_signed ? in.Read<std::int8_t>() : in.Read<std::uint8_t>();
    case 2: return t.is_signed ? in.Read<std::int16_t>() : in.Read<std::uint16_t>();
    default:
      return t.is_signed ? static_cast<double>(in.Read<std::int32_t>())
                         : static_cast<double>(in.Read<std::uint32_t>());
  }
}

struct PlyProperty {
  std::string name;
  PlyType type;
  bool is_list = false;
  PlyType count_type;
};

struct PlyElement {
  std::string name;
  std::size_t count = 0;
  std::vector<PlyProperty> properties;
};

}  // namespace

void WriteImage(const Image& image, const fs::path& path) {
  std::string bytes = (image.Channels() == 1 ? "P5\n" : "P6\n") +
                      std::to_string(image.Width()) + " " +
                      std::to_string(image.Height()) + "\n255\n";
  bytes.reserve(bytes.size() + image.Data().size());
  for (const double v : image.Data()) {
    bytes.push_back(static_cast<char>(Quantize(v)));
  }
  WriteBytes(path, bytes);
}

Image ReadImage(const fs::path& path) {
  const std::string bytes = ReadBytes(path);
  ByteReader in(bytes, path.string());
  const std::string magic = in.Token();
  int channels = 0;
  bool binary = false;
  if (magic == "P5" || magic == "P2") channels = 1;
  if (magic == "P6" || magic == "P3") channels = 3;
  binary = magic == "P5" || magic == "P6";
  if (channels == 0) in.Fail("not a PGM/PPM file", 0);
  long long w = 0, h = 0, maxval = 0;
  if (!ParseInt(in.Token(), &w) || !ParseInt(in.Token(), &h) ||
      !ParseInt(in.Token(), &maxval) || w <= 0 || h <= 0 || maxval <= 0 ||
      maxval > 255) {
    in.Fail("bad PNM header");
  }
  const std::size_t n = static_cast<std::size_t>(w) * h * channels;
  std::vector<double> data(n);
  if (binary) {
    in.Skip(1);  // single whitespace after maxval
    for (std::size_t i = 0; i < n; ++i) {
      data[i] = std::min<double>(in.Read<std::uint8_t>(), maxval) / maxval;
    }
    if (!in.AtEnd()) in.Fail("trailing bytes after pixel data");
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      long long v = 0;
      if (!ParseInt(in.Token(), &v) || v < 0 || v > maxval) {
        in.Fail("bad ascii sample");
      }
      data[i] = static_cast<double>(v) / maxval;
    }
  }
  return Image(static_cast<int>(w), static_cast<int>(h), channels,
               std::move(data));
}

void WritePly(const PointCloud& cloud, const fs::path& path) {
  cloud.Validate();
  std::string bytes = "ply\nformat binary_little_endian 1.0\n";
  bytes += "element vertex " + std::to_string(cloud.Size()) + "\n";
  bytes += "property float x\nproperty float y\nproperty float z\n";
  if (cloud.HasNormals()) {
    bytes += "property float nx\nproperty float ny\nproperty float nz\n";
  }
  if (cloud.HasColors()) {
    bytes += "property uchar red\nproperty uchar green\nproperty uchar blue\n";
  }
  bytes += "end_header\n";
  for (std::size_t i = 0; i < cloud.Size(); ++i) {
    for (int a = 0; a < 3; ++a) {
      Append(&bytes, static_cast<float>(cloud.points[i][a]));
    }
    if (cloud.HasNormals()) {
      for (int a = 0; a < 3; ++a) {
        Append(&bytes, static_cast<float>(cloud.normals[i][a]));
      }
    }
    if (cloud.HasColors()) {
      for (int a = 0; a < 3; ++a) Append(&bytes, cloud.colors[i][a]);
    }
  }
  WriteBytes(path, bytes);
}

PointCloud ReadPly(const fs::path& path) {
  const std::string bytes = ReadBytes(path);
  ByteReader in(bytes, path.string());
  if (in.Line() != "ply") in.Fail("missing 'ply' magic", 0);

  bool ascii = false;
  bool have_format = false;
  std::vector<PlyElement> elements;
  while (true) {
    const std::size_t line_start = in.Offset();
    const std::string line = in.Line();
    const auto tokens = SplitWhitespace(line);
    if (tokens.empty()) continue;
    const std::string& key = tokens[0];
    if (key == "end_header") break;
    if (key == "comment" || key == "obj_info") continue;
    if (key == "format") {
      if (tokens.size() != 3 || tokens[2] != "1.0") {
        in.Fail("bad format line", line_start);
      }
      if (tokens[1] == "ascii") {
        ascii = true;
      } else if (tokens[1] != "binary_little_endian") {
        in.Fail("unsupported PLY format '" + tokens[1] + "'", line_start);
      }
      have_format = true;
    } else if (key == "element") {
      long long count = 0;
      if (tokens.size() != 3 || !ParseInt(tokens[2], &count) || count < 0) {
        in.Fail("bad element line", line_start);
      }
      elements.push_back({tokens[1], static_cast<std::size_t>(count), {}});
    } else if (key == "property") {
      if (elements.empty()) in.Fail("property before element", line_start);
      PlyProperty prop;
      if (tokens.size() == 5 && tokens[1] == "list") {
        prop.is_list = true;
        prop.count_type = PlyTypeOf(tokens[2]);
        prop.type = PlyTypeOf(tokens[3]);
        prop.name = tokens[4];
        if (prop.count_type.size == 0 || prop.count_type.is_float) {
          in.Fail("bad list count type", line_start);
        }
      } else if (tokens.size() == 3) {
        prop.type = PlyTypeOf(tokens[1]);
        prop.name = tokens[2];
      } else {
        in.Fail("bad property line", line_start);
      }
      if (prop.type.size == 0) in.Fail("unknown property type", line_start);
      elements.back().properties.push_back(prop);
    } else {
      in.Fail("unexpected header keyword '" + key + "'", line_start);
    }
  }
  if (!have_format) in.Fail("missing format line", 0);

  PointCloud cloud;
  bool found_vertex = false;
  for (const PlyElement& element : elements) {
    const bool is_vertex = element.name == "vertex";
    int ix = -1, iy = -1, iz = -1, ir = -1, ig = -1, ib = -1, inx = -1,
        iny = -1, inz = -1;
    for (int p = 0; p < static_cast<int>(element.properties.size()); ++p) {
      const std::string& name = element.properties[p].name;
      if (element.properties[p].is_list) continue;
      if (name == "x") ix = p;
      if (name == "y") iy = p;
      if (name == "z") iz = p;
      if (name == "red") ir = p;
      if (name == "green") ig = p;
      if (name == "blue") ib = p;
      if (name == "nx") inx = p;
      if (name == "ny") iny = p;
      if (name == "nz") inz = p;
    }
    if (is_vertex) {
      if (ix < 0 || iy < 0 || iz < 0) in.Fail("vertex element lacks x/y/z", 0);
      found_vertex = true;
    }
    const bool colors = is_vertex && ir >= 0 && ig >= 0 && ib >= 0;
    const bool normals = is_vertex && inx >= 0 && iny >= 0 && inz >= 0;
    std::vector<double> values(element.properties.size());
    for (std::size_t i = 0; i < element.count; ++i) {
      if (ascii) {
        const std::size_t line_start = in.Offset();
        const auto tokens = SplitWhitespace(in.Line());
        std::size_t t = 0;
        for (std::size_t p = 0; p < element.properties.size(); ++p) {
          const PlyProperty& prop = element.properties[p];
          double v = 0.0;
          if (t >= tokens.size() || !ParseDouble(tokens[t++], &v)) {
            in.Fail("bad ascii " + element.name + " record", line_start);
          }
          if (prop.is_list) {
            t += static_cast<std::size_t>(v);
            if (t > tokens.size()) {
              in.Fail("short ascii list", line_start);
            }
          } else {
            values[p] = v;
          }
        }
      } else {
        for (std::size_t p = 0; p < element.properties.size(); ++p) {
          const PlyProperty& prop = element.properties[p];
          if (prop.is_list) {
            const double n = ReadPlyScalar(in, prop.count_type);
            in.Skip(static_cast<std::size_t>(n) * prop.type.size);
          } else {
            values[p] = ReadPlyScalar(in, prop.type);
          }
        }
      }
      if (!is_vertex) continue;
      cloud.points.emplace_back(values[ix], values[iy], values[iz]);
      if (colors) {
        cloud.colors.push_back({static_cast<std::uint8_t>(values[ir]),
                                static_cast<std::uint8_t>(values[ig]),
                                static_cast<std::uint8_t>(values[ib])});
      }
      if (normals) cloud.normals.emplace_back(values[inx], values[iny], values[inz]);
    }
  }
  if (!found_vertex) in.Fail("no vertex element", 0);
  for (const auto& p : cloud.points) {
    if (!p.allFinite()) in.Fail("non-finite vertex coordinate", 0);
  }
  return cloud;
}

void WriteDepthMap(const DepthMap& map, const fs::path& path) {
  std::string bytes(kDepthMagic, sizeof(kDepthMagic));
  std::uint32_t flags = kDepthHasCosts;
  if (map.HasNormals()) flags |= kDepthHasNormals;
  Append(&bytes, static_cast<std::uint32_t>(map.Width()));
  Append(&bytes, static_cast<std::uint32_t>(map.Height()));
  Append(&bytes, flags);
  for (const double d : map.Depths()) Append(&bytes, static_cast<float>(d));
  if (map.HasNormals()) {
    for (const double n : map.Normals()) Append(&bytes, static_cast<float>(n));
  }
  for (const double c : map.Costs()) Append(&bytes, static_cast<float>(c));
  WriteBytes(path, bytes);
}

DepthMap ReadDepthMap(const fs::path& path) {
  const std::string bytes = ReadBytes(path);
  ByteReader in(bytes, path.string());
  if (bytes.size() < sizeof(kDepthMagic) ||
      std::memcmp(bytes.data(), kDepthMagic, sizeof(kDepthMagic)) != 0) {
    in.Fail("bad depth map magic", 0);
  }
  in.Skip(sizeof(kDepthMagic));
  const std::uint32_t w = in.Read<std::uint32_t>();
  const std::uint32_t h = in.Read<std::uint32_t>();
  const std::uint32_t flags = in.Read<std::uint32_t>();
  if (w == 0 || h == 0 || w > (1u << 16) || h > (1u << 16)) {
    in.Fail("bad depth map dimensions", 8);
  }
  if ((flags & ~(kDepthHasNormals | kDepthHasCosts)) != 0) {
    in.Fail("unknown depth map flags", 16);
  }
  const std::size_t n = static_cast<std::size_t>(w) * h;
  const bool normals = flags & kDepthHasNormals;
  const bool costs = flags & kDepthHasCosts;
  const std::size_t expected =
      20 + 4 * n * (1 + (normals ? 3 : 0) + (costs ? 1 : 0));
  if (bytes.size() != expected) {
    in.Fail("depth map holds " + std::to_string(bytes.size()) +
                " bytes, expected " + std::to_string(expected),
            std::min(bytes.size(), expected));
  }
  DepthMap map(static_cast<int>(w), static_cast<int>(h), normals);
  for (double& d : map.Depths()) d = in.Read<float>();
  if (normals) {
    for (double& v : map.Normals()) v = in.Read<float>();
  }
  if (costs) {
    for (double& c : map.Costs()) c = in.Read<float>();
  }
  return map;
}

std::string FormatCameras(const std::vector<View>& views) {
  std::string out =
      "# NAME WIDTH HEIGHT fx fy cx cy k1 k2 r11 r12 r13 r21 r22 r23 r31 r32 "
      "r33 tx ty tz\n";
  for (const View& v : views) {
    const PinholeCamera& c = v.camera;
    out += v.name + " " + std::to_string(c.width) + " " +
           std::to_string(c.height);
    for (const double x : {c.fx, c.fy, c.cx, c.cy, c.k1, c.k2}) {
      out += " " + FormatDouble(x);
    }
    for (int r = 0; r < 3; ++r) {
      for (int col = 0; col < 3; ++col) {
        out += " " + FormatDouble(v.pose.rotation(r, col));
      }
    }
    for (int a = 0; a < 3; ++a) out += " " + FormatDouble(v.pose.translation[a]);
    out += "\n";
  }
  return out;
}

std::vector<CameraRecord> ParseCameras(const std::string& text,
                                       const std::string& source) {
  std::vector<CameraRecord> records;
  std::vector<std::string> errors;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = source + ":" + std::to_string(line_no) + ": ";
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto tokens = SplitWhitespace(line);
    if (tokens.empty()) continue;
    if (tokens.size() != 21) {
      errors.push_back(where + "expected 21 fields, got " +
                       std::to_string(tokens.size()));
      continue;
    }
    CameraRecord rec;
    rec.name = tokens[0];
    long long w = 0, h = 0;
    double v[18];
    bool ok = ParseInt(tokens[1], &w) && ParseInt(tokens[2], &h);
    for (int i = 0; i < 18 && ok; ++i) ok = ParseDouble(tokens[3 + i], &v[i]);
    if (!ok) {
      errors.push_back(where + "malformed number");
      continue;
    }
    rec.camera = {v[0], v[1], v[2], v[3], v[4], v[5],
                  static_cast<int>(w), static_cast<int>(h)};
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) rec.pose.rotation(r, c) = v[6 + 3 * r + c];
    }
    rec.pose.translation = {v[15], v[16], v[17]};
    try {
      rec.camera.Validate();
      rec.pose.Validate();
    } catch (const ValidationError& e) {
      for (const auto& msg : e.Violations()) errors.push_back(where + msg);
      continue;
    }
    records.push_back(std::move(rec));
  }
  if (!errors.empty()) {
    std::string msg;
    for (const auto& e : errors) msg += (msg.empty() ? "" : "\n") + e;
    throw FormatError(msg);
  }
  return records;
}

Dataset LoadDataset(const fs::path& root) {
  const fs::path cameras_path = root / "cameras.txt";
  if (!fs::exists(cameras_path)) {
    throw FormatError(cameras_path.string() + ": missing");
  }
  const auto records =
      ParseCameras(ReadTextFile(cameras_path), cameras_path.string());

  Dataset dataset;
  const fs::path label_path = root / "label.txt";
  if (fs::exists(label_path)) {
    std::string label = ReadTextFile(label_path);
    label.erase(std::remove_if(label.begin(), label.end(),
                               [](unsigned char c) { return std::isspace(c); }),
                label.end());
    try {
      dataset.set.label = ParseSetLabel(label);
    } catch (const InvalidArgumentError& e) {
      throw FormatError(label_path.string() + ": " + e.what());
    }
  }

  std::vector<std::string> errors;
  for (const CameraRecord& rec : records) {
    fs::path image_path;
    for (const char* ext : {".pgm", ".ppm"}) {
      const fs::path candidate = root / "images" / (rec.name + ext);
      if (fs::exists(candidate)) {
        image_path = candidate;
        break;
      }
    }
    if (image_path.empty()) {
      errors.push_back("view '" + rec.name + "': no image in " +
                       (root / "images").string());
      continue;
    }
    View view;
    view.name = rec.name;
    view.camera = rec.camera;
    view.pose = rec.pose;
    try {
      view.image = ReadImage(image_path);
    } catch (const std::exception& e) {
      errors.push_back(e.what());
      continue;
    }
    if (view.image.Width() != rec.camera.width ||
        view.image.Height() != rec.camera.height) {
      errors.push_back(image_path.string() + ": image is " +
                       std::to_string(view.image.Width()) + "x" +
                       std::to_string(view.image.Height()) +
                       ", cameras.txt says " + std::to_string(rec.camera.width) +
                       "x" + std::to_string(rec.camera.height));
      continue;
    }
    dataset.set.views.push_back(std::move(view));
  }
  try {
    dataset.set.Validate();
  } catch (const ValidationError& e) {
    errors.insert(errors.end(), e.Violations().begin(), e.Violations().end());
  }
  if (!errors.empty()) {
    std::string msg = root.string() + ": invalid dataset";
    for (const auto& e : errors) msg += "\n  " + e;
    throw FormatError(msg);
  }

  if (fs::is_directory(root / "images")) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(root / "images")) {
      files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      if (dataset.set.Find(f.stem().string()) == nullptr) {
        dataset.warnings.push_back("ignoring unreferenced image " + f.string());
      }
    }
  }

  if (fs::exists(root / "gt" / "cloud.ply")) {
    dataset.gt_cloud = ReadPly(root / "gt" / "cloud.ply");
  }
  if (fs::is_directory(root / "gt" / "depth")) {
    std::vector<DepthMap> maps;
    for (const View& view : dataset.set.views) {
      const fs::path p = root / "gt" / "depth" / (view.name + ".dmap");
      if (!fs::exists(p)) {
        maps.clear();
        dataset.warnings.push_back("incomplete gt/depth; ignoring it");
        break;
      }
      maps.push_back(ReadDepthMap(p));
    }
    dataset.gt_depth_maps = std::move(maps);
  }
  return dataset;
}

void SaveDataset(const SequenceSet& set, const fs::path& root,
                 const PointCloud* gt_cloud,
                 const std::vector<DepthMap>* gt_depth_maps) {
  set.Validate();
  fs::create_directories(root / "images");
  WriteTextFile(root / "cameras.txt", FormatCameras(set.views));
  WriteTextFile(root / "label.txt", std::string(ToString(set.label)) + "\n");
  for (const View& view : set.views) {
    const char* ext = view.image.Channels() == 1 ? ".pgm" : ".ppm";
    WriteImage(view.image, root / "images" / (view.name + ext));
  }
  if (gt_cloud != nullptr) WritePly(*gt_cloud, root / "gt" / "cloud.ply");
  if (gt_depth_maps != nullptr) {
    if (gt_depth_maps->size() != set.views.size()) {
      throw InvalidArgumentError("one ground-truth depth map per view expected");
    }
    for (std::size_t i = 0; i < set.views.size(); ++i) {
      WriteDepthMap((*gt_depth_maps)[i],
                    root / "gt" / "depth" / (set.views[i].name + ".dmap"));
    }
  }
}

std::string ReadTextFile(const fs::path& path) { return ReadBytes(path); }

void WriteTextFile(const fs::path& path, const std::string& text) {
  WriteBytes(path, text);
}

}  // namespace srmvs
