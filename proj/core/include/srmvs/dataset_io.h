#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "srmvs/camera.h"
#include "srmvs/depth_map.h"
#include "srmvs/image.h"
#include "srmvs/point_cloud.h"
#include "srmvs/sisr.h"

namespace srmvs {

// Binary PGM (1 channel) or PPM (3 channels), 8 bit, round(v * 255).
void WriteImage(const Image& image, const std::filesystem::path& path);
// Reads binary or ascii PGM/PPM with maxval < 256.
Image ReadImage(const std::filesystem::path& path);

// Binary little-endian PLY: x y z float, optional red green blue uchar and
// nx ny nz float.
void WritePly(const PointCloud& cloud, const std::filesystem::path& path);
// Accepts ascii and binary_little_endian vertex data; other elements and
// unknown vertex properties are skipped.
PointCloud ReadPly(const std::filesystem::path& path);

// "SRMVSDM1", u32 width, u32 height, u32 flags (bit 0 normals, bit 1 costs),
// then float32 depths (NaN invalid), then the optional blocks.
void WriteDepthMap(const DepthMap& map, const std::filesystem::path& path);
DepthMap ReadDepthMap(const std::filesystem::path& path);

// `NAME WIDTH HEIGHT fx fy cx cy k1 k2 r11 .. r33 tx ty tz` per line.
std::string FormatCameras(const std::vector<View>& views);
struct CameraRecord {
  std::string name;
  PinholeCamera camera;
  Pose pose;
};
// `source` names the file in error messages.
std::vector<CameraRecord> ParseCameras(const std::string& text,
                                       const std::string& source);

struct Dataset {
  SequenceSet set;
  std::optional<PointCloud> gt_cloud;
  // Present when gt/depth/ holds a map for every view.
  std::vector<DepthMap> gt_depth_maps;
  std::vector<std::string> warnings;
};

// Layout: cameras.txt, images/<name>.pgm|ppm, optional gt/cloud.ply,
// optional gt/depth/<name>.dmap. The set label is read from label.txt when
// present (default HR).
Dataset LoadDataset(const std::filesystem::path& root);

void SaveDataset(const SequenceSet& set, const std::filesystem::path& root,
                 const PointCloud* gt_cloud = nullptr,
                 const std::vector<DepthMap>* gt_depth_maps = nullptr);

std::string ReadTextFile(const std::filesystem::path& path);
void WriteTextFile(const std::filesystem::path& path, const std::string& text);

}  // namespace srmvs
