#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "textshield/types.hpp"

namespace textshield {

inline constexpr int kMaskSide = 32;
inline constexpr std::size_t kMaskStringLength = kMaskSide * kMaskSide;

class EmptyMask : public Error {
 public:
  EmptyMask() : Error("mask has no tampered cells") {}
};

class BadMaskString : public Error {
 public:
  using Error::Error;
};

/// Tightest box around all tampered cells. x indexes columns, y rows; x2/y2
/// are exclusive. Throws EmptyMask when nothing is tampered.
BBox min_bbox(const MaskGrid& mask);

/// Nearest-neighbour resample to 32x32, source index floor(target * src / 32).
MaskGrid resample_nearest(const MaskGrid& mask, int width, int height);

/// 1024-character row-major '0'/'1' string of the 32x32 resampled mask.
std::string encode_mask_string(const MaskGrid& mask);

/// Inverse of encode_mask_string for 32x32 grids. Throws BadMaskString.
MaskGrid decode_mask_string(std::string_view s);

/// Reads a binary (P5) or ASCII (P2) graymap; any nonzero pixel is tampered.
MaskGrid read_pgm(const std::filesystem::path& path);
MaskGrid parse_pgm(std::string_view bytes);

/// Binary P5 graymap, tampered cells written as 255.
std::string render_pgm(const MaskGrid& mask);

}  // namespace textshield
