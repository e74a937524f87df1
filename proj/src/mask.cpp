#include "textshield/mask.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iterator>
#include <sstream>

namespace textshield {

BBox min_bbox(const MaskGrid& mask) {
  int min_row = mask.height, max_row = -1, min_col = mask.width, max_col = -1;
  for (int r = 0; r < mask.height; ++r) {
    for (int c = 0; c < mask.width; ++c) {
      if (!mask.at(r, c)) continue;
      min_row = std::min(min_row, r);
      max_row = std::max(max_row, r);
      min_col = std::min(min_col, c);
      max_col = std::max(max_col, c);
    }
  }
  if (max_row < 0) throw EmptyMask();
  return BBox{static_cast<double>(min_col), static_cast<double>(min_row), static_cast<double>(max_col + 1),
              static_cast<double>(max_row + 1)};
}

MaskGrid resample_nearest(const MaskGrid& mask, int width, int height) {
  if (mask.cells.empty()) throw Error("cannot resample an empty mask");
  MaskGrid out(width, height);
  for (int r = 0; r < height; ++r) {
    // Integer arithmetic keeps floor(r * src / dst) exact.
    const int src_r = static_cast<int>(static_cast<long long>(r) * mask.height / height);
    for (int c = 0; c < width; ++c) {
      const int src_c = static_cast<int>(static_cast<long long>(c) * mask.width / width);
      out.set(r, c, mask.at(src_r, src_c));
    }
  }
  return out;
}

std::string encode_mask_string(const MaskGrid& mask) {
  const MaskGrid grid = (mask.width == kMaskSide && mask.height == kMaskSide)
                            ? mask
                            : resample_nearest(mask, kMaskSide, kMaskSide);
  std::string out(kMaskStringLength, '0');
  for (std::size_t i = 0; i < kMaskStringLength; ++i) out[i] = grid.cells[i] ? '1' : '0';
  return out;
}

MaskGrid decode_mask_string(std::string_view s) {
  if (s.size() != kMaskStringLength) {
    throw BadMaskString("mask string must have 1024 characters, got " + std::to_string(s.size()));
  }
  MaskGrid grid(kMaskSide, kMaskSide);
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '0' && s[i] != '1') {
      throw BadMaskString("mask string may only contain '0' and '1' (position " + std::to_string(i) + ")");
    }
    grid.cells[i] = s[i] == '1';
  }
  return grid;
}

namespace {

class PgmReader {
 public:
  explicit PgmReader(std::string_view bytes) : bytes_(bytes) {}

  // Header tokens are separated by whitespace; '#' starts a comment.
  std::string token() {
    skip_space();
    std::string out;
    while (pos_ < bytes_.size() && !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) out += bytes_[pos_++];
    if (out.empty()) throw SchemaViolation("truncated PGM header");
    return out;
  }

  long number() {
    const auto t = token();
    try {
      std::size_t used = 0;
      const long v = std::stol(t, &used);
      if (used != t.size() || v < 0) throw Error("");
      return v;
    } catch (...) {
      throw SchemaViolation("bad number '" + t + "' in PGM data");
    }
  }

  // After maxval exactly one whitespace byte precedes binary data.
  void skip_single_space() {
    if (pos_ >= bytes_.size() || !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
      throw SchemaViolation("malformed PGM header");
    }
    ++pos_;
  }

  std::string_view rest() const { return bytes_.substr(pos_); }

 private:
  void skip_space() {
    while (pos_ < bytes_.size()) {
      const char ch = bytes_[pos_];
      if (ch == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(ch))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

MaskGrid parse_pgm(std::string_view bytes) {
  PgmReader in(bytes);
  const auto magic = in.token();
  if (magic != "P5" && magic != "P2") throw SchemaViolation("not a PGM file (magic '" + magic + "')");
  const long w = in.number();
  const long h = in.number();
  const long maxval = in.number();
  if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 65535) throw SchemaViolation("bad PGM dimensions or maxval");
  MaskGrid grid(static_cast<int>(w), static_cast<int>(h));
  const std::size_t count = grid.cells.size();
  if (magic == "P2") {
    for (std::size_t i = 0; i < count; ++i) grid.cells[i] = in.number() != 0;
    return grid;
  }
  in.skip_single_space();
  const std::size_t bpp = maxval > 255 ? 2 : 1;
  const auto data = in.rest();
  if (data.size() < count * bpp) throw SchemaViolation("truncated PGM pixel data");
  for (std::size_t i = 0; i < count; ++i) {
    bool nonzero = data[i * bpp] != 0;
    if (bpp == 2) nonzero = nonzero || data[i * bpp + 1] != 0;
    grid.cells[i] = nonzero;
  }
  return grid;
}

MaskGrid read_pgm(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open mask file " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  try {
    return parse_pgm(bytes);
  } catch (const SchemaViolation& e) {
    throw SchemaViolation(path.string() + ": " + e.what());
  }
}

std::string render_pgm(const MaskGrid& mask) {
  std::ostringstream out;
  out << "P5\n" << mask.width << " " << mask.height << "\n255\n";
  std::string pixels(mask.cells.size(), '\0');
  for (std::size_t i = 0; i < pixels.size(); ++i) pixels[i] = mask.cells[i] ? static_cast<char>(255) : '\0';
  out << pixels;
  return out.str();
}

}  // namespace textshield
