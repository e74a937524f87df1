#include "textshield/types.hpp"

#include <cmath>
#include <sstream>

namespace textshield {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Real: return "real";
    case Verdict::Generated: return "generated";
    case Verdict::Tampered: return "tampered";
  }
  return "real";
}

std::string_view to_string(ForgeryMethod m) {
  switch (m) {
    case ForgeryMethod::CopyPaste: return "copy-paste";
    case ForgeryMethod::Generation: return "generation";
  }
  return "copy-paste";
}

std::string_view to_string(Subset s) {
  switch (s) {
    case Subset::Test: return "test";
    case Subset::Cis: return "cis";
    case Subset::Ctm: return "ctm";
    case Subset::Cl: return "cl";
  }
  return "test";
}

std::optional<Verdict> parse_verdict(std::string_view s) {
  if (s == "real") return Verdict::Real;
  if (s == "generated") return Verdict::Generated;
  if (s == "tampered") return Verdict::Tampered;
  return std::nullopt;
}

std::optional<ForgeryMethod> parse_method(std::string_view s) {
  if (s == "copy-paste") return ForgeryMethod::CopyPaste;
  if (s == "generation") return ForgeryMethod::Generation;
  return std::nullopt;
}

std::optional<Subset> parse_subset(std::string_view s) {
  if (s == "test") return Subset::Test;
  if (s == "cis") return Subset::Cis;
  if (s == "ctm") return Subset::Ctm;
  if (s == "cl") return Subset::Cl;
  return std::nullopt;
}

BBox BBox::make(double x1, double y1, double x2, double y2) {
  const bool finite = std::isfinite(x1) && std::isfinite(y1) && std::isfinite(x2) && std::isfinite(y2);
  if (!finite || x1 < 0 || y1 < 0 || x2 < 0 || y2 < 0 || !(x1 < x2) || !(y1 < y2)) {
    std::ostringstream msg;
    msg << "degenerate bbox [" << x1 << "," << y1 << "," << x2 << "," << y2 << "]";
    throw SchemaViolation(msg.str());
  }
  return BBox{x1, y1, x2, y2};
}

MaskGrid::MaskGrid(int w, int h, std::uint8_t fill) : width(w), height(h) {
  if (w <= 0 || h <= 0) throw Error("mask dimensions must be positive");
  cells.assign(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill);
}

}  // namespace textshield
