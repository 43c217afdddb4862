#include "roadgen/mask_metrics.hpp"

#include <sstream>

#include "roadgen/error.hpp"

namespace roadgen {

namespace {

struct Counts {
  std::size_t a = 0;
  std::size_t b = 0;
  std::size_t both = 0;
};

Counts count(const BinaryMask& a, const BinaryMask& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    std::ostringstream os;
    os << a.width() << "x" << a.height() << " vs " << b.width() << "x" << b.height();
    throw Error(ErrorKind::DimensionMismatch, os.str());
  }
  Counts c;
  const auto ab = a.bits();
  const auto bb = b.bits();
  for (std::size_t i = 0; i < ab.size(); ++i) {
    c.a += ab[i];
    c.b += bb[i];
    c.both += ab[i] & bb[i];
  }
  return c;
}

}  // namespace

double iou(const BinaryMask& a, const BinaryMask& b) {
  const Counts c = count(a, b);
  const std::size_t uni = c.a + c.b - c.both;
  if (uni == 0) return 1.0;
  return static_cast<double>(c.both) / static_cast<double>(uni);
}

double dice_loss(const BinaryMask& a, const BinaryMask& b) {
  const Counts c = count(a, b);
  if (c.a + c.b == 0) return 0.0;
  return 1.0 - 2.0 * static_cast<double>(c.both) / static_cast<double>(c.a + c.b);
}

}  // namespace roadgen
