// SPDX-License-Identifier: Apache-2.0
#include "filtra/group.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace filtra {

GroupSpec::GroupSpec(int reflection_order, int rotation_order)
    : reflection_order_(reflection_order), rotation_order_(rotation_order) {
  if (reflection_order != 1 && reflection_order != 2) {
    throw std::invalid_argument("reflection order must be 1 or 2, got " +
                                std::to_string(reflection_order));
  }
  if (rotation_order < 1) {
    throw std::invalid_argument("rotation order must be >= 1, got " +
                                std::to_string(rotation_order));
  }
}

GroupSpec GroupSpec::parse(std::string_view text) {
  if (text.size() < 2) {
    throw std::invalid_argument("group must look like c<N> or d<N>: '" + std::string(text) + "'");
  }
  const char family = static_cast<char>(std::tolower(static_cast<unsigned char>(text.front())));
  if (family != 'c' && family != 'd') {
    throw std::invalid_argument("group must look like c<N> or d<N>: '" + std::string(text) + "'");
  }
  int n = 0;
  const auto digits = text.substr(1);
  const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
  if (ec != std::errc() || end != digits.data() + digits.size() || n < 1) {
    throw std::invalid_argument("invalid rotation order in group '" + std::string(text) + "'");
  }
  return family == 'c' ? cyclic(n) : dihedral(n);
}

std::string GroupSpec::name() const {
  return (is_dihedral() ? "d" : "c") + std::to_string(rotation_order_);
}

GroupElement::GroupElement(GroupSpec spec, int i0, int i1) : spec_(spec), i0_(i0), i1_(i1) {
  if (i0 < 0 || i0 >= spec.reflection_order() || i1 < 0 || i1 >= spec.rotation_order()) {
    throw std::invalid_argument("element (" + std::to_string(i0) + "," + std::to_string(i1) +
                                ") is not in " + spec.name());
  }
}

double GroupElement::angle() const {
  return 2.0 * std::numbers::pi * i1_ / spec_.rotation_order();
}

CosSin turn_cos_sin(long long m, int n) {
  const int r = wrap(m, n);
  if ((4LL * r) % n == 0) {
    switch ((4LL * r) / n) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }
  const double a = 2.0 * std::numbers::pi * r / n;
  return {std::cos(a), std::sin(a)};
}

GroupElement compose(const GroupElement& g, const GroupElement& h) {
  if (g.spec() != h.spec()) {
    throw std::invalid_argument("cannot compose elements of " + g.spec().name() + " and " +
                                h.spec().name());
  }
  const int n = g.spec().rotation_order();
  const int sign = g.i0() == 0 ? 1 : -1;
  return GroupElement(g.spec(), (g.i0() + h.i0()) % 2, wrap(g.i1() + sign * h.i1(), n));
}

GroupElement inverse(const GroupElement& g) {
  if (g.i0() == 1) return g;
  return GroupElement(g.spec(), 0, wrap(-g.i1(), g.spec().rotation_order()));
}

double angle_action(const GroupElement& g, double phi) {
  return (g.i0() == 0 ? phi : -phi) + g.angle();
}

std::vector<GroupElement> enumerate(const GroupSpec& spec) {
  std::vector<GroupElement> out;
  out.reserve(static_cast<std::size_t>(spec.order()));
  for (int i0 = 0; i0 < spec.reflection_order(); ++i0) {
    for (int i1 = 0; i1 < spec.rotation_order(); ++i1) out.emplace_back(spec, i0, i1);
  }
  return out;
}

}  // namespace filtra
