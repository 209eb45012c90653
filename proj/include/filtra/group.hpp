// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace filtra {

/// Reflection group D_1, cyclic group C_N or dihedral group D_N.
///
/// Every element of the three families is written as a pair (i0, i1) where
/// i0 indexes the reflection component and i1 the rotation component.  C_N
/// has reflection_order 1, D_N (and D_1) has reflection_order 2.
class GroupSpec {
 public:
  GroupSpec(int reflection_order, int rotation_order);

  static GroupSpec cyclic(int n) { return GroupSpec(1, n); }
  static GroupSpec dihedral(int n) { return GroupSpec(2, n); }

  /// Parses `c<N>` / `d<N>` (case-insensitive). Throws std::invalid_argument.
  static GroupSpec parse(std::string_view text);

  int reflection_order() const { return reflection_order_; }
  int rotation_order() const { return rotation_order_; }
  int order() const { return reflection_order_ * rotation_order_; }
  bool is_dihedral() const { return reflection_order_ == 2; }

  std::string name() const;

  friend bool operator==(const GroupSpec&, const GroupSpec&) = default;

 private:
  int reflection_order_;
  int rotation_order_;
};

class GroupElement {
 public:
  GroupElement(GroupSpec spec, int i0, int i1);

  static GroupElement identity(GroupSpec spec) { return GroupElement(spec, 0, 0); }

  int i0() const { return i0_; }
  int i1() const { return i1_; }
  const GroupSpec& spec() const { return spec_; }

  /// θ_{i1} = 2π·i1/N.
  double angle() const;
  bool is_identity() const { return i0_ == 0 && i1_ == 0; }

  /// Position of this element in enumerate(spec()); also the regular
  /// representation axis it labels.
  int index() const { return i0_ * spec_.rotation_order() + i1_; }

  friend bool operator==(const GroupElement&, const GroupElement&) = default;

 private:
  GroupSpec spec_;
  int i0_;
  int i1_;
};

/// g∘h = (g0 ⊕ h0, g1 + (−1)^{g0}·h1 mod N).  Throws std::invalid_argument
/// when the two elements belong to different groups.
GroupElement compose(const GroupElement& g, const GroupElement& h);

GroupElement inverse(const GroupElement& g);

/// φ ↦ (−1)^{i0}·φ + θ_{i1}.  Not reduced modulo 2π.
double angle_action(const GroupElement& g, double phi);

/// All elements, i0-major then i1 ascending.
std::vector<GroupElement> enumerate(const GroupSpec& spec);

/// (cos, sin) of the angle 2π·m/n.  Quarter turns are returned exactly.
struct CosSin {
  double cos;
  double sin;
};
CosSin turn_cos_sin(long long m, int n);

/// Non-negative remainder.
inline int wrap(long long value, int modulus) {
  const long long r = value % modulus;
  return static_cast<int>(r < 0 ? r + modulus : r);
}

}  // namespace filtra
