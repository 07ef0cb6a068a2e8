#pragma once

#include <array>
#include <functional>
#include <map>
#include <stdexcept>

namespace spls {

// Scalar diffusion coefficient a(x) > 0, evaluated per subdomain tag so that
// piecewise-constant coefficients never depend on which side of an interface
// a quadrature point falls. constant_per_tag selects exact low-order
// quadrature in the bilinear forms.
struct Coefficient {
  std::function<double(int tag, const std::array<double, 3>& x)> value;
  bool constant_per_tag = true;
  double a_min = 1.0;
  double a_max = 1.0;

  double operator()(int tag, const std::array<double, 3>& x) const {
    return value(tag, x);
  }
};

inline Coefficient make_constant_coefficient(const std::map<int, double>& per_tag) {
  if (per_tag.empty())
    throw std::invalid_argument("make_constant_coefficient: empty tag map");
  Coefficient a;
  a.constant_per_tag = true;
  a.a_min = per_tag.begin()->second;
  a.a_max = a.a_min;
  for (const auto& [tag, v] : per_tag) {
    if (v <= 0)
      throw std::invalid_argument("make_constant_coefficient: values must be positive");
    a.a_min = std::min(a.a_min, v);
    a.a_max = std::max(a.a_max, v);
  }
  a.value = [per_tag](int tag, const std::array<double, 3>&) {
    auto it = per_tag.find(tag);
    if (it == per_tag.end())
      throw std::invalid_argument("coefficient: unknown subdomain tag");
    return it->second;
  };
  return a;
}

inline Coefficient make_unit_coefficient() {
  Coefficient a;
  a.constant_per_tag = true;
  a.a_min = a.a_max = 1.0;
  a.value = [](int, const std::array<double, 3>&) { return 1.0; };
  return a;
}

}  // namespace spls
