#include "caphj/catalog.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace caphj {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

std::vector<std::string> split_selector(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ':')) parts.push_back(part);
  return parts;
}

double parse_num(const std::string& s, const std::string& selector) {
  try {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("catalog: bad numeric argument in selector '" + selector + "'");
  }
}

double hat(double x) { return std::min(x, 1.0 - x); }

// distance from x to the arc [z0, z1] on the unit circle
double arc_dist(double x, double z0, double z1) {
  if (x >= z0 && x <= z1) return 0.0;
  double d0 = std::abs(x - z0);
  double d1 = std::abs(x - z1);
  d0 = std::min(d0, 1.0 - d0);
  d1 = std::min(d1, 1.0 - d1);
  return std::min(d0, d1);
}

}  // namespace

GridFn catalog_fn(const std::string& selector, const TorusGrid& grid) {
  auto parts = split_selector(selector);
  const std::string& name = parts[0];
  const bool two_d = grid.dim() == 2;

  if (name == "zero") {
    return sample_grid(grid, [](double, double) { return 0.0; });
  }
  if (name == "one") {
    return sample_grid(grid, [](double, double) { return 1.0; });
  }
  if (name == "const") {
    if (parts.size() != 2) throw std::invalid_argument("catalog: const needs one argument");
    double v = parse_num(parts[1], selector);
    return sample_grid(grid, [v](double, double) { return v; });
  }
  if (name == "sinsq") {
    return sample_grid(grid, [two_d](double x, double y) {
      double sx = std::sin(kPi * x);
      double r = sx * sx;
      if (two_d) {
        double sy = std::sin(kPi * y);
        r += sy * sy;
      }
      return r;
    });
  }
  if (name == "plateau") {
    if (parts.size() != 3) throw std::invalid_argument("catalog: plateau needs z0 and z1");
    double z0 = parse_num(parts[1], selector);
    double z1 = parse_num(parts[2], selector);
    if (!(z0 >= 0.0 && z1 <= 1.0 && z0 < z1)) {
      throw std::invalid_argument("catalog: plateau needs 0 <= z0 < z1 <= 1");
    }
    return sample_grid(grid, [z0, z1](double x, double) {
      return std::min(1.0, 4.0 * arc_dist(x, z0, z1));
    });
  }
  if (name == "hat") {
    return sample_grid(grid, [two_d](double x, double y) {
      return two_d ? hat(x) + hat(y) : hat(x);
    });
  }
  if (name == "cos") {
    return sample_grid(grid, [](double x, double) {
      return (1.0 - std::cos(2.0 * kPi * x)) / 4.0;
    });
  }
  if (name == "cosa") {
    return sample_grid(grid, [](double x, double) {
      return 1.0 + 0.5 * std::cos(2.0 * kPi * x);
    });
  }
  throw std::invalid_argument("catalog: unknown function selector '" + selector + "'");
}

}  // namespace caphj
