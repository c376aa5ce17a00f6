#pragma once

// Independent reference model used only by tests. It shares no code with the
// library: plain vectors of coordinates, explicit double loops and its own
// enumeration odometer. It assumes sectors partition the circle
// (num_sectors * view_angle == 360), which is the configuration under test.

#include <cmath>
#include <cstdint>
#include <vector>

namespace naive {

struct Xy {
  double x;
  double y;
};

struct World {
  std::vector<Xy> sensors;
  std::vector<Xy> targets;
  double view_angle = 120.0;
  double range = 3.0;
  int sectors = 3;
  double origin = 0.0;
  long k1 = 1;
  long k2 = 10;
  bool off_allowed = false;
};

// State encoding: 0..sectors-1 are sectors, -1 is off.
inline bool sees(const World& w, int sensor, int state, int target) {
  if (state < 0) return false;
  const double dx = w.targets[target].x - w.sensors[sensor].x;
  const double dy = w.targets[target].y - w.sensors[sensor].y;
  const double d = std::sqrt(dx * dx + dy * dy);
  if (d > w.range) return false;
  if (d == 0.0) return true;
  double deg = std::atan2(dy, dx) * 57.29577951308232;
  deg -= w.origin;
  while (deg < 0.0) deg += 360.0;
  while (deg >= 360.0) deg -= 360.0;
  int sector = static_cast<int>(std::floor(deg / w.view_angle));
  if (sector >= w.sectors) sector = w.sectors - 1;
  return sector == state;
}

inline long gu(const World& w, const std::vector<int>& states) {
  long total = 0;
  for (std::size_t t = 0; t < w.targets.size(); ++t) {
    int f = 0;
    for (std::size_t s = 0; s < w.sensors.size(); ++s) {
      if (sees(w, static_cast<int>(s), states[s], static_cast<int>(t))) f += 1;
    }
    if (f == 1) total += w.k2;
    if (f >= 2) total += w.k2 + f - 2;
  }
  for (int st : states) {
    if (st >= 0) total -= w.k1;
  }
  return total;
}

struct Optimum {
  long best = 0;
  std::uint64_t visited = 0;
};

/// Brute force over every state vector.
inline Optimum brute_force(const World& w) {
  std::vector<int> domain;
  for (int s = 0; s < w.sectors; ++s) domain.push_back(s);
  if (w.off_allowed) domain.push_back(-1);
  const std::size_t n = w.sensors.size();
  std::vector<std::size_t> odo(n, 0);
  std::vector<int> states(n);
  Optimum out;
  bool first = true;
  while (true) {
    for (std::size_t i = 0; i < n; ++i) states[i] = domain[odo[i]];
    const long g = gu(w, states);
    ++out.visited;
    if (first || g > out.best) out.best = g;
    first = false;
    std::size_t i = 0;
    while (i < n && ++odo[i] == domain.size()) odo[i++] = 0;
    if (i == n) break;
  }
  return out;
}

}  // namespace naive
