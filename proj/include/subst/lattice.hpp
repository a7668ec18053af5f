#pragma once

// Lattice geometry for Z^2: coordinates, inclusive rectangles, and the
// canonical cell order used everywhere (top row first, left to right).

#include <cstdint>
#include <cstdlib>
#include <vector>

namespace subst {

struct Vec2 {
  int x = 0;
  int y = 0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
  friend constexpr bool operator==(Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }
  friend constexpr bool operator!=(Vec2 a, Vec2 b) { return !(a == b); }
};

// Canonical order: y descending, then x ascending. Iterating a patch in this
// order reads it like its block literal (top row first).
struct CanonicalLess {
  constexpr bool operator()(Vec2 a, Vec2 b) const {
    if (a.y != b.y) return a.y > b.y;
    return a.x < b.x;
  }
};

constexpr int floor_div(int a, int b) {
  int q = a / b;
  int r = a % b;
  return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}

constexpr int floor_mod(int a, int b) {
  int r = a % b;
  return (r != 0 && ((r < 0) != (b < 0))) ? r + b : r;
}

// Inclusive axis-aligned rectangle of lattice cells.
struct Rect {
  int x0 = 0;
  int y0 = 0;
  int x1 = -1;
  int y1 = -1;  // empty when x1 < x0 or y1 < y0

  static constexpr Rect ball(int r) { return {-r, -r, r, r}; }  // linf ball B(r)

  constexpr bool empty() const { return x1 < x0 || y1 < y0; }
  constexpr int width() const { return empty() ? 0 : x1 - x0 + 1; }
  constexpr int height() const { return empty() ? 0 : y1 - y0 + 1; }
  constexpr long long area() const { return (long long)width() * height(); }
  constexpr bool contains(Vec2 v) const {
    return v.x >= x0 && v.x <= x1 && v.y >= y0 && v.y <= y1;
  }
  constexpr bool contains(const Rect& o) const {
    return o.empty() || (o.x0 >= x0 && o.x1 <= x1 && o.y0 >= y0 && o.y1 <= y1);
  }
  friend constexpr bool operator==(const Rect& a, const Rect& b) {
    return a.x0 == b.x0 && a.y0 == b.y0 && a.x1 == b.x1 && a.y1 == b.y1;
  }

  // Cells in canonical order.
  std::vector<Vec2> cells() const {
    std::vector<Vec2> out;
    if (empty()) return out;
    out.reserve((size_t)area());
    for (int y = y1; y >= y0; --y)
      for (int x = x0; x <= x1; ++x) out.push_back({x, y});
    return out;
  }
};

}  // namespace subst
