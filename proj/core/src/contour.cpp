#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>

#include "barrier/errors.hpp"
#include "barrier/figures.hpp"

namespace barrier {

namespace {

constexpr double kOutside = 1.0;
constexpr double kClamp = 30.0;

struct Segment {
  std::int64_t edge[2];
  cplx point[2];
};

}  // namespace

std::vector<Polyline> emit_region_contour(int n, Branch branch, int grid) {
  if (grid < 256) throw ValidationError("emit_region_contour: grid must be at least 256");
  if (n < 2) throw ValidationError("emit_region_contour: n must be at least 2");
  const double s = branch == Branch::minus ? -1.0 : 1.0;
  const int nx = grid + 1;
  const int ny = grid / 2 + 1;
  const double step = 2.0 / grid;

  auto coord = [&](int i, int j) { return cplx{-1.0 + i * step, j * step}; };
  std::vector<double> field(static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const cplx z = coord(i, j);
      double v = kOutside;
      if (j > 0 && i > 0 && i < nx - 1 && j < ny - 1 && std::abs(z) < 1.0) {
        const double num = std::abs(ipow(z, n + 1) + s);
        const double den = std::abs(ipow(z, n) + s * z);
        v = std::clamp(std::log(num) - std::log(den), -kClamp, kClamp);
        if (!std::isfinite(v)) v = num == 0.0 ? -kClamp : kClamp;
        if (v == 0.0) v = 1e-300;
      }
      field[static_cast<std::size_t>(j) * nx + i] = v;
    }
  }
  auto at = [&](int i, int j) { return field[static_cast<std::size_t>(j) * nx + i]; };

  // Edge ids: horizontal edge from node (i,j) to (i+1,j) -> 2*node, vertical to (i,j+1) -> 2*node+1.
  auto h_edge = [&](int i, int j) { return 2 * (static_cast<std::int64_t>(j) * nx + i); };
  auto v_edge = [&](int i, int j) { return 2 * (static_cast<std::int64_t>(j) * nx + i) + 1; };
  auto cross = [&](int i0, int j0, int i1, int j1) {
    const double a = at(i0, j0);
    const double b = at(i1, j1);
    const double t = a / (a - b);
    return coord(i0, j0) + t * (coord(i1, j1) - coord(i0, j0));
  };

  std::vector<Segment> segments;
  for (int j = 0; j + 1 < ny; ++j) {
    for (int i = 0; i + 1 < nx; ++i) {
      const double v00 = at(i, j), v10 = at(i + 1, j), v11 = at(i + 1, j + 1), v01 = at(i, j + 1);
      const bool b0 = v00 < 0, b1 = v10 < 0, b2 = v11 < 0, b3 = v01 < 0;
      struct EdgeHit {
        std::int64_t id;
        cplx p;
      };
      const EdgeHit bottom{h_edge(i, j), b0 != b1 ? cross(i, j, i + 1, j) : cplx{}};
      const EdgeHit right{v_edge(i + 1, j), b1 != b2 ? cross(i + 1, j, i + 1, j + 1) : cplx{}};
      const EdgeHit top{h_edge(i, j + 1), b2 != b3 ? cross(i, j + 1, i + 1, j + 1) : cplx{}};
      const EdgeHit left{v_edge(i, j), b3 != b0 ? cross(i, j, i, j + 1) : cplx{}};
      auto add = [&](const EdgeHit& a, const EdgeHit& b) { segments.push_back({{a.id, b.id}, {a.p, b.p}}); };

      const int crossings = (b0 != b1) + (b1 != b2) + (b2 != b3) + (b3 != b0);
      if (crossings == 0) continue;
      if (crossings == 4) {
        const bool centre = 0.25 * (v00 + v10 + v11 + v01) < 0;
        if (centre == b0) {
          add(bottom, right);
          add(top, left);
        } else {
          add(left, bottom);
          add(right, top);
        }
        continue;
      }
      std::vector<EdgeHit> hits;
      if (b0 != b1) hits.push_back(bottom);
      if (b1 != b2) hits.push_back(right);
      if (b2 != b3) hits.push_back(top);
      if (b3 != b0) hits.push_back(left);
      add(hits[0], hits[1]);
    }
  }

  std::unordered_map<std::int64_t, std::vector<std::size_t>> by_edge;
  for (std::size_t k = 0; k < segments.size(); ++k) {
    by_edge[segments[k].edge[0]].push_back(k);
    by_edge[segments[k].edge[1]].push_back(k);
  }
  std::vector<char> used(segments.size(), 0);
  std::vector<Polyline> out;
  for (std::size_t start = 0; start < segments.size(); ++start) {
    if (used[start]) continue;
    used[start] = 1;
    Polyline line;
    line.points.push_back(segments[start].point[0]);
    line.points.push_back(segments[start].point[1]);
    const std::int64_t origin = segments[start].edge[0];
    std::int64_t tail = segments[start].edge[1];
    while (tail != origin) {
      std::size_t next = segments.size();
      for (std::size_t k : by_edge[tail]) {
        if (!used[k]) {
          next = k;
          break;
        }
      }
      if (next == segments.size()) break;
      used[next] = 1;
      const int side = segments[next].edge[0] == tail ? 0 : 1;
      tail = segments[next].edge[1 - side];
      line.points.push_back(segments[next].point[1 - side]);
    }
    line.closed = tail == origin;
    if (line.closed) line.points.pop_back();
    out.push_back(std::move(line));
  }
  return out;
}

bool region_contains(const std::vector<Polyline>& region, cplx z) {
  bool inside = false;
  const double x = z.real();
  const double y = z.imag();
  for (const auto& line : region) {
    if (!line.closed || line.points.size() < 3) continue;
    const auto& pts = line.points;
    for (std::size_t a = 0, b = pts.size() - 1; a < pts.size(); b = a++) {
      const double ya = pts[a].imag(), yb = pts[b].imag();
      if ((ya > y) != (yb > y)) {
        const double xc = pts[a].real() + (y - ya) * (pts[b].real() - pts[a].real()) / (yb - ya);
        if (x < xc) inside = !inside;
      }
    }
  }
  return inside;
}

double region_area(const std::vector<Polyline>& region) {
  double total = 0.0;
  for (const auto& line : region) {
    if (!line.closed || line.points.size() < 3) continue;
    double twice = 0.0;
    const auto& pts = line.points;
    for (std::size_t a = 0, b = pts.size() - 1; a < pts.size(); b = a++) {
      twice += pts[b].real() * pts[a].imag() - pts[a].real() * pts[b].imag();
    }
    total += 0.5 * std::abs(twice);
  }
  return total;
}

}  // namespace barrier
