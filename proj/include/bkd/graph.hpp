#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bkd {

struct input_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Rotation system of a trivalent plane graph.
struct PlaneTrivalentGraph {
  std::vector<std::array<int, 3>> rotation;  // ccw half-edges per vertex
  std::vector<int> mate;
  std::vector<int> edge_of;
  std::vector<std::array<int, 2>> edge_halves;
  std::vector<int> vertex_of;
  std::vector<int> slot_of;

  int vertex_count() const { return int(rotation.size()); }
  int edge_count() const { return int(edge_halves.size()); }
  int half_count() const { return int(mate.size()); }

  // rotation is given in terms of half-edge ids; halves[e] lists the pair of edge e
  static PlaneTrivalentGraph from_rotation(std::vector<std::array<int, 3>> rot,
                                           std::vector<std::array<int, 2>> halves) {
    PlaneTrivalentGraph g;
    g.rotation = std::move(rot);
    g.edge_halves = std::move(halves);
    int n = int(g.edge_halves.size()) * 2;
    g.mate.assign(n, -1);
    g.edge_of.assign(n, -1);
    g.vertex_of.assign(n, -1);
    g.slot_of.assign(n, -1);
    for (int e = 0; e < g.edge_count(); ++e) {
      auto [a, b] = g.edge_halves[e];
      if (a < 0 || b < 0 || a >= n || b >= n || a == b)
        throw input_error("edge " + std::to_string(e) + " has bad half-edge ids");
      if (g.edge_of[a] >= 0 || g.edge_of[b] >= 0)
        throw input_error("half-edge used by two edges");
      g.mate[a] = b;
      g.mate[b] = a;
      g.edge_of[a] = g.edge_of[b] = e;
    }
    for (int v = 0; v < g.vertex_count(); ++v)
      for (int i = 0; i < 3; ++i) {
        int h = g.rotation[v][i];
        if (h < 0 || h >= n || g.vertex_of[h] >= 0)
          throw input_error("vertex " + std::to_string(v) + " has bad rotation");
        g.vertex_of[h] = v;
        g.slot_of[h] = i;
      }
    for (int h = 0; h < n; ++h)
      if (g.vertex_of[h] < 0 || g.mate[h] < 0)
        throw input_error("half-edge " + std::to_string(h) + " is dangling");
    return g;
  }

  // Build from vertex adjacency listed ccw; parallel edges are matched in order.
  static PlaneTrivalentGraph from_neighbours(const std::vector<std::array<int, 3>>& nb) {
    int nv = int(nb.size());
    std::vector<std::array<int, 3>> rot(nv);
    std::vector<std::array<int, 2>> halves;
    std::vector<std::array<bool, 3>> used(nv, {false, false, false});
    int next = 0;
    for (int v = 0; v < nv; ++v)
      for (int i = 0; i < 3; ++i) {
        if (used[v][i]) continue;
        int w = nb[v][i];
        int j = -1;
        for (int k = 0; k < 3; ++k)
          if (nb[w][k] == v && !used[w][k] && !(w == v && k == i)) { j = k; break; }
        if (j < 0) throw input_error("neighbour lists are not symmetric");
        used[v][i] = used[w][j] = true;
        rot[v][i] = next;
        rot[w][j] = next + 1;
        halves.push_back({next, next + 1});
        next += 2;
      }
    return from_rotation(std::move(rot), std::move(halves));
  }
};

struct StateVector {
  std::vector<std::uint8_t> bits;

  StateVector() = default;
  explicit StateVector(std::size_t n) : bits(n, 0) {}
  static StateVector from_index(std::size_t n, std::uint64_t x) {
    StateVector s(n);
    for (std::size_t i = 0; i < n; ++i) s.bits[i] = (x >> i) & 1u;
    return s;
  }
  std::size_t size() const { return bits.size(); }
  int weight() const { return int(std::count(bits.begin(), bits.end(), 1)); }
};

// Segment 2e+k is the strand of edge e that passes the left side of the
// edge's first half-edge when k = 0, the right side when k = 1.
struct CircleSet {
  std::vector<std::vector<int>> circles;
  std::vector<std::pair<int, int>> adjacency;  // one per edge, indexed by edge
  std::vector<int> circle_of_segment;

  std::size_t size() const { return circles.size(); }
  bool has_bridge() const {
    for (auto [a, b] : adjacency)
      if (a == b) return true;
    return false;
  }
};

namespace detail {

inline int side_point(int h, int side) { return 2 * h + side; }

}  // namespace detail

inline CircleSet trace_circles(const PlaneTrivalentGraph& g, const StateVector& s) {
  if (int(s.size()) != g.edge_count())
    throw input_error("state length " + std::to_string(s.size()) + " != edge count " +
                      std::to_string(g.edge_count()));
  int np = 2 * g.half_count();
  std::vector<int> corner(np), across(np), seg(np);
  for (int v = 0; v < g.vertex_count(); ++v)
    for (int i = 0; i < 3; ++i) {
      int a = detail::side_point(g.rotation[v][i], 0);
      int b = detail::side_point(g.rotation[v][(i + 1) % 3], 1);
      corner[a] = b;
      corner[b] = a;
    }
  for (int e = 0; e < g.edge_count(); ++e) {
    auto [h, k] = g.edge_halves[e];
    int L0 = detail::side_point(h, 0), R0 = detail::side_point(h, 1);
    int L1 = detail::side_point(k, 0), R1 = detail::side_point(k, 1);
    int pL = s.bits[e] ? L1 : R1;
    int pR = s.bits[e] ? R1 : L1;
    across[L0] = pL; across[pL] = L0;
    across[R0] = pR; across[pR] = R0;
    seg[L0] = seg[pL] = 2 * e;
    seg[R0] = seg[pR] = 2 * e + 1;
  }

  CircleSet cs;
  cs.circle_of_segment.assign(2 * g.edge_count(), -1);
  // walk segments in increasing order so circles are numbered by smallest segment
  std::vector<int> first_point(2 * g.edge_count(), -1);
  for (int p = 0; p < np; ++p)
    if (first_point[seg[p]] < 0) first_point[seg[p]] = p;
  for (int sg = 0; sg < 2 * g.edge_count(); ++sg) {
    if (cs.circle_of_segment[sg] >= 0) continue;
    int id = int(cs.circles.size());
    std::vector<int> cyc;
    int p = first_point[sg];
    int start = p;
    do {
      cyc.push_back(seg[p]);
      cs.circle_of_segment[seg[p]] = id;
      p = corner[across[p]];
    } while (p != start);
    // direction: the smaller of the two neighbours of the minimum comes second
    if (cyc.size() > 2 && cyc.back() < cyc[1]) std::reverse(cyc.begin() + 1, cyc.end());
    cs.circles.push_back(std::move(cyc));
  }
  cs.adjacency.resize(g.edge_count());
  for (int e = 0; e < g.edge_count(); ++e)
    cs.adjacency[e] = {cs.circle_of_segment[2 * e], cs.circle_of_segment[2 * e + 1]};
  return cs;
}

inline int euler_characteristic(const PlaneTrivalentGraph& g, const StateVector& s) {
  return g.vertex_count() - g.edge_count() + int(trace_circles(g, s).size());
}

// Proper colourings of a small constraint graph by backtracking in index order.
// pins[i] = 0 means free, otherwise the colour 1..n. The visitor receives the
// full assignment and returns false to stop.
template <class Visit>
void enumerate_colorings(int nodes, const std::vector<std::pair<int, int>>& pairs, int n,
                         const std::vector<int>& pins, Visit&& visit) {
  std::vector<std::vector<int>> earlier(nodes);
  for (auto [a, b] : pairs) {
    if (a == b) return;
    earlier[std::max(a, b)].push_back(std::min(a, b));
  }
  std::vector<int> col(nodes, 0);
  auto clash = [&](int i, int c) {
    for (int j : earlier[i])
      if (col[j] == c) return true;
    return false;
  };
  int i = 0;
  while (i >= 0) {
    if (i == nodes) {
      if (!visit(std::as_const(col))) return;
      --i;
      continue;
    }
    int c;
    if (!pins.empty() && pins[i]) {
      c = col[i] == 0 ? pins[i] : n + 1;
      if (c <= n && clash(i, c)) c = n + 1;
    } else {
      c = col[i] + 1;
      while (c <= n && clash(i, c)) ++c;
    }
    if (c > n) {
      col[i] = 0;
      --i;
    } else {
      col[i] = c;
      ++i;
    }
  }
}

inline std::uint64_t count_colorings(int nodes, const std::vector<std::pair<int, int>>& pairs,
                                     int n) {
  std::uint64_t k = 0;
  enumerate_colorings(nodes, pairs, n, {}, [&](const std::vector<int>&) { ++k; return true; });
  return k;
}

inline std::uint64_t count_face_colorings(const CircleSet& cs,
                                          const std::vector<std::pair<int, int>>& extra, int n) {
  if (n < 1) throw input_error("colour count must be positive");
  int m = int(cs.size());
  std::vector<std::pair<int, int>> pairs = cs.adjacency;
  for (auto [a, b] : extra) {
    if (a < 0 || b < 0 || a >= m || b >= m)
      throw input_error("constraint references a missing circle");
    pairs.emplace_back(a, b);
  }
  return count_colorings(m, pairs, n);
}

inline constexpr int default_enumeration_cap = 24;

// coefficient k is the coefficient of n^k
inline std::vector<long long> penrose_polynomial(const PlaneTrivalentGraph& g,
                                                 int cap = default_enumeration_cap) {
  int E = g.edge_count();
  if (E > cap) throw input_error("graph has " + std::to_string(E) + " edges, over the cap");
  std::vector<long long> coef(2 * E + 2, 0);
  for (std::uint64_t x = 0; x < (std::uint64_t(1) << E); ++x) {
    auto s = StateVector::from_index(E, x);
    coef[trace_circles(g, s).size()] += (s.weight() % 2) ? -1 : 1;
  }
  while (coef.size() > 1 && coef.back() == 0) coef.pop_back();
  return coef;
}

inline long long evaluate(const std::vector<long long>& coef, long long n) {
  long long r = 0;
  for (auto it = coef.rbegin(); it != coef.rend(); ++it) r = r * n + *it;
  return r;
}

inline std::uint64_t count_4_face_colorings_plane(const PlaneTrivalentGraph& g) {
  auto cs = trace_circles(g, StateVector(g.edge_count()));
  return count_colorings(int(cs.size()), cs.adjacency, 4);
}

struct TaitReport {
  bool holds = false;
  std::uint64_t plane_4_colorings = 0;
  std::uint64_t state_3_colorings = 0;
  std::string diagnostic;
};

inline TaitReport verify_tait_identity(const PlaneTrivalentGraph& g,
                                       int cap = default_enumeration_cap) {
  TaitReport r;
  int E = g.edge_count();
  auto flat = trace_circles(g, StateVector(E));
  if (flat.has_bridge()) {
    r.diagnostic = "bridge in plane embedding";
    return r;
  }
  if (g.vertex_count() - E + int(flat.size()) != 2) {
    r.diagnostic = "embedding is not planar";
    return r;
  }
  if (E > cap) {
    r.diagnostic = "too many edges";
    return r;
  }
  r.plane_4_colorings = count_colorings(int(flat.size()), flat.adjacency, 4);
  for (std::uint64_t x = 0; x < (std::uint64_t(1) << E); ++x) {
    auto cs = trace_circles(g, StateVector::from_index(E, x));
    if (!cs.has_bridge()) r.state_3_colorings += count_colorings(int(cs.size()), cs.adjacency, 3);
  }
  r.holds = r.plane_4_colorings == 4 * r.state_3_colorings;
  return r;
}

inline bool verify_state_to_plane_coloring(const PlaneTrivalentGraph& g,
                                           int cap = default_enumeration_cap) {
  int E = g.edge_count();
  if (E > cap) throw input_error("graph has " + std::to_string(E) + " edges, over the cap");
  bool some_state = false;
  for (std::uint64_t x = 0; x < (std::uint64_t(1) << E) && !some_state; ++x) {
    auto cs = trace_circles(g, StateVector::from_index(E, x));
    bool found = false;
    enumerate_colorings(int(cs.size()), cs.adjacency, 4, {},
                        [&](const std::vector<int>&) { found = true; return false; });
    some_state = found;
  }
  return !some_state || count_4_face_colorings_plane(g) > 0;
}

// Text format:
//   v <h0> <h1> <h2>      one line per vertex, ccw
//   e <h> <h'> <index>    one line per edge
// '#' starts a comment.
inline PlaneTrivalentGraph read_graph(std::istream& in) {
  std::vector<std::array<int, 3>> rot;
  std::vector<std::pair<int, std::array<int, 2>>> edges;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto c = line.find('#'); c != std::string::npos) line.resize(c);
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "v") {
      std::array<int, 3> r{};
      if (!(ls >> r[0] >> r[1] >> r[2]))
        throw input_error("line " + std::to_string(lineno) + ": vertex needs three half-edges");
      rot.push_back(r);
    } else if (tag == "e") {
      int a, b, idx;
      if (!(ls >> a >> b >> idx))
        throw input_error("line " + std::to_string(lineno) + ": edge needs two halves and index");
      edges.push_back({idx, {a, b}});
    } else {
      throw input_error("line " + std::to_string(lineno) + ": unknown record '" + tag + "'");
    }
  }
  std::sort(edges.begin(), edges.end());
  std::vector<std::array<int, 2>> halves;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (edges[i].first != int(i)) throw input_error("edge indices must be 0..|E|-1");
    halves.push_back(edges[i].second);
  }
  return PlaneTrivalentGraph::from_rotation(std::move(rot), std::move(halves));
}

inline void write_graph(std::ostream& out, const PlaneTrivalentGraph& g) {
  for (auto& r : g.rotation) out << "v " << r[0] << ' ' << r[1] << ' ' << r[2] << '\n';
  for (int e = 0; e < g.edge_count(); ++e)
    out << "e " << g.edge_halves[e][0] << ' ' << g.edge_halves[e][1] << ' ' << e << '\n';
}

namespace corpus {

// second vertex lists the edges in reverse so the embedding is planar
inline PlaneTrivalentGraph theta() {
  return PlaneTrivalentGraph::from_rotation({{{0, 2, 4}}, {{5, 3, 1}}}, {{{0, 1}}, {{2, 3}}, {{4, 5}}});
}

// prism over a k-gon: inner cycle 0..k-1 ccw, outer cycle k..2k-1 ccw
inline PlaneTrivalentGraph prism(int k) {
  std::vector<std::array<int, 3>> nb(2 * k);
  for (int i = 0; i < k; ++i) {
    int nx = (i + 1) % k, pv = (i + k - 1) % k;
    nb[i] = {nx, pv, k + i};          // inner: next, prev, out
    nb[k + i] = {k + pv, k + nx, i};  // outer: prev, next, in
  }
  return PlaneTrivalentGraph::from_neighbours(nb);
}

inline PlaneTrivalentGraph k4() {
  // centre 0, outer triangle 1,2,3 ccw
  return PlaneTrivalentGraph::from_neighbours({{{1, 2, 3}}, {{0, 3, 2}}, {{0, 1, 3}}, {{0, 2, 1}}});
}

inline PlaneTrivalentGraph cube() { return prism(4); }

struct Entry {
  std::string name;
  PlaneTrivalentGraph graph;
};

inline std::vector<Entry> small_graphs() {
  return {{"theta", theta()}, {"K4", k4()}, {"3-prism", prism(3)},
          {"cube", cube()},          {"pentagonal-prism", prism(5)}};
}

}  // namespace corpus

}  // namespace bkd
