#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "caps.hpp"
#include "graph.hpp"

namespace bkd {

// An edge end sits either at an internal vertex or on the boundary at a spoke.
struct RegionEnd {
  int vertex = -1;
  int spoke = 0;
  bool on_boundary() const { return vertex < 0; }
};

// End 2e+j is end j of edge e. Points (strand sides) are 2*end + side with
// side 0 = left, 1 = right, looking along the edge away from the end. A
// boundary end looks into the region, so its left point carries side label
// 2k and its right point 2k-1.
struct Region {
  std::string name;
  int spokes = kSpokes;
  std::vector<std::string> vertex_names;
  std::vector<std::array<int, 3>> rotation;  // ccw end ids
  std::vector<std::array<int, 3>> blowup;    // corner i joins rotation i and i+1
  std::vector<std::string> edge_names;
  std::vector<std::array<RegionEnd, 2>> edges;

  int edge_count() const { return int(edges.size()); }
  int vertex_count() const { return int(rotation.size()); }
  std::uint64_t state_count() const { return std::uint64_t(1) << edge_count(); }
  int point_count() const { return 4 * edge_count(); }

  static int point(int end, int side) { return 2 * end + side; }

  // side label carried by a point, 0 if the point is not on the boundary
  int side_label(int p) const {
    int end = p / 2;
    const RegionEnd& re = edges[end / 2][end % 2];
    if (!re.on_boundary()) return 0;
    return (p % 2 == 0) ? 2 * re.spoke : 2 * re.spoke - 1;
  }

  std::vector<int> boundary_point_of_side() const {
    std::vector<int> r(2 * spokes + 1, -1);
    for (int p = 0; p < point_count(); ++p)
      if (int s = side_label(p)) r[s] = p;
    return r;
  }

  void validate() const {
    std::vector<int> spoke_seen(spokes + 1, 0);
    std::vector<int> end_seen(2 * edge_count(), 0);
    for (int e = 0; e < edge_count(); ++e)
      for (int j = 0; j < 2; ++j) {
        auto& re = edges[e][j];
        if (re.on_boundary()) {
          if (re.spoke < 1 || re.spoke > spokes) throw input_error("bad spoke number");
          if (spoke_seen[re.spoke]++) throw input_error("spoke attached twice");
        } else if (re.vertex >= vertex_count()) {
          throw input_error("edge end names a missing vertex");
        }
      }
    for (int k = 1; k <= spokes; ++k)
      if (!spoke_seen[k]) throw input_error("spoke " + std::to_string(k) + " unattached");
    for (int v = 0; v < vertex_count(); ++v)
      for (int end : rotation[v]) {
        if (end < 0 || end >= 2 * edge_count()) throw input_error("rotation names a bad end");
        if (edges[end / 2][end % 2].vertex != v) throw input_error("rotation end not at vertex");
        if (end_seen[end]++) throw input_error("end listed twice in rotations");
      }
    for (int e = 0; e < edge_count(); ++e)
      for (int j = 0; j < 2; ++j)
        if (!edges[e][j].on_boundary() && !end_seen[2 * e + j])
          throw input_error("edge end missing from its vertex rotation");
    std::vector<int> labels;
    for (auto& b : blowup) labels.insert(labels.end(), b.begin(), b.end());
    std::sort(labels.begin(), labels.end());
    if (std::adjacent_find(labels.begin(), labels.end()) != labels.end())
      throw input_error("blowup label repeated");
    if (!labels.empty() && labels.front() <= 2 * spokes)
      throw input_error("blowup labels must exceed the side labels");
  }
};

using RegionState = std::uint32_t;  // bit e = twist on region edge e

inline std::string state_string(RegionState s, int edges) {
  // last edge first, so string order equals enumeration order
  std::string r(edges, '0');
  for (int e = 0; e < edges; ++e)
    if ((s >> e) & 1u) r[edges - 1 - e] = '1';
  return r;
}

inline RegionState parse_state_string(const std::string& t, int edges) {
  if (int(t.size()) != edges) throw input_error("state string has wrong length");
  RegionState s = 0;
  for (int e = 0; e < edges; ++e) {
    char c = t[edges - 1 - e];
    if (c != '0' && c != '1') throw input_error("state string must be binary");
    if (c == '1') s |= RegionState(1) << e;
  }
  return s;
}

// Lexicographic order of state_string, all-flat first.
class region_states {
 public:
  explicit region_states(const Region& r) : n_(r.state_count()) {}
  struct iterator {
    std::uint64_t x;
    RegionState operator*() const { return RegionState(x); }
    iterator& operator++() { ++x; return *this; }
    bool operator!=(const iterator& o) const { return x != o.x; }
  };
  iterator begin() const { return {0}; }
  iterator end() const { return {n_}; }
  std::uint64_t size() const { return n_; }

 private:
  std::uint64_t n_;
};

namespace detail {

struct RegionBuilder {
  Region r;
  std::map<std::string, int> vid, eid;

  int vertex(const std::string& name) {
    auto it = vid.find(name);
    if (it != vid.end()) return it->second;
    int id = int(r.vertex_names.size());
    r.vertex_names.push_back(name);
    r.rotation.push_back({-1, -1, -1});
    r.blowup.push_back({0, 0, 0});
    vid[name] = id;
    return id;
  }
  RegionEnd end(const std::string& token) {
    if (token.rfind("spoke:", 0) == 0) return {-1, std::stoi(token.substr(6))};
    auto it = vid.find(token);
    if (it == vid.end()) throw input_error("unknown vertex '" + token + "'");
    return {it->second, 0};
  }
  void edge(const std::string& name, const std::string& a, const std::string& b) {
    if (eid.count(name)) throw input_error("edge '" + name + "' defined twice");
    eid[name] = int(r.edges.size());
    r.edge_names.push_back(name);
    r.edges.push_back({end(a), end(b)});
  }
  void rotate(const std::string& v, const std::array<std::string, 3>& ccw,
              const std::array<int, 3>& labels) {
    int id = vertex(v);
    for (int i = 0; i < 3; ++i) {
      auto it = eid.find(ccw[i]);
      if (it == eid.end()) throw input_error("unknown edge '" + ccw[i] + "'");
      int e = it->second;
      int j = r.edges[e][0].vertex == id ? 0 : r.edges[e][1].vertex == id ? 1 : -1;
      if (j < 0) throw input_error("edge '" + ccw[i] + "' does not meet vertex '" + v + "'");
      r.rotation[id][i] = 2 * e + j;
    }
    r.blowup[id] = labels;
  }
};

}  // namespace detail

// Region file:
//   region <name>
//   spokes <k>
//   vertex <name>
//   edge <name> <end> <end>          end = vertex name or spoke:<k>
//   rotation <vertex> <e0> <e1> <e2> labels <l0> <l1> <l2>
// Vertices must be declared before edges that use them; rotations last.
inline Region read_region(std::istream& in) {
  detail::RegionBuilder b;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto c = line.find('#'); c != std::string::npos) line.resize(c);
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    auto fail = [&](const std::string& m) {
      throw input_error("region line " + std::to_string(lineno) + ": " + m);
    };
    try {
      if (tag == "region") {
        ls >> b.r.name;
      } else if (tag == "spokes") {
        if (!(ls >> b.r.spokes)) fail("spokes needs a count");
      } else if (tag == "vertex") {
        std::string v;
        if (!(ls >> v)) fail("vertex needs a name");
        b.vertex(v);
      } else if (tag == "edge") {
        std::string n, x, y;
        if (!(ls >> n >> x >> y)) fail("edge needs a name and two ends");
        b.edge(n, x, y);
      } else if (tag == "rotation") {
        std::string v, kw;
        std::array<std::string, 3> ccw;
        std::array<int, 3> lab{};
        if (!(ls >> v >> ccw[0] >> ccw[1] >> ccw[2] >> kw >> lab[0] >> lab[1] >> lab[2]) ||
            kw != "labels")
          fail("rotation needs a vertex, three edges and three labels");
        b.rotate(v, ccw, lab);
      } else {
        fail("unknown record '" + tag + "'");
      }
    } catch (const std::invalid_argument&) {
      fail("bad number");
    }
  }
  b.r.validate();
  return b.r;
}

inline void write_region(std::ostream& out, const Region& r) {
  out << "region " << r.name << "\nspokes " << r.spokes << '\n';
  for (auto& v : r.vertex_names) out << "vertex " << v << '\n';
  auto end_name = [&](const RegionEnd& e) {
    return e.on_boundary() ? "spoke:" + std::to_string(e.spoke) : r.vertex_names[e.vertex];
  };
  for (int e = 0; e < r.edge_count(); ++e)
    out << "edge " << r.edge_names[e] << ' ' << end_name(r.edges[e][0]) << ' '
        << end_name(r.edges[e][1]) << '\n';
  for (int v = 0; v < r.vertex_count(); ++v) {
    out << "rotation " << r.vertex_names[v];
    for (int end : r.rotation[v]) out << ' ' << r.edge_names[end / 2];
    out << " labels";
    for (int l : r.blowup[v]) out << ' ' << l;
    out << '\n';
  }
}

// Build a region from planar coordinates: rotations come from the angles of
// the incident edges. Spokes point away from the origin.
struct PlacedVertex {
  std::string name;
  double x, y;
  int spoke = 0;
};

inline Region region_from_drawing(const std::string& name, const std::vector<PlacedVertex>& vs,
                                  const std::vector<std::pair<std::string, std::string>>& internal,
                                  int first_label) {
  detail::RegionBuilder b;
  b.r.name = name;
  std::map<std::string, const PlacedVertex*> at;
  for (auto& v : vs) {
    b.vertex(v.name);
    at[v.name] = &v;
  }
  // spokes first, in spoke order
  std::vector<const PlacedVertex*> sp;
  for (auto& v : vs)
    if (v.spoke) sp.push_back(&v);
  std::sort(sp.begin(), sp.end(), [](auto a, auto b) { return a->spoke < b->spoke; });
  for (auto* v : sp) b.edge("spoke" + std::to_string(v->spoke), v->name, "spoke:" + std::to_string(v->spoke));
  for (auto& [x, y] : internal) b.edge(x + y, x, y);

  int label = first_label;
  for (auto& v : vs) {
    std::vector<std::pair<double, std::string>> around;
    for (int e = 0; e < int(b.r.edges.size()); ++e) {
      const auto& en = b.r.edges[e];
      int id = b.vid[v.name];
      double dx, dy;
      if (en[0].vertex == id && en[1].on_boundary()) {
        dx = v.x; dy = v.y;
      } else if (en[0].vertex == id || en[1].vertex == id) {
        auto& o = *at[b.r.vertex_names[en[0].vertex == id ? en[1].vertex : en[0].vertex]];
        dx = o.x - v.x; dy = o.y - v.y;
      } else {
        continue;
      }
      around.emplace_back(std::atan2(dy, dx), b.r.edge_names[e]);
    }
    if (around.size() != 3) throw input_error("vertex '" + v.name + "' is not trivalent");
    std::sort(around.begin(), around.end());
    b.rotate(v.name, {around[0].second, around[1].second, around[2].second},
             {label, label + 1, label + 2});
    label += 3;
  }
  b.r.validate();
  return b.r;
}

// Twelve vertices, four pentagons around the central edge uv. Spoke 1 is at
// n1 and the spokes run clockwise n1, x2, s1, s2, w2, n2.
inline Region birkhoff_region() {
  std::vector<PlacedVertex> vs = {
      {"u", 0, 1},          {"v", 0, -1},         {"w1", -1.5, -1.5},    {"w2", -2.5, 0, 5},
      {"w3", -1.5, 1.5},    {"x1", 1.5, -1.5},    {"x2", 2.5, 0, 2},     {"x3", 1.5, 1.5},
      {"n1", 0.7, 3, 1},    {"n2", -0.7, 3, 6},   {"s1", 0.7, -3, 3},    {"s2", -0.7, -3, 4},
  };
  std::vector<std::pair<std::string, std::string>> internal = {
      {"u", "v"},   {"v", "w1"},  {"w1", "w2"}, {"w2", "w3"}, {"w3", "u"},
      {"v", "x1"},  {"x1", "x2"}, {"x2", "x3"}, {"x3", "u"},  {"x3", "n1"},
      {"n1", "n2"}, {"n2", "w3"}, {"x1", "s1"}, {"s1", "s2"}, {"s2", "w1"},
  };
  return region_from_drawing("birkhoff-diamond", vs, internal, 13);
}

// Two vertices joined by an edge, u on spokes 2,3 and v on spokes 4,5, and a
// chord joining spokes 6 and 1 directly.
inline Region reducer_region() {
  detail::RegionBuilder b;
  b.r.name = "reducer";
  b.vertex("u");
  b.vertex("v");
  for (int k = 2; k <= 5; ++k)
    b.edge("spoke" + std::to_string(k), k <= 3 ? "u" : "v", "spoke:" + std::to_string(k));
  b.edge("uv", "u", "v");
  b.edge("chord", "spoke:6", "spoke:1");
  b.rotate("u", {"spoke3", "spoke2", "uv"}, {13, 14, 15});
  b.rotate("v", {"spoke5", "spoke4", "uv"}, {16, 17, 18});
  b.r.validate();
  return b.r;
}

// Fixed strand wiring of a region: corners never change, edges depend on the
// twist bit.
struct RegionWiring {
  std::vector<std::array<int, 3>> corners;  // point, point, blowup label
  std::vector<int> side_of_point;           // 0 unless boundary
  std::vector<int> point_of_side;

  explicit RegionWiring(const Region& r) : side_of_point(r.point_count()) {
    for (int v = 0; v < r.vertex_count(); ++v)
      for (int i = 0; i < 3; ++i)
        corners.push_back({Region::point(r.rotation[v][i], 0),
                           Region::point(r.rotation[v][(i + 1) % 3], 1), r.blowup[v][i]});
    for (int p = 0; p < r.point_count(); ++p) side_of_point[p] = r.side_label(p);
    point_of_side = r.boundary_point_of_side();
  }

  // the two point pairs joined along edge e
  static std::array<std::array<int, 2>, 2> strands(int e, bool twisted) {
    int L0 = Region::point(2 * e, 0), R0 = Region::point(2 * e, 1);
    int L1 = Region::point(2 * e + 1, 0), R1 = Region::point(2 * e + 1, 1);
    if (twisted) return {{{L0, L1}, {R0, R1}}};
    return {{{L0, R1}, {R0, L1}}};
  }
};

struct CappedState {
  struct Circle {
    std::vector<int> arcs;    // cap arc indices
    std::vector<int> labels;  // side labels of its arcs and blowup labels, sorted
  };
  std::vector<Circle> circles;  // ordered by smallest label
  std::vector<std::pair<int, int>> constraints;  // region edges first, then cap interactions
  std::vector<int> circle_of_arc;
  int region_constraints = 0;
  std::string region_name;
  RegionState state = 0;

  bool has_self_constraint() const {
    for (auto [a, b] : constraints)
      if (a == b) return true;
    return false;
  }
};

inline CappedState glue(const Cap& cap, const Region& region, RegionState state) {
  if (region.spokes != int(cap.arcs.size()))
    throw input_error("cap and region disagree on the number of spokes");
  if (state >> region.edge_count()) throw input_error("state has bits beyond the region");
  RegionWiring w(region);
  int np = region.point_count();
  std::vector<int> parent(np);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](int a, int b) { parent[find(a)] = find(b); };
  for (auto& c : w.corners) unite(c[0], c[1]);
  for (int e = 0; e < region.edge_count(); ++e)
    for (auto& s : RegionWiring::strands(e, (state >> e) & 1u)) unite(s[0], s[1]);
  for (auto& a : cap.arcs) unite(w.point_of_side[a[0]], w.point_of_side[a[1]]);

  std::map<int, std::vector<int>> labels;
  for (auto& c : w.corners) labels[find(c[0])].push_back(c[2]);
  for (int s = 1; s <= 2 * region.spokes; ++s) labels[find(w.point_of_side[s])].push_back(s);
  std::vector<std::pair<std::vector<int>, int>> order;
  for (auto& [root, l] : labels) {
    std::sort(l.begin(), l.end());
    order.emplace_back(l, root);
  }
  std::sort(order.begin(), order.end());
  std::map<int, int> index;
  CappedState cs;
  cs.region_name = region.name;
  cs.state = state;
  for (auto& [l, root] : order) {
    index[root] = int(cs.circles.size());
    cs.circles.push_back({{}, l});
  }
  cs.circle_of_arc.resize(cap.arcs.size());
  for (int i = 0; i < int(cap.arcs.size()); ++i) {
    int c = index.at(find(w.point_of_side[cap.arcs[i][0]]));
    cs.circle_of_arc[i] = c;
    cs.circles[c].arcs.push_back(i);
  }
  for (int e = 0; e < region.edge_count(); ++e) {
    auto st = RegionWiring::strands(e, (state >> e) & 1u);
    cs.constraints.emplace_back(index.at(find(st[0][0])), index.at(find(st[1][0])));
  }
  cs.region_constraints = region.edge_count();
  for (auto [i, j] : cap.interaction_pairs())
    cs.constraints.emplace_back(cs.circle_of_arc[i], cs.circle_of_arc[j]);
  return cs;
}

// Proper colourings of a capped state with arc colours pinned (0 = free).
// Visits circle colourings in lexicographic order.
template <class Visit>
void proper_colorings(const CappedState& cs, int n, const std::vector<int>& arc_pins, Visit&& visit) {
  std::vector<int> pins(cs.circles.size(), 0);
  for (int i = 0; i < int(arc_pins.size()); ++i) {
    if (!arc_pins[i]) continue;
    int& p = pins[cs.circle_of_arc[i]];
    if (p && p != arc_pins[i]) return;
    p = arc_pins[i];
  }
  enumerate_colorings(int(cs.circles.size()), cs.constraints, n, pins, visit);
}

inline bool has_proper_coloring(const CappedState& cs, int n, const std::vector<int>& arc_pins,
                                std::vector<int>* out = nullptr) {
  bool found = false;
  proper_colorings(cs, n, arc_pins, [&](const std::vector<int>& col) {
    found = true;
    if (out) *out = col;
    return false;
  });
  return found;
}

}  // namespace bkd
