#pragma once

#include <algorithm>
#include <array>
#include <numeric>
#include <set>
#include <vector>

#include "caps.hpp"
#include "graph.hpp"
#include "regions.hpp"

namespace bkd {

// Where a region sits inside a plane graph: which graph edges belong to it
// and, for each spoke k, the half-edge of the spoke at its outer end.
struct RegionEmbedding {
  std::vector<bool> region_edge;
  std::vector<int> outer_half;  // index k-1
  std::vector<int> graph_edge_of_region_edge;
};

struct CapOfState {
  Cap cap;
  std::uint32_t swapped = 0;  // bit k-1: sides 2k-1 and 2k exchanged to normalise
  int closed_circles = 0;
};

// Trace a full state outside the region and simplify it to a cap: arcs keep
// their boundary sides, every outside edge records an interaction between
// the two objects on its strands, closed circles are dropped with their
// interactions, repeated and spoke-sharing interactions collapse, and the
// sides at each spoke are exchanged where needed so the arcs match the
// canonical doubling of their pre-cap.
inline CapOfState compute_cap(const PlaneTrivalentGraph& g, const RegionEmbedding& emb,
                              const StateVector& s) {
  if (int(s.size()) != g.edge_count()) throw input_error("state length mismatch");
  int k = int(emb.outer_half.size());
  std::vector<int> side(2 * g.half_count(), 0);
  for (int j = 0; j < k; ++j) {
    side[detail::side_point(emb.outer_half[j], 0)] = 2 * (j + 1);
    side[detail::side_point(emb.outer_half[j], 1)] = 2 * (j + 1) - 1;
  }
  auto corner = [&](int p) {
    int h = p / 2, v = g.vertex_of[h], i = g.slot_of[h];
    if (p % 2 == 0) return detail::side_point(g.rotation[v][(i + 1) % 3], 1);
    return detail::side_point(g.rotation[v][(i + 2) % 3], 0);
  };
  auto across = [&](int p) {
    int h = p / 2, e = g.edge_of[h], m = g.mate[h];
    bool tw = s.bits[e];
    return detail::side_point(m, tw ? p % 2 : 1 - p % 2);
  };
  // object id of the strand passing each point of an outside edge
  std::vector<int> obj(2 * g.half_count(), -1);
  std::vector<Arc> arcs;
  for (int sd = 1; sd <= 2 * k; ++sd) {
    int start = -1;
    for (int j = 0; j < k && start < 0; ++j)
      for (int t = 0; t < 2; ++t)
        if (side[detail::side_point(emb.outer_half[j], t)] == sd)
          start = detail::side_point(emb.outer_half[j], t);
    if (obj[start] >= 0) continue;
    int id = int(arcs.size());
    obj[start] = id;
    int p = corner(start);
    while (!side[p]) {
      obj[p] = id;
      p = across(p);
      obj[p] = id;
      p = corner(p);
    }
    obj[p] = id;
    arcs.push_back({sd, side[p]});
  }
  int closed = 0;
  for (int e = 0; e < g.edge_count(); ++e) {
    if (emb.region_edge[e]) continue;
    for (int h : g.edge_halves[e])
      for (int t = 0; t < 2; ++t) {
        int p0 = detail::side_point(h, t);
        if (obj[p0] >= 0) continue;
        int id = int(arcs.size()) + closed++;
        int p = p0;
        do {
          obj[p] = id;
          p = across(p);
          obj[p] = id;
          p = corner(p);
        } while (p != p0);
      }
  }
  std::set<std::pair<int, int>> inter;
  for (int e = 0; e < g.edge_count(); ++e) {
    if (emb.region_edge[e]) continue;
    int h = g.edge_halves[e][0];
    int a = obj[detail::side_point(h, 0)], b = obj[detail::side_point(h, 1)];
    if (a == b) throw input_error("state has a topological bridge outside the region");
    if (a < int(arcs.size()) && b < int(arcs.size())) inter.insert(std::minmax(a, b));
  }

  // normalise sides: the arc leaving spoke a towards succ(a) must use side 2a
  std::vector<std::pair<int, int>> pairs;
  for (auto& a : arcs) {
    int x = spoke_of(a[0]), y = spoke_of(a[1]);
    if (x == y) throw input_error("arc returns to its own spoke");
    pairs.emplace_back(std::min(x, y), std::max(x, y));
  }
  std::sort(pairs.begin(), pairs.end());
  auto succ = PreCap{pairs}.successor();
  std::uint32_t swapped = 0;
  std::vector<bool> done(arcs.size(), false);
  std::vector<int> relabel(2 * k + 1);
  std::iota(relabel.begin(), relabel.end(), 0);
  for (int a = 1; a <= k; ++a) {
    // the outgoing arc at a: among arcs touching a whose other end is succ(a),
    // prefer one that already uses side 2a
    int b = succ[a], pick = -1, side_at_a = 0;
    for (int i = 0; i < int(arcs.size()); ++i) {
      if (done[i]) continue;
      for (int t = 0; t < 2; ++t)
        if (spoke_of(arcs[i][t]) == a && spoke_of(arcs[i][1 - t]) == b &&
            (pick < 0 || arcs[i][t] == 2 * a)) {
          pick = i;
          side_at_a = arcs[i][t];
        }
    }
    done[pick] = true;
    if (side_at_a != 2 * a) swapped |= 1u << (a - 1);
  }
  // with the swaps at the tails fixed, each head must land on 2b-1
  for (int j = 0; j < k; ++j)
    if ((swapped >> j) & 1u) std::swap(relabel[2 * j + 1], relabel[2 * j + 2]);
  std::vector<Arc> out;
  for (auto& a : arcs) out.push_back({relabel[a[0]], relabel[a[1]]});
  std::vector<std::pair<int, int>> labs;
  for (auto [i, j] : inter) {
    Arc x = out[i], y = out[j];
    if (!shares_spoke(x, y)) labs.emplace_back(x[0], y[0]);
  }
  CapOfState r;
  r.cap = make_cap(out, labs);
  r.swapped = swapped;
  r.closed_circles = closed;
  return r;
}

// The region surrounded by a ring of one vertex per spoke; the outer face is
// the hexagon of ring edges. Region edge e keeps half-edges 2e, 2e+1 and graph
// edge index e.
inline std::pair<PlaneTrivalentGraph, RegionEmbedding> embed_in_ring(const Region& r) {
  int nv = r.vertex_count(), E = r.edge_count(), k = r.spokes;
  std::vector<std::array<int, 3>> rot(nv + k);
  std::vector<std::array<int, 2>> halves;
  for (int e = 0; e < E; ++e) halves.push_back({2 * e, 2 * e + 1});
  for (int v = 0; v < nv; ++v) rot[v] = r.rotation[v];
  std::vector<int> boundary_half(k + 1, -1);
  for (int e = 0; e < E; ++e)
    for (int j = 0; j < 2; ++j)
      if (r.edges[e][j].on_boundary()) boundary_half[r.edges[e][j].spoke] = 2 * e + j;
  int next = 2 * E;
  // ring edge i joins ring vertex i (spoke i+1) to ring vertex i+1
  std::vector<int> to_next(k), to_prev(k);
  for (int i = 0; i < k; ++i) {
    to_next[i] = next;
    to_prev[(i + 1) % k] = next + 1;
    halves.push_back({next, next + 1});
    next += 2;
  }
  for (int i = 0; i < k; ++i) rot[nv + i] = {boundary_half[i + 1], to_next[i], to_prev[i]};
  RegionEmbedding emb;
  emb.region_edge.assign(E + k, false);
  for (int e = 0; e < E; ++e) emb.region_edge[e] = true;
  for (int i = 1; i <= k; ++i) emb.outer_half.push_back(boundary_half[i]);
  for (int e = 0; e < E; ++e) emb.graph_edge_of_region_edge.push_back(e);
  return {PlaneTrivalentGraph::from_rotation(rot, halves), emb};
}

// Subdivide two outside edges bordering a common outside face and join the
// new vertices across that face. Keeps the graph plane and trivalent.
inline PlaneTrivalentGraph add_chord(const PlaneTrivalentGraph& g, int point_a, int point_b) {
  auto rot = g.rotation;
  auto halves = g.edge_halves;
  int next = g.half_count();
  std::array<int, 2> pts = {point_a, point_b};
  std::array<int, 2> third{};
  for (int t = 0; t < 2; ++t) {
    int p = pts[t];
    int h = p / 2, e = -1;
    for (int i = 0; i < int(halves.size()); ++i)
      if (halves[i][0] == h || halves[i][1] == h) e = i;
    int m = halves[e][0] == h ? halves[e][1] : halves[e][0];
    // h -- [near far third] -- m
    int near_h = next, far_h = next + 1, th = next + 2;
    next += 3;
    halves[e] = {h, near_h};
    halves.push_back({far_h, m});
    // the face lies left of h when p is h's left point
    if (p % 2 == 0)
      rot.push_back({far_h, th, near_h});
    else
      rot.push_back({near_h, th, far_h});
    third[t] = th;
  }
  halves.push_back({third[0], third[1]});
  return PlaneTrivalentGraph::from_rotation(rot, halves);
}

}  // namespace bkd
