#pragma once

#include <algorithm>
#include <array>
#include <bitset>
#include <chrono>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "caps.hpp"
#include "coloring.hpp"
#include "parallel.hpp"
#include "regions.hpp"

namespace bkd {

struct Certificate {
  Cap cap;
  ColoredCap colored;
  RegionState state = 0;
  std::vector<int> recolored;     // arc indices, at most two
  std::vector<int> circle_colors;  // over glue(cap, region, state) circles
};

// Colours of the arcs after the recoloured ones are painted yellow.
inline std::vector<int> certificate_arc_colors(const Certificate& c) {
  auto col = c.colored.colors;
  for (int i : c.recolored) col[i] = kYellow;
  return col;
}

// Recolour sets in search order: empty, singletons, pairs; pairs must not
// interact (no diamond, no shared spoke).
inline std::vector<std::vector<int>> recolor_sets(const Cap& cap) {
  std::vector<std::vector<int>> r{{}};
  for (int i = 0; i < cap.arc_count(); ++i) r.push_back({i});
  for (int i = 0; i < cap.arc_count(); ++i)
    for (int j = i + 1; j < cap.arc_count(); ++j)
      if (!cap.constrained(i, j)) r.push_back({i, j});
  return r;
}

namespace detail {

// Set partitions of the six paths into at most four colour classes, written
// as restricted growth strings.
struct Partitions {
  static constexpr int kCount = 187;
  std::array<std::array<int, kSpokes>, kCount> rgs{};
  std::array<int, 4096> index_of_code{};  // base-4 colour tuple -> partition

  Partitions() {
    int n = 0;
    for (int code = 0; code < 4096; ++code) {
      std::array<int, kSpokes> c{}, map{-1, -1, -1, -1};
      int next = 0;
      for (int i = 0; i < kSpokes; ++i) {
        int col = (code >> (2 * i)) & 3;
        if (map[col] < 0) map[col] = next++;
        c[i] = map[col];
      }
      int canon = 0;
      for (int i = 0; i < kSpokes; ++i) canon |= c[i] << (2 * i);
      if (canon == code) rgs[n++] = c;
      index_of_code[code] = -1;
    }
    for (int code = 0; code < 4096; ++code) {
      std::array<int, kSpokes> map{-1, -1, -1, -1};
      int next = 0, canon = 0;
      for (int i = 0; i < kSpokes; ++i) {
        int col = (code >> (2 * i)) & 3;
        if (map[col] < 0) map[col] = next++;
        canon |= map[col] << (2 * i);
      }
      for (int k = 0; k < n; ++k) {
        int cc = 0;
        for (int i = 0; i < kSpokes; ++i) cc |= rgs[k][i] << (2 * i);
        if (cc == canon) { index_of_code[code] = k; break; }
      }
    }
  }
  static const Partitions& get() {
    static const Partitions p;
    return p;
  }
};

using PartitionSet = std::bitset<Partitions::kCount>;

// Which partitions of the paths are realised by proper 4-colourings, given the
// constraint graph of paths 0..5 and interior circles 6.. .
inline PartitionSet feasible_partitions(int interiors, const std::vector<std::pair<int, int>>& pairs) {
  const auto& P = Partitions::get();
  PartitionSet f;
  for (auto [a, b] : pairs)
    if (a == b) return f;
  int n = kSpokes + interiors;
  std::vector<int> pins(n, 0);
  for (int k = 0; k < Partitions::kCount; ++k) {
    for (int i = 0; i < kSpokes; ++i) pins[i] = P.rgs[k][i] + 1;
    bool ok = false;
    enumerate_colorings(n, pairs, 4, pins, [&](const std::vector<int>&) { ok = true; return false; });
    if (ok) f.set(k);
  }
  return f;
}

}  // namespace detail

struct SearchStats {
  std::uint64_t recolor_sets_tried = 0;
  std::uint64_t pairings_examined = 0;
  std::uint64_t pairings_rejected = 0;
};

// Every state of the region reduced to what matters for extending a cap
// colouring: how its strands pair the boundary sides, and which partitions of
// those six paths extend to a proper 4-colouring of the whole state. For each
// (pairing, partition) only the first state in enumeration order is kept, so a
// search over this table returns the same state as a scan in state order.
class ExtensionTable {
 public:
  static constexpr RegionState kNone = std::numeric_limits<RegionState>::max();

  explicit ExtensionTable(const Region& region) : region_(region) { build(); }

  const Region& region() const { return region_; }
  std::size_t pairing_count() const { return pairings_.size(); }
  std::size_t structure_count() const { return structures_; }
  std::uint64_t bridged_states() const { return bridged_; }

  // First state (in enumeration order) extending the given arc colouring,
  // or kNone.
  RegionState first_state(const Cap& cap, const std::vector<int>& arc_colors,
                          SearchStats* stats = nullptr) const {
    const auto& P = detail::Partitions::get();
    std::array<int, 2 * kSpokes + 1> arc_of_side{};
    for (int i = 0; i < cap.arc_count(); ++i)
      for (int s : cap.arcs[i]) arc_of_side[s] = i;
    auto inter = cap.interaction_pairs();
    RegionState best = kNone;
    for (const auto& pr : pairings_) {
      if (stats) ++stats->pairings_examined;
      // walk the circles formed by cap arcs and region paths
      std::array<int, 2 * kSpokes + 1> circle;
      circle.fill(-1);
      std::array<int, kSpokes> circle_color{};
      int nc = 0;
      bool ok = true;
      for (int s0 = 1; s0 <= 2 * kSpokes && ok; ++s0) {
        if (circle[s0] >= 0) continue;
        int col = arc_colors[arc_of_side[s0]];
        int s = s0;
        do {
          circle[s] = nc;
          int a = arc_of_side[s];
          if (arc_colors[a] != col) { ok = false; break; }
          auto& arc = cap.arcs[a];
          int t = arc[0] == s ? arc[1] : arc[0];
          circle[t] = nc;
          s = pr.partner[t];
        } while (s != s0);
        circle_color[nc++] = col;
      }
      if (ok)
        for (auto [i, j] : inter)
          if (circle[cap.arcs[i][0]] == circle[cap.arcs[j][0]]) { ok = false; break; }
      if (!ok) {
        if (stats) ++stats->pairings_rejected;
        continue;
      }
      int code = 0;
      for (int p = 0; p < kSpokes; ++p) code |= (circle_color[circle[pr.path_side[p]]] - 1) << (2 * p);
      RegionState s = pr.first[P.index_of_code[code]];
      if (s < best) best = s;
    }
    return best;
  }

 private:
  struct Pairing {
    std::array<int, 2 * kSpokes + 1> partner{};
    std::array<int, kSpokes> path_side{};  // smallest side of each path
    std::array<RegionState, detail::Partitions::kCount> first{};
    detail::PartitionSet covered;
  };

  void build() {
    const Region& r = region_;
    RegionWiring w(r);
    int np = r.point_count();
    // nodes: one per corner, one per boundary point
    std::vector<int> node(np, -1);
    int nn = 0;
    for (auto& c : w.corners) node[c[0]] = node[c[1]] = nn++;
    std::vector<int> side_node(2 * r.spokes + 1, -1);
    for (int s = 1; s <= 2 * r.spokes; ++s) side_node[s] = node[w.point_of_side[s]] = nn++;
    int E = r.edge_count();
    std::vector<std::array<std::array<int, 2>, 2>> flat(E), twist(E);
    for (int e = 0; e < E; ++e)
      for (int t = 0; t < 2; ++t) {
        auto st = RegionWiring::strands(e, t);
        auto& dst = t ? twist[e] : flat[e];
        for (int k = 0; k < 2; ++k) dst[k] = {node[st[k][0]], node[st[k][1]]};
      }

    std::unordered_map<std::string, int> pairing_id;
    std::unordered_map<std::string, detail::PartitionSet> cache;
    std::vector<int> parent(nn), comp(nn);
    std::string key;
    std::vector<std::pair<int, int>> pairs;
    for (RegionState s : region_states(r)) {
      std::iota(parent.begin(), parent.end(), 0);
      auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
      };
      for (int e = 0; e < E; ++e) {
        auto& st = ((s >> e) & 1u) ? twist[e] : flat[e];
        for (auto& q : st) parent[find(q[0])] = find(q[1]);
      }
      bool bridge = false;
      for (int e = 0; e < E && !bridge; ++e) {
        auto& st = ((s >> e) & 1u) ? twist[e] : flat[e];
        bridge = find(st[0][0]) == find(st[1][0]);
      }
      if (bridge) {
        ++bridged_;
        continue;
      }
      // label components: paths by their smallest side, interiors after
      std::fill(comp.begin(), comp.end(), -1);
      std::array<int, 2 * kSpokes + 1> partner{};
      std::array<int, kSpokes> path_side{};
      int paths = 0;
      for (int sd = 1; sd <= 2 * r.spokes; ++sd) {
        int root = find(side_node[sd]);
        if (comp[root] < 0) {
          path_side[paths] = sd;
          comp[root] = paths++;
        } else {
          partner[sd] = path_side[comp[root]];
          partner[path_side[comp[root]]] = sd;
        }
      }
      int interiors = 0;
      pairs.clear();
      for (int e = 0; e < E; ++e) {
        auto& st = ((s >> e) & 1u) ? twist[e] : flat[e];
        int a = find(st[0][0]), b = find(st[1][0]);
        if (comp[a] < 0) comp[a] = kSpokes + interiors++;
        if (comp[b] < 0) comp[b] = kSpokes + interiors++;
        pairs.emplace_back(std::min(comp[a], comp[b]), std::max(comp[a], comp[b]));
      }
      std::sort(pairs.begin(), pairs.end());
      pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

      std::string pkey(partner.begin() + 1, partner.end());
      auto [pit, fresh] = pairing_id.emplace(pkey, int(pairings_.size()));
      if (fresh) {
        Pairing p;
        p.partner = partner;
        p.path_side = path_side;
        p.first.fill(kNone);
        pairings_.push_back(p);
      }
      key = pkey;
      key.push_back(char(interiors));
      for (auto [a, b] : pairs) {
        key.push_back(char(a));
        key.push_back(char(b));
      }
      auto cit = cache.find(key);
      if (cit == cache.end()) {
        cit = cache.emplace(key, detail::feasible_partitions(interiors, pairs)).first;
        ++structures_;
      }
      Pairing& p = pairings_[pit->second];
      auto fresh_bits = cit->second & ~p.covered;
      if (fresh_bits.none()) continue;
      for (int k = 0; k < detail::Partitions::kCount; ++k)
        if (fresh_bits.test(k)) p.first[k] = s;
      p.covered |= fresh_bits;
    }
  }

  Region region_;
  std::vector<Pairing> pairings_;
  std::size_t structures_ = 0;
  std::uint64_t bridged_ = 0;
};

// Full certificate for an arc colouring that the table says extends.
inline Certificate make_certificate(const Cap& cap, const ColoredCap& cc, const Region& region,
                                    RegionState state, std::vector<int> recolored) {
  Certificate c;
  c.cap = cap;
  c.colored = cc;
  c.state = state;
  c.recolored = std::move(recolored);
  auto cs = glue(cap, region, state);
  if (!has_proper_coloring(cs, 4, certificate_arc_colors(c), &c.circle_colors))
    throw std::logic_error("extension table and capped state disagree");
  return c;
}

inline std::optional<Certificate> find_extension(const ExtensionTable& table, const Cap& cap,
                                                 const ColoredCap& cc,
                                                 SearchStats* stats = nullptr) {
  for (auto& rs : recolor_sets(cap)) {
    if (stats) ++stats->recolor_sets_tried;
    auto col = cc.colors;
    for (int i : rs) col[i] = kYellow;
    RegionState s = table.first_state(cap, col, stats);
    if (s != ExtensionTable::kNone) return make_certificate(cap, cc, table.region(), s, rs);
  }
  return std::nullopt;
}

struct ProofReport {
  std::size_t colored_caps = 0;
  std::size_t certified = 0;
  std::array<std::size_t, 3> by_recolor_size{};
  std::vector<int> failures;  // indices into the colored-cap list
  std::vector<std::optional<Certificate>> certificates;
  double seconds = 0;
};

inline ProofReport run_reducibility_proof(const ExtensionTable& table, const std::vector<Cap>& planar,
                                          const std::vector<ColoredCap>& colored, int workers = 1) {
  auto t0 = std::chrono::steady_clock::now();
  ProofReport rep;
  rep.colored_caps = colored.size();
  rep.certificates.resize(colored.size());
  parallel_for(colored.size(), workers, [&](std::size_t i) {
    rep.certificates[i] = find_extension(table, planar[colored[i].cap_index], colored[i]);
  });
  for (std::size_t i = 0; i < colored.size(); ++i) {
    if (rep.certificates[i]) {
      ++rep.certified;
      ++rep.by_recolor_size[rep.certificates[i]->recolored.size()];
    } else {
      rep.failures.push_back(int(i));
    }
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace bkd
