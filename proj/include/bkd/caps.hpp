#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "graph.hpp"

namespace bkd {

inline constexpr int kSpokes = 6;
inline constexpr int kSides = 2 * kSpokes;
inline constexpr int kArcPairs = kSpokes * (kSpokes - 1) / 2;

inline int spoke_of(int side) { return (side + 1) / 2; }

using Arc = std::array<int, 2>;

inline bool shares_spoke(const Arc& x, const Arc& y) {
  for (int a : x)
    for (int b : y)
      if (spoke_of(a) == spoke_of(b)) return true;
  return false;
}

inline bool crosses(const Arc& x, const Arc& y) {
  auto [a, b] = std::minmax(x[0], x[1]);
  auto [c, d] = std::minmax(y[0], y[1]);
  return (a < c && c < b && b < d) || (c < a && a < d && d < b);
}

// z's chord cuts the boundary circle into two open intervals; x and y must lie
// wholly in different ones
inline bool separates(const Arc& z, const Arc& x, const Arc& y) {
  auto [e, f] = std::minmax(z[0], z[1]);
  auto inside = [&](int p) { return e < p && p < f; };
  bool x0 = inside(x[0]), x1 = inside(x[1]), y0 = inside(y[0]), y1 = inside(y[1]);
  return x0 == x1 && y0 == y1 && x0 != y0;
}

// index of the unordered arc pair (i<j) in lexicographic order of pairs
inline int pair_index(int i, int j) {
  if (i > j) std::swap(i, j);
  return i * (2 * kSpokes - i - 1) / 2 + (j - i - 1);
}

inline std::pair<int, int> pair_at(int k) {
  for (int i = 0; i < kSpokes; ++i)
    for (int j = i + 1; j < kSpokes; ++j)
      if (pair_index(i, j) == k) return {i, j};
  throw std::out_of_range("pair index");
}

using InteractionMask = std::uint32_t;

struct Cap {
  std::vector<Arc> arcs;  // sorted by smaller label, smaller label first
  InteractionMask inter = 0;

  int arc_count() const { return int(arcs.size()); }
  int arc_with_side(int side) const {
    for (int i = 0; i < arc_count(); ++i)
      if (arcs[i][0] == side || arcs[i][1] == side) return i;
    return -1;
  }
  bool interacts(int i, int j) const { return (inter >> pair_index(i, j)) & 1u; }
  // interaction or shared spoke: the two arcs must take different colours
  bool constrained(int i, int j) const {
    return i != j && (interacts(i, j) || shares_spoke(arcs[i], arcs[j]));
  }
  std::vector<std::pair<int, int>> interaction_pairs() const {
    std::vector<std::pair<int, int>> r;
    for (int k = 0; k < kArcPairs; ++k)
      if ((inter >> k) & 1u) r.push_back(pair_at(k));
    return r;
  }
  // interactions written with the arcs' smaller labels, as in V[a,b]
  std::vector<std::pair<int, int>> interaction_labels() const {
    std::vector<std::pair<int, int>> r;
    for (auto [i, j] : interaction_pairs()) r.emplace_back(arcs[i][0], arcs[j][0]);
    return r;
  }
  std::vector<int> flattened() const {
    std::vector<int> f;
    for (auto& a : arcs) f.insert(f.end(), a.begin(), a.end());
    return f;
  }

  friend bool operator==(const Cap& a, const Cap& b) {
    return a.arcs == b.arcs && a.inter == b.inter;
  }
  friend bool operator<(const Cap& a, const Cap& b) {
    return std::tie(a.arcs, a.inter) < std::tie(b.arcs, b.inter);
  }
};

// Sorts arcs and rewrites interactions onto the new arc order. Interactions
// are given as pairs of side labels (any side of each arc).
inline Cap make_cap(std::vector<Arc> arcs, const std::vector<std::pair<int, int>>& label_pairs) {
  if (int(arcs.size()) != kSpokes) throw input_error("a cap has exactly six arcs");
  std::vector<int> seen(kSides + 1, 0);
  for (auto& a : arcs) {
    if (a[0] > a[1]) std::swap(a[0], a[1]);
    if (a[0] == a[1]) throw input_error("arc joins a side to itself");
    for (int s : a) {
      if (s < 1 || s > kSides) throw input_error("side label out of range");
      if (seen[s]++) throw input_error("side label " + std::to_string(s) + " used twice");
    }
  }
  std::sort(arcs.begin(), arcs.end());
  Cap c;
  c.arcs = std::move(arcs);
  for (auto [x, y] : label_pairs) {
    int i = c.arc_with_side(x), j = c.arc_with_side(y);
    if (i < 0 || j < 0) throw input_error("interaction names an unknown side");
    if (i == j) throw input_error("interaction pairs an arc with itself");
    if (shares_spoke(c.arcs[i], c.arcs[j]))
      throw input_error("interaction between arcs sharing a spoke");
    c.inter |= InteractionMask(1) << pair_index(i, j);
  }
  return c;
}

inline InteractionMask forced_interactions(const std::vector<Arc>& arcs) {
  InteractionMask m = 0;
  for (int i = 0; i < int(arcs.size()); ++i)
    for (int j = i + 1; j < int(arcs.size()); ++j)
      if (crosses(arcs[i], arcs[j]) && !shares_spoke(arcs[i], arcs[j]))
        m |= InteractionMask(1) << pair_index(i, j);
  return m;
}

inline InteractionMask spoke_sharing_pairs(const std::vector<Arc>& arcs) {
  InteractionMask m = 0;
  for (int i = 0; i < int(arcs.size()); ++i)
    for (int j = i + 1; j < int(arcs.size()); ++j)
      if (shares_spoke(arcs[i], arcs[j])) m |= InteractionMask(1) << pair_index(i, j);
  return m;
}

inline bool is_planar_cap(const Cap& c) {
  for (auto [i, j] : c.interaction_pairs())
    for (int k = 0; k < c.arc_count(); ++k) {
      if (k == i || k == j) continue;
      if (separates(c.arcs[k], c.arcs[i], c.arcs[j]) && !c.constrained(k, i) &&
          !c.constrained(k, j))
        return false;
    }
  return true;
}

struct PreCap {
  std::vector<std::pair<int, int>> pairs;  // sorted unordered spoke pairs

  static PreCap from_permutation(const std::array<int, kSpokes>& sigma) {  // 1-based images
    PreCap p;
    for (int i = 0; i < kSpokes; ++i) {
      if (sigma[i] == i + 1) throw input_error("permutation has a fixed point");
      p.pairs.emplace_back(std::min(i + 1, sigma[i]), std::max(i + 1, sigma[i]));
    }
    std::sort(p.pairs.begin(), p.pairs.end());
    return p;
  }

  // Each cycle runs from its smallest spoke towards the smaller neighbour.
  std::array<int, kSpokes + 1> successor() const {
    std::array<std::vector<int>, kSpokes + 1> adj;
    for (auto [a, b] : pairs) {
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
    std::array<int, kSpokes + 1> succ{};
    std::array<bool, kSpokes + 1> seen{};
    for (int s = 1; s <= kSpokes; ++s) {
      if (seen[s]) continue;
      auto nb = adj[s];
      std::sort(nb.begin(), nb.end());
      if (nb[0] == nb[1]) {
        succ[s] = nb[0];
        succ[nb[0]] = s;
        seen[s] = seen[nb[0]] = true;
        continue;
      }
      int prev = s, cur = nb[0];
      succ[s] = cur;
      seen[s] = true;
      while (cur != s) {
        seen[cur] = true;
        int nx = adj[cur][0] == prev ? adj[cur][1] : adj[cur][0];
        succ[cur] = nx;
        prev = cur;
        cur = nx;
      }
    }
    return succ;
  }

  friend bool operator<(const PreCap& a, const PreCap& b) { return a.pairs < b.pairs; }
  friend bool operator==(const PreCap& a, const PreCap& b) { return a.pairs == b.pairs; }
};

inline std::vector<PreCap> generate_precaps() {
  std::array<int, kSpokes> p;
  for (int i = 0; i < kSpokes; ++i) p[i] = i + 1;
  std::set<PreCap> out;
  do {
    bool fixed = false;
    for (int i = 0; i < kSpokes; ++i) fixed |= p[i] == i + 1;
    if (!fixed) out.insert(PreCap::from_permutation(p));
  } while (std::next_permutation(p.begin(), p.end()));
  return {out.begin(), out.end()};
}

inline Cap precap_to_basic_cap(const PreCap& pc) {
  auto succ = pc.successor();
  std::vector<Arc> arcs;
  for (int a = 1; a <= kSpokes; ++a) arcs.push_back({2 * a, 2 * succ[a] - 1});
  Cap c = make_cap(std::move(arcs), {});
  c.inter = forced_interactions(c.arcs);
  return c;
}

// Basic caps numbered by the lexicographic order of their flattened arc labels.
inline std::vector<Cap> generate_basic_caps() {
  std::vector<Cap> out;
  for (auto& p : generate_precaps()) out.push_back(precap_to_basic_cap(p));
  std::sort(out.begin(), out.end(),
            [](const Cap& a, const Cap& b) { return a.flattened() < b.flattened(); });
  return out;
}

// Listing order of planar caps: reversed flattened arc labels, then number of
// interactions, then the interaction labels.
inline bool listing_less(const Cap& a, const Cap& b) {
  auto fa = a.flattened(), fb = b.flattened();
  if (fa != fb) return std::lexicographical_compare(fa.rbegin(), fa.rend(), fb.rbegin(), fb.rend());
  int na = __builtin_popcount(a.inter), nb = __builtin_popcount(b.inter);
  if (na != nb) return na < nb;
  return a.interaction_labels() < b.interaction_labels();
}

struct CapListing {
  std::vector<Cap> basic;
  std::size_t candidates = 0;  // after zeroing and dedup
  std::vector<Cap> planar;     // listing order
  std::vector<int> basic_index;  // per planar cap
};

// Candidate products: every subset of the 15 arc pairs times the basic cap;
// a subset that names a spoke-sharing pair is zeroed out as a whole.
inline std::vector<InteractionMask> candidate_interactions(const Cap& basic) {
  InteractionMask sharing = spoke_sharing_pairs(basic.arcs);
  std::vector<InteractionMask> v;
  for (InteractionMask s = 0; s < (InteractionMask(1) << kArcPairs); ++s) {
    if (s & sharing) continue;
    v.push_back(s | basic.inter);
  }
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

inline CapListing generate_planar_caps() {
  CapListing L;
  L.basic = generate_basic_caps();
  std::vector<std::pair<Cap, int>> keep;
  for (int b = 0; b < int(L.basic.size()); ++b) {
    for (InteractionMask m : candidate_interactions(L.basic[b])) {
      ++L.candidates;
      Cap c = L.basic[b];
      c.inter = m;
      if (is_planar_cap(c)) keep.emplace_back(std::move(c), b);
    }
  }
  std::sort(keep.begin(), keep.end(),
            [](const auto& x, const auto& y) { return listing_less(x.first, y.first); });
  for (auto& [c, b] : keep) {
    L.planar.push_back(std::move(c));
    L.basic_index.push_back(b);
  }
  return L;
}

inline int find_cap(const std::vector<Cap>& listing, const Cap& c) {
  auto it = std::lower_bound(listing.begin(), listing.end(), c, listing_less);
  if (it != listing.end() && *it == c) return int(it - listing.begin());
  return -1;
}

}  // namespace bkd
