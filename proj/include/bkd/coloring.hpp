#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "caps.hpp"
#include "graph.hpp"
#include "parallel.hpp"
#include "regions.hpp"

namespace bkd {

enum Color : int { kUncolored = 0, kRed = 1, kBlue = 2, kGreen = 3, kYellow = 4 };

struct ColoredCap {
  int cap_index = -1;   // position in the planar cap listing
  int cap_number = 0;   // 1-based among reducer-compatible caps
  int number = 0;       // 1-based colouring number within its cap
  std::vector<int> colors;  // per arc, listing order of the cap's arcs
  RegionState witness = 0;  // first reducer state carrying the colouring
};

// Arc colourings are pinned with the arc on side 1 red and the arc on side 2
// blue, which picks one representative of each orbit of colour permutations.
inline std::vector<int> canonical_pins(const Cap& c) {
  std::vector<int> pins(c.arcs.size(), 0);
  pins[c.arc_with_side(1)] = kRed;
  pins[c.arc_with_side(2)] = kBlue;
  return pins;
}

inline std::vector<std::pair<int, int>> arc_constraints(const Cap& c) {
  std::vector<std::pair<int, int>> r;
  for (int i = 0; i < c.arc_count(); ++i)
    for (int j = i + 1; j < c.arc_count(); ++j)
      if (c.constrained(i, j)) r.emplace_back(i, j);
  return r;
}

inline bool cap_standalone_colorable(const Cap& c, int n = 3) {
  bool found = false;
  enumerate_colorings(c.arc_count(), arc_constraints(c), n, canonical_pins(c),
                      [&](const std::vector<int>&) { found = true; return false; });
  return found;
}

inline std::size_t colorable_caps_standalone(const std::vector<Cap>& caps) {
  return std::size_t(std::count_if(caps.begin(), caps.end(),
                                   [](const Cap& c) { return cap_standalone_colorable(c); }));
}

struct ArcColoring {
  std::vector<int> colors;
  RegionState witness;
};

// Canonically pinned arc colourings that extend to a proper 3-colouring of
// some capped state cap # region, lexicographic by colour tuple.
inline std::vector<ArcColoring> region_compatible_colorings(const Cap& cap, const Region& region,
                                                            int n = 3) {
  std::map<std::vector<int>, RegionState> seen;
  auto pins = canonical_pins(cap);
  for (RegionState s : region_states(region)) {
    auto cs = glue(cap, region, s);
    proper_colorings(cs, n, pins, [&](const std::vector<int>& col) {
      std::vector<int> arcs(cap.arcs.size());
      for (int i = 0; i < cap.arc_count(); ++i) arcs[i] = col[cs.circle_of_arc[i]];
      seen.emplace(std::move(arcs), s);
      return true;
    });
  }
  std::vector<ArcColoring> out;
  for (auto& [c, s] : seen) out.push_back({c, s});
  return out;
}

struct ColoredCapSet {
  std::size_t standalone_colorable = 0;
  std::size_t compatible_caps = 0;
  std::vector<ColoredCap> colored;
};

inline ColoredCapSet colored_caps_for_reducer(const std::vector<Cap>& planar, const Region& reducer,
                                              int workers = 1) {
  std::vector<char> standalone(planar.size(), 0);
  std::vector<std::vector<ArcColoring>> per(planar.size());
  parallel_for(planar.size(), workers, [&](std::size_t i) {
    if (!cap_standalone_colorable(planar[i])) return;
    standalone[i] = 1;
    per[i] = region_compatible_colorings(planar[i], reducer);
  });
  ColoredCapSet out;
  for (std::size_t i = 0; i < planar.size(); ++i) {
    out.standalone_colorable += standalone[i];
    if (per[i].empty()) continue;
    ++out.compatible_caps;
    int no = 0;
    for (auto& ac : per[i])
      out.colored.push_back({int(i), int(out.compatible_caps), ++no, ac.colors, ac.witness});
  }
  return out;
}

}  // namespace bkd
