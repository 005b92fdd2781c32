#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "bkd/cap_of_state.hpp"
#include "bkd/caps.hpp"
#include "bkd/notation.hpp"
#include "bkd/regions.hpp"

using namespace bkd;

namespace {

const CapListing& listing() {
  static const CapListing L = generate_planar_caps();
  return L;
}

// cycle type of a fixed-point-free permutation, as sorted cycle lengths
std::vector<int> cycle_type(const std::array<int, 6>& p) {
  std::vector<int> t;
  std::array<bool, 6> seen{};
  for (int i = 0; i < 6; ++i) {
    if (seen[i]) continue;
    int n = 0;
    for (int j = i; !seen[j]; j = p[j] - 1) seen[j] = true, ++n;
    t.push_back(n);
  }
  std::sort(t.begin(), t.end());
  return t;
}

// planarity written straight from the separation rule, on side positions
bool planar_oracle(const Cap& c) {
  auto inside = [](int x, int lo, int hi) { return lo < x && x < hi; };
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      if (i >= j || !c.interacts(i, j)) continue;
      for (int z = 0; z < 6; ++z) {
        if (z == i || z == j) continue;
        int lo = c.arcs[z][0], hi = c.arcs[z][1];
        int xi = inside(c.arcs[i][0], lo, hi) + inside(c.arcs[i][1], lo, hi);
        int yi = inside(c.arcs[j][0], lo, hi) + inside(c.arcs[j][1], lo, hi);
        bool sep = (xi == 2 && yi == 0) || (xi == 0 && yi == 2);
        if (sep && !c.constrained(z, i) && !c.constrained(z, j)) return false;
      }
    }
  return true;
}

}  // namespace

TEST(PreCaps, CountMatchesDerangementClasses) {
  std::array<int, 6> p{1, 2, 3, 4, 5, 6};
  int derangements = 0;
  std::set<std::set<std::pair<int, int>>> by_edges;
  std::set<std::multiset<std::pair<int, int>>> classes;
  std::map<std::vector<int>, std::set<std::multiset<std::pair<int, int>>>> by_type;
  do {
    bool fixed = false;
    for (int i = 0; i < 6; ++i) fixed |= p[i] == i + 1;
    if (fixed) continue;
    ++derangements;
    std::multiset<std::pair<int, int>> m;
    for (int i = 0; i < 6; ++i) m.insert({std::min(i + 1, p[i]), std::max(i + 1, p[i])});
    classes.insert(m);
    by_type[cycle_type(p)].insert(m);
  } while (std::next_permutation(p.begin(), p.end()));
  EXPECT_EQ(derangements, 265);
  EXPECT_EQ(classes.size(), 130u);
  EXPECT_EQ(by_type[{6}].size(), 60u);
  EXPECT_EQ((by_type[{2, 4}].size()), 45u);
  EXPECT_EQ((by_type[{3, 3}].size()), 10u);
  EXPECT_EQ((by_type[{2, 2, 2}].size()), 15u);
  auto pre = generate_precaps();
  ASSERT_EQ(pre.size(), 130u);
  std::set<std::multiset<std::pair<int, int>>> mine;
  for (auto& pc : pre) mine.insert(std::multiset<std::pair<int, int>>(pc.pairs.begin(), pc.pairs.end()));
  EXPECT_EQ(mine, classes);
}

TEST(PreCaps, RejectsFixedPoint) {
  EXPECT_THROW(PreCap::from_permutation({1, 3, 2, 5, 6, 4}), input_error);
}

TEST(BasicCaps, DoublingOfTwoCycles) {
  // sigma = (1 2 5 6)(3 4)
  auto pc = PreCap::from_permutation({2, 5, 4, 3, 6, 1});
  auto c = precap_to_basic_cap(pc);
  EXPECT_EQ(render_cap(c), "arc[1, 12] arc[2, 3] arc[4, 9] arc[5, 8] arc[6, 7] arc[10, 11]");
  auto basics = generate_basic_caps();
  ASSERT_EQ(basics.size(), 130u);
  EXPECT_EQ(basics[90], c);  // basic cap 91
}

TEST(BasicCaps, ForcedCrossingGetsDiamond) {
  // the drawn cap B' is not in canonical side order, so check the rule on it directly
  Cap bprime = parse_cap("arc[1,5] arc[2,3] arc[4,12] arc[6,7] arc[8,9] arc[10,11]");
  bprime.inter = forced_interactions(bprime.arcs);
  EXPECT_EQ(bprime.interaction_labels(), (std::vector<std::pair<int, int>>{{1, 4}}));
  EXPECT_TRUE(is_planar_cap(bprime));
  // a cap whose arcs are all nested needs no diamonds
  EXPECT_EQ(forced_interactions(parse_cap("arc[1,12] arc[2,11] arc[3,10] arc[4,9] arc[5,8] arc[6,7]").arcs), 0u);
}

TEST(BasicCaps, AllPlanarWithOnlyForcedInteractions) {
  for (auto& c : generate_basic_caps()) {
    EXPECT_TRUE(is_planar_cap(c)) << render_cap(c);
    EXPECT_EQ(c.inter, forced_interactions(c.arcs));
    for (auto [i, j] : c.interaction_pairs()) {
      EXPECT_TRUE(crosses(c.arcs[i], c.arcs[j]));
      EXPECT_FALSE(shares_spoke(c.arcs[i], c.arcs[j]));
    }
  }
}

TEST(Planarity, WorkedExamples) {
  Cap base = parse_cap("arc[1,12] arc[2,3] arc[4,9] arc[5,8] arc[6,7] arc[10,11]");
  EXPECT_TRUE(is_planar_cap(base));
  EXPECT_FALSE(is_planar_cap(parse_cap("arc[1,12] arc[2,3] arc[4,9] arc[5,8] arc[6,7] arc[10,11] V[1,5]")));
  EXPECT_TRUE(is_planar_cap(parse_cap("arc[1,12] arc[2,3] arc[4,9] arc[5,8] arc[6,7] arc[10,11] V[1,5] V[1,4]")));
  EXPECT_TRUE(is_planar_cap(parse_cap("arc[1,12] arc[2,3] arc[4,9] arc[5,8] arc[6,7] arc[10,11] V[4,5]")));
  auto data = parse_cap("arc[1,5] * arc[2,3] * arc[4,12] * arc[6,7] * arc[8,9] * arc[10,11] * V[1,4] * V[2,6] * V[4,6]");
  EXPECT_EQ(data.interaction_pairs().size(), 3u);
  EXPECT_TRUE(is_planar_cap(data));
}

TEST(Planarity, AgreesWithSeparationOracle) {
  std::mt19937 rng(7);
  auto basics = generate_basic_caps();
  for (int t = 0; t < 20000; ++t) {
    Cap c = basics[rng() % basics.size()];
    c.inter = (InteractionMask(rng()) & ((1u << kArcPairs) - 1) & ~spoke_sharing_pairs(c.arcs)) | c.inter;
    ASSERT_EQ(is_planar_cap(c), planar_oracle(c)) << render_cap(c);
  }
}

TEST(PlanarCaps, ListingIsSoundAndDuplicateFree) {
  const auto& L = listing();
  ASSERT_EQ(L.basic.size(), 130u);
  std::set<Cap> seen;
  for (std::size_t i = 0; i < L.planar.size(); ++i) {
    const Cap& c = L.planar[i];
    ASSERT_TRUE(seen.insert(c).second);
    ASSERT_TRUE(planar_oracle(c));
    const Cap& b = L.basic[L.basic_index[i]];
    ASSERT_EQ(c.arcs, b.arcs);
    ASSERT_EQ(c.inter & b.inter, b.inter);  // contains its basic cap
    ASSERT_EQ(c.inter & spoke_sharing_pairs(c.arcs), 0u);
    if (i) {
      ASSERT_TRUE(listing_less(L.planar[i - 1], c));
    }
    ASSERT_EQ(find_cap(L.planar, c), int(i));
  }
}

TEST(PlanarCaps, CandidateCountAgreesWithNaiveProduct) {
  std::set<std::pair<std::vector<Arc>, InteractionMask>> naive;
  for (auto& b : generate_basic_caps()) {
    auto sharing = spoke_sharing_pairs(b.arcs);
    for (InteractionMask s = 0; s < (1u << kArcPairs); ++s)
      if (!(s & sharing)) naive.insert({b.arcs, s | b.inter});
  }
  EXPECT_EQ(naive.size(), listing().candidates);
  std::size_t planar = 0;
  for (auto& [arcs, m] : naive) {
    Cap c;
    c.arcs = arcs;
    c.inter = m;
    planar += planar_oracle(c);
  }
  EXPECT_EQ(planar, listing().planar.size());
}

TEST(MakeCap, RejectsBadInput) {
  EXPECT_THROW(make_cap({{1, 2}, {3, 4}}, {}), input_error);
  EXPECT_THROW(make_cap({{1, 1}, {2, 3}, {4, 5}, {6, 7}, {8, 9}, {10, 12}}, {}), input_error);
  EXPECT_THROW(make_cap({{1, 13}, {2, 3}, {4, 5}, {6, 7}, {8, 9}, {10, 11}}, {}), input_error);
  // sides 1 and 2 belong to spoke 1
  EXPECT_THROW(make_cap({{1, 5}, {2, 3}, {4, 12}, {6, 7}, {8, 9}, {10, 11}}, {{1, 2}}), input_error);
}

// Random plane graphs: the Birkhoff diamond inside a ring, with chords added
// across outside faces. Every bridge-free state must simplify to a listed cap,
// and gluing that cap to the region state (spoke twists adjusted for the side
// swaps) must give back the circles that touch the region.
TEST(ComputeCap, LandsInListingAndMatchesGlue) {
  Region bd = birkhoff_region();
  std::mt19937 rng(11);
  std::vector<int> spoke_edge(kSpokes + 1, -1);
  for (int e = 0; e < bd.edge_count(); ++e)
    for (auto& end : bd.edges[e])
      if (end.on_boundary()) spoke_edge[end.spoke] = e;
  int checked = 0, missing = 0;
  for (int trial = 0; trial < 40; ++trial) {
    auto [g, emb] = embed_in_ring(bd);
    int chords = 1 + int(rng() % 4);
    for (int c = 0; c < chords; ++c) {
      auto faces = trace_circles(g, StateVector(g.edge_count()));
      std::vector<int> pts;
      for (int e = 0; e < g.edge_count(); ++e) {
        if (e < int(emb.region_edge.size()) && emb.region_edge[e]) continue;
        for (int s = 0; s < 2; ++s) pts.push_back(2 * g.edge_halves[e][0] + s);
      }
      auto seg = [&](int p) {
        int h = p / 2, e = g.edge_of[h];
        return faces.circle_of_segment[2 * e + (g.edge_halves[e][0] == h ? p % 2 : 1 - p % 2)];
      };
      for (int tries = 0; tries < 200; ++tries) {
        int a = pts[rng() % pts.size()], b = pts[rng() % pts.size()];
        if (g.edge_of[a / 2] == g.edge_of[b / 2] || seg(a) != seg(b)) continue;
        g = add_chord(g, a, b);
        break;
      }
    }
    emb.region_edge.resize(g.edge_count(), false);
    int E = g.edge_count();
    for (int k = 0; k < 300; ++k) {
      StateVector s(E);
      for (int e = 0; e < E; ++e) s.bits[e] = rng() & 1;
      CapOfState r;
      try {
        r = compute_cap(g, emb, s);
      } catch (const input_error&) {
        continue;  // bridge outside the region
      }
      ++checked;
      if (find_cap(listing().planar, r.cap) < 0) ++missing;
      RegionState beta = 0;
      for (int e = 0; e < bd.edge_count(); ++e)
        if (s.bits[emb.graph_edge_of_region_edge[e]]) beta |= RegionState(1) << e;
      for (int j = 0; j < kSpokes; ++j)
        if ((r.swapped >> j) & 1u) beta ^= RegionState(1) << spoke_edge[j + 1];
      auto full = trace_circles(g, s);
      auto cs = glue(r.cap, bd, beta);
      ASSERT_EQ(full.size(), cs.circles.size() + std::size_t(r.closed_circles)) << render_cap(r.cap);
    }
  }
  EXPECT_GT(checked, 1000);
  EXPECT_EQ(missing, 0);
}
