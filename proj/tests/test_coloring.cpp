#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "bkd/coloring.hpp"
#include "bkd/notation.hpp"

using namespace bkd;

namespace {

const std::vector<Cap>& planar() {
  static const std::vector<Cap> p = generate_planar_caps().planar;
  return p;
}

const ColoredCapSet& colored() {
  static const ColoredCapSet s = colored_caps_for_reducer(planar(), reducer_region(), 1);
  return s;
}

// all proper colourings of a capped state by counting through n^m
std::vector<std::vector<int>> brute_colorings(const CappedState& cs, int n) {
  int m = int(cs.circles.size());
  std::vector<std::vector<int>> out;
  std::vector<int> c(m, 1);
  for (;;) {
    bool ok = true;
    for (auto [a, b] : cs.constraints) ok = ok && c[a] != c[b];
    if (ok) out.push_back(c);
    int i = m - 1;
    while (i >= 0 && ++c[i] > n) c[i--] = 1;
    if (i < 0) break;
  }
  return out;
}

// arc colourings (arc@1 red, arc@2 blue) that extend over some reducer state
std::set<std::vector<int>> brute_compatible(const Cap& cap, const Region& reducer) {
  std::set<std::vector<int>> r;
  int a1 = cap.arc_with_side(1), a2 = cap.arc_with_side(2);
  for (RegionState s = 0; s < reducer.state_count(); ++s) {
    auto cs = glue(cap, reducer, s);
    for (auto& col : brute_colorings(cs, 3)) {
      std::vector<int> arcs(6);
      for (int i = 0; i < 6; ++i) arcs[i] = col[cs.circle_of_arc[i]];
      if (arcs[a1] == kRed && arcs[a2] == kBlue) r.insert(arcs);
    }
  }
  return r;
}

const ColoredCap* find_colored(int cap_number, int number) {
  for (auto& cc : colored().colored)
    if (cc.cap_number == cap_number && cc.number == number) return &cc;
  return nullptr;
}

}  // namespace

TEST(Coloring, ReducerCountsMatchPaper) {
  EXPECT_EQ(colored().compatible_caps, 3744u);
  EXPECT_EQ(colored().colored.size(), 7210u);
}

TEST(Coloring, ResultsTableRows) {
  struct Row {
    int cap, no;
    const char* text;
  } rows[] = {
      {1, 1, "arc[1, A[1, 12]] arc[1, A[3, 10]] arc[1, A[5, 8]] arc[2, A[2, 11]] arc[2, A[4, 9]] arc[3, A[6, 7]]"},
      {1, 2, "arc[1, A[1, 12]] arc[1, A[3, 10]] arc[2, A[2, 11]] arc[2, A[4, 9]] arc[2, A[5, 8]] arc[3, A[6, 7]]"},
      {47, 2,
       "arc[1, A[1, 12]] arc[1, A[4, 9]] arc[2, A[2, 11]] arc[2, A[3, 10]] arc[2, A[5, 8]] arc[3, A[6, 7]] "
       "V[1, 3] V[1, 6] V[4, 6]"},
      {47, 3,
       "arc[1, A[1, 12]] arc[1, A[4, 9]] arc[2, A[2, 11]] arc[2, A[3, 10]] arc[2, A[6, 7]] arc[3, A[5, 8]] "
       "V[1, 3] V[1, 6] V[4, 6]"},
  };
  for (auto& r : rows) {
    auto* cc = find_colored(r.cap, r.no);
    ASSERT_NE(cc, nullptr) << r.cap << ',' << r.no;
    EXPECT_EQ(render_colored_cap(planar()[cc->cap_index], cc->colors), r.text);
  }
}

TEST(Coloring, CanonicalPinningDividesBySix) {
  std::mt19937 rng(1);
  auto rd = reducer_region();
  for (int t = 0; t < 300; ++t) {
    const Cap& c = planar()[rng() % planar().size()];
    auto cs = glue(c, rd, rng() % 64);
    std::size_t all = 0, pinned = 0;
    proper_colorings(cs, 3, {}, [&](const std::vector<int>&) { ++all; return true; });
    proper_colorings(cs, 3, canonical_pins(c), [&](const std::vector<int>&) { ++pinned; return true; });
    ASSERT_EQ(all, 6 * pinned);
    ASSERT_EQ(all, brute_colorings(cs, 3).size());
  }
}

TEST(Coloring, StandaloneCapColorings) {
  auto b = parse_cap("arc[1,12] arc[2,3] arc[4,9] arc[5,8] arc[6,7] arc[10,11]");
  EXPECT_TRUE(cap_standalone_colorable(b));
  // arcs 1-5 and 4-12 meet through V[1,4], and V[2,6] V[4,6] close a triangle
  // with the spoke-sharing pairs, leaving no 3-colouring
  auto bp = parse_cap("arc[1,5] arc[2,3] arc[4,12] arc[6,7] arc[8,9] arc[10,11] V[1,4] V[2,6] V[4,6]");
  EXPECT_TRUE(is_planar_cap(bp));
  EXPECT_FALSE(cap_standalone_colorable(bp, 3));
  EXPECT_TRUE(cap_standalone_colorable(bp, 4));
}

TEST(Coloring, OneColourWithConstraintsIsEmpty) {
  auto cs = glue(planar()[0], reducer_region(), 0);
  EXPECT_FALSE(has_proper_coloring(cs, 1, {}));
}

TEST(Coloring, CompatibilityAgreesWithBruteForce) {
  std::mt19937 rng(4);
  auto rd = reducer_region();
  for (int t = 0; t < 150; ++t) {
    std::size_t i = rng() % planar().size();
    const Cap& c = planar()[i];
    auto want = brute_compatible(c, rd);
    auto got = region_compatible_colorings(c, rd);
    std::set<std::vector<int>> g;
    for (auto& ac : got) g.insert(ac.colors);
    ASSERT_EQ(g, want) << render_cap(c);
    ASSERT_EQ(got.size(), g.size());
  }
}

TEST(Coloring, ColoredCapsAreWellFormed) {
  auto rd = reducer_region();
  const auto& set = colored();
  int last_cap = -1, last_no = 0, last_index = -1;
  for (auto& cc : set.colored) {
    const Cap& c = planar()[cc.cap_index];
    ASSERT_TRUE(cap_standalone_colorable(c));
    ASSERT_EQ(cc.colors[c.arc_with_side(1)], kRed);
    ASSERT_EQ(cc.colors[c.arc_with_side(2)], kBlue);
    for (int i = 0; i < 6; ++i) {
      ASSERT_GE(cc.colors[i], 1);
      ASSERT_LE(cc.colors[i], 3);
      for (int j = i + 1; j < 6; ++j)
        if (c.constrained(i, j)) {
          ASSERT_NE(cc.colors[i], cc.colors[j]);
        }
    }
    // numbering: caps in listing order, colourings numbered from 1
    if (cc.cap_number == last_cap) {
      ASSERT_EQ(cc.number, last_no + 1);
      ASSERT_EQ(cc.cap_index, last_index);
    } else {
      ASSERT_EQ(cc.cap_number, last_cap + (last_cap < 0 ? 2 : 1));
      ASSERT_EQ(cc.number, 1);
      ASSERT_GT(cc.cap_index, last_index);
    }
    last_cap = cc.cap_number, last_no = cc.number, last_index = cc.cap_index;
    // the witness state carries the colouring, and merged arcs agree
    auto cs = glue(c, rd, cc.witness);
    ASSERT_TRUE(has_proper_coloring(cs, 3, cc.colors));
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j)
        if (cs.circle_of_arc[i] == cs.circle_of_arc[j]) {
          ASSERT_EQ(cc.colors[i], cc.colors[j]);
        }
  }
}

TEST(Coloring, DeterministicAcrossWorkers) {
  std::vector<Cap> some(planar().begin(), planar().begin() + 3000);
  auto a = colored_caps_for_reducer(some, reducer_region(), 1);
  auto b = colored_caps_for_reducer(some, reducer_region(), 3);
  ASSERT_EQ(a.colored.size(), b.colored.size());
  for (std::size_t i = 0; i < a.colored.size(); ++i) {
    EXPECT_EQ(a.colored[i].colors, b.colored[i].colors);
    EXPECT_EQ(a.colored[i].witness, b.colored[i].witness);
  }
}
