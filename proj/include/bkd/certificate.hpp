#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "coloring.hpp"
#include "extension.hpp"
#include "notation.hpp"
#include "regions.hpp"

namespace bkd {

struct CheckResult {
  bool ok = false;
  std::string reason;
  explicit operator bool() const { return ok; }
};

inline CheckResult fail(std::string why) { return {false, std::move(why)}; }

// Recompute the capped state from the cap and region state alone and check
// that the recorded circle colouring is a proper 4-colouring of it.
inline CheckResult check_color(const Certificate& cert, const Region& region) {
  if (cert.state >> region.edge_count()) return fail("state has bits beyond the region");
  CappedState cs;
  try {
    cs = glue(cert.cap, region, cert.state);
  } catch (const input_error& e) {
    return fail(e.what());
  }
  if (cert.circle_colors.size() != cs.circles.size()) return fail("colouring does not cover the circles");
  for (int c : cert.circle_colors)
    if (c < 1 || c > 4) return fail("colour outside 1..4");
  for (auto [a, b] : cs.constraints) {
    if (a == b) return fail("a circle is constrained against itself");
    if (cert.circle_colors[a] == cert.circle_colors[b]) return fail("adjacent circles share a colour");
  }
  return {true, {}};
}

// The certificate's colouring must restrict to the coloured cap on every arc
// except at most two pairwise non-interacting arcs, which are yellow.
inline CheckResult check_cap_match(const Cap& cap, const std::vector<int>& cap_colors,
                                   const Certificate& cert, const Region& region) {
  if (!(cap == cert.cap)) return fail("certificate is for a different cap");
  if (cap_colors.size() != cap.arcs.size()) return fail("coloured cap has the wrong arc count");
  if (cert.recolored.size() > 2) return fail("more than two arcs recoloured");
  std::set<int> rec(cert.recolored.begin(), cert.recolored.end());
  if (rec.size() != cert.recolored.size()) return fail("arc recoloured twice");
  for (int i : rec)
    if (i < 0 || i >= cap.arc_count()) return fail("recoloured arc out of range");
  for (int i : rec)
    for (int j : rec)
      if (i < j && cap.constrained(i, j)) return fail("recoloured arcs interact");
  auto cs = glue(cap, region, cert.state);
  if (cert.circle_colors.size() != cs.circles.size()) return fail("colouring does not cover the circles");
  for (int i = 0; i < cap.arc_count(); ++i) {
    int got = cert.circle_colors[cs.circle_of_arc[i]];
    int want = rec.count(i) ? int(kYellow) : cap_colors[i];
    if (got != want) return fail("arc " + std::to_string(cap.arcs[i][0]) + " has the wrong colour");
  }
  return {true, {}};
}

// One record of the results table plus the machine-readable sidecar fields.
struct CertificateRecord {
  int cap_number = 0, number = 0, cap_index = -1;
  std::string colored_cap;    // table column 3
  std::string colored_state;  // table column 4
  std::string state_bits;
  std::string recolored;      // smaller labels of recoloured arcs, "-" if none
};

inline CertificateRecord to_record(const Certificate& c, const Region& region) {
  CertificateRecord r;
  r.cap_number = c.colored.cap_number;
  r.number = c.colored.number;
  r.cap_index = c.colored.cap_index;
  r.colored_cap = render_colored_cap(c.cap, c.colored.colors);
  r.colored_state = render_colored_state(colored_state_of(glue(c.cap, region, c.state), c.circle_colors));
  r.state_bits = state_string(c.state, region.edge_count());
  if (c.recolored.empty()) r.recolored = "-";
  for (int i : c.recolored) {
    if (!r.recolored.empty()) r.recolored += ',';
    r.recolored += std::to_string(c.cap.arcs[i][0]);
  }
  return r;
}

inline std::string table_line(const CertificateRecord& r) {
  return std::to_string(r.cap_number) + '\t' + std::to_string(r.number) + '\t' + r.colored_cap + '\t' +
         r.colored_state;
}

inline std::string sidecar_line(const CertificateRecord& r) {
  return std::to_string(r.cap_number) + '\t' + std::to_string(r.number) + '\t' +
         std::to_string(r.cap_index) + '\t' + r.state_bits + '\t' + r.recolored;
}

// Rebuild a certificate from its text. Circle colours are read from the
// colored-state column by matching label sets against the recomputed circles;
// the recorded interaction list is compared but never trusted.
struct Rebuilt {
  Certificate cert;
  std::vector<int> cap_colors;
  bool interactions_match = false;
};

inline std::optional<Rebuilt> from_record(const CertificateRecord& r, const Region& region, std::string* why) {
  auto bad = [&](const std::string& m) -> std::optional<Rebuilt> {
    if (why) *why = m;
    return std::nullopt;
  };
  try {
    auto [cap, colors] = parse_colored_cap(r.colored_cap);
    Rebuilt out;
    out.cap_colors = colors;
    out.cert.cap = cap;
    out.cert.colored = {r.cap_index, r.cap_number, r.number, colors, 0};
    out.cert.state = parse_state_string(r.state_bits, region.edge_count());
    if (r.recolored != "-") {
      std::stringstream ss(r.recolored);
      std::string tok;
      while (std::getline(ss, tok, ',')) {
        int a = cap.arc_with_side(std::stoi(tok));
        if (a < 0) return bad("recoloured arc names an unknown side");
        out.cert.recolored.push_back(a);
      }
    }
    auto st = parse_colored_state(r.colored_state);
    auto cs = glue(cap, region, out.cert.state);
    std::map<std::vector<int>, int> color_of;
    for (auto& c : st.circles) color_of[c.labels] = c.color;
    out.cert.circle_colors.resize(cs.circles.size());
    for (std::size_t i = 0; i < cs.circles.size(); ++i) {
      auto it = color_of.find(cs.circles[i].labels);
      if (it == color_of.end()) return bad("recorded circles do not match the recomputed state");
      out.cert.circle_colors[i] = it->second;
    }
    if (st.circles.size() != cs.circles.size()) return bad("recorded state has extra circles");
    auto recomputed = colored_state_of(cs, out.cert.circle_colors);
    auto rec = st.interactions;
    std::sort(rec.begin(), rec.end());
    out.interactions_match = rec == recomputed.interactions;
    return out;
  } catch (const std::exception& e) {
    return bad(e.what());
  }
}

}  // namespace bkd
