#pragma once

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "caps.hpp"
#include "regions.hpp"

namespace bkd {

struct parse_error : input_error {
  std::size_t begin, end;
  parse_error(const std::string& msg, std::size_t b, std::size_t e)
      : input_error(msg + " at " + std::to_string(b)), begin(b), end(e) {}
};

// arc[a,b], arc[c, A[l1,...]] or V[a,b]
struct Factor {
  enum Kind { Arc, ColoredArc, Interaction } kind;
  int a = 0, b = 0;  // arc ends or interaction labels
  int color = 0;
  std::vector<int> labels;
  std::size_t begin = 0, end = 0;
};

struct NotationExpr {
  std::vector<Factor> factors;
};

namespace detail {

class NotationLexer {
 public:
  explicit NotationLexer(std::string_view s) : s_(s) {}

  NotationExpr parse() {
    NotationExpr e;
    skip_separators();
    while (pos_ < s_.size()) {
      e.factors.push_back(factor());
      skip_separators();
    }
    if (e.factors.empty()) throw parse_error("empty expression", 0, 0);
    return e;
  }

 private:
  void skip_space() {
    while (pos_ < s_.size() && std::isspace((unsigned char)s_[pos_])) ++pos_;
  }
  void skip_separators() {
    for (;;) {
      skip_space();
      if (pos_ < s_.size() && s_[pos_] == '*') { ++pos_; continue; }
      if (s_.substr(pos_, 2) == "\xC2\xB7") { pos_ += 2; continue; }  // middle dot
      return;
    }
  }
  bool accept(std::string_view t) {
    skip_space();
    if (s_.substr(pos_, t.size()) == t) {
      pos_ += t.size();
      return true;
    }
    return false;
  }
  void expect(std::string_view t, std::size_t start) {
    if (!accept(t)) throw parse_error("expected '" + std::string(t) + "'", start, pos_);
  }
  int integer(std::size_t start) {
    skip_space();
    std::size_t b = pos_;
    while (pos_ < s_.size() && std::isdigit((unsigned char)s_[pos_])) ++pos_;
    if (b == pos_) throw parse_error("expected a number", start, pos_);
    if (pos_ - b > 6) throw parse_error("number too large", b, pos_);
    int v = std::stoi(std::string(s_.substr(b, pos_ - b)));
    if (v <= 0) throw parse_error("labels are positive", b, pos_);
    return v;
  }
  Factor factor() {
    std::size_t start = pos_;
    Factor f;
    f.begin = start;
    if (accept("arc[")) {
      int first = integer(start);
      expect(",", start);
      if (accept("A[")) {
        f.kind = Factor::ColoredArc;
        f.color = first;
        f.labels.push_back(integer(start));
        while (accept(",")) f.labels.push_back(integer(start));
        expect("]", start);
        if (f.labels.size() >= 2) {
          f.a = f.labels[0];
          f.b = f.labels[1];
        }
      } else {
        f.kind = Factor::Arc;
        f.a = first;
        f.b = integer(start);
        if (f.a == f.b) throw parse_error("arc joins a side to itself", start, pos_);
      }
      expect("]", start);
    } else if (accept("V[")) {
      f.kind = Factor::Interaction;
      f.a = integer(start);
      expect(",", start);
      f.b = integer(start);
      expect("]", start);
    } else {
      throw parse_error("expected arc[ or V[", start, start);
    }
    f.end = pos_;
    return f;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

inline std::string join_labels(const std::vector<int>& v) {
  std::string r;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) r += ", ";
    r += std::to_string(v[i]);
  }
  return r;
}

}  // namespace detail

inline NotationExpr parse_notation(std::string_view text) { return detail::NotationLexer(text).parse(); }

inline Cap cap_from_factors(const NotationExpr& e) {
  std::vector<Arc> arcs;
  std::vector<std::pair<int, int>> inter;
  for (auto& f : e.factors) {
    switch (f.kind) {
      case Factor::Arc:
        if (f.a > kSides || f.b > kSides) throw parse_error("side label out of range", f.begin, f.end);
        arcs.push_back({f.a, f.b});
        break;
      case Factor::ColoredArc:
        if (f.labels.size() != 2) throw parse_error("a cap arc has two sides", f.begin, f.end);
        if (f.a > kSides || f.b > kSides) throw parse_error("side label out of range", f.begin, f.end);
        arcs.push_back({f.a, f.b});
        break;
      case Factor::Interaction:
        inter.emplace_back(f.a, f.b);
        break;
    }
  }
  std::vector<int> seen(kSides + 1, 0);
  for (std::size_t i = 0; i < arcs.size(); ++i)
    for (int s : arcs[i]) {
      if (seen[s]++) {
        std::size_t k = 0, idx = 0;
        for (; k < e.factors.size(); ++k)
          if (e.factors[k].kind != Factor::Interaction && idx++ == i) break;
        throw parse_error("side label " + std::to_string(s) + " used twice", e.factors[k].begin,
                          e.factors[k].end);
      }
    }
  return make_cap(std::move(arcs), inter);
}

inline Cap parse_cap(std::string_view text) { return cap_from_factors(parse_notation(text)); }

// Colours per arc in the cap's own arc order.
inline std::pair<Cap, std::vector<int>> parse_colored_cap(std::string_view text) {
  auto e = parse_notation(text);
  Cap c = cap_from_factors(e);
  std::vector<int> colors(c.arcs.size(), 0);
  for (auto& f : e.factors)
    if (f.kind == Factor::ColoredArc) colors[c.arc_with_side(f.a)] = f.color;
    else if (f.kind == Factor::Arc) throw parse_error("uncoloured arc in a coloured cap", f.begin, f.end);
  return {c, colors};
}

struct ColoredCircle {
  int color = 0;
  std::vector<int> labels;  // sorted
};

struct ColoredState {
  std::vector<ColoredCircle> circles;
  std::vector<std::pair<int, int>> interactions;  // by smallest circle label
};

inline ColoredState parse_colored_state(std::string_view text) {
  auto e = parse_notation(text);
  ColoredState st;
  std::set<int> used;
  for (auto& f : e.factors) {
    if (f.kind == Factor::Arc) throw parse_error("expected arc[c, A[...]]", f.begin, f.end);
    if (f.kind == Factor::Interaction) {
      st.interactions.emplace_back(std::min(f.a, f.b), std::max(f.a, f.b));
      continue;
    }
    ColoredCircle c{f.color, f.labels};
    std::sort(c.labels.begin(), c.labels.end());
    for (int l : c.labels)
      if (!used.insert(l).second)
        throw parse_error("label " + std::to_string(l) + " in two circles", f.begin, f.end);
    st.circles.push_back(std::move(c));
  }
  return st;
}

inline std::string render_cap(const Cap& c) {
  std::string r;
  for (auto& a : c.arcs) {
    if (!r.empty()) r += ' ';
    r += "arc[" + std::to_string(a[0]) + ", " + std::to_string(a[1]) + "]";
  }
  for (auto [x, y] : c.interaction_labels()) r += " V[" + std::to_string(x) + ", " + std::to_string(y) + "]";
  return r;
}

// Arcs ordered by colour, then labels, as in the results table.
inline std::string render_colored_cap(const Cap& c, const std::vector<int>& colors) {
  std::vector<std::pair<int, Arc>> order;
  for (int i = 0; i < c.arc_count(); ++i) order.emplace_back(colors[i], c.arcs[i]);
  std::sort(order.begin(), order.end());
  std::string r;
  for (auto& [col, a] : order) {
    if (!r.empty()) r += ' ';
    r += "arc[" + std::to_string(col) + ", A[" + std::to_string(a[0]) + ", " + std::to_string(a[1]) + "]]";
  }
  for (auto [x, y] : c.interaction_labels()) r += " V[" + std::to_string(x) + ", " + std::to_string(y) + "]";
  return r;
}

// Circles ordered by colour, size, then labels; constraints named by each
// circle's smallest label, deduplicated.
inline ColoredState colored_state_of(const CappedState& cs, const std::vector<int>& circle_colors) {
  ColoredState st;
  std::vector<int> order(cs.circles.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    auto ka = std::make_tuple(circle_colors[a], cs.circles[a].labels.size(), cs.circles[a].labels);
    auto kb = std::make_tuple(circle_colors[b], cs.circles[b].labels.size(), cs.circles[b].labels);
    return ka < kb;
  });
  for (int i : order) st.circles.push_back({circle_colors[i], cs.circles[i].labels});
  std::set<std::pair<int, int>> v;
  for (auto [a, b] : cs.constraints) {
    int x = cs.circles[a].labels.front(), y = cs.circles[b].labels.front();
    v.emplace(std::min(x, y), std::max(x, y));
  }
  st.interactions.assign(v.begin(), v.end());
  return st;
}

inline std::string render_colored_state(const ColoredState& st) {
  std::string r;
  for (auto& c : st.circles) {
    if (!r.empty()) r += ' ';
    r += "arc[" + std::to_string(c.color) + ", A[" + detail::join_labels(c.labels) + "]]";
  }
  for (auto [x, y] : st.interactions) r += " V[" + std::to_string(x) + ", " + std::to_string(y) + "]";
  return r;
}

}  // namespace bkd
