#include <CLI11.hpp>
#include <json.hpp>

#include <cctype>
#include <fstream>
#include <iostream>

#include "bkd/pipeline.hpp"

using json = nlohmann::json;
using namespace bkd;

namespace {

PlaneTrivalentGraph load_graph(const std::string& file, const std::string& builtin) {
  if (!builtin.empty()) {
    auto lower = [](std::string s) {
      for (char& c : s) c = char(std::tolower((unsigned char)c));
      return s;
    };
    std::string names;
    for (auto& e : corpus::small_graphs()) {
      if (lower(e.name) == lower(builtin)) return e.graph;
      names += ' ' + e.name;
    }
    throw input_error("unknown built-in graph '" + builtin + "' (available:" + names + ")");
  }
  if (file.empty()) throw input_error("give a graph file or --builtin");
  std::ifstream in(file);
  if (!in) throw input_error("cannot open " + file);
  return read_graph(in);
}

StateVector parse_bits(const std::string& s) {
  StateVector v(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '0' && s[i] != '1') throw input_error("state must be a string of 0/1");
    v.bits[i] = s[i] - '0';
  }
  return v;
}

int report(const PipelineConfig& cfg, const std::string& stage, const StageSummary& s) {
  if (cfg.format == "machine") {
    json j;
    j["stage"] = stage;
    j["ok"] = s.ok;
    j["seconds"] = s.seconds;
    for (auto& [k, v] : s.counts) j["counts"][k] = v;
    if (!s.message.empty()) j["message"] = s.message;
    std::cout << j.dump() << '\n';
  } else {
    std::cout << stage << (s.ok ? "" : " (FAILED)") << '\n';
    for (auto& [k, v] : s.counts) std::cout << "  " << k << ": " << v << '\n';
    if (!s.message.empty()) std::cout << "  " << s.message << '\n';
    std::cout << "  seconds: " << s.seconds << '\n';
  }
  return s.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Birkhoff diamond reducibility pipeline and state-sum tools"};
  app.require_subcommand(1);

  PipelineConfig cfg;
  std::string snap = "snapshots";
  app.add_option("--snapshot-dir", snap, "directory for stage snapshots")->capture_default_str();
  app.add_option("--workers", cfg.workers, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--region-file", cfg.region_file, "configuration region definition (default: Birkhoff diamond)");
  app.add_option("--reducer-file", cfg.reducer_file, "reducer region definition (default: two-vertex reducer)");
  app.add_option("--format", cfg.format, "output format")
      ->check(CLI::IsMember({"table", "machine"}))
      ->capture_default_str();
  app.add_option("--limit-caps", cfg.limit_caps, "only process the first N caps / coloured caps");
  app.add_option("--seed-order", cfg.seed_order,
                 "shuffle the recolouring order (after the empty set) with this seed; 0 keeps the default");
  app.add_option("--checkpoint-every", cfg.checkpoint_every, "records per extend checkpoint")
      ->check(CLI::PositiveNumber);

  auto* gen = app.add_subcommand("gen-caps", "enumerate planar caps");
  auto* color = app.add_subcommand("color-caps", "colour caps against the reducer");
  auto* extend = app.add_subcommand("extend", "search extensions into the configuration (resumable)");
  auto* verify = app.add_subcommand("verify", "re-check every certificate independently");
  auto* all = app.add_subcommand("all", "run gen-caps, color-caps, extend and verify");
  auto* small = app.add_subcommand("smallgraph", "Penrose / Tait checks on the built-in small graphs");

  std::string gfile, gbuiltin, bits;
  auto* trace = app.add_subcommand("trace", "trace the circles of one state");
  trace->add_option("graph", gfile, "graph file");
  trace->add_option("--builtin", gbuiltin, "built-in graph name");
  trace->add_option("--state", bits, "state bits, edge 0 first (default all flat)");
  auto* penrose = app.add_subcommand("penrose", "Penrose polynomial by state sum");
  penrose->add_option("graph", gfile, "graph file");
  penrose->add_option("--builtin", gbuiltin, "built-in graph name");
  auto* tait = app.add_subcommand("tait-check", "compare 4-face colourings with state 3-colourings");
  tait->add_option("graph", gfile, "graph file");
  tait->add_option("--builtin", gbuiltin, "built-in graph name");

  CLI11_PARSE(app, argc, argv);
  cfg.snapshot_dir = snap;

  try {
    if (gen->parsed()) return report(cfg, "gen-caps", cmd_gen_caps(cfg));
    if (color->parsed()) return report(cfg, "color-caps", cmd_color_caps(cfg));
    if (extend->parsed()) return report(cfg, "extend", cmd_extend(cfg));
    if (verify->parsed()) return report(cfg, "verify", cmd_verify(cfg));
    if (all->parsed()) {
      int rc = report(cfg, "gen-caps", cmd_gen_caps(cfg));
      rc |= report(cfg, "color-caps", cmd_color_caps(cfg));
      rc |= report(cfg, "extend", cmd_extend(cfg));
      rc |= report(cfg, "verify", cmd_verify(cfg));
      return rc;
    }
    if (small->parsed()) {
      auto rows = cmd_smallgraph();
      bool ok = true;
      json j = json::array();
      for (auto& r : rows) {
        ok = ok && r.tait.holds && r.state_to_plane;
        if (cfg.format == "machine") {
          j.push_back({{"graph", r.name}, {"vertices", r.vertices}, {"edges", r.edges},
                       {"penrose", r.penrose}, {"penrose_at_3", r.penrose_at_3},
                       {"plane_4_colorings", r.tait.plane_4_colorings},
                       {"state_3_colorings", r.tait.state_3_colorings}, {"tait", r.tait.holds},
                       {"state_to_plane", r.state_to_plane}});
        } else {
          std::cout << r.name << "  V=" << r.vertices << " E=" << r.edges << "\n  P(n) = "
                    << polynomial_string(r.penrose) << "\n  P(3) = " << r.penrose_at_3
                    << "  4-face colourings = " << r.tait.plane_4_colorings
                    << "  state 3-colourings = " << r.tait.state_3_colorings
                    << "  tait " << (r.tait.holds ? "ok" : "FAILED") << "  state->plane "
                    << (r.state_to_plane ? "ok" : "FAILED") << '\n';
        }
      }
      if (cfg.format == "machine") std::cout << j.dump() << '\n';
      return ok ? 0 : 1;
    }
    auto g = load_graph(gfile, gbuiltin);
    if (trace->parsed()) {
      auto s = bits.empty() ? StateVector(g.edge_count()) : parse_bits(bits);
      auto cs = trace_circles(g, s);
      if (cfg.format == "machine") {
        std::cout << json{{"circles", cs.circles}, {"adjacency", cs.adjacency},
                          {"euler_characteristic", euler_characteristic(g, s)},
                          {"bridge", cs.has_bridge()}}.dump()
                  << '\n';
      } else {
        std::cout << cs.circles.size() << " circles, euler characteristic " << euler_characteristic(g, s)
                  << (cs.has_bridge() ? ", has a bridge" : "") << '\n';
        for (std::size_t i = 0; i < cs.circles.size(); ++i) {
          std::cout << "  circle " << i << ":";
          for (int seg : cs.circles[i]) std::cout << ' ' << seg;
          std::cout << '\n';
        }
      }
      return 0;
    }
    if (penrose->parsed()) {
      auto p = penrose_polynomial(g);
      if (cfg.format == "machine")
        std::cout << json{{"coefficients", p}, {"at_3", evaluate(p, 3)}}.dump() << '\n';
      else
        std::cout << "P(n) = " << polynomial_string(p) << "\nP(3) = " << evaluate(p, 3) << '\n';
      return 0;
    }
    if (tait->parsed()) {
      auto r = verify_tait_identity(g);
      if (cfg.format == "machine")
        std::cout << json{{"holds", r.holds}, {"plane_4_colorings", r.plane_4_colorings},
                          {"state_3_colorings", r.state_3_colorings}, {"diagnostic", r.diagnostic}}.dump()
                  << '\n';
      else
        std::cout << "4-face colourings: " << r.plane_4_colorings << "\nstate 3-colourings: "
                  << r.state_3_colorings << '\n'
                  << (r.holds ? "identity holds" : "identity FAILS " + r.diagnostic) << '\n';
      return r.holds ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
