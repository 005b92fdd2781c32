#pragma once

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "caps.hpp"
#include "certificate.hpp"
#include "coloring.hpp"
#include "extension.hpp"
#include "graph.hpp"
#include "notation.hpp"
#include "parallel.hpp"
#include "regions.hpp"

namespace bkd {

namespace fs = std::filesystem;

struct PipelineConfig {
  fs::path snapshot_dir = "snapshots";
  int workers = 1;
  std::string region_file;   // configuration; built-in Birkhoff diamond if empty
  std::string reducer_file;  // built-in reducer if empty
  std::string format = "table";
  long limit_caps = -1;
  unsigned seed_order = 0;
  std::size_t checkpoint_every = 256;
  long stop_after = -1;  // stop extend after this many new records (testing resume)
  std::ostream* log = &std::cerr;
};

inline std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
  std::ostringstream o;
  for (unsigned i = 0; i < len; ++i) o << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return o.str();
}

// Snapshot: one header line "#bkd <kind> v1 key=value ... sha256=<body digest>"
// followed by the body, one record per line.
struct Snapshot {
  std::string kind;
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<std::string> lines;

  std::string body() const {
    std::string b;
    for (auto& l : lines) b += l + '\n';
    return b;
  }
  std::string get(const std::string& k) const {
    for (auto& [a, b] : meta)
      if (a == k) return b;
    return {};
  }
};

inline void write_snapshot(const fs::path& path, const Snapshot& s) {
  std::string body = s.body();
  std::string head = "#bkd " + s.kind + " v1";
  for (auto& [k, v] : s.meta) head += ' ' + k + '=' + v;
  head += " sha256=" + sha256_hex(body) + '\n';
  fs::create_directories(path.parent_path().empty() ? fs::path(".") : path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << head << body;
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

inline Snapshot read_snapshot(const fs::path& path, const std::string& kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("missing snapshot " + path.string() + " (run the earlier stage first)");
  std::string head;
  std::getline(in, head);
  std::istringstream hs(head);
  std::string tag, k, ver;
  hs >> tag >> k >> ver;
  if (tag != "#bkd" || k != kind || ver != "v1")
    throw std::runtime_error(path.string() + " is not a " + kind + " snapshot");
  Snapshot s;
  s.kind = kind;
  std::string kv, digest;
  while (hs >> kv) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) continue;
    if (kv.substr(0, eq) == "sha256") digest = kv.substr(eq + 1);
    else s.meta.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
  }
  std::string line;
  while (std::getline(in, line)) s.lines.push_back(line);
  if (sha256_hex(s.body()) != digest) throw std::runtime_error(path.string() + ": digest mismatch");
  return s;
}

inline std::vector<std::string> split_tabs(const std::string& l) {
  std::vector<std::string> f;
  std::stringstream ss(l);
  std::string t;
  while (std::getline(ss, t, '\t')) f.push_back(t);
  return f;
}

inline Region load_region(const std::string& file, Region fallback) {
  if (file.empty()) return fallback;
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open region file " + file);
  return read_region(in);
}

namespace paths {
inline fs::path caps(const PipelineConfig& c) { return c.snapshot_dir / "caps.snap"; }
inline fs::path colored(const PipelineConfig& c) { return c.snapshot_dir / "colored_caps.snap"; }
inline fs::path table(const PipelineConfig& c) { return c.snapshot_dir / "certificates.tsv"; }
inline fs::path sidecar(const PipelineConfig& c) { return c.snapshot_dir / "certificates.sidecar.tsv"; }
inline fs::path partial(const PipelineConfig& c) { return c.snapshot_dir / "certificates.partial"; }
}  // namespace paths

struct StageSummary {
  std::map<std::string, long long> counts;
  double seconds = 0;
  bool ok = true;
  std::string message;
};

inline StageSummary cmd_gen_caps(const PipelineConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  auto L = generate_planar_caps();
  Snapshot s;
  s.kind = "caps";
  s.meta = {{"precaps", std::to_string(generate_precaps().size())},
            {"candidates", std::to_string(L.candidates)},
            {"planar", std::to_string(L.planar.size())}};
  for (auto& c : L.planar) s.lines.push_back(render_cap(c));
  write_snapshot(paths::caps(cfg), s);
  StageSummary r;
  r.counts = {{"precaps", (long long)generate_precaps().size()},
              {"candidates", (long long)L.candidates},
              {"planar", (long long)L.planar.size()}};
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

inline std::vector<Cap> load_caps(const PipelineConfig& cfg) {
  auto s = read_snapshot(paths::caps(cfg), "caps");
  std::vector<Cap> caps;
  caps.reserve(s.lines.size());
  for (auto& l : s.lines) caps.push_back(parse_cap(l));
  return caps;
}

inline StageSummary cmd_color_caps(const PipelineConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  auto caps = load_caps(cfg);
  if (cfg.limit_caps >= 0 && std::size_t(cfg.limit_caps) < caps.size()) caps.resize(cfg.limit_caps);
  Region reducer = load_region(cfg.reducer_file, reducer_region());
  auto set = colored_caps_for_reducer(caps, reducer, cfg.workers);
  Snapshot s;
  s.kind = "colored-caps";
  s.meta = {{"caps", std::to_string(caps.size())},
            {"standalone", std::to_string(set.standalone_colorable)},
            {"compatible", std::to_string(set.compatible_caps)},
            {"colored", std::to_string(set.colored.size())},
            {"reducer", reducer.name}};
  for (auto& cc : set.colored)
    s.lines.push_back(std::to_string(cc.cap_number) + '\t' + std::to_string(cc.number) + '\t' +
                      std::to_string(cc.cap_index) + '\t' + render_colored_cap(caps[cc.cap_index], cc.colors) +
                      '\t' + state_string(cc.witness, reducer.edge_count()));
  write_snapshot(paths::colored(cfg), s);
  StageSummary r;
  r.counts = {{"standalone", (long long)set.standalone_colorable},
              {"compatible", (long long)set.compatible_caps},
              {"colored", (long long)set.colored.size()}};
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

struct LoadedColored {
  std::vector<Cap> caps;  // per record
  std::vector<ColoredCap> colored;
  std::vector<std::string> witness_bits;
};

inline LoadedColored load_colored(const PipelineConfig& cfg) {
  auto s = read_snapshot(paths::colored(cfg), "colored-caps");
  LoadedColored out;
  for (auto& l : s.lines) {
    auto f = split_tabs(l);
    if (f.size() != 5) throw std::runtime_error("malformed colored-cap record: " + l);
    auto [cap, colors] = parse_colored_cap(f[3]);
    ColoredCap cc{std::stoi(f[2]), std::stoi(f[0]), std::stoi(f[1]), colors, 0};
    out.caps.push_back(cap);
    out.colored.push_back(cc);
    out.witness_bits.push_back(f[4]);
  }
  return out;
}

inline std::vector<std::vector<int>> ordered_recolor_sets(const Cap& cap, unsigned seed) {
  auto sets = recolor_sets(cap);
  if (seed) {
    std::mt19937 rng(seed);
    std::shuffle(sets.begin() + 1, sets.end(), rng);
  }
  return sets;
}

inline std::optional<Certificate> find_extension_ordered(const ExtensionTable& t, const Cap& cap,
                                                         const ColoredCap& cc, unsigned seed) {
  if (!seed) return find_extension(t, cap, cc);
  for (auto& rs : ordered_recolor_sets(cap, seed)) {
    auto col = cc.colors;
    for (int i : rs) col[i] = kYellow;
    RegionState s = t.first_state(cap, col);
    if (s != ExtensionTable::kNone) return make_certificate(cap, cc, t.region(), s, rs);
  }
  return std::nullopt;
}

inline std::string partial_line(const CertificateRecord& r) { return sidecar_line(r) + '\t' + r.colored_cap + '\t' + r.colored_state; }

inline StageSummary cmd_extend(const PipelineConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  auto& log = *cfg.log;
  auto data = load_colored(cfg);
  std::size_t n = data.colored.size();
  if (cfg.limit_caps >= 0 && std::size_t(cfg.limit_caps) < n) n = cfg.limit_caps;
  Region region = load_region(cfg.region_file, birkhoff_region());

  // resume: keep complete lines of a previous partial run
  std::vector<std::string> done;
  {
    std::ifstream in(paths::partial(cfg), std::ios::binary);
    std::string all((std::istreambuf_iterator<char>(in)), {});
    std::size_t pos = 0;
    while (true) {
      auto nl = all.find('\n', pos);
      if (nl == std::string::npos) break;
      std::string l = all.substr(pos, nl - pos);
      pos = nl + 1;
      auto f = split_tabs(l);
      if (f.size() != 7 || done.size() >= n) break;
      auto& cc = data.colored[done.size()];
      if (std::stoi(f[0]) != cc.cap_number || std::stoi(f[1]) != cc.number) break;
      done.push_back(l);
    }
  }
  if (!done.empty()) log << "extend: resuming after " << done.size() << " records\n";
  {
    std::ofstream out(paths::partial(cfg), std::ios::binary | std::ios::trunc);
    for (auto& l : done) out << l << '\n';
  }

  StageSummary r;
  if (done.size() < n) {
    log << "extend: building state table for " << region.name << " (" << region.state_count() << " states)\n";
    ExtensionTable table(region);
    log << "extend: " << table.pairing_count() << " boundary pairings, " << table.structure_count()
        << " distinct state structures\n";
    std::size_t i = done.size();
    long produced = 0;
    while (i < n) {
      std::size_t j = std::min(n, i + cfg.checkpoint_every);
      if (cfg.stop_after >= 0) j = std::min(j, i + std::size_t(std::max(0L, cfg.stop_after - produced)));
      if (j == i) {
        r.ok = false;
        r.message = "stopped";
        break;
      }
      std::vector<std::string> lines(j - i);
      std::vector<char> failed(j - i, 0);
      parallel_for(j - i, cfg.workers, [&](std::size_t k) {
        auto& cc = data.colored[i + k];
        auto cert = find_extension_ordered(table, data.caps[i + k], cc, cfg.seed_order);
        if (!cert) {
          failed[k] = 1;
          CertificateRecord rec;
          rec.cap_number = cc.cap_number;
          rec.number = cc.number;
          rec.cap_index = cc.cap_index;
          rec.colored_cap = render_colored_cap(data.caps[i + k], cc.colors);
          rec.colored_state = "NOT-FOUND";
          rec.state_bits = "-";
          rec.recolored = "-";
          lines[k] = partial_line(rec);
        } else {
          lines[k] = partial_line(to_record(*cert, region));
        }
      });
      std::ofstream out(paths::partial(cfg), std::ios::binary | std::ios::app);
      for (auto& l : lines) out << l << '\n';
      out.flush();
      for (std::size_t k = 0; k < lines.size(); ++k) {
        done.push_back(lines[k]);
        if (failed[k]) r.ok = false;
      }
      produced += long(j - i);
      i = j;
      log << "extend: " << i << "/" << n << "\n";
    }
    if (r.message == "stopped") {
      r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      r.counts["records"] = (long long)done.size();
      return r;
    }
  }

  Snapshot tab, side;
  tab.kind = "certificates";
  side.kind = "certificate-sidecar";
  long long failures = 0;
  std::array<long long, 3> by_size{};
  for (auto& l : done) {
    auto f = split_tabs(l);
    tab.lines.push_back(f[0] + '\t' + f[1] + '\t' + f[5] + '\t' + f[6]);
    side.lines.push_back(f[0] + '\t' + f[1] + '\t' + f[2] + '\t' + f[3] + '\t' + f[4]);
    if (f[6] == "NOT-FOUND") {
      ++failures;
      r.ok = false;
    } else {
      by_size[f[4] == "-" ? 0 : 1 + std::count(f[4].begin(), f[4].end(), ',')]++;
    }
  }
  tab.meta = {{"records", std::to_string(done.size())}, {"region", region.name}};
  side.meta = tab.meta;
  write_snapshot(paths::table(cfg), tab);
  write_snapshot(paths::sidecar(cfg), side);
  fs::remove(paths::partial(cfg));
  r.counts = {{"records", (long long)done.size()},
              {"not_found", failures},
              {"recolor0", by_size[0]},
              {"recolor1", by_size[1]},
              {"recolor2", by_size[2]}};
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

inline StageSummary cmd_verify(const PipelineConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  StageSummary r;
  auto data = load_colored(cfg);
  Region region = load_region(cfg.region_file, birkhoff_region());
  auto tab = read_snapshot(paths::table(cfg), "certificates");
  auto side = read_snapshot(paths::sidecar(cfg), "certificate-sidecar");
  if (tab.lines.size() != side.lines.size()) throw std::runtime_error("table and sidecar differ in length");
  std::size_t n = tab.lines.size();
  std::vector<std::string> errors(n);
  std::vector<char> inter_ok(n, 0);
  parallel_for(n, cfg.workers, [&](std::size_t i) {
    auto t = split_tabs(tab.lines[i]);
    auto s = split_tabs(side.lines[i]);
    if (t.size() != 4 || s.size() != 5 || t[0] != s[0] || t[1] != s[1]) {
      errors[i] = "malformed record";
      return;
    }
    CertificateRecord rec{std::stoi(t[0]), std::stoi(t[1]), std::stoi(s[2]), t[2], t[3], s[3], s[4]};
    if (i >= data.colored.size() || data.colored[i].cap_number != rec.cap_number ||
        data.colored[i].number != rec.number) {
      errors[i] = "record does not line up with the coloured caps";
      return;
    }
    std::string why;
    auto rb = from_record(rec, region, &why);
    if (!rb) {
      errors[i] = why;
      return;
    }
    inter_ok[i] = rb->interactions_match;
    if (auto c = check_color(rb->cert, region); !c) {
      errors[i] = "checkColor: " + c.reason;
      return;
    }
    if (auto c = check_cap_match(data.caps[i], data.colored[i].colors, rb->cert, region); !c)
      errors[i] = "checkCapMatch: " + c.reason;
  });
  long long bad = 0, mismatched_lists = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!errors[i].empty()) {
      ++bad;
      if (bad <= 10) *cfg.log << "verify: record " << i + 1 << ": " << errors[i] << '\n';
    } else if (!inter_ok[i]) {
      ++mismatched_lists;
    }
  }
  long long expected = (long long)data.colored.size();
  if (cfg.limit_caps >= 0) expected = std::min<long long>(expected, cfg.limit_caps);
  r.counts = {{"records", (long long)n}, {"expected", expected}, {"invalid", bad},
              {"interaction_list_mismatch", mismatched_lists}};
  r.ok = bad == 0 && (long long)n == expected;
  if ((long long)n != expected) r.message = "record count differs from the coloured caps";
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

struct SmallGraphRow {
  std::string name;
  int vertices, edges;
  std::vector<long long> penrose;
  long long penrose_at_3;
  TaitReport tait;
  bool state_to_plane;
};

inline std::vector<SmallGraphRow> cmd_smallgraph() {
  std::vector<SmallGraphRow> rows;
  for (auto& [name, g] : corpus::small_graphs()) {
    auto p = penrose_polynomial(g);
    rows.push_back({name, g.vertex_count(), g.edge_count(), p, evaluate(p, 3), verify_tait_identity(g),
                    verify_state_to_plane_coloring(g)});
  }
  return rows;
}

inline std::string polynomial_string(const std::vector<long long>& c) {
  std::string r;
  for (int k = int(c.size()) - 1; k >= 0; --k) {
    if (!c[k]) continue;
    long long a = c[k];
    if (!r.empty()) r += a < 0 ? " - " : " + ";
    else if (a < 0) r += "-";
    long long m = a < 0 ? -a : a;
    if (m != 1 || k == 0) r += std::to_string(m);
    if (k >= 1) r += "n";
    if (k >= 2) r += "^" + std::to_string(k);
  }
  return r.empty() ? "0" : r;
}

}  // namespace bkd
