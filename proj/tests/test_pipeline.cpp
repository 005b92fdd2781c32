#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "bkd/pipeline.hpp"

using namespace bkd;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

void spit(const fs::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << s;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("bkd_test_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

PipelineConfig config(const fs::path& dir, int workers, std::ostream& log) {
  PipelineConfig c;
  c.snapshot_dir = dir;
  c.workers = workers;
  c.limit_caps = 300;
  c.checkpoint_every = 32;
  c.log = &log;
  return c;
}

}  // namespace

TEST(Snapshot, RoundTripAndDigest) {
  TempDir d("snap");
  Snapshot s{"demo", {{"n", "2"}}, {"a\tb", "c"}};
  auto p = d.path / "x.snap";
  write_snapshot(p, s);
  EXPECT_FALSE(fs::exists(d.path / "x.snap.tmp"));
  auto back = read_snapshot(p, "demo");
  EXPECT_EQ(back.lines, s.lines);
  EXPECT_EQ(back.get("n"), "2");
  EXPECT_THROW(read_snapshot(p, "other"), std::runtime_error);
  EXPECT_THROW(read_snapshot(d.path / "missing.snap", "demo"), std::runtime_error);
  auto text = slurp(p);
  text.back() = 'X';
  spit(p, text + "\n");
  EXPECT_THROW(read_snapshot(p, "demo"), std::runtime_error);
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

// gen-caps, color-caps, extend and verify on a prefix of the cap listing; the
// second run uses three workers and is interrupted, then resumed.
TEST(Pipeline, EndToEndDeterministicResumableAndTamperEvident) {
  std::ostringstream log;
  TempDir a("a"), b("b");
  auto ca = config(a.path, 1, log);
  auto cb = config(b.path, 3, log);

  auto g = cmd_gen_caps(ca);
  EXPECT_EQ(g.counts["precaps"], 130);
  fs::copy_file(paths::caps(ca), paths::caps(cb));

  auto col = cmd_color_caps(ca);
  cmd_color_caps(cb);
  ASSERT_GT(col.counts["colored"], 0);
  EXPECT_EQ(slurp(paths::colored(ca)), slurp(paths::colored(cb)));

  auto ea = cmd_extend(ca);
  EXPECT_TRUE(ea.ok);
  EXPECT_EQ(ea.counts["not_found"], 0);
  EXPECT_EQ(ea.counts["records"], 300);
  EXPECT_FALSE(fs::exists(paths::partial(ca)));
  auto va = cmd_verify(ca);
  EXPECT_TRUE(va.ok) << log.str();
  EXPECT_EQ(va.counts["invalid"], 0);

  cb.stop_after = 70;
  auto stopped = cmd_extend(cb);
  EXPECT_FALSE(stopped.ok);
  EXPECT_EQ(stopped.message, "stopped");
  EXPECT_TRUE(fs::exists(paths::partial(cb)));
  EXPECT_FALSE(fs::exists(paths::table(cb)));
  // a torn last line is dropped on resume
  {
    std::ofstream out(paths::partial(cb), std::ios::binary | std::ios::app);
    out << "17\t3\t12";
  }
  cb.stop_after = -1;
  auto eb = cmd_extend(cb);
  EXPECT_TRUE(eb.ok);
  EXPECT_NE(log.str().find("resuming after 70 records"), std::string::npos);
  EXPECT_EQ(slurp(paths::table(ca)), slurp(paths::table(cb)));
  EXPECT_EQ(slurp(paths::sidecar(ca)), slurp(paths::sidecar(cb)));

  // rerunning a finished stage reproduces its output
  auto before = slurp(paths::table(ca));
  cmd_extend(ca);
  EXPECT_EQ(slurp(paths::table(ca)), before);

  // a different recolouring order still certifies everything
  TempDir c("c");
  auto cc = config(c.path, 2, log);
  cc.seed_order = 7;
  fs::copy_file(paths::colored(ca), paths::colored(cc));
  EXPECT_TRUE(cmd_extend(cc).ok);
  EXPECT_TRUE(cmd_verify(cc).ok);

  // edit a colour in the table and re-seal it: verification must fail
  auto tab = read_snapshot(paths::table(cb), "certificates");
  auto& line = tab.lines[5];
  auto at = line.rfind("arc[4");
  if (at == std::string::npos) at = line.rfind("arc[3");
  ASSERT_NE(at, std::string::npos);
  line[at + 4] = line[at + 4] == '1' ? '2' : '1';
  write_snapshot(paths::table(cb), tab);
  auto vb = cmd_verify(cb);
  EXPECT_FALSE(vb.ok);
  EXPECT_GE(vb.counts["invalid"], 1);

  // edit without re-sealing: the snapshot is refused outright
  auto text = slurp(paths::sidecar(cb));
  auto pos = text.find("\t-\n");
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, 3, "\t1\n");
  spit(paths::sidecar(cb), text);
  EXPECT_THROW(cmd_verify(cb), std::runtime_error);

  // dropping records is reported as a count mismatch
  auto side = read_snapshot(paths::sidecar(ca), "certificate-sidecar");
  auto tab2 = read_snapshot(paths::table(ca), "certificates");
  side.lines.pop_back();
  tab2.lines.pop_back();
  write_snapshot(paths::sidecar(ca), side);
  write_snapshot(paths::table(ca), tab2);
  auto short_run = cmd_verify(ca);
  EXPECT_FALSE(short_run.ok);
  EXPECT_EQ(short_run.counts["invalid"], 0);
}

TEST(Pipeline, LaterStagesNeedEarlierSnapshots) {
  std::ostringstream log;
  TempDir d("empty");
  auto c = config(d.path, 1, log);
  EXPECT_THROW(cmd_color_caps(c), std::runtime_error);
  EXPECT_THROW(cmd_extend(c), std::runtime_error);
  EXPECT_THROW(cmd_verify(c), std::runtime_error);
}

TEST(SmallGraphs, PenroseAndTaitAgree) {
  auto rows = cmd_smallgraph();
  ASSERT_FALSE(rows.empty());
  for (auto& r : rows) {
    EXPECT_TRUE(r.tait.holds) << r.name;
    EXPECT_TRUE(r.state_to_plane) << r.name;
  }
  EXPECT_EQ(polynomial_string({0, 2, -3, 1}), "n^3 - 3n^2 + 2n");
}
