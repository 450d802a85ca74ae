#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "corpus.hpp"
#include "rlxt/cli.hpp"
#include "rlxt/errors.hpp"

using namespace rlxt;
using namespace rlxt::testing;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("rlxt_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
    std::ofstream f(path("ex26.txt"), std::ios::binary);
    for (const auto& s : ex26_strings()) f << s << "\n";
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  void write(const std::string& name, const std::string& data) const {
    std::ofstream f(path(name), std::ios::binary);
    f << data;
  }
  std::string ex26_index() {
    const std::string idx = path("ex26.idx");
    EXPECT_EQ(run({"build", path("ex26.txt"), "-o", idx}).code, 0);
    return idx;
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, LocateGolden) {
  const auto idx = ex26_index();
  const Result r = run({"locate", idx, "ac", "", "zzz"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out,
            "3 18 7 13\n"
            "26 1 2 3 4 11 23 15 21 10 22 14 6 5 12 24 16 19 8 26 18 7 13 25 17 20 9\n"
            "0\n");
  EXPECT_EQ(run({"locate", idx, "--count-only", "ac"}).out, "3\n");
  EXPECT_EQ(run({"count", idx, "ca", "b"}).out, "2\n9\n");
  EXPECT_EQ(run({"locate", idx, "--hex", "6163"}).out, "3 18 7 13\n");
  EXPECT_EQ(run({"locate", idx, "--hex", "6"}).code, kExitFormat);
}

TEST_F(Cli, PatternFileKeepsOrderAcrossThreads) {
  const auto idx = ex26_index();
  std::string pats, want;
  const std::vector<std::string> ps{"a", "b", "c", "ac", "ca", "bb", "aac", ""};
  for (int rep = 0; rep < 20; ++rep) {
    for (const auto& p : ps) pats += p + "\n";
  }
  write("pats.txt", pats);
  ::setenv("TRIE_RINDEX_THREADS", "1", 1);
  const Result one = run({"locate", idx, "--patterns", path("pats.txt")});
  ::setenv("TRIE_RINDEX_THREADS", "4", 1);
  const Result four = run({"locate", idx, "--patterns", path("pats.txt")});
  ::unsetenv("TRIE_RINDEX_THREADS");
  EXPECT_EQ(one.code, 0);
  EXPECT_EQ(one.out, four.out);
  EXPECT_EQ(std::count(one.out.begin(), one.out.end(), '\n'), 160);
  EXPECT_EQ(one.out.substr(0, one.out.find('\n')), "8 2 3 4 11 23 15 21 10");
}

TEST_F(Cli, WorkerThreadCap) {
  ::setenv("TRIE_RINDEX_THREADS", "2", 1);
  EXPECT_LE(worker_threads(100), 2u);
  EXPECT_EQ(worker_threads(1), 1u);
  ::unsetenv("TRIE_RINDEX_THREADS");
  EXPECT_GE(worker_threads(100), 1u);
}

TEST_F(Cli, StatsGolden) {
  const auto idx = ex26_index();
  const Result r = run({"stats", idx});
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["n"], 26);
  EXPECT_EQ(j["r"], 8);
  EXPECT_EQ(j["r_prime"], 8);
  EXPECT_EQ(j["classes_eqr"], 8);
  EXPECT_EQ(j["classes_approx"], 12);
  EXPECT_EQ(j["classes_eq"], 14);
  EXPECT_EQ(j["omega"], 20);
  EXPECT_EQ(j["gamma_r"], 8);
  EXPECT_EQ(j["r_c"]["a"], 3);
  std::uint64_t payload = 0;
  for (const auto& [k, v] : j["section_bytes"].items()) payload += v.get<std::uint64_t>();
  EXPECT_EQ(payload, j["payload_bytes"].get<std::uint64_t>());
  EXPECT_EQ(j["file_bytes"].get<std::uint64_t>(), fs::file_size(idx));
  EXPECT_EQ(j["file_bytes"].get<std::uint64_t>() - payload, 5 + 2 + 4 + 20 * j["section_bytes"].size());
  EXPECT_EQ(run({"stats", idx}).out, r.out);
}

TEST_F(Cli, StatsRoundTripsInProcess) {
  const auto idx = ex26_index();
  const auto from_file = nlohmann::json::parse(run({"stats", idx}).out);
  const auto in_process = nlohmann::json::parse(stats_json(Index{RIndex(ex26())}).dump());
  EXPECT_EQ(from_file, in_process);
}

TEST_F(Cli, EmptyInputAndSampledEngine) {
  write("empty.txt", "");
  const std::string idx = path("empty.idx");
  ASSERT_EQ(run({"build", path("empty.txt"), "-o", idx}).code, 0);
  const auto j = nlohmann::json::parse(run({"stats", idx}).out);
  EXPECT_EQ(j["n"], 1);
  EXPECT_EQ(j["r"], 0);
  EXPECT_EQ(run({"locate", idx, ""}).out, "1 1\n");

  const std::string s = path("ex26s.idx");
  ASSERT_EQ(run({"build", path("ex26.txt"), "-o", s, "--engine", "sampled", "--t", "4"}).code, 0);
  EXPECT_EQ(run({"locate", s, "ac"}).out, "3 18 7 13\n");
  const auto js = nlohmann::json::parse(run({"stats", s}).out);
  EXPECT_EQ(js["engine"], "sampled");
  EXPECT_EQ(js["t"], 4);
  EXPECT_EQ(js["classes_eq"], 14);
}

TEST_F(Cli, ErrorsAndExitCodes) {
  write("nul.txt", std::string("ab\n\0\n", 5));
  EXPECT_EQ(run({"build", path("nul.txt"), "-o", path("x.idx")}).code, kExitFormat);
  write("junk.idx", "NOTANINDEX");
  EXPECT_EQ(run({"locate", path("junk.idx"), "a"}).code, kExitVersion);
  const auto idx = ex26_index();
  std::string bytes;
  {
    std::ifstream f(idx, std::ios::binary);
    bytes.assign(std::istreambuf_iterator<char>(f), {});
  }
  bytes[5] = 2;
  write("v2.idx", bytes);
  EXPECT_EQ(run({"count", path("v2.idx"), "a"}).code, kExitVersion);
  EXPECT_EQ(run({"count", path("ex26.idx").substr(0, 3) + "missing", "a"}).code, kExitIo);
  EXPECT_EQ(run({"frobnicate"}).code, kExitFormat);
  EXPECT_EQ(run({"count", idx}).code, kExitFormat);
  write("edges.txt", "3\n1\t97\n1\t97\n");
  EXPECT_EQ(run({"build", path("edges.txt"), "--format", "edges", "-o", path("e.idx")}).code, kExitFormat);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(Cli, VerifyPassesAndDetectsCorruption) {
  const Result ok = run({"verify", path("ex26.txt")});
  EXPECT_EQ(ok.code, 0) << ok.err;
  EXPECT_TRUE(nlohmann::json::parse(ok.out)["pass"].get<bool>());
  const Result bad = run({"verify", path("ex26.txt"), "--corrupt-phi"});
  EXPECT_EQ(bad.code, kExitVerifyFailed);
  EXPECT_NE(bad.err.find("phi-oracle"), std::string::npos);
  Rng rng(81);
  const LabeledTrie t = random_trie(rng, 8, 3);
  std::ofstream(path("r8.txt")) << [&] {
    std::ostringstream s;
    write_edges_trie(s, t);
    return s.str();
  }();
  const Result full = run({"verify", path("r8.txt"), "--format", "edges", "--level", "full"});
  EXPECT_EQ(full.code, 0) << full.out;
  const auto j = nlohmann::json::parse(full.out);
  bool saw = false;
  for (const auto& c : j["checks"]) saw = saw || c["name"] == "attractor-all-connected";
  EXPECT_TRUE(saw);
}

TEST_F(Cli, BenchCsv) {
  const Result r = run({"bench", path("ex26.txt"), "--t", "1,4,100", "--queries", "20", "--length", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "engine,t,n,r,build_ms,index_bits,machinery_bits,count_us,locate_us_per_occ,patterns,occ");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 10);
  }
  EXPECT_EQ(rows, 4);
}

TEST_F(Cli, Binary) {
  const std::string cmd = std::string(RLXT_BINARY) + " build " + path("ex26.txt") + " -o " +
                          path("b.idx") + " && " + RLXT_BINARY + " locate " + path("b.idx") +
                          " ac > " + path("out.txt");
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  std::ifstream f(path("out.txt"));
  std::string line;
  std::getline(f, line);
  EXPECT_EQ(line, "3 18 7 13");
  const std::string bad = std::string(RLXT_BINARY) + " locate " + path("ex26.txt") + " a 2>/dev/null";
  EXPECT_EQ(WEXITSTATUS(std::system(bad.c_str())), kExitVersion);
}

TEST(Hex, Decode) {
  EXPECT_EQ(decode_hex("00ff41"), std::string("\0\xff" "A", 3));
  EXPECT_THROW(decode_hex("0g"), FormatError);
}
