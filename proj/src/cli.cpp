#include "rlxt/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "rlxt/errors.hpp"
#include "rlxt/measures.hpp"

namespace rlxt {

namespace {

using Json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

double micros(Clock::duration d) { return std::chrono::duration<double, std::micro>(d).count(); }

std::string label_key(std::uint8_t byte) {
  if (byte >= 0x20 && byte < 0x7f) return std::string(1, static_cast<char>(byte));
  char buf[8];
  std::snprintf(buf, sizeof buf, "0x%02x", byte);
  return buf;
}

LabeledTrie load_trie(const std::string& path, const std::string& format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  if (format == "strings" || format == "A") return read_strings_trie(in);
  return read_edges_trie(in);
}

template <typename Fn>
std::vector<std::string> parallel_lines(std::size_t jobs, Fn fn) {
  std::vector<std::string> lines(jobs);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < jobs; i = next++) lines[i] = fn(i);
  };
  const unsigned workers = worker_threads(jobs);
  if (workers <= 1) {
    work();
    return lines;
  }
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  pool.clear();
  return lines;
}

std::vector<std::string> read_patterns(const std::string& path, bool hex) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) out.push_back(hex ? decode_hex(line) : line);
  return out;
}

std::uint64_t index_count(const Index& index, std::string_view p) {
  return std::visit([&](const auto& ix) { return ix.count(p); }, index);
}

std::vector<NodeId> index_locate(const Index& index, std::string_view p) {
  return std::visit([&](const auto& ix) { return ix.locate(p); }, index);
}

LabeledTrie index_trie(const Index& index) {
  return std::visit([](const auto& ix) { return ix.reconstruct(); }, index);
}

// Boundaries of `fine` include every boundary of `coarse`.
bool refines(const QuotientReport& fine, const QuotientReport& coarse) {
  std::vector<ColexRank> ends;
  for (const auto& c : fine.classes) ends.push_back(c.second);
  for (const auto& c : coarse.classes) {
    if (!std::binary_search(ends.begin(), ends.end(), c.second)) return false;
  }
  return true;
}

struct PatternOracle {
  std::vector<LabelString> patterns;
  std::vector<std::vector<NodeId>> expected;
};

// Every path-label suffix up to length 6 with its occurrences, co-lex ordered.
PatternOracle suffix_oracle(const LabeledTrie& trie, const ColexOrder& colex, std::size_t max_len) {
  std::map<LabelString, std::vector<NodeId>> occ;
  for (ColexRank i = 1; i <= trie.size(); ++i) {
    const NodeId u = colex.node_at(i);
    LabelString suffix;
    NodeId x = u;
    occ[suffix].push_back(u);
    while (x != 1 && suffix.size() < max_len) {
      suffix.insert(suffix.begin(), trie.label(x));
      x = trie.parent(x);
      occ[suffix].push_back(u);
    }
  }
  PatternOracle o;
  for (auto& [p, nodes] : occ) {
    o.patterns.push_back(p);
    o.expected.push_back(std::move(nodes));
  }
  return o;
}

void add_check(Json& checks, const std::string& name, bool pass, const std::string& detail = {}) {
  Json c;
  c["name"] = name;
  c["pass"] = pass;
  if (!detail.empty()) c["detail"] = detail;
  checks.push_back(std::move(c));
}

void add_trie_options(CLI::App* cmd, std::string& input, std::string& format) {
  cmd->add_option("input", input, "trie input file")->required();
  cmd->add_option("--format", format, "strings (one per line) or edges")
      ->check(CLI::IsMember({"strings", "edges", "A", "B"}));
}

std::vector<std::uint32_t> parse_list(const std::string& s) {
  std::vector<std::uint32_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      const unsigned long v = std::stoul(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(static_cast<std::uint32_t>(v));
    } catch (const std::logic_error&) {
      throw DomainError("bad number in list: " + item);
    }
  }
  return out;
}

}  // namespace

unsigned worker_threads(std::size_t jobs) {
  unsigned cap = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("TRIE_RINDEX_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) cap = std::min<unsigned long>(cap, v);
  }
  return static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(cap, jobs)));
}

std::string decode_hex(std::string_view hex) {
  if (hex.size() % 2) throw FormatError("hex pattern has odd length");
  auto digit = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw FormatError(std::string("bad hex digit '") + c + "'");
  };
  std::string out;
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    out.push_back(static_cast<char>(digit(hex[i]) << 4 | digit(hex[i + 1])));
  }
  return out;
}

Json stats_json(const Index& index, std::uint32_t k_max) {
  const LabeledTrie trie = index_trie(index);
  const ColexOrder colex = colex_sort(trie);
  const RlXbwt xbwt(trie, colex);
  Json j;
  j["engine"] = engine_of(index) == Engine::kRIndex ? "rindex" : "sampled";
  j["n"] = trie.size();
  j["sigma"] = trie.sigma();
  j["r"] = xbwt.runs();
  Json rc = Json::object();
  for (Label c = 1; c < trie.sigma(); ++c) rc[label_key(trie.alphabet().byte_of(c))] = xbwt.runs(c);
  j["r_c"] = std::move(rc);
  j["r_prime"] = xbwt.blocks();
  Json entropy = Json::array();
  for (std::uint32_t k = 0; k <= k_max; ++k) {
    entropy.push_back({{"k", k}, {"bits", entropy_hk(trie, colex, k).bits}});
  }
  j["entropy"] = std::move(entropy);
  const auto eqr = quotient(trie, colex, Relation::kSameOut);
  const auto approx = quotient(trie, colex, Relation::kIsomorphic);
  const auto eq = quotient(trie, colex, Relation::kIsomorphicSameLabel);
  j["classes_eqr"] = eqr.classes.size();
  j["classes_approx"] = approx.classes.size();
  j["classes_eq"] = eq.classes.size();
  j["omega"] = eq.omega;
  j["gamma_r"] = gamma_r(trie, colex).size();

  Json sizes;
  if (const auto* ri = std::get_if<RIndex>(&index)) {
    const SpaceReport s = ri->space();
    sizes["topology"] = s.topology;
    sizes["labels"] = s.labels;
    sizes["colex"] = s.colex;
    sizes["rl_xbwt"] = s.rl_xbwt;
    sizes["colors"] = s.colors;
    sizes["samples"] = s.samples;
    sizes["isc"] = s.isc;
    sizes["machinery"] = s.machinery();
    sizes["total"] = s.total();
  } else {
    const auto& si = std::get<SampledIndex>(index);
    j["t"] = si.t();
    j["roots"] = si.roots();
    sizes["navigation"] = si.nav().size_in_bits();
    sizes["sampling"] = si.sampling_bits();
    sizes["total"] = si.size_in_bits();
  }
  j["bits"] = std::move(sizes);

  Sections sections;
  std::visit([&](const auto& ix) { ix.save(sections); }, index);
  Json bytes = Json::object();
  std::uint64_t payload = 0;
  for (const auto& [tag, data] : sections.all()) {
    bytes[tag_name(tag)] = data.size();
    payload += data.size();
  }
  j["section_bytes"] = std::move(bytes);
  j["payload_bytes"] = payload;
  j["file_bytes"] = encode_index(engine_of(index), sections).size();
  return j;
}

Json verify_json(const LabeledTrie& trie, const VerifyOptions& opt) {
  const NodeId n = trie.size();
  const ColexOrder colex = colex_sort(trie);
  RIndex index(trie);
  if (opt.corrupt_phi) index.corrupt_phi_sample_for_testing();
  const std::uint32_t t = std::max<std::uint32_t>(
      1, static_cast<std::uint32_t>(std::ceil(std::sqrt(static_cast<double>(n)))));
  const SampledIndex sampled(trie, t);
  Json checks = Json::array();

  {
    std::uint64_t bad = 0;
    for (NodeId u = 1; u <= n; ++u) {
      const ColexRank i = colex.rank_of(u);
      if (i == n) continue;
      try {
        if (index.phi(u) != colex.node_at(i + 1)) ++bad;
      } catch (const Error&) {
        ++bad;
      }
    }
    add_check(checks, "phi-oracle", bad == 0, std::to_string(bad) + " mismatches");
  }

  PatternOracle oracle = suffix_oracle(trie, colex, 6);
  std::mt19937_64 rng(opt.seed);
  const std::size_t labels = trie.sigma() - 1;
  for (std::uint32_t q = 0; q < opt.random_patterns && labels > 0; ++q) {
    LabelString p(1 + rng() % 10);
    for (auto& c : p) c = static_cast<Label>(1 + rng() % labels);
    oracle.patterns.push_back(p);
    oracle.expected.push_back(oracle_locate(trie, colex, p));
  }
  {
    std::uint64_t bad_locate = 0;
    std::uint64_t bad_count = 0;
    std::uint64_t bad_sampled = 0;
    for (std::size_t q = 0; q < oracle.patterns.size(); ++q) {
      const auto& p = oracle.patterns[q];
      std::vector<NodeId> got;
      try {
        got = index.locate(p);
      } catch (const Error&) {
        got.assign(1, kNoNode);
      }
      if (got != oracle.expected[q]) ++bad_locate;
      if (index.count(p) != oracle.expected[q].size()) ++bad_count;
      if (sampled.locate(p) != oracle.expected[q]) ++bad_sampled;
    }
    const std::string of = " of " + std::to_string(oracle.patterns.size()) + " patterns";
    add_check(checks, "oracle-equivalence", bad_locate == 0, std::to_string(bad_locate) + of);
    add_check(checks, "count-consistency", bad_count == 0, std::to_string(bad_count) + of);
    add_check(checks, "sampled-oracle", bad_sampled == 0,
              "t=" + std::to_string(t) + ", " + std::to_string(bad_sampled) + of);
  }

  {
    bool ok = true;
    try {
      ok = std::get<RIndex>(deserialize_index(serialize_index(index))) == index &&
           std::get<SampledIndex>(deserialize_index(serialize_index(sampled))) == sampled;
    } catch (const Error&) {
      ok = false;
    }
    add_check(checks, "serialization-roundtrip", ok);
    add_check(checks, "reconstruct", index.reconstruct() == trie && sampled.reconstruct() == trie);
  }

  const RlXbwt& xbwt = index.xbwt();
  const std::uint64_t r = xbwt.runs();
  {
    std::uint64_t add = 0;
    std::uint64_t del = 0;
    for (const auto& tr : xbwt.triples()) {
      add += tr.add.size();
      del += tr.del.size();
    }
    const bool blocks_ok = n == 1 || xbwt.blocks() <= 3 * r;
    add_check(checks, "block-size-bounds", del <= r && add <= 2 * r && blocks_ok,
              "r=" + std::to_string(r) + " add=" + std::to_string(add) +
                  " del=" + std::to_string(del) + " blocks=" + std::to_string(xbwt.blocks()));
  }
  {
    const auto bounds = check_entropy_bounds(trie, colex, opt.full ? 4 : 2);
    bool per_k = true;
    std::ostringstream detail;
    for (const auto& b : bounds.per_k) {
      per_k = per_k && b.holds;
      detail << "k=" << b.k << ":" << b.bound << " ";
    }
    add_check(checks, "entropy-bound", per_k, detail.str());
    add_check(checks, "two-h0-bound", bounds.two_h0_holds,
              std::to_string(bounds.two_h0_plus_one));
  }
  {
    const auto eqr = quotient(trie, colex, Relation::kSameOut);
    const auto approx = quotient(trie, colex, Relation::kIsomorphic);
    const auto eq = quotient(trie, colex, Relation::kIsomorphicSameLabel);
    add_check(checks, "omega-bound", r <= eq.omega,
              "r=" + std::to_string(r) + " omega=" + std::to_string(eq.omega));
    add_check(checks, "quotient-refinement", refines(eq, approx) && refines(approx, eqr));
    add_check(checks, "blocks-equal-classes", eqr.classes.size() == xbwt.blocks());
  }
  const auto gamma = gamma_r(trie, colex);
  add_check(checks, "attractor", gamma.size() == r &&
                                     verify_attractor(trie, gamma, AttractorMode::kCompleteSubtrees));
  if (opt.full) {
    if (n <= kAllConnectedLimit) {
      add_check(checks, "attractor-all-connected",
                verify_attractor(trie, gamma, AttractorMode::kAllConnected));
    } else {
      add_check(checks, "attractor-all-connected", true, "skipped: n > 12");
    }
  }

  Json j;
  j["n"] = n;
  j["level"] = opt.full ? "full" : "quick";
  bool pass = true;
  for (const auto& c : checks) pass = pass && c["pass"].get<bool>();
  j["pass"] = pass;
  j["checks"] = std::move(checks);
  return j;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"rlxt: compressed trie index"};
  app.require_subcommand(1);

  std::string input;
  std::string format = "strings";
  std::string output;
  std::string engine = "rindex";
  std::uint32_t t = 0;
  bool timing = false;
  auto* build = app.add_subcommand("build", "build an index file from a trie");
  add_trie_options(build, input, format);
  build->add_option("-o,--output", output, "index file")->required();
  build->add_option("--engine", engine)->check(CLI::IsMember({"rindex", "sampled"}));
  build->add_option("--t", t, "cover parameter for the sampled engine (default ceil(sqrt n))");
  build->add_flag("--timing", timing, "print build time to stderr");

  std::string index_path;
  std::vector<std::string> patterns;
  std::string pattern_file;
  bool hex = false;
  bool count_only = false;
  auto add_query = [&](CLI::App* cmd) {
    cmd->add_option("index", index_path)->required();
    cmd->add_option("pattern", patterns, "patterns to query");
    cmd->add_option("--patterns", pattern_file, "one pattern per line");
    cmd->add_flag("--hex", hex, "patterns are hex-encoded bytes");
  };
  auto* count = app.add_subcommand("count", "count pattern occurrences");
  add_query(count);
  auto* locate = app.add_subcommand("locate", "list pre-order ids of occurrences");
  add_query(locate);
  locate->add_flag("--count-only", count_only);

  std::uint32_t k_max = 2;
  auto* stats = app.add_subcommand("stats", "JSON statistics of an index file");
  stats->add_option("index", index_path)->required();
  stats->add_option("--k", k_max, "largest entropy order");

  std::string level = "quick";
  VerifyOptions vopt;
  auto* verify = app.add_subcommand("verify", "check every invariant on a trie");
  add_trie_options(verify, input, format);
  verify->add_option("--level", level)->check(CLI::IsMember({"quick", "full"}));
  verify->add_option("--seed", vopt.seed);
  verify->add_flag("--corrupt-phi", vopt.corrupt_phi, "damage one phi sample first");

  std::string engines = "rindex,sampled";
  std::string t_list = "1,16,64";
  std::uint32_t queries = 200;
  std::uint32_t length = 4;
  std::uint64_t seed = 1;
  auto* bench = app.add_subcommand("bench", "CSV timings and sizes per engine");
  add_trie_options(bench, input, format);
  bench->add_option("--engines", engines);
  bench->add_option("--t", t_list, "comma-separated cover parameters");
  bench->add_option("--patterns", pattern_file);
  bench->add_flag("--hex", hex);
  bench->add_option("--queries", queries);
  bench->add_option("--length", length);
  bench->add_option("--seed", seed);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitFormat;
  }

  try {
    if (*build) {
      const LabeledTrie trie = load_trie(input, format);
      const auto start = Clock::now();
      if (engine == "rindex") {
        Index ix{std::in_place_type<RIndex>, trie};
        if (timing) err << "build_ms " << micros(Clock::now() - start) / 1000 << "\n";
        save_index_file(output, ix);
      } else {
        const std::uint32_t tt = t ? t
            : static_cast<std::uint32_t>(std::ceil(std::sqrt(static_cast<double>(trie.size()))));
        Index ix{std::in_place_type<SampledIndex>, trie, tt};
        if (timing) err << "build_ms " << micros(Clock::now() - start) / 1000 << "\n";
        save_index_file(output, ix);
      }
      return kExitOk;
    }

    if (*count || *locate) {
      const Index ix = load_index_file(index_path);
      std::vector<std::string> ps;
      if (!pattern_file.empty()) ps = read_patterns(pattern_file, hex);
      for (const auto& p : patterns) ps.push_back(hex ? decode_hex(p) : p);
      if (pattern_file.empty() && patterns.empty()) {
        err << "no patterns given\n";
        return kExitFormat;
      }
      const bool ids = *locate && !count_only;
      const auto lines = parallel_lines(ps.size(), [&](std::size_t i) {
        if (!ids) return std::to_string(index_count(ix, ps[i]));
        const auto nodes = index_locate(ix, ps[i]);
        std::string line = std::to_string(nodes.size());
        for (NodeId u : nodes) line += " " + std::to_string(u);
        return line;
      });
      for (const auto& l : lines) out << l << "\n";
      return kExitOk;
    }

    if (*stats) {
      out << stats_json(load_index_file(index_path), k_max).dump(2) << "\n";
      return kExitOk;
    }

    if (*verify) {
      vopt.full = level == "full";
      const Json report = verify_json(load_trie(input, format), vopt);
      out << report.dump(2) << "\n";
      if (!report["pass"].get<bool>()) {
        std::string failed;
        for (const auto& c : report["checks"]) {
          if (!c["pass"].get<bool>()) failed += (failed.empty() ? "" : ", ") + c["name"].get<std::string>();
        }
        err << "verify failed: " << failed << "\n";
        return kExitVerifyFailed;
      }
      return kExitOk;
    }

    if (*bench) {
      const LabeledTrie trie = load_trie(input, format);
      const ColexOrder colex = colex_sort(trie);
      std::vector<std::string> ps;
      if (!pattern_file.empty()) {
        ps = read_patterns(pattern_file, hex);
      } else {
        std::vector<NodeId> deep;
        for (NodeId u = 1; u <= trie.size(); ++u) {
          if (trie.depth(u) >= length) deep.push_back(u);
        }
        std::mt19937_64 rng(seed);
        for (std::uint32_t q = 0; q < queries && !deep.empty(); ++q) {
          const LabelString path = trie.path_label(deep[rng() % deep.size()]);
          ps.push_back(trie.alphabet().decode(std::span(path).last(length)));
        }
      }
      const std::uint64_t r = RlXbwt(trie, colex).runs();
      out << "engine,t,n,r,build_ms,index_bits,machinery_bits,count_us,locate_us_per_occ,patterns,occ\n";
      auto run = [&](const Index& ix, const std::string& name, std::uint32_t tt, double build_ms,
                     std::uint64_t bits, std::uint64_t machinery) {
        auto s = Clock::now();
        for (const auto& p : ps) (void)index_count(ix, p);
        const double count_us = ps.empty() ? 0 : micros(Clock::now() - s) / ps.size();
        std::uint64_t occ = 0;
        s = Clock::now();
        for (const auto& p : ps) occ += index_locate(ix, p).size();
        const double locate_us = occ ? micros(Clock::now() - s) / occ : 0;
        out << name << "," << tt << "," << trie.size() << "," << r << "," << build_ms << ","
            << bits << "," << machinery << "," << count_us << "," << locate_us << ","
            << ps.size() << "," << occ << "\n";
      };
      std::stringstream es(engines);
      std::string e;
      while (std::getline(es, e, ',')) {
        if (e == "rindex") {
          const auto s = Clock::now();
          Index ix{std::in_place_type<RIndex>, trie};
          const double ms = micros(Clock::now() - s) / 1000;
          const SpaceReport sp = std::get<RIndex>(ix).space();
          run(ix, e, 0, ms, sp.total(), sp.machinery());
        } else if (e == "sampled") {
          for (std::uint32_t tt : parse_list(t_list)) {
            tt = std::clamp<std::uint32_t>(tt, 1, trie.size());
            const auto s = Clock::now();
            Index ix{std::in_place_type<SampledIndex>, trie, tt};
            const double ms = micros(Clock::now() - s) / 1000;
            const auto& si = std::get<SampledIndex>(ix);
            run(ix, e, tt, ms, si.size_in_bits(), si.sampling_bits());
          }
        } else {
          throw DomainError("unknown engine " + e);
        }
      }
      return kExitOk;
    }
  } catch (const VersionError& e) {
    err << "error: " << e.what() << "\n";
    return kExitVersion;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << "\n";
    return kExitFormat;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitFormat;
  } catch (const BoundsError& e) {
    err << "error: " << e.what() << "\n";
    return kExitFormat;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitOk;
}

}  // namespace rlxt
