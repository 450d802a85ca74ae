#include "rlxt/trie.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>

#include "rlxt/errors.hpp"

namespace rlxt {

Alphabet::Alphabet() : code_to_byte_{0} {}

Alphabet Alphabet::from_used(const std::array<bool, 256>& bytes_used) {
  std::vector<std::uint8_t> bytes{0};
  for (int b = 1; b < 256; ++b) {
    if (bytes_used[b]) bytes.push_back(static_cast<std::uint8_t>(b));
  }
  return from_bytes(std::move(bytes));
}

Alphabet Alphabet::from_bytes(std::vector<std::uint8_t> code_to_byte) {
  if (code_to_byte.empty() || code_to_byte[0] != 0) {
    throw FormatError("alphabet table must start with the sentinel");
  }
  Alphabet a;
  a.code_to_byte_ = std::move(code_to_byte);
  for (std::size_t code = 1; code < a.code_to_byte_.size(); ++code) {
    const std::uint8_t b = a.code_to_byte_[code];
    if (b == 0 || a.code_to_byte_[code - 1] >= b) {
      throw FormatError("alphabet table must list distinct non-zero bytes in increasing order");
    }
    a.byte_to_code_[b] = static_cast<Label>(code);
  }
  return a;
}

std::optional<LabelString> Alphabet::encode(std::string_view bytes) const {
  LabelString out;
  out.reserve(bytes.size());
  for (char ch : bytes) {
    const Label code = byte_to_code_[static_cast<std::uint8_t>(ch)];
    if (code == 0) return std::nullopt;
    out.push_back(code);
  }
  return out;
}

std::string Alphabet::decode(std::span<const Label> codes) const {
  std::string out;
  out.reserve(codes.size());
  for (Label c : codes) out.push_back(static_cast<char>(byte_of(c)));
  return out;
}

LabeledTrie::LabeledTrie() : parent_{0, 0}, label_{0, kSentinel} { finalize(); }

namespace {

// Validates pre-order layout and determinism of a parent/label table.
void validate_preorder(const std::vector<NodeId>& parent, const std::vector<Label>& label,
                       std::size_t sigma) {
  const NodeId n = static_cast<NodeId>(parent.size()) - 1;
  std::vector<NodeId> stack{1};
  std::vector<Label> last_child_label(n + 1, kSentinel);
  for (NodeId u = 2; u <= n; ++u) {
    const NodeId p = parent[u];
    if (p == 0 || p >= u) {
      throw PreorderError("node " + std::to_string(u) + " has parent " + std::to_string(p) +
                          " that does not precede it");
    }
    if (label[u] == kSentinel || label[u] >= sigma) {
      throw FormatError("node " + std::to_string(u) + " has an invalid label");
    }
    while (!stack.empty() && stack.back() != p) stack.pop_back();
    if (stack.empty()) {
      throw PreorderError("node " + std::to_string(u) + " breaks pre-order layout");
    }
    if (label[u] == last_child_label[p]) {
      throw DeterminismError("node " + std::to_string(p) + " has two children labeled " +
                             std::to_string(label[u]));
    }
    if (label[u] < last_child_label[p]) {
      throw PreorderError("children of node " + std::to_string(p) + " are not sorted by label");
    }
    last_child_label[p] = label[u];
    stack.push_back(u);
  }
}

}  // namespace

LabeledTrie LabeledTrie::from_parents(std::vector<NodeId> parent, std::vector<Label> label,
                                      Alphabet alphabet) {
  if (parent.size() < 2 || parent.size() != label.size()) {
    throw FormatError("parent and label tables must have equal length n+1 >= 2");
  }
  parent[0] = 0;
  parent[1] = 0;
  label[0] = kSentinel;
  label[1] = kSentinel;
  validate_preorder(parent, label, alphabet.sigma());
  LabeledTrie t;
  t.n_ = static_cast<NodeId>(parent.size()) - 1;
  t.parent_ = std::move(parent);
  t.label_ = std::move(label);
  t.alphabet_ = std::move(alphabet);
  t.finalize();
  return t;
}

LabeledTrie LabeledTrie::from_strings(std::span<const std::string> lines) {
  std::array<bool, 256> used{};
  for (const auto& line : lines) {
    for (char ch : line) {
      const auto b = static_cast<std::uint8_t>(ch);
      if (b == 0) throw FormatError("input contains the reserved byte 0x00");
      used[b] = true;
    }
  }
  Alphabet alphabet = Alphabet::from_used(used);

  std::vector<std::string_view> sorted(lines.begin(), lines.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  std::vector<NodeId> parent{0, 0};
  std::vector<Label> label{kSentinel, kSentinel};
  std::vector<NodeId> path{1};  // path[d] = node at depth d of the previous line
  std::string_view prev;
  for (std::string_view s : sorted) {
    std::size_t lcp = 0;
    while (lcp < s.size() && lcp < prev.size() && s[lcp] == prev[lcp]) ++lcp;
    path.resize(lcp + 1);
    for (std::size_t d = lcp; d < s.size(); ++d) {
      const NodeId id = static_cast<NodeId>(parent.size());
      parent.push_back(path.back());
      label.push_back(alphabet.code_of(static_cast<std::uint8_t>(s[d])));
      path.push_back(id);
    }
    prev = s;
  }
  return from_parents(std::move(parent), std::move(label), std::move(alphabet));
}

LabeledTrie LabeledTrie::from_edges(NodeId n,
                                    std::span<const std::pair<NodeId, std::uint8_t>> edges) {
  if (n == 0) throw FormatError("a trie has at least the root");
  if (edges.size() != static_cast<std::size_t>(n) - 1) {
    throw FormatError("expected " + std::to_string(n - 1) + " edges, got " +
                      std::to_string(edges.size()));
  }
  std::array<bool, 256> used{};
  for (const auto& [p, b] : edges) {
    if (b == 0) throw FormatError("label byte 0 is reserved for the root");
    used[b] = true;
  }
  Alphabet alphabet = Alphabet::from_used(used);
  std::vector<NodeId> parent(static_cast<std::size_t>(n) + 1, 0);
  std::vector<Label> label(static_cast<std::size_t>(n) + 1, kSentinel);
  for (std::size_t k = 0; k < edges.size(); ++k) {
    parent[k + 2] = edges[k].first;
    label[k + 2] = alphabet.code_of(edges[k].second);
  }
  return from_parents(std::move(parent), std::move(label), std::move(alphabet));
}

void LabeledTrie::finalize() {
  n_ = static_cast<NodeId>(parent_.size()) - 1;
  child_offset_.assign(static_cast<std::size_t>(n_) + 2, 0);
  for (NodeId u = 2; u <= n_; ++u) ++child_offset_[parent_[u] + 1];
  for (NodeId u = 1; u <= n_ + 1; ++u) child_offset_[u] += child_offset_[u - 1];
  child_ids_.assign(n_ > 0 ? n_ - 1 : 0, 0);
  std::vector<std::uint32_t> fill(child_offset_.begin(), child_offset_.end() - 1);
  for (NodeId u = 2; u <= n_; ++u) child_ids_[fill[parent_[u]]++] = u;

  depth_.assign(static_cast<std::size_t>(n_) + 1, 0);
  for (NodeId u = 2; u <= n_; ++u) depth_[u] = depth_[parent_[u]] + 1;
  subtree_end_.assign(static_cast<std::size_t>(n_) + 1, 0);
  for (NodeId u = n_; u >= 1; --u) {
    auto kids = children(u);
    subtree_end_[u] = kids.empty() ? u : subtree_end_[kids.back()];
  }
}

void LabeledTrie::check(NodeId u) const {
  if (u == 0 || u > n_) throw BoundsError("node id " + std::to_string(u) + " out of range");
}

NodeId LabeledTrie::parent(NodeId u) const { return check(u), parent_[u]; }

Label LabeledTrie::label(NodeId u) const { return check(u), label_[u]; }

std::span<const NodeId> LabeledTrie::children(NodeId u) const {
  check(u);
  return {child_ids_.data() + child_offset_[u], child_ids_.data() + child_offset_[u + 1]};
}

NodeId LabeledTrie::child(NodeId u, Label c) const {
  for (NodeId v : children(u)) {
    if (label_[v] == c) return v;
  }
  return kNoNode;
}

LabelString LabeledTrie::out(NodeId u) const {
  LabelString s;
  for (NodeId v : children(u)) s.push_back(label_[v]);
  return s;
}

std::uint32_t LabeledTrie::height() const {
  return *std::max_element(depth_.begin() + 1, depth_.end());
}

LabelString LabeledTrie::path_label(NodeId u) const {
  check(u);
  LabelString s(depth_[u]);
  for (std::size_t d = s.size(); d > 0; --d, u = parent_[u]) s[d - 1] = label_[u];
  return s;
}

std::vector<std::string> LabeledTrie::leaf_strings() const {
  std::vector<std::string> out;
  for (NodeId u = 1; u <= n_; ++u) {
    if (children(u).empty()) out.push_back(alphabet_.decode(path_label(u)));
  }
  return out;
}

std::vector<std::pair<NodeId, std::uint8_t>> LabeledTrie::edges() const {
  std::vector<std::pair<NodeId, std::uint8_t>> out;
  out.reserve(n_ - 1);
  for (NodeId u = 2; u <= n_; ++u) out.emplace_back(parent_[u], alphabet_.byte_of(label_[u]));
  return out;
}

std::vector<std::string> read_lines(std::istream& in) {
  std::string data{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  if (data.find('\0') != std::string::npos) {
    throw FormatError("input contains the reserved byte 0x00");
  }
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < data.size()) {
    const std::size_t end = data.find('\n', start);
    if (end == std::string::npos) {
      lines.emplace_back(data.substr(start));
      break;
    }
    lines.emplace_back(data.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

LabeledTrie read_strings_trie(std::istream& in) {
  const auto lines = read_lines(in);
  return LabeledTrie::from_strings(lines);
}

namespace {

template <typename T>
T parse_number(std::string_view field, const char* what, std::size_t line_no) {
  T value{};
  const auto* first = field.data();
  const auto* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw FormatError("line " + std::to_string(line_no) + ": bad " + what + " '" +
                      std::string(field) + "'");
  }
  return value;
}

std::string_view strip_cr(std::string_view s) {
  if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
  return s;
}

}  // namespace

LabeledTrie read_edges_trie(std::istream& in) {
  const auto lines = read_lines(in);
  if (lines.empty()) throw FormatError("edge list is empty; expected node count");
  const auto n = parse_number<NodeId>(strip_cr(lines[0]), "node count", 1);
  if (n == 0) throw FormatError("node count must be positive");
  if (lines.size() < n) throw FormatError("edge list is truncated");
  std::vector<std::pair<NodeId, std::uint8_t>> edges;
  edges.reserve(n - 1);
  for (std::size_t k = 1; k < n; ++k) {
    std::string_view line = strip_cr(lines[k]);
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw FormatError("line " + std::to_string(k + 1) + ": expected parent<TAB>label");
    }
    const auto p = parse_number<NodeId>(line.substr(0, tab), "parent", k + 1);
    const auto b = parse_number<unsigned>(line.substr(tab + 1), "label", k + 1);
    if (b == 0 || b > 255) {
      throw FormatError("line " + std::to_string(k + 1) + ": label must be in 1..255");
    }
    edges.emplace_back(p, static_cast<std::uint8_t>(b));
  }
  for (std::size_t k = n; k < lines.size(); ++k) {
    if (!strip_cr(lines[k]).empty()) throw FormatError("trailing data after edge list");
  }
  return LabeledTrie::from_edges(n, edges);
}

void write_edges_trie(std::ostream& out, const LabeledTrie& trie) {
  out << trie.size() << '\n';
  for (const auto& [p, b] : trie.edges()) out << p << '\t' << static_cast<unsigned>(b) << '\n';
}

ColexOrder::ColexOrder(std::vector<NodeId> colex_to_pre) : colex_to_pre_(std::move(colex_to_pre)) {
  pre_to_colex_.assign(colex_to_pre_.size(), 0);
  for (ColexRank i = 1; i < colex_to_pre_.size(); ++i) pre_to_colex_.at(colex_to_pre_[i]) = i;
}

ColexOrder colex_sort(const LabeledTrie& trie) {
  const NodeId n = trie.size();
  const std::size_t sigma = trie.sigma();

  // Stable counting sort of `seq` by label.
  auto sort_by_label = [&](const std::vector<NodeId>& seq) {
    std::vector<std::uint32_t> start(sigma + 1, 0);
    for (NodeId u : seq) ++start[trie.label(u) + 1];
    for (std::size_t c = 1; c <= sigma; ++c) start[c] += start[c - 1];
    std::vector<NodeId> out(seq.size());
    for (NodeId u : seq) out[start[trie.label(u)]++] = u;
    return out;
  };

  std::vector<NodeId> all(n);
  for (NodeId u = 1; u <= n; ++u) all[u - 1] = u;
  std::vector<NodeId> order = sort_by_label(all);
  std::vector<std::uint32_t> bucket(static_cast<std::size_t>(n) + 1, 0);
  std::uint32_t buckets = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k > 0 && trie.label(order[k]) != trie.label(order[k - 1])) ++buckets;
    bucket[order[k]] = buckets;
  }
  ++buckets;

  std::vector<std::uint32_t> next(bucket.size());
  while (buckets < n) {
    // Group nodes by the current bucket of their parent, then by label.
    std::vector<NodeId> seq;
    seq.reserve(n);
    for (NodeId v : order) {
      for (NodeId w : trie.children(v)) seq.push_back(w);
    }
    std::vector<NodeId> refined = sort_by_label(seq);
    refined.insert(refined.begin(), 1);

    std::uint32_t count = 0;
    next[1] = 0;
    for (std::size_t k = 1; k < refined.size(); ++k) {
      const NodeId a = refined[k - 1];
      const NodeId b = refined[k];
      const NodeId pa = a == 1 ? 1 : trie.parent(a);
      const NodeId pb = trie.parent(b);
      if (trie.label(a) != trie.label(b) || bucket[pa] != bucket[pb]) ++count;
      next[b] = count;
    }
    ++count;
    order = std::move(refined);
    bucket.swap(next);
    if (count == buckets) break;
    buckets = count;
  }

  std::vector<NodeId> colex_to_pre(static_cast<std::size_t>(n) + 1, 0);
  for (std::size_t k = 0; k < order.size(); ++k) colex_to_pre[k + 1] = order[k];
  return ColexOrder(std::move(colex_to_pre));
}

std::vector<NodeId> oracle_locate(const LabeledTrie& trie, const ColexOrder& colex,
                                  std::span<const Label> pattern) {
  std::vector<NodeId> hits;
  for (NodeId u = 1; u <= trie.size(); ++u) {
    if (trie.depth(u) < pattern.size()) continue;
    NodeId x = u;
    bool match = true;
    for (std::size_t k = pattern.size(); k > 0; --k, x = trie.parent(x)) {
      if (trie.label(x) != pattern[k - 1]) {
        match = false;
        break;
      }
    }
    if (match) hits.push_back(u);
  }
  std::sort(hits.begin(), hits.end(),
            [&](NodeId a, NodeId b) { return colex.rank_of(a) < colex.rank_of(b); });
  return hits;
}

std::vector<NodeId> oracle_locate(const LabeledTrie& trie, std::span<const Label> pattern) {
  return oracle_locate(trie, colex_sort(trie), pattern);
}

bool is_isomorphic(const LabeledTrie& trie, NodeId u, NodeId v) {
  std::vector<std::pair<NodeId, NodeId>> stack{{u, v}};
  while (!stack.empty()) {
    auto [x, y] = stack.back();
    stack.pop_back();
    auto cx = trie.children(x);
    auto cy = trie.children(y);
    if (cx.size() != cy.size()) return false;
    for (std::size_t k = 0; k < cx.size(); ++k) {
      if (trie.label(cx[k]) != trie.label(cy[k])) return false;
      stack.emplace_back(cx[k], cy[k]);
    }
  }
  return true;
}

}  // namespace rlxt
