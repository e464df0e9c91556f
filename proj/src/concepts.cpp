#include "certlearn/concepts.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <sstream>

#include "certlearn/errors.hpp"

namespace certlearn {

ExampleLayout ExampleLayout::make(LayoutKind kind, std::size_t n, std::size_t p, std::size_t c) {
  if (p == 0 || c < 2) throw ConfigError("example layout needs p >= 1 and c >= 2");
  ExampleLayout out;
  out.kind = kind;
  out.n = n;
  out.useful = c * p;
  out.index_bits = std::bit_width(out.useful - 1);
  return out;
}

BitString ExampleLayout::example(const BitString& z, std::uint64_t index) const {
  if (z.size() != n) throw ShapeError("example body has the wrong length");
  if (index >= index_count()) throw ShapeError("example index out of range");
  const auto i = BitString::from_uint(index, index_bits);
  return kind == LayoutKind::standard ? concat(z, i) : concat(i, z);
}

std::uint64_t ExampleLayout::index_of(const BitString& x) const {
  if (x.size() != width()) throw ShapeError("example has the wrong length");
  return x.read_uint(kind == LayoutKind::standard ? n : 0, index_bits);
}

BitString ExampleLayout::body_of(const BitString& x) const {
  if (x.size() != width()) throw ShapeError("example has the wrong length");
  return x.slice(kind == LayoutKind::standard ? 0 : index_bits, n);
}

CodewordConcept::CodewordConcept(const Verifier& v, const BitString& z,
                                 const ExampleLayout& layout, const CodeParams& code,
                                 const OracleBudget& budget)
    : z_(z), layout_(layout), labels_(layout.index_count()) {
  code.validate();
  if (!code.supports(v.p())) {
    throw ConfigError("code does not support certificate length " + std::to_string(v.p()));
  }
  auto search = first_certificate(v, z, budget);
  search_cost_ = search.cost;
  certificate_ = std::move(search.certificate);
  if (certificate_) {
    const auto word = encode(code, *certificate_).bits;
    for (std::size_t i = 0; i < word.size(); ++i) {
      if (word[i]) labels_.set(i, true);
    }
  }
}

CertConcept::CertConcept(const Verifier& v, const BitString& z, const CodeParams& code,
                         const OracleBudget& budget)
    : CodewordConcept(v, z, ExampleLayout::make(LayoutKind::standard, v.n(), v.p(), code.c),
                      code, budget) {}

bool CertConcept::operator()(const BitString& x) const {
  if (x.size() != layout_.width()) throw ShapeError("example has the wrong length");
  if (!certificate_) return false;
  for (std::size_t i = 0; i < layout_.n; ++i) {
    if (x[i] != z_[i]) return false;
  }
  return labels_[x.read_uint(layout_.n, layout_.index_bits)];
}

std::vector<BitString> CertConcept::one_points() const {
  std::vector<BitString> out;
  for (std::uint64_t i = 0; i < layout_.index_count(); ++i) {
    if (labels_[i]) out.push_back(layout_.example(z_, i));
  }
  return out;
}

UnifCertConcept::UnifCertConcept(const Verifier& v, const BitString& z, const CodeParams& code,
                                 const OracleBudget& budget)
    : CodewordConcept(v, z, ExampleLayout::make(LayoutKind::uniform, v.n(), v.p(), code.c),
                      code, budget) {}

bool UnifCertConcept::operator()(const BitString& x) const {
  if (x.size() != layout_.width()) throw ShapeError("example has the wrong length");
  return labels_[x.read_uint(0, layout_.index_bits)];
}

bool eval_cert(const CertConcept& cert, const BitString& x) { return cert(x); }
bool eval_unifcert(const UnifCertConcept& cert, const BitString& x) { return cert(x); }

// ---------------------------------------------------------------------------

DecisionTree DecisionTree::leaf(bool bit) {
  DecisionTree t;
  t.nodes_.push_back({-1, bit, 0, 0});
  return t;
}

std::uint32_t DecisionTree::append(const DecisionTree& sub) {
  const auto offset = static_cast<std::uint32_t>(nodes_.size());
  for (auto node : sub.nodes_) {
    if (node.var >= 0) {
      node.zero += offset;
      node.one += offset;
    }
    nodes_.push_back(node);
  }
  return offset;
}

DecisionTree DecisionTree::query(std::size_t var, DecisionTree zero, DecisionTree one) {
  DecisionTree t;
  t.nodes_.reserve(1 + zero.nodes_.size() + one.nodes_.size());
  t.nodes_.push_back({static_cast<std::int64_t>(var), false, 0, 0});
  const auto z = t.append(zero);
  const auto o = t.append(one);
  t.nodes_[0].zero = z;
  t.nodes_[0].one = o;
  return t;
}

bool DecisionTree::operator()(const BitString& x) const {
  std::uint32_t at = 0;
  while (nodes_[at].var >= 0) {
    const auto var = static_cast<std::size_t>(nodes_[at].var);
    if (var >= x.size()) throw ShapeError("decision tree queries past the input");
    at = x[var] ? nodes_[at].one : nodes_[at].zero;
  }
  return nodes_[at].bit;
}

std::size_t DecisionTree::size() const {
  return static_cast<std::size_t>(
      std::ranges::count_if(nodes_, [](const Node& node) { return node.var < 0; }));
}

std::size_t DecisionTree::depth() const {
  std::vector<std::size_t> d(nodes_.size(), 0);
  std::size_t best = 0;
  // Children always follow their parent in nodes_.
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    best = std::max(best, d[i]);
    if (nodes_[i].var >= 0) {
      d[nodes_[i].zero] = d[i] + 1;
      d[nodes_[i].one] = d[i] + 1;
    }
  }
  return best;
}

std::size_t DecisionTree::arity() const {
  std::size_t out = 0;
  for (const auto& node : nodes_) {
    if (node.var >= 0) out = std::max(out, static_cast<std::size_t>(node.var) + 1);
  }
  return out;
}

bool DecisionTree::paths_distinct() const {
  std::vector<std::int64_t> path;
  auto walk = [&](auto&& self, std::uint32_t at) -> bool {
    const auto& node = nodes_[at];
    if (node.var < 0) return true;
    if (std::ranges::find(path, node.var) != path.end()) return false;
    path.push_back(node.var);
    const bool ok = self(self, node.zero) && self(self, node.one);
    path.pop_back();
    return ok;
  };
  return walk(walk, 0);
}

std::string DecisionTree::serialize() const {
  std::string out;
  auto walk = [&](auto&& self, std::uint32_t at) -> void {
    const auto& node = nodes_[at];
    if (!out.empty()) out.push_back(' ');
    if (node.var < 0) {
      out += node.bit ? "L1" : "L0";
      return;
    }
    out += "Q" + std::to_string(node.var);
    self(self, node.zero);
    self(self, node.one);
  };
  walk(walk, 0);
  return out;
}

DecisionTree DecisionTree::parse(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> tokens;
  for (std::string t; in >> t;) tokens.push_back(t);
  std::size_t pos = 0;
  auto read = [&](auto&& self) -> DecisionTree {
    if (pos >= tokens.size()) throw ParseError("decision tree text ends early");
    const std::string& t = tokens[pos++];
    if (t == "L0" || t == "L1") return leaf(t == "L1");
    if (t.size() < 2 || t[0] != 'Q' ||
        !std::all_of(t.begin() + 1, t.end(), [](char ch) { return ch >= '0' && ch <= '9'; })) {
      throw ParseError("bad decision tree token '" + t + "'");
    }
    const std::size_t var = std::stoull(t.substr(1));
    auto zero = self(self);
    auto one = self(self);
    return query(var, std::move(zero), std::move(one));
  };
  auto tree = read(read);
  if (pos != tokens.size()) throw ParseError("trailing tokens after decision tree");
  return tree;
}

bool dt_eval(const DecisionTree& tree, const BitString& x) { return tree(x); }

namespace {

// Complete tree over bits [first, first + width) of x; leaf value comes from
// labels at the index read so far.
DecisionTree index_tree(const BitString& labels, std::size_t first, std::size_t width,
                        std::size_t level, std::uint64_t prefix) {
  if (level == width) return DecisionTree::leaf(labels[prefix]);
  return DecisionTree::query(first + level, index_tree(labels, first, width, level + 1, prefix << 1),
                             index_tree(labels, first, width, level + 1, (prefix << 1) | 1));
}

}  // namespace

DecisionTree build_decision_tree(const CertConcept& cert) {
  const auto& layout = cert.layout();
  if (!cert.certificate()) return DecisionTree::leaf(false);
  DecisionTree tree = index_tree(cert.labels(), layout.n, layout.index_bits, 0, 0);
  for (std::size_t j = layout.n; j-- > 0;) {
    if (cert.z()[j]) {
      tree = DecisionTree::query(j, DecisionTree::leaf(false), std::move(tree));
    } else {
      tree = DecisionTree::query(j, std::move(tree), DecisionTree::leaf(false));
    }
  }
  return tree;
}

DecisionTree build_decision_tree(const UnifCertConcept& cert) {
  if (!cert.certificate()) return DecisionTree::leaf(false);
  return index_tree(cert.labels(), 0, cert.layout().index_bits, 0, 0);
}

std::vector<EnumeratedConcept> enumerate_class(const Verifier& v, std::span<const BitString> seeds,
                                               const CodeParams& code,
                                               const OracleBudget& budget) {
  std::vector<EnumeratedConcept> out;
  out.reserve(seeds.size());
  for (const auto& z : seeds) {
    CertConcept cert(v, z, code, budget);
    auto tree = build_decision_tree(cert);
    out.push_back({std::move(cert), std::move(tree)});
  }
  return out;
}

std::vector<EnumeratedConcept> enumerate_class(const Verifier& v, const CodeParams& code,
                                               const OracleBudget& budget) {
  if (v.n() > budget.max_certificate_bits) {
    throw BudgetExceeded("enumerating all 2^" + std::to_string(v.n()) + " instances");
  }
  std::vector<BitString> seeds;
  for (std::uint64_t z = 0; z < (std::uint64_t{1} << v.n()); ++z) {
    seeds.push_back(BitString::from_uint(z, v.n()));
  }
  return enumerate_class(v, seeds, code, budget);
}

// ---------------------------------------------------------------------------

bool LabelMatrix::label(std::size_t concept_index, std::uint32_t point) const {
  return std::ranges::binary_search(ones[concept_index], point);
}

std::vector<BitString> support(std::span<const CertConcept> concepts) {
  std::vector<BitString> out;
  for (const auto& c : concepts) {
    for (auto& x : c.one_points()) out.push_back(std::move(x));
  }
  std::ranges::sort(out);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

LabelMatrix support_matrix(std::span<const CertConcept> concepts,
                           std::vector<BitString>* points) {
  const auto domain = support(concepts);
  LabelMatrix out;
  out.points = domain.size();
  out.ones.resize(concepts.size());
  for (std::size_t r = 0; r < concepts.size(); ++r) {
    for (const auto& x : concepts[r].one_points()) {
      const auto it = std::ranges::lower_bound(domain, x);
      out.ones[r].push_back(static_cast<std::uint32_t>(it - domain.begin()));
    }
    std::ranges::sort(out.ones[r]);
  }
  if (points) *points = domain;
  return out;
}

bool is_shattered(const LabelMatrix& m, std::span<const std::uint32_t> points) {
  if (points.size() > 30) throw BudgetExceeded("shattering check on more than 30 points");
  const std::uint64_t needed = std::uint64_t{1} << points.size();
  if (m.ones.size() < needed) return false;
  std::set<std::uint64_t> patterns;
  for (std::size_t r = 0; r < m.ones.size(); ++r) {
    std::uint64_t mask = 0;
    for (std::size_t j = 0; j < points.size(); ++j) {
      if (m.label(r, points[j])) mask |= std::uint64_t{1} << j;
    }
    patterns.insert(mask);
    if (patterns.size() == needed) return true;
  }
  return false;
}

namespace {

void subsets_of(const std::vector<std::uint32_t>& items, std::size_t k, std::size_t start,
                std::vector<std::uint32_t>& current, std::set<std::vector<std::uint32_t>>& out,
                std::uint64_t cap) {
  if (current.size() == k) {
    out.insert(current);
    if (out.size() > cap) throw BudgetExceeded("too many candidate sets for the VC oracle");
    return;
  }
  for (std::size_t i = start; i + (k - current.size()) <= items.size(); ++i) {
    current.push_back(items[i]);
    subsets_of(items, k, i + 1, current, out, cap);
    current.pop_back();
  }
}

}  // namespace

VcResult vc_dimension(const LabelMatrix& m, std::size_t max_size) {
  VcResult out;
  if (m.ones.empty()) return out;
  constexpr std::uint64_t kCandidateCap = 10'000'000;
  std::set<std::vector<std::uint32_t>> shattered_prev{{}};  // the empty set
  for (std::size_t k = 1; k <= max_size && k <= m.points; ++k) {
    std::set<std::vector<std::uint32_t>> candidates;
    std::vector<std::uint32_t> current;
    for (const auto& row : m.ones) subsets_of(row, k, 0, current, candidates, kCandidateCap);
    std::set<std::vector<std::uint32_t>> shattered;
    for (const auto& s : candidates) {
      // Every (k-1)-subset of a shattered set is shattered; test the one
      // missing the last element before the full check.
      std::vector<std::uint32_t> head(s.begin(), s.end() - 1);
      if (!shattered_prev.contains(head)) continue;
      ++out.sets_checked;
      if (is_shattered(m, s)) shattered.insert(s);
    }
    if (shattered.empty()) return out;
    out.dimension = k;
    out.witness = *shattered.begin();
    if (k == max_size && k < m.points) {
      throw BudgetExceeded("VC oracle found a shattered set at its size cap " +
                           std::to_string(max_size));
    }
    shattered_prev = std::move(shattered);
  }
  return out;
}

std::size_t distinct_concepts(const LabelMatrix& m) {
  std::set<std::vector<std::uint32_t>> rows(m.ones.begin(), m.ones.end());
  return rows.size();
}

}  // namespace certlearn
