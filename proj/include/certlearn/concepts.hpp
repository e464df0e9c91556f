#pragma once

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "certlearn/bitstring.hpp"
#include "certlearn/codes.hpp"
#include "certlearn/verifiers.hpp"

namespace certlearn {

/// Anything that labels an example.
template <class F>
concept Labeler = requires(const F& f, const BitString& x) {
  { f(x) } -> std::convertible_to<bool>;
};

enum class LayoutKind { standard, uniform };

/// Example layout. Standard examples are (z, i) with z first; uniform examples
/// are (i, x) with the index first. The index has l = ceil(log2(c * p)) bits;
/// index values >= c * p are padding and always labeled 0.
struct ExampleLayout {
  LayoutKind kind = LayoutKind::standard;
  std::size_t n = 0;
  std::size_t index_bits = 0;
  std::size_t useful = 0;  // c * p codeword positions

  static ExampleLayout make(LayoutKind kind, std::size_t n, std::size_t p, std::size_t c);

  std::size_t width() const { return n + index_bits; }
  std::uint64_t index_count() const { return std::uint64_t{1} << index_bits; }

  /// Standard: (z, i). Uniform: (i, z), where z plays the trailing x.
  BitString example(const BitString& z, std::uint64_t index) const;
  std::uint64_t index_of(const BitString& x) const;
  /// The n non-index bits (z for standard, trailing x for uniform).
  BitString body_of(const BitString& x) const;
};

/// Shared state of Cert_z and UnifCert_z: z, the first certificate w* (if
/// any) and its codeword, all fixed at construction.
class CodewordConcept {
 public:
  const BitString& z() const { return z_; }
  const ExampleLayout& layout() const { return layout_; }
  const std::optional<BitString>& certificate() const { return certificate_; }
  /// Enc(w*) padded with zeros to 2^l bits; all zero when z has no certificate.
  const BitString& labels() const { return labels_; }
  /// Cost of locating w* with first_certificate.
  const StepCounter& search_cost() const { return search_cost_; }

  bool label_at(std::uint64_t index) const { return labels_[index]; }
  /// Number of 1-labeled index values.
  std::size_t ones() const { return labels_.popcount(); }

 protected:
  CodewordConcept(const Verifier& v, const BitString& z, const ExampleLayout& layout,
                  const CodeParams& code, const OracleBudget& budget);

  BitString z_;
  ExampleLayout layout_;
  std::optional<BitString> certificate_;
  BitString labels_;
  StepCounter search_cost_;
};

class CertConcept : public CodewordConcept {
 public:
  CertConcept(const Verifier& v, const BitString& z, const CodeParams& code,
              const OracleBudget& budget = {});

  bool operator()(const BitString& x) const;
  /// Sparsity = number of 1-inputs, which are all of the form (z, i).
  std::size_t sparsity() const { return ones(); }
  /// The 1-inputs in increasing order.
  std::vector<BitString> one_points() const;
};

class UnifCertConcept : public CodewordConcept {
 public:
  UnifCertConcept(const Verifier& v, const BitString& z, const CodeParams& code,
                  const OracleBudget& budget = {});

  bool operator()(const BitString& x) const;
};

bool eval_cert(const CertConcept& cert, const BitString& x);
bool eval_unifcert(const UnifCertConcept& cert, const BitString& x);

/// Binary decision tree. size() counts leaves.
class DecisionTree {
 public:
  struct Node {
    std::int64_t var = -1;  // -1 for a leaf
    bool bit = false;
    std::uint32_t zero = 0;
    std::uint32_t one = 0;
    friend bool operator==(const Node&, const Node&) = default;
  };

  static DecisionTree leaf(bool bit);
  /// Queries x_var; `zero` and `one` become the subtrees.
  static DecisionTree query(std::size_t var, DecisionTree zero, DecisionTree one);

  bool operator()(const BitString& x) const;
  std::size_t size() const;
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t depth() const;
  /// Largest queried index plus one (0 for a leaf).
  std::size_t arity() const;
  /// True when no root-to-leaf path queries a variable twice.
  bool paths_distinct() const;

  /// Preorder tokens: "Q<var>" followed by the 0 then 1 subtree, or "L<bit>".
  std::string serialize() const;
  static DecisionTree parse(const std::string& text);

  const std::vector<Node>& nodes() const { return nodes_; }
  friend bool operator==(const DecisionTree&, const DecisionTree&) = default;

 private:
  std::uint32_t append(const DecisionTree& sub);
  std::vector<Node> nodes_;  // nodes_[0] is the root
};

bool dt_eval(const DecisionTree& tree, const BitString& x);

/// Matches z bit by bit (leaf 0 on mismatch), then reads every index bit;
/// leaves carry the padded codeword. A single 0 leaf when z has no certificate.
DecisionTree build_decision_tree(const CertConcept& cert);
/// l-junta tree over the index bits.
DecisionTree build_decision_tree(const UnifCertConcept& cert);

struct EnumeratedConcept {
  CertConcept cert;
  DecisionTree tree;
};

/// One entry per z in `seeds`, in order.
std::vector<EnumeratedConcept> enumerate_class(const Verifier& v, std::span<const BitString> seeds,
                                               const CodeParams& code,
                                               const OracleBudget& budget = {});

/// All 2^n instances; throws BudgetExceeded past budget.max_certificate_bits.
std::vector<EnumeratedConcept> enumerate_class(const Verifier& v, const CodeParams& code,
                                               const OracleBudget& budget = {});

/// Concepts restricted to a finite domain, stored sparsely: row r lists the
/// domain indices where concept r is 1, increasing.
struct LabelMatrix {
  std::size_t points = 0;
  std::vector<std::vector<std::uint32_t>> ones;

  bool label(std::size_t concept_index, std::uint32_t point) const;
};

template <Labeler F>
LabelMatrix label_matrix(std::span<const F> concepts, std::span<const BitString> domain) {
  LabelMatrix out;
  out.points = domain.size();
  out.ones.resize(concepts.size());
  for (std::size_t r = 0; r < concepts.size(); ++r) {
    for (std::uint32_t j = 0; j < domain.size(); ++j) {
      if (concepts[r](domain[j])) out.ones[r].push_back(j);
    }
  }
  return out;
}

/// Union of the concepts' 1-points in increasing order. A point outside it
/// is 0 under every concept and can never be in a shattered set, so the
/// dimension over the support equals the dimension over any superset.
std::vector<BitString> support(std::span<const CertConcept> concepts);
LabelMatrix support_matrix(std::span<const CertConcept> concepts,
                           std::vector<BitString>* points = nullptr);

bool is_shattered(const LabelMatrix& m, std::span<const std::uint32_t> points);

template <Labeler F>
bool is_shattered(std::span<const BitString> points, std::span<const F> concepts) {
  return is_shattered(label_matrix(concepts, points), [&] {
    std::vector<std::uint32_t> all(points.size());
    for (std::uint32_t j = 0; j < all.size(); ++j) all[j] = j;
    return all;
  }());
}

struct VcResult {
  std::size_t dimension = 0;
  std::vector<std::uint32_t> witness;  // a shattered set of that size
  std::uint64_t sets_checked = 0;
};

/// Exact VC dimension. A shattered set must be inside the 1-set of some
/// concept (its all-ones labeling), so candidates of each size grow from
/// those 1-sets. Throws BudgetExceeded if a set of size max_size is shattered.
VcResult vc_dimension(const LabelMatrix& m, std::size_t max_size = 5);

template <Labeler F>
VcResult vc_dimension(std::span<const F> concepts, std::span<const BitString> domain,
                      std::size_t max_size = 5) {
  return vc_dimension(label_matrix(concepts, domain), max_size);
}

/// Number of distinct rows.
std::size_t distinct_concepts(const LabelMatrix& m);

}  // namespace certlearn
