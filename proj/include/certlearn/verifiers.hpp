#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "certlearn/bitstring.hpp"
#include "certlearn/three_sat.hpp"

namespace certlearn {

/// Caller-owned cost accumulator. Operations add to it; nothing is global.
struct StepCounter {
  std::uint64_t verifier_steps = 0;  // elementary checks inside the verifier
  std::uint64_t verifier_calls = 0;
  std::uint64_t oracle_calls = 0;
};

/// A verifier bound to one instance, for repeated certificate checks.
class PreparedInstance {
 public:
  virtual ~PreparedInstance() = default;
  virtual bool check(const BitString& w, StepCounter* steps) const = 0;
  /// Certificate given as its integer value (rank - 1); p <= 64.
  virtual bool check_value(std::uint64_t w, std::size_t p, StepCounter* steps) const {
    return check(BitString::from_uint(w, p), steps);
  }
};

/// NP-style checker with instance length n and certificate length p.
class Verifier {
 public:
  virtual ~Verifier() = default;

  virtual std::string name() const = 0;
  virtual std::size_t n() const = 0;
  virtual std::size_t p() const = 0;
  /// Binds an instance of length n(); callers check shapes first.
  virtual std::unique_ptr<PreparedInstance> prepare(const BitString& z) const = 0;
};

/// 3-SAT: instances are encode_3sat strings, certificates are assignments of
/// length layout.max_vars. Strings that do not decode are rejected for every
/// certificate, so they lie outside the language.
class ThreeSatVerifier final : public Verifier {
 public:
  explicit ThreeSatVerifier(FormulaLayout layout);

  std::string name() const override { return "3sat"; }
  std::size_t n() const override { return layout_.width(); }
  std::size_t p() const override { return layout_.max_vars; }
  std::unique_ptr<PreparedInstance> prepare(const BitString& z) const override;

  const FormulaLayout& layout() const { return layout_; }
  BitString encode(const ThreeSatInstance& f) const { return encode_3sat(f, layout_); }

 private:
  FormulaLayout layout_;
};

/// Verifier backed by an arbitrary deterministic predicate.
class FunctionVerifier final : public Verifier {
 public:
  using Check = std::function<bool(const BitString& z, const BitString& w)>;

  FunctionVerifier(std::string name, std::size_t n, std::size_t p, Check check);

  std::string name() const override { return name_; }
  std::size_t n() const override { return n_; }
  std::size_t p() const override { return p_; }
  std::unique_ptr<PreparedInstance> prepare(const BitString& z) const override;

 private:
  std::string name_;
  std::size_t n_;
  std::size_t p_;
  Check check_;
};

struct LexQuery {
  BitString instance;
  std::uint64_t k = 1;  // rank threshold in [1, 2^p]
};

struct OracleBudget {
  std::size_t max_certificate_bits = 24;
};

/// Throws ShapeError unless |z| = v.n() and |w| = v.p().
bool verify(const Verifier& v, const BitString& z, const BitString& w,
            StepCounter* steps = nullptr);

/// Accepts iff lex_rank(w) <= q.k and verify(v, q.instance, w).
bool lex_verify(const Verifier& v, const LexQuery& q, const BitString& w,
                StepCounter* steps = nullptr);

/// Exhaustive simulation of an NP oracle for L(v): is there any certificate?
bool nondet_oracle(const Verifier& v, const BitString& z, const OracleBudget& budget = {},
                   StepCounter* steps = nullptr);

/// Oracle for Lex(v): is there a certificate of rank at most k?
bool lex_oracle(const Verifier& v, const BitString& z, std::uint64_t k,
                const OracleBudget& budget = {}, StepCounter* steps = nullptr);

struct CertificateSearch {
  std::optional<BitString> certificate;
  StepCounter cost;
};

/// Lexicographically first accepted certificate, found by binary search on
/// the rank threshold against lex_oracle with exactly p() oracle calls.
CertificateSearch first_certificate(const Verifier& v, const BitString& z,
                                    const OracleBudget& budget = {});

/// Lexicographically first certificate by a direct scan of all 2^p strings.
CertificateSearch scan_first_certificate(const Verifier& v, const BitString& z,
                                         const OracleBudget& budget = {});

}  // namespace certlearn
