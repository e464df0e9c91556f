#include "certlearn/verifiers.hpp"

#include <stdexcept>
#include <vector>

#include "certlearn/errors.hpp"

namespace certlearn {

namespace {

class RejectingInstance final : public PreparedInstance {
 public:
  bool check(const BitString&, StepCounter* steps) const override {
    if (steps) ++steps->verifier_steps;
    return false;
  }
  bool check_value(std::uint64_t, std::size_t, StepCounter* steps) const override {
    if (steps) ++steps->verifier_steps;
    return false;
  }
};

// Clause = (positive mask, negative mask) over the certificate word, where
// variable j sits at bit (p - j) so that x1 is the most significant bit.
class ThreeSatInstanceCheck final : public PreparedInstance {
 public:
  ThreeSatInstanceCheck(const ThreeSatInstance& f, std::size_t p) {
    masks_.reserve(f.clauses.size());
    for (const auto& clause : f.clauses) {
      std::uint64_t pos = 0;
      std::uint64_t neg = 0;
      for (const auto& lit : clause) {
        const std::uint64_t bit = std::uint64_t{1} << (p - lit.var);
        (lit.positive ? pos : neg) |= bit;
      }
      masks_.push_back({pos, neg});
    }
  }

  bool check(const BitString& w, StepCounter* steps) const override {
    return check_value(w.to_uint(), w.size(), steps);
  }

  bool check_value(std::uint64_t w, std::size_t, StepCounter* steps) const override {
    std::uint64_t evaluated = 0;
    bool ok = true;
    for (const auto& [pos, neg] : masks_) {
      ++evaluated;
      if (((w & pos) | (~w & neg)) == 0) {
        ok = false;
        break;
      }
    }
    if (steps) steps->verifier_steps += evaluated + 1;
    return ok;
  }

 private:
  std::vector<std::pair<std::uint64_t, std::uint64_t>> masks_;
};

class FunctionInstance final : public PreparedInstance {
 public:
  FunctionInstance(BitString z, const FunctionVerifier::Check& check)
      : z_(std::move(z)), check_(check) {}
  bool check(const BitString& w, StepCounter* steps) const override {
    if (steps) ++steps->verifier_steps;
    return check_(z_, w);
  }

 private:
  BitString z_;
  const FunctionVerifier::Check& check_;
};

void require_instance(const Verifier& v, const BitString& z) {
  if (z.size() != v.n()) throw ShapeError("instance length differs from verifier n");
}

void require_budget(const Verifier& v, const OracleBudget& budget) {
  if (v.p() > budget.max_certificate_bits || v.p() > 62) {
    throw BudgetExceeded("certificate length " + std::to_string(v.p()) +
                         " exceeds the exhaustive-enumeration budget of " +
                         std::to_string(budget.max_certificate_bits) + " bits");
  }
}

// Scans ranks 1..k and returns the first accepted value, if any.
std::optional<std::uint64_t> scan_upto(const PreparedInstance& check, std::size_t p,
                                       std::uint64_t k, StepCounter* steps) {
  for (std::uint64_t value = 0; value < k; ++value) {
    if (steps) ++steps->verifier_calls;
    if (check.check_value(value, p, steps)) return value;
  }
  return std::nullopt;
}

}  // namespace

ThreeSatVerifier::ThreeSatVerifier(FormulaLayout layout) : layout_(layout) {
  layout_.validate();
  if (layout_.max_vars > 64) throw ConfigError("3-SAT verifier supports at most 64 variables");
}

std::unique_ptr<PreparedInstance> ThreeSatVerifier::prepare(const BitString& z) const {
  try {
    return std::make_unique<ThreeSatInstanceCheck>(decode_3sat(z, layout_), p());
  } catch (const ParseError&) {
    return std::make_unique<RejectingInstance>();
  }
}

FunctionVerifier::FunctionVerifier(std::string name, std::size_t n, std::size_t p, Check check)
    : name_(std::move(name)), n_(n), p_(p), check_(std::move(check)) {
  if (p_ == 0) throw ConfigError("certificate length must be at least 1");
}

std::unique_ptr<PreparedInstance> FunctionVerifier::prepare(const BitString& z) const {
  return std::make_unique<FunctionInstance>(z, check_);
}

bool verify(const Verifier& v, const BitString& z, const BitString& w, StepCounter* steps) {
  require_instance(v, z);
  if (w.size() != v.p()) throw ShapeError("certificate length differs from verifier p");
  if (steps) ++steps->verifier_calls;
  return v.prepare(z)->check(w, steps);
}

bool lex_verify(const Verifier& v, const LexQuery& q, const BitString& w, StepCounter* steps) {
  require_instance(v, q.instance);
  if (w.size() != v.p()) throw ShapeError("certificate length differs from verifier p");
  if (lex_rank(w) > q.k) return false;
  return verify(v, q.instance, w, steps);
}

bool nondet_oracle(const Verifier& v, const BitString& z, const OracleBudget& budget,
                   StepCounter* steps) {
  require_instance(v, z);
  require_budget(v, budget);
  return lex_oracle(v, z, std::uint64_t{1} << v.p(), budget, steps);
}

bool lex_oracle(const Verifier& v, const BitString& z, std::uint64_t k,
                const OracleBudget& budget, StepCounter* steps) {
  require_instance(v, z);
  require_budget(v, budget);
  if (k < 1 || k > (std::uint64_t{1} << v.p())) {
    throw ShapeError("lex oracle threshold outside [1, 2^p]");
  }
  if (steps) ++steps->oracle_calls;
  const auto check = v.prepare(z);
  return scan_upto(*check, v.p(), k, steps).has_value();
}

CertificateSearch first_certificate(const Verifier& v, const BitString& z,
                                    const OracleBudget& budget) {
  require_instance(v, z);
  require_budget(v, budget);
  CertificateSearch out;
  // Smallest k in [1, 2^p] whose Lex query accepts; the interval halves on
  // every call, so the loop makes exactly p calls.
  std::uint64_t lo = 1;
  std::uint64_t hi = std::uint64_t{1} << v.p();
  bool accepted_any = false;
  while (lo < hi) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (lex_oracle(v, z, mid, budget, &out.cost)) {
      hi = mid;
      accepted_any = true;
    } else {
      lo = mid + 1;
    }
  }
  BitString candidate = string_of_rank(lo, v.p());
  if (verify(v, z, candidate, &out.cost)) {
    out.certificate = std::move(candidate);
  } else if (accepted_any) {
    throw std::logic_error("lex oracle accepted but the located certificate fails");
  }
  return out;
}

CertificateSearch scan_first_certificate(const Verifier& v, const BitString& z,
                                         const OracleBudget& budget) {
  require_instance(v, z);
  require_budget(v, budget);
  CertificateSearch out;
  const auto check = v.prepare(z);
  if (auto value = scan_upto(*check, v.p(), std::uint64_t{1} << v.p(), &out.cost)) {
    out.certificate = BitString::from_uint(*value, v.p());
  }
  return out;
}

}  // namespace certlearn
