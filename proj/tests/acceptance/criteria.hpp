#pragma once

// One function per checklist item; each file groups a few of them.

#include "acceptance.hpp"

#include <chrono>
#include <sstream>

namespace tfnp::acceptance::detail {

CriterionResult hcs_correctness(const Options&);
CriterionResult herbrand_brute_force(const Options&);
CriterionResult totality_sweeps(const Options&);
CriterionResult many_one_contract(const Options&);
CriterionResult completion_lemma(const Options&);
CriterionResult conp_trichotomy_lifting(const Options&);
CriterionResult compiler_equivalence(const Options&);
CriterionResult resolution_soundness(const Options&);
CriterionResult gamma_system(const Options&);
CriterionResult numeral_size(const Options&);
CriterionResult npmv_set_equality(const Options&);

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

/// Collects failures with a cap on how many are spelled out.
class Findings {
 public:
  void fail(const std::string& what) {
    if (count_++ < 5) notes_ << (count_ > 1 ? "; " : "") << what;
  }
  std::size_t count() const { return count_; }
  std::string text() const {
    auto s = notes_.str();
    if (count_ > 5) s += "; ... " + std::to_string(count_ - 5) + " more";
    return s;
  }

 private:
  std::size_t count_ = 0;
  std::ostringstream notes_;
};

std::string data_path(const Options& o, const std::string& relative);

}  // namespace tfnp::acceptance::detail
