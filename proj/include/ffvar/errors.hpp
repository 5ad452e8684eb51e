#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace ffvar {

/// Input violates the documented precondition of an operation.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Requested enumeration is larger than the configured budget.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An identity was asked for on an input outside its hypothesis.
class NotApplicableError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed or inconsistent irreducible cache file.
class CacheError : public std::runtime_error {
 public:
  CacheError(const std::string& what, int line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Default cap on the number of polynomials a single enumeration may visit.
inline constexpr std::uint64_t kDefaultBudget = std::uint64_t{1} << 26;

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = 0;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("64-bit overflow");
  return r;
}

inline std::uint64_t checked_pow(std::uint64_t base, int exp) {
  if (exp < 0) throw std::invalid_argument("negative exponent");
  std::uint64_t r = 1;
  for (int i = 0; i < exp; ++i) r = checked_mul(r, base);
  return r;
}

inline void require(bool cond, const std::string& what) {
  if (!cond) throw PreconditionError(what);
}

inline void require_budget(std::uint64_t count, std::uint64_t budget, const std::string& what) {
  if (count > budget)
    throw BudgetError(what + ": " + std::to_string(count) + " exceeds budget " +
                      std::to_string(budget));
}

}  // namespace ffvar
