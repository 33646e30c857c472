#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ittm {

/// Countable ordinals below w^K in Cantor normal form, used as the engine's
/// transfinite clock. K (the "height") bounds the exponents; the default of 4
/// admits every step count the toolkit produces.
///
/// Values are immutable after construction and cheap to copy.
class Ordinal {
 public:
  struct Term {
    unsigned exponent;     // < height
    std::uint64_t coeff;   // >= 1
    bool operator==(const Term&) const = default;
  };

  static constexpr unsigned kDefaultHeight = 4;

  /// Zero.
  Ordinal() = default;

  static Ordinal from_natural(std::uint64_t n);

  /// w^exponent * coeff. Throws if exponent >= height or coeff == 0.
  static Ordinal omega_term(unsigned exponent, std::uint64_t coeff = 1,
                            unsigned height = kDefaultHeight);

  /// Builds from a term list; validates strict exponent descent.
  static Ordinal from_terms(std::vector<Term> terms,
                            unsigned height = kDefaultHeight);

  /// Grammar: sum of `w^e*c | w^e | w*c | w | n` joined with '+'.
  /// Throws std::invalid_argument on syntax errors or exponent >= height.
  static Ordinal parse(const std::string& text,
                       unsigned height = kDefaultHeight);

  /// Canonical text; parse(format(x)) == x.
  std::string format() const;

  /// Ordinal addition in CNF (non-commutative: left terms below the right
  /// operand's leading exponent are absorbed).
  static Ordinal add(const Ordinal& a, const Ordinal& b);

  enum class Kind { Zero, Successor, Limit };
  Kind classify() const;
  bool is_zero() const { return terms_.empty(); }
  bool is_successor() const { return classify() == Kind::Successor; }
  bool is_limit() const { return classify() == Kind::Limit; }

  /// Predecessor of a successor ordinal. Throws otherwise.
  Ordinal predecessor() const;

  /// -1, 0, 1 for lexicographic comparison of CNF term lists.
  int compare(const Ordinal& other) const;

  bool operator==(const Ordinal& o) const { return terms_ == o.terms_; }
  bool operator!=(const Ordinal& o) const { return !(*this == o); }
  bool operator<(const Ordinal& o) const { return compare(o) < 0; }
  bool operator<=(const Ordinal& o) const { return compare(o) <= 0; }
  bool operator>(const Ordinal& o) const { return compare(o) > 0; }
  bool operator>=(const Ordinal& o) const { return compare(o) >= 0; }

  const std::vector<Term>& terms() const { return terms_; }

  /// The trailing finite part (coefficient of w^0, or 0).
  std::uint64_t finite_part() const;

  /// The ordinal with its finite part removed.
  Ordinal limit_part() const;

 private:
  // Strictly decreasing exponents, coefficients >= 1. Empty list is zero.
  std::vector<Term> terms_;
};

}  // namespace ittm
