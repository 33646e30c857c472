#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace ittm {

using Bits = std::vector<std::uint8_t>;

/// An infinite binary tape described finitely: a prefix followed by a period
/// repeated forever. Instances are always canonical (minimal period, then
/// minimal prefix), so denotational equality coincides with structural
/// equality.
class TapeWord {
 public:
  /// The all-zero word.
  TapeWord();

  TapeWord(Bits prefix, Bits period);

  static TapeWord zeros() { return TapeWord(); }

  /// Word with the given finite support, all zeros beyond.
  static TapeWord from_support(const Bits& bits);

  /// Literal `prefix(period)`, e.g. "110(01)"; "10" means 10 then zeros.
  static TapeWord parse(const std::string& text);
  std::string format() const;

  std::uint8_t at(std::size_t i) const;

  /// Copy with cell i set to bit.
  TapeWord with_cell(std::size_t i, std::uint8_t bit) const;

  const Bits& prefix() const { return prefix_; }
  const Bits& period() const { return period_; }

  Bits window(std::size_t start, std::size_t len) const;

  bool operator==(const TapeWord& o) const = default;

  static TapeWord pointwise_or(const TapeWord& a, const TapeWord& b);

  /// Least i with a(i) != b(i), or -1 if equal.
  static long first_mismatch(const TapeWord& a, const TapeWord& b);

  /// Mismatch positions of a against b shifted right by d, i.e. positions
  /// x >= d with a(x) != b(x-d). first/last are -1 when there are none;
  /// unbounded reports a mismatch recurring in the common periodic tail.
  struct ShiftDiff {
    bool unbounded = false;
    long first = -1;
    long last = -1;
  };
  static ShiftDiff diff_against_shifted(const TapeWord& a, const TapeWord& b,
                                        std::size_t d);

  /// OR of shift_right(e, k*d) over all k >= 0 (each shift keeps zeros in the
  /// vacated cells). Exact on descriptors.
  static TapeWord or_of_shifts(const TapeWord& e, std::size_t d);

  /// Copy with cells below `cut` forced to zero.
  TapeWord zeroed_below(std::size_t cut) const;

  /// prefix bits, then the word continuing from cell 0.
  static TapeWord prepend(const Bits& bits, const TapeWord& w);

  /// The word shifted left by n (drops the first n cells).
  TapeWord dropped(std::size_t n) const;

  /// Round-robin interleaving: result cell (k*i + t) = words[t] cell i.
  static TapeWord interleave(const std::vector<TapeWord>& words);

  /// Cells offset, offset+step, offset+2*step, ...
  TapeWord every_kth(std::size_t step, std::size_t offset) const;

  std::size_t hash() const;

 private:
  void canonicalize();

  Bits prefix_;
  Bits period_;  // nonempty
};

}  // namespace ittm
