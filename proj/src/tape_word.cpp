#include "ittm/tape_word.hpp"

#include <numeric>
#include <stdexcept>

namespace ittm {

namespace {

std::size_t lcm_size(std::size_t a, std::size_t b) {
  return a / std::gcd(a, b) * b;
}

}  // namespace

TapeWord::TapeWord() : period_{0} {}

TapeWord::TapeWord(Bits prefix, Bits period)
    : prefix_(std::move(prefix)), period_(std::move(period)) {
  if (period_.empty()) period_ = {0};
  for (auto b : prefix_)
    if (b > 1) throw std::invalid_argument("tape bits must be 0 or 1");
  for (auto b : period_)
    if (b > 1) throw std::invalid_argument("tape bits must be 0 or 1");
  canonicalize();
}

TapeWord TapeWord::from_support(const Bits& bits) { return TapeWord(bits, {0}); }

void TapeWord::canonicalize() {
  // Minimal period: the smallest divisor d of |period| such that the period
  // is the d-prefix repeated.
  for (std::size_t d = 1; d <= period_.size(); ++d) {
    if (period_.size() % d != 0) continue;
    bool ok = true;
    for (std::size_t i = d; i < period_.size() && ok; ++i)
      ok = period_[i] == period_[i % d];
    if (ok) {
      period_.resize(d);
      break;
    }
  }
  // Minimal prefix: fold prefix bits that agree with the period's tail.
  while (!prefix_.empty() && prefix_.back() == period_.back()) {
    prefix_.pop_back();
    std::uint8_t last = period_.back();
    period_.pop_back();
    period_.insert(period_.begin(), last);
  }
}

TapeWord TapeWord::parse(const std::string& text) {
  Bits pre, per;
  std::size_t i = 0;
  for (; i < text.size() && text[i] != '('; ++i) {
    if (text[i] != '0' && text[i] != '1')
      throw std::invalid_argument("tape literal: bad character in '" + text + "'");
    pre.push_back(static_cast<std::uint8_t>(text[i] - '0'));
  }
  if (i < text.size()) {
    ++i;  // '('
    for (; i < text.size() && text[i] != ')'; ++i) {
      if (text[i] != '0' && text[i] != '1')
        throw std::invalid_argument("tape literal: bad character in '" + text + "'");
      per.push_back(static_cast<std::uint8_t>(text[i] - '0'));
    }
    if (i >= text.size() || text[i] != ')' || i + 1 != text.size() || per.empty())
      throw std::invalid_argument("tape literal: malformed '" + text + "'");
  }
  if (per.empty()) per = {0};
  return TapeWord(std::move(pre), std::move(per));
}

std::string TapeWord::format() const {
  std::string out;
  for (auto b : prefix_) out.push_back(static_cast<char>('0' + b));
  out.push_back('(');
  for (auto b : period_) out.push_back(static_cast<char>('0' + b));
  out.push_back(')');
  return out;
}

std::uint8_t TapeWord::at(std::size_t i) const {
  if (i < prefix_.size()) return prefix_[i];
  return period_[(i - prefix_.size()) % period_.size()];
}

TapeWord TapeWord::with_cell(std::size_t i, std::uint8_t bit) const {
  if (at(i) == bit) return *this;
  Bits pre = prefix_;
  if (i >= pre.size()) {
    std::size_t need = i + 1;
    pre.reserve(need);
    for (std::size_t x = prefix_.size(); x < need; ++x) pre.push_back(at(x));
  }
  pre[i] = bit;
  Bits per;
  // Tail continues with the same periodic content, phase-aligned.
  std::size_t tail_start = pre.size();
  per.reserve(period_.size());
  for (std::size_t x = 0; x < period_.size(); ++x) per.push_back(at(tail_start + x));
  return TapeWord(std::move(pre), std::move(per));
}

Bits TapeWord::window(std::size_t start, std::size_t len) const {
  Bits out(len);
  for (std::size_t i = 0; i < len; ++i) out[i] = at(start + i);
  return out;
}

TapeWord TapeWord::pointwise_or(const TapeWord& a, const TapeWord& b) {
  std::size_t pre = std::max(a.prefix_.size(), b.prefix_.size());
  std::size_t per = lcm_size(a.period_.size(), b.period_.size());
  Bits prefix(pre), period(per);
  for (std::size_t i = 0; i < pre; ++i) prefix[i] = a.at(i) | b.at(i);
  for (std::size_t i = 0; i < per; ++i)
    period[i] = a.at(pre + i) | b.at(pre + i);
  return TapeWord(std::move(prefix), std::move(period));
}

long TapeWord::first_mismatch(const TapeWord& a, const TapeWord& b) {
  std::size_t bound = std::max(a.prefix_.size(), b.prefix_.size()) +
                      lcm_size(a.period_.size(), b.period_.size());
  for (std::size_t i = 0; i < bound; ++i)
    if (a.at(i) != b.at(i)) return static_cast<long>(i);
  return -1;
}

TapeWord::ShiftDiff TapeWord::diff_against_shifted(const TapeWord& a,
                                                   const TapeWord& b,
                                                   std::size_t d) {
  ShiftDiff out;
  // Beyond `stable`, both a(x) and b(x-d) are in their periodic tails; the
  // mismatch pattern there repeats with period `cycle`.
  std::size_t stable = std::max(a.prefix_.size(), b.prefix_.size() + d);
  std::size_t cycle = lcm_size(a.period_.size(), b.period_.size());
  for (std::size_t x = d; x < stable + cycle; ++x) {
    if (a.at(x) != b.at(x - d)) {
      if (x >= stable) {
        out.unbounded = true;
        return out;
      }
      if (out.first < 0) out.first = static_cast<long>(x);
      out.last = static_cast<long>(x);
    }
  }
  return out;
}

TapeWord TapeWord::or_of_shifts(const TapeWord& e, std::size_t d) {
  if (d == 0) throw std::invalid_argument("or_of_shifts: d must be positive");
  const std::size_t L = e.prefix_.size();
  const std::size_t q = e.period_.size();
  const std::size_t g = std::gcd(d, q);
  // Result components: shifts of the prefix part settle into period d after
  // cell L + d; shifts of the periodic tail settle into period g (g | d)
  // once every residue class mod g has been reached.
  const std::size_t settle = L + d * (q / g) + d;
  const std::size_t total = settle + d;
  Bits vals(total, 0);
  for (std::size_t y = 0; y < total; ++y) {
    std::uint8_t v = 0;
    for (std::size_t k = 0; k * d <= y && !v; ++k) v = e.at(y - k * d);
    // For large y the k-scan above is exact but long; cap it via periodicity:
    // every position y - k*d >= L samples the tail, whose residues mod q are
    // determined by k mod (q/g). Scanning k up to y/d is still fine at desk
    // scale because y is bounded by `total`.
    vals[y] = v;
  }
  Bits prefix(vals.begin(), vals.begin() + static_cast<long>(settle));
  Bits period(vals.begin() + static_cast<long>(settle), vals.end());
  return TapeWord(std::move(prefix), std::move(period));
}

TapeWord TapeWord::zeroed_below(std::size_t cut) const {
  TapeWord w = *this;
  for (std::size_t i = 0; i < cut; ++i)
    if (w.at(i)) w = w.with_cell(i, 0);
  return w;
}

TapeWord TapeWord::prepend(const Bits& bits, const TapeWord& w) {
  Bits pre = bits;
  pre.insert(pre.end(), w.prefix_.begin(), w.prefix_.end());
  return TapeWord(std::move(pre), w.period_);
}

TapeWord TapeWord::dropped(std::size_t n) const {
  Bits pre;
  for (std::size_t i = n; i < prefix_.size(); ++i) pre.push_back(prefix_[i]);
  std::size_t tail_start = std::max(n, prefix_.size());
  Bits per;
  for (std::size_t i = 0; i < period_.size(); ++i) per.push_back(at(tail_start + i));
  return TapeWord(std::move(pre), std::move(per));
}

TapeWord TapeWord::interleave(const std::vector<TapeWord>& words) {
  if (words.empty()) throw std::invalid_argument("interleave: no words");
  const std::size_t k = words.size();
  std::size_t max_pre = 0, per = 1;
  for (const TapeWord& w : words) {
    max_pre = std::max(max_pre, w.prefix_.size());
    per = lcm_size(per, w.period_.size());
  }
  Bits prefix(max_pre * k), period(per * k);
  for (std::size_t i = 0; i < max_pre; ++i)
    for (std::size_t t = 0; t < k; ++t) prefix[i * k + t] = words[t].at(i);
  for (std::size_t i = 0; i < per; ++i)
    for (std::size_t t = 0; t < k; ++t)
      period[i * k + t] = words[t].at(max_pre + i);
  return TapeWord(std::move(prefix), std::move(period));
}

TapeWord TapeWord::every_kth(std::size_t step, std::size_t offset) const {
  if (step == 0) throw std::invalid_argument("every_kth: step must be positive");
  std::size_t n_pre = prefix_.size() / step + 2;
  std::size_t per = period_.size() / std::gcd(period_.size(), step);
  Bits prefix(n_pre), period(per);
  for (std::size_t i = 0; i < n_pre; ++i) prefix[i] = at(offset + i * step);
  for (std::size_t i = 0; i < per; ++i)
    period[i] = at(offset + (n_pre + i) * step);
  return TapeWord(std::move(prefix), std::move(period));
}

std::size_t TapeWord::hash() const {
  std::size_t h = 1469598103934665603ull;
  auto mix = [&h](std::size_t v) {
    h ^= v;
    h *= 1099511628211ull;
  };
  mix(prefix_.size());
  for (auto b : prefix_) mix(b + 2);
  mix(period_.size());
  for (auto b : period_) mix(b + 5);
  return h;
}

}  // namespace ittm
