#include "ittm/ordinal.hpp"

#include <cctype>
#include <sstream>

namespace ittm {

Ordinal Ordinal::from_natural(std::uint64_t n) {
  Ordinal o;
  if (n > 0) o.terms_.push_back({0, n});
  return o;
}

Ordinal Ordinal::omega_term(unsigned exponent, std::uint64_t coeff,
                            unsigned height) {
  if (exponent >= height)
    throw std::invalid_argument("ordinal exponent " + std::to_string(exponent) +
                                " exceeds height w^" + std::to_string(height));
  if (coeff == 0) throw std::invalid_argument("ordinal coefficient must be >= 1");
  Ordinal o;
  o.terms_.push_back({exponent, coeff});
  return o;
}

Ordinal Ordinal::from_terms(std::vector<Term> terms, unsigned height) {
  for (size_t i = 0; i < terms.size(); ++i) {
    if (terms[i].exponent >= height)
      throw std::invalid_argument("ordinal exponent exceeds height");
    if (terms[i].coeff == 0)
      throw std::invalid_argument("ordinal coefficient must be >= 1");
    if (i > 0 && terms[i - 1].exponent <= terms[i].exponent)
      throw std::invalid_argument("ordinal exponents must strictly decrease");
  }
  Ordinal o;
  o.terms_ = std::move(terms);
  return o;
}

namespace {

std::uint64_t parse_nat(const std::string& s, size_t& i) {
  if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i])))
    throw std::invalid_argument("ordinal text: expected a number in '" + s + "'");
  std::uint64_t v = 0;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
    v = v * 10 + static_cast<std::uint64_t>(s[i] - '0');
    ++i;
  }
  return v;
}

}  // namespace

Ordinal Ordinal::parse(const std::string& raw, unsigned height) {
  std::string text;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) text.push_back(c);
  if (text.empty()) throw std::invalid_argument("empty ordinal text");

  // Accumulate terms left to right with ordinal addition so inputs like
  // "w+w" normalize to w*2.
  Ordinal acc;
  size_t i = 0;
  while (true) {
    Ordinal term;
    if (text[i] == 'w') {
      ++i;
      unsigned exp = 1;
      if (i < text.size() && text[i] == '^') {
        ++i;
        std::uint64_t e = parse_nat(text, i);
        if (e > 1000) throw std::invalid_argument("ordinal exponent out of range");
        exp = static_cast<unsigned>(e);
      }
      std::uint64_t coeff = 1;
      if (i < text.size() && text[i] == '*') {
        ++i;
        coeff = parse_nat(text, i);
      }
      if (exp == 0)
        term = from_natural(coeff);
      else
        term = omega_term(exp, coeff, height);
    } else {
      term = from_natural(parse_nat(text, i));
    }
    acc = add(acc, term);
    if (i == text.size()) break;
    if (text[i] != '+')
      throw std::invalid_argument("ordinal text: unexpected '" +
                                  std::string(1, text[i]) + "' in '" + raw + "'");
    ++i;
  }
  return acc;
}

std::string Ordinal::format() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const Term& t : terms_) {
    if (!first) out << '+';
    first = false;
    if (t.exponent == 0) {
      out << t.coeff;
    } else {
      out << 'w';
      if (t.exponent > 1) out << '^' << t.exponent;
      if (t.coeff > 1) out << '*' << t.coeff;
    }
  }
  return out.str();
}

Ordinal Ordinal::add(const Ordinal& a, const Ordinal& b) {
  if (b.terms_.empty()) return a;
  const unsigned lead = b.terms_.front().exponent;
  Ordinal out;
  for (const Term& t : a.terms_) {
    if (t.exponent > lead)
      out.terms_.push_back(t);
    else
      break;  // terms with exponent <= lead are absorbed or merged
  }
  out.terms_.push_back(b.terms_.front());
  // Merge with a's term of the same exponent, if it survived absorption.
  for (const Term& t : a.terms_)
    if (t.exponent == lead) out.terms_.back().coeff += t.coeff;
  out.terms_.insert(out.terms_.end(), b.terms_.begin() + 1, b.terms_.end());
  return out;
}

Ordinal::Kind Ordinal::classify() const {
  if (terms_.empty()) return Kind::Zero;
  return terms_.back().exponent == 0 ? Kind::Successor : Kind::Limit;
}

Ordinal Ordinal::predecessor() const {
  if (classify() != Kind::Successor)
    throw std::logic_error("predecessor of a non-successor ordinal");
  Ordinal o = *this;
  if (o.terms_.back().coeff > 1)
    o.terms_.back().coeff -= 1;
  else
    o.terms_.pop_back();
  return o;
}

int Ordinal::compare(const Ordinal& other) const {
  const size_t n = std::min(terms_.size(), other.terms_.size());
  for (size_t i = 0; i < n; ++i) {
    if (terms_[i].exponent != other.terms_[i].exponent)
      return terms_[i].exponent < other.terms_[i].exponent ? -1 : 1;
    if (terms_[i].coeff != other.terms_[i].coeff)
      return terms_[i].coeff < other.terms_[i].coeff ? -1 : 1;
  }
  if (terms_.size() != other.terms_.size())
    return terms_.size() < other.terms_.size() ? -1 : 1;
  return 0;
}

std::uint64_t Ordinal::finite_part() const {
  if (!terms_.empty() && terms_.back().exponent == 0) return terms_.back().coeff;
  return 0;
}

Ordinal Ordinal::limit_part() const {
  Ordinal o = *this;
  if (!o.terms_.empty() && o.terms_.back().exponent == 0) o.terms_.pop_back();
  return o;
}

}  // namespace ittm
