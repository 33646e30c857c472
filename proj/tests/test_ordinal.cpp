#include "doctest.h"

#include <random>

#include "ittm/ordinal.hpp"

using ittm::Ordinal;

TEST_CASE("parse and format round-trip") {
  Ordinal a = Ordinal::parse("w^2+w*2+5");
  REQUIRE(a.terms().size() == 3);
  CHECK(a.terms()[0].exponent == 2);
  CHECK(a.terms()[0].coeff == 1);
  CHECK(a.terms()[1].exponent == 1);
  CHECK(a.terms()[1].coeff == 2);
  CHECK(a.terms()[2].exponent == 0);
  CHECK(a.terms()[2].coeff == 5);
  CHECK(a.format() == "w^2+w*2+5");

  CHECK(Ordinal::parse("0").terms().empty());
  CHECK(Ordinal::parse("0").format() == "0");
  CHECK(Ordinal::parse("w+w").format() == "w*2");
  CHECK(Ordinal::parse("w^3*2").format() == "w^3*2");

  for (const char* s : {"w^2+w*2+5", "0", "w*2", "17", "w^3+1", "w^2+w+1"}) {
    CHECK(Ordinal::parse(s).format() == s);
    CHECK(Ordinal::parse(Ordinal::parse(s).format()) == Ordinal::parse(s));
  }
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(Ordinal::parse("w^4"), std::invalid_argument);
  CHECK_THROWS_AS(Ordinal::parse("x"), std::invalid_argument);
  CHECK_THROWS_AS(Ordinal::parse("w++1"), std::invalid_argument);
  CHECK_THROWS_AS(Ordinal::parse(""), std::invalid_argument);
  CHECK_NOTHROW(Ordinal::parse("w^4", 5));
}

TEST_CASE("addition") {
  auto P = [](const char* s) { return Ordinal::parse(s); };
  CHECK(Ordinal::add(P("1"), P("w")) == P("w"));
  CHECK(Ordinal::add(P("w+1"), P("w")) == P("w*2"));
  CHECK(Ordinal::add(P("w^2"), P("w*2+5")) == P("w^2+w*2+5"));
  CHECK(Ordinal::add(P("w^2+w"), P("w^2")) == P("w^2*2"));
  CHECK(Ordinal::add(P("5"), P("3")) == P("8"));
  CHECK(Ordinal::add(P("w"), P("0")) == P("w"));
  CHECK(Ordinal::add(P("0"), P("w")) == P("w"));
}

TEST_CASE("classification") {
  auto P = [](const char* s) { return Ordinal::parse(s); };
  CHECK(P("0").classify() == Ordinal::Kind::Zero);
  CHECK(P("w*2").classify() == Ordinal::Kind::Limit);
  CHECK(P("w^2+1").classify() == Ordinal::Kind::Successor);
  CHECK(P("w^2+1").predecessor() == P("w^2"));
  CHECK(P("7").predecessor() == P("6"));
  CHECK_THROWS_AS(P("w").predecessor(), std::logic_error);
}

TEST_CASE("comparison") {
  auto P = [](const char* s) { return Ordinal::parse(s); };
  CHECK(P("w") < P("w+1"));
  CHECK(P("w*2") > P("w+5"));
  CHECK(P("w^2").compare(P("w^2")) == 0);
  CHECK(P("3") < P("w"));
  CHECK(P("w^2") > P("w*100+99"));
}

namespace {

// Independent oracle for ordinals below w^3: a triple (a, b, c) denotes
// w^2*a + w*b + c with the textbook absorption rule.
struct Triple {
  std::uint64_t a, b, c;
  bool operator==(const Triple&) const = default;
};

Triple triple_add(Triple x, Triple y) {
  if (y.a > 0) return {x.a + y.a, y.b, y.c};
  if (y.b > 0) return {x.a, x.b + y.b, y.c};
  return {x.a, x.b, x.c + y.c};
}

Triple to_triple(const Ordinal& o) {
  Triple t{0, 0, 0};
  for (const auto& term : o.terms()) {
    if (term.exponent == 2) t.a = term.coeff;
    if (term.exponent == 1) t.b = term.coeff;
    if (term.exponent == 0) t.c = term.coeff;
  }
  return t;
}

Ordinal from_triple(Triple t) {
  std::vector<Ordinal::Term> terms;
  if (t.a) terms.push_back({2, t.a});
  if (t.b) terms.push_back({1, t.b});
  if (t.c) terms.push_back({0, t.c});
  return Ordinal::from_terms(terms);
}

}  // namespace

TEST_CASE("addition agrees with the triple oracle and is associative") {
  std::mt19937 rng(20240817);
  std::uniform_int_distribution<std::uint64_t> coin(0, 4);
  for (int trial = 0; trial < 2000; ++trial) {
    Triple x{coin(rng), coin(rng), coin(rng)};
    Triple y{coin(rng), coin(rng), coin(rng)};
    Triple z{coin(rng), coin(rng), coin(rng)};
    Ordinal ox = from_triple(x), oy = from_triple(y), oz = from_triple(z);
    CHECK(to_triple(Ordinal::add(ox, oy)) == triple_add(x, y));
    CHECK(Ordinal::add(Ordinal::add(ox, oy), oz) ==
          Ordinal::add(ox, Ordinal::add(oy, oz)));
    CHECK(ox <= Ordinal::add(ox, oy));
    CHECK(Ordinal::add(ox, Ordinal()) == ox);
    CHECK(Ordinal::add(Ordinal(), ox) == ox);
    CHECK(Ordinal::add(ox, Ordinal::from_natural(1)).classify() ==
          Ordinal::Kind::Successor);
    CHECK(Ordinal::add(ox, Ordinal::from_natural(1)).predecessor() == ox);
  }
}
