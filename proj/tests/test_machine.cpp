#include "doctest.h"

#include <stdexcept>

#include "ittm/assembler.hpp"
#include "ittm/machine.hpp"

using namespace ittm;

namespace {

// One-tape machine that walks right forever writing 1s.
Program right_writer() {
  Program p(MachineShape{1, 0, 1}, {"start", "limit", "halt"}, 0, 1, 2);
  for (unsigned r = 0; r < 2; ++r) {
    p.set_transition(0, r, {1, Move::R, 0});
    p.set_transition(1, r, {1, Move::R, 0});
  }
  return p;
}

}  // namespace

TEST_CASE("validate reports missing transitions") {
  Program p(MachineShape{1, 0, 1}, {"start", "limit", "halt", "s"}, 0, 1, 2);
  for (unsigned r = 0; r < 2; ++r) {
    p.set_transition(0, r, {0, Move::R, 3});
    p.set_transition(1, r, {0, Move::R, 3});
  }
  p.set_transition(3, 0, {0, Move::R, 3});
  auto report = p.validate();
  REQUIRE(report.size() == 1);
  CHECK(report[0].find("(s, read=1)") != std::string::npos);

  p.set_transition(3, 1, {0, Move::L, 2});
  CHECK(p.validate().empty());
  CHECK_THROWS_AS(p.set_transition(2, 0, {0, Move::R, 0}), std::invalid_argument);
}

TEST_CASE("init configuration per shape") {
  Program p3(MachineShape{3, 0, 1}, {"start", "limit", "halt"}, 0, 1, 2);
  Configuration c = init_configuration(p3, TapeWord::parse("1(0)"));
  CHECK(c.state == 0);
  CHECK(c.head == 0);
  REQUIRE(c.tapes.size() == 3);
  CHECK(c.tapes[0] == TapeWord::parse("1(0)"));
  CHECK(c.tapes[1] == TapeWord::zeros());
  CHECK(c.tapes[2] == TapeWord::zeros());

  Program pp(MachineShape{1, 1, 1}, {"start", "limit", "halt"}, 0, 1, 2);
  Configuration cp = init_configuration(pp, TapeWord::zeros());
  REQUIRE(cp.pad.size() == 1);
  CHECK(cp.pad[0] == 0);
}

TEST_CASE("step moves and the leftmost convention") {
  Program p(MachineShape{1, 0, 1}, {"start", "limit", "halt", "s"}, 0, 1, 2);
  for (unsigned r = 0; r < 2; ++r) {
    p.set_transition(0, r, {static_cast<std::uint16_t>(r), Move::L, 3});  // write back, try left
    p.set_transition(1, r, {static_cast<std::uint16_t>(r), Move::R, 3});
    p.set_transition(3, r, {1, Move::R, 3});
  }
  Configuration c = init_configuration(p, TapeWord::parse("1(0)"));
  StepResult sr = step(p, c);
  CHECK(sr.clamped);
  CHECK(sr.next.head == 0);     // the head stays on the leftmost cell
  CHECK(sr.next.state == 3);    // the state still advances

  // Writing extends the prefix as needed.
  Configuration far = sr.next;
  far.head = 3;
  StepResult sr2 = step(p, far);
  CHECK(sr2.next.tapes[0].at(3) == 1);
  CHECK(sr2.next.head == 4);
}

TEST_CASE("double head reads two cells") {
  Program p(MachineShape{1, 0, 2}, {"start", "limit", "halt"}, 0, 1, 2);
  for (unsigned r = 0; r < 4; ++r) {
    p.set_transition(0, r, {static_cast<std::uint16_t>(r), Move::R, 0});
    p.set_transition(1, r, {static_cast<std::uint16_t>(r), Move::R, 0});
  }
  Configuration c = init_configuration(p, TapeWord::parse("10(0)"));
  CHECK(read_window(p, c) == 0b01u);  // cell 0 = 1 in bit 0, cell 1 = 0 in bit 1
  c.tapes[0] = TapeWord::parse("01(0)");
  CHECK(read_window(p, c) == 0b10u);
}

TEST_CASE("3-tape step only touches the head column") {
  Program p(MachineShape{3, 0, 1}, {"start", "limit", "halt"}, 0, 1, 2);
  for (unsigned r = 0; r < 8; ++r) {
    p.set_transition(0, r, {0b111, Move::R, 0});
    p.set_transition(1, r, {0b111, Move::R, 0});
  }
  Configuration c = init_configuration(p, TapeWord::parse("0110(01)"));
  c.head = 2;
  Configuration n = step(p, c).next;
  for (int t = 0; t < 3; ++t)
    for (std::size_t x = 0; x < 24; ++x)
      if (x != 2) CHECK(n.tapes[static_cast<std::size_t>(t)].at(x) ==
                        c.tapes[static_cast<std::size_t>(t)].at(x));
  CHECK(n.tapes[0].at(2) == 1);
  CHECK(n.tapes[1].at(2) == 1);
  CHECK(n.tapes[2].at(2) == 1);
}

TEST_CASE("step is deterministic") {
  Program p = right_writer();
  Configuration c = init_configuration(p, TapeWord::parse("10(0)"));
  CHECK(step(p, c).next == step(p, c).next);
}

TEST_CASE("shift_equivalent") {
  Program p = right_writer();
  Configuration c1 = init_configuration(p, TapeWord::parse("110(01)"));
  c1.head = 2;
  Configuration c2 = c1;
  // Shift every tape right by 3; vacated cells come from c2 itself.
  c2.tapes[0] = TapeWord::prepend(Bits{1, 0, 1}, c1.tapes[0]);
  c2.head = 5;
  CHECK(shift_equivalent(c1, c2, 3));
  Configuration c3 = c2;
  c3.state = 1;
  CHECK(!shift_equivalent(c1, c3, 3));
  // Equal configurations are not 1-shift-equivalent unless shift-invariant.
  CHECK(!shift_equivalent(c1, c1, 1));
  Configuration z1 = init_configuration(p, TapeWord::zeros());
  Configuration z2 = z1;
  z2.head = 1;
  CHECK(shift_equivalent(z1, z2, 1));
}

TEST_CASE("assembler round trip") {
  std::string text =
      "machine tapes=1 pad=0 head=1\n"
      "states start,limit,halt,w\n"
      "start start\n"
      "start 0 -> 1,0 R w\n";
  CHECK_THROWS(parse_program(text));  // wrong write width

  std::string good =
      "# walk right writing ones\n"
      "machine tapes=1 pad=0 head=1\n"
      "states start,limit,halt,w\n"
      "start start\n"
      "start 0 -> 1 R w\n"
      "start 1 -> 1 R w\n"
      "limit 0 -> 0 R halt\n"
      "limit 1 -> 1 R halt\n"
      "w 0 -> 1 R w\n"
      "w 1 -> 1 R w\n";
  Program p = parse_program(good);
  CHECK(p.validate().empty());
  CHECK(p.shape().tapes == 1);
  Program q = parse_program(format_program(p));
  CHECK(format_program(q) == format_program(p));
}
