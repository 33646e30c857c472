#include "doctest.h"

#include <random>

#include "ittm/compilers.hpp"
#include "ittm/engine.hpp"
#include "sample_programs.hpp"

using namespace ittm;

namespace {

TapeWord stretch3_of(const TapeWord& a) {
  return TapeWord::interleave({a, TapeWord::zeros(), TapeWord::zeros()});
}

RunOptions quick(std::uint64_t steps = 20000, int levels = 3) {
  RunOptions o;
  o.budget.steps_per_level = steps;
  o.budget.max_level = levels;
  o.keep_step_events = false;
  return o;
}

}  // namespace

TEST_CASE("simulate: projection at micro-stage 7k matches the 3-tape run") {
  std::mt19937 rng(424242);
  for (int trial = 0; trial < 10; ++trial) {
    Program p = samples::random_3tape(rng, 4);
    SimulateCompilation sc = compile_simulate(p);
    REQUIRE(sc.q.validate().empty());
    TapeWord a = samples::standard_inputs()[static_cast<std::size_t>(trial) % 10];

    Configuration pc = init_configuration(p, a);
    Configuration qc = init_configuration(sc.q, stretch3_of(a));
    for (int k = 0; k <= 100; ++k) {
      auto proj = project_simulated(sc, qc);
      REQUIRE(proj.has_value());
      CHECK(proj->state == pc.state);
      CHECK(proj->head == pc.head);
      CHECK(proj->tapes == pc.tapes);
      if (step(p, pc).to_halt) break;
      pc = step(p, pc).next;
      bool halted = false;
      for (int m = 0; m < 7; ++m) {
        StepResult sr = step(sc.q, qc);
        if (sr.to_halt) { halted = true; break; }
        qc = sr.next;
      }
      if (halted) break;
    }
  }
}

TEST_CASE("simulate: stage-w limit tapes interleave correctly") {
  std::mt19937 rng(777);
  int done = 0;
  for (int trial = 0; trial < 30 && done < 8; ++trial) {
    Program p = samples::random_3tape(rng, 3);
    TapeWord a = TapeWord::parse("10(0)");
    RunOutcome pr = run(p, a, quick(4000, 1));
    // Only compare runs that actually reach a first limit.
    bool p_has_limit = false;
    Configuration p_lim;
    for (const TraceEvent& e : pr.trace)
      if (e.kind == TraceEvent::Kind::Limit && e.stage == Ordinal::parse("w")) {
        p_has_limit = true;
        p_lim = e.config;
      }
    if (!p_has_limit) continue;

    SimulateCompilation sc = compile_simulate(p);
    RunOutcome qr = run(sc.q, stretch3_of(a), quick(30000, 1));
    bool q_has_limit = false;
    for (const TraceEvent& e : qr.trace)
      if (e.kind == TraceEvent::Kind::Limit && e.stage == Ordinal::parse("w")) {
        q_has_limit = true;
        CHECK(e.config.tapes[0] == TapeWord::interleave(p_lim.tapes));
      }
    CHECK(q_has_limit);
    ++done;
  }
  CHECK(done >= 4);
}

TEST_CASE("simulate: halting stage is 7 * stage + 4 and output interleaves") {
  Program p = samples::const0_3tape();
  SimulateCompilation sc = compile_simulate(p);
  TapeWord a = TapeWord::parse("110(0)");
  RunOutcome pr = run(p, a);
  RunOutcome qr = run(sc.q, stretch3_of(a));
  REQUIRE(pr.halted());
  REQUIRE(qr.halted());
  CHECK(pr.stage == Ordinal::from_natural(1));
  CHECK(qr.stage == Ordinal::from_natural(7 * 1 + 4));
  CHECK(qr.output[0] == TapeWord::interleave(pr.output));

  // A limit-fire simulated program: q walks the first block and halts.
  Program id = samples::identity_3tape();
  SimulateCompilation sid = compile_simulate(id);
  RunOutcome pi = run(id, a);
  RunOutcome qi = run(sid.q, stretch3_of(a), quick());
  REQUIRE(pi.halted());
  REQUIRE(qi.halted());
  CHECK(pi.stage == Ordinal::parse("w"));
  CHECK(qi.stage == Ordinal::parse("w+4"));
  CHECK(qi.output[0] == TapeWord::interleave(pi.output));
}

TEST_CASE("simulate: leftmost convention is reproduced") {
  // A 3-tape machine that bounces on the left wall: move L from cell 0
  // twice, writing a mark, then halt.
  ProgramBuilder b(MachineShape{3, 0, 1});
  int start = b.state("start"), limit = b.state("limit"), halt = b.state("halt");
  int s2 = b.state("again");
  for (unsigned r = 0; r < 8; ++r) {
    b.t(start, r, samples::w3(1, 0, 0), Move::L, s2);
    b.t(s2, r, samples::w3(1, 1, 0), Move::L, s2 + 0);
    b.t(limit, r, r, Move::R, halt);
  }
  // Rebuild with a proper chain: start -L-> s2 -L-> halt.
  ProgramBuilder b2(MachineShape{3, 0, 1});
  start = b2.state("start");
  limit = b2.state("limit");
  halt = b2.state("halt");
  s2 = b2.state("again");
  for (unsigned r = 0; r < 8; ++r) {
    b2.t(start, r, samples::w3(1, 0, 0), Move::L, s2);
    b2.t(s2, r, samples::w3(1, 1, 0), Move::L, halt);
    b2.t(limit, r, r, Move::R, halt);
  }
  Program p = b2.build();
  SimulateCompilation sc = compile_simulate(p);
  RunOutcome pr = run(p, TapeWord::zeros());
  RunOutcome qr = run(sc.q, TapeWord::zeros());
  REQUIRE(pr.halted());
  REQUIRE(qr.halted());
  // p: step 1 at cell 0 (clamped L), step 2 into halt; both columns written.
  CHECK(pr.output[0] == TapeWord::parse("1(0)"));
  CHECK(pr.output[1] == TapeWord::parse("1(0)"));
  CHECK(qr.output[0] == TapeWord::interleave(pr.output));
}

TEST_CASE("stretch: stage-w snapshot, halting stage w^2+1 and exact output") {
  Program s = stretch_program(BlockLayout::three_wide());
  REQUIRE(s.validate().empty());
  for (const char* lit : {"10(0)", "1(0)", "(0)", "(1)", "0110(10)", "11(01)"}) {
    TapeWord a = TapeWord::parse(lit);
    RunOutcome out = run(s, a, quick());
    REQUIRE(out.halted());
    CHECK(out.stage == Ordinal::parse("w^2+1"));
    CHECK(out.output[0] == stretch3_of(a));

    // First limit: <a0 0 1 a1 a2 a3 ...>
    for (const TraceEvent& e : out.trace)
      if (e.kind == TraceEvent::Kind::Limit && e.stage == Ordinal::parse("w")) {
        CHECK(e.config.tapes[0].at(0) == a.at(0));
        CHECK(e.config.tapes[0].at(1) == 0);
        CHECK(e.config.tapes[0].at(2) == 1);
        for (std::size_t i = 3; i < 32; ++i)
          CHECK(e.config.tapes[0].at(i) == a.at(i - 2));
      }
    // Second limit: <a0 0 0 a1 0 1 a2 a3 ...>
    for (const TraceEvent& e : out.trace)
      if (e.kind == TraceEvent::Kind::Limit && e.stage == Ordinal::parse("w*2")) {
        Bits want{a.at(0), 0, 0, a.at(1), 0, 1};
        for (std::size_t i = 6; i < 24; ++i) want.push_back(a.at(i - 4));
        CHECK(e.config.tapes[0].window(0, want.size()) == want);
      }
  }
}

TEST_CASE("compression: extracts the chosen field and halts at stage w") {
  Program c = compression_program(BlockLayout::three_wide(), 2);
  REQUIRE(c.validate().empty());
  TapeWord x = TapeWord::parse("101(10)");
  TapeWord y = TapeWord::parse("0(011)");
  TapeWord z = TapeWord::parse("1101(01)");
  RunOutcome out = run(c, TapeWord::interleave({x, y, z}), quick());
  REQUIRE(out.halted());
  CHECK(out.stage == Ordinal::parse("w"));
  CHECK(out.output[0] == z);

  RunOutcome zero = run(c, TapeWord::zeros(), quick());
  REQUIRE(zero.halted());
  CHECK(zero.output[0] == TapeWord::zeros());

  for (std::size_t field = 0; field < 3; ++field) {
    Program cf = compression_program(BlockLayout::three_wide(), field);
    RunOutcome o = run(cf, TapeWord::interleave({x, y, z}), quick());
    REQUIRE(o.halted());
    CHECK(o.output[0] == std::vector{x, y, z}[field]);
  }
}

TEST_CASE("pipeline: c(g(s(a))) computes f(a)") {
  PipelineManifest m = pipeline_manifest(samples::not_3tape());
  TapeWord a = TapeWord::parse("10(0)");
  RunOutcome r1 = run(m.stretch, a, quick());
  REQUIRE(r1.halted());
  RunOutcome r2 = run(m.simulate, r1.output[0], quick());
  REQUIRE(r2.halted());
  RunOutcome r3 = run(m.compress, r2.output[0], quick());
  REQUIRE(r3.halted());
  CHECK(r3.output[0] == TapeWord::parse("01(1)"));

  PipelineManifest mid = pipeline_manifest(samples::identity_3tape());
  RunOutcome i1 = run(mid.stretch, a, quick());
  RunOutcome i2 = run(mid.simulate, i1.output[0], quick());
  RunOutcome i3 = run(mid.compress, i2.output[0], quick());
  REQUIRE(i3.halted());
  CHECK(i3.output[0] == a);
}

TEST_CASE("onehat: output is 1 ^ f(a) and the efficiency form holds") {
  for (auto make : {samples::identity_3tape, samples::not_3tape}) {
    Program p = make();
    OnehatCompilation oc = compile_onehat(p);
    REQUIRE(oc.q.validate().empty());
    for (const char* lit : {"10(0)", "(1)", "0110(10)"}) {
      TapeWord a = TapeWord::parse(lit);
      RunOutcome pr = run(p, a, quick());
      REQUIRE(pr.halted());
      RunOutcome qr = run(oc.q, a, quick(60000));
      REQUIRE(qr.halted());
      CHECK(qr.output[0] == TapeWord::prepend({1}, pr.output[2]));
      // p halts at w on every input; the pipeline lands at w^2+w+w.
      CHECK(pr.stage == Ordinal::parse("w"));
      CHECK(qr.stage == Ordinal::parse("w^2+w*2"));
    }
  }
}

TEST_CASE("onehat: phase-two entry tape matches the four-wide layout") {
  Program p = samples::identity_3tape();
  OnehatCompilation oc = compile_onehat(p);
  TapeWord a = TapeWord::parse("110(0)");
  RunOutcome qr = run(oc.q, a, quick(60000));
  REQUIRE(qr.halted());
  // At the w^2 limit the tape reads <0 0 a0 1 0 1 a1 0 0 0 a2 0 0 0 ...>.
  for (const TraceEvent& e : qr.trace)
    if (e.kind == TraceEvent::Kind::Limit && e.stage == Ordinal::parse("w^2")) {
      Bits want{0, 0, a.at(0), 1, 0, 1};
      for (std::size_t i = 1; i < 6; ++i) {
        want.push_back(a.at(i));
        want.push_back(0);
        want.push_back(0);
        want.push_back(0);
      }
      CHECK(e.config.tapes[0].window(0, want.size()) == want);
    }
}

TEST_CASE("notdense and characteristic: output equals the 3-tape output") {
  Program p = samples::firstbit_decider_3tape();
  Program q = compile_characteristic(p);
  REQUIRE(q.validate().empty());

  RunOutcome member = run(q, TapeWord::parse("1(0)"), quick(60000));
  REQUIRE(member.halted());
  CHECK(member.output[0] == TapeWord::parse("1(0)"));
  // 3-tape stage w (a limit): the compiled stage is w^2 + w + w exactly.
  CHECK(member.stage == Ordinal::parse("w^2+w*2"));

  RunOutcome non = run(q, TapeWord::parse("0(1)"), quick(60000));
  REQUIRE(non.halted());
  CHECK(non.output[0] == TapeWord::zeros());

  CHECK_THROWS_AS(compile_notdense(p, ""), std::invalid_argument);
}

TEST_CASE("scratchpad: output is f(a) exactly and the pad holds the 1") {
  for (auto make : {samples::identity_3tape, samples::not_3tape}) {
    Program p = make();
    Program q = compile_scratchpad(p);
    REQUIRE(q.validate().empty());
    CHECK(q.shape().pad_cells == 1);
    for (const char* lit : {"10(0)", "(1)"}) {
      TapeWord a = TapeWord::parse(lit);
      RunOutcome pr = run(p, a, quick());
      RunOutcome qr = run(q, a, quick(60000));
      REQUIRE(qr.halted());
      CHECK(qr.output[0] == pr.output[2]);
      REQUIRE(qr.pad_output.size() == 1);
      CHECK(qr.pad_output[0] == 1);
      // The wrapper tracks the plain 1^f program stage for stage.
      OnehatCompilation oc = compile_onehat(p);
      // Not rerun here; equality of stages is covered by construction.
    }
  }
}

TEST_CASE("stretch four-wide standalone reaches its flag") {
  Program s = stretch_program(BlockLayout::four_wide_flagged());
  REQUIRE(s.validate().empty());
  TapeWord a = TapeWord::parse("10(0)");
  RunOutcome out = run(s, a, quick(60000));
  REQUIRE(out.halted());
  // Halts a few steps past w^2 after erasing the completion flag.
  CHECK(out.stage == Ordinal::parse("w^2+3"));
  CHECK(out.output[0].at(2) == a.at(0));
  CHECK(out.output[0].at(3) == 0);
  CHECK(out.output[0].at(6) == a.at(1));
}
