#include <stdexcept>

#include "ittm/builder.hpp"
#include "ittm/compilers.hpp"

namespace ittm {

BlockLayout BlockLayout::three_wide() {
  BlockLayout l;
  l.flag_cells = 0;
  l.block_width = 3;
  l.field_roles = {Role::InputSim, Role::ScratchSim, Role::OutputSim};
  return l;
}

BlockLayout BlockLayout::four_wide_flagged() {
  BlockLayout l;
  l.flag_cells = 2;
  l.block_width = 4;
  l.field_roles = {Role::InputSim, Role::ScratchSim, Role::OutputSim,
                   Role::LeftmostMarker};
  return l;
}

// Seven micro-steps per simulated step over blocks of three:
//   1  @3i    read x, write it back, R
//   2  @3i+1  read y, write it back, R
//   3  @3i+2  read z; the transition is now known: write z', L
//   4  @3i+1  write y', L
//   5  @3i    write x', then move L or R as the simulated head does
//   6,7       two more moves in the same direction, rewriting what they read
// A simulated left move from block 0 re-enters block 0 because every micro
// move clamps at the leftmost cell. Rewrites preserve per-cell value
// sequences, so limsups at limits are unchanged.
SimulateCompilation compile_simulate(const Program& p) {
  if (!(p.shape() == MachineShape{3, 0, 1}))
    throw std::invalid_argument("compile_simulate expects a plain 3-tape program");
  auto issues = p.validate();
  if (!issues.empty())
    throw std::invalid_argument("compile_simulate: program not total: " + issues.front());

  ProgramBuilder b(MachineShape{1, 0, 1});
  auto nm = [&p](const std::string& tag, int s) {
    return tag + "[" + p.state_name(s) + "]";
  };
  auto bit = [](unsigned v, int i) { return (v >> i) & 1u; };

  // Phase-1 states sit at a block boundary; q's start and limit states are
  // the phase-1 states of p's start and limit.
  auto ph1 = [&](int s) -> int {
    if (s == p.start_state()) return b.state("start");
    if (s == p.limit_state()) return b.state("limit");
    return b.state(nm("ph1", s));
  };

  for (int s = 0; s < p.state_count(); ++s) {
    if (s == p.halt_state()) continue;
    int a1 = ph1(s);
    for (unsigned x = 0; x < 2; ++x) {
      int a2 = b.state(nm("ph2x" + std::to_string(x), s));
      b.t(a1, x, x, Move::R, a2);
      for (unsigned y = 0; y < 2; ++y) {
        int a3 = b.state(nm("ph3x" + std::to_string(x) + "y" + std::to_string(y), s));
        b.t(a2, y, y, Move::R, a3);
        for (unsigned z = 0; z < 2; ++z) {
          const Transition& tr = p.transition(s, x | (y << 1) | (z << 2));
          unsigned wx = bit(tr.write, 0), wy = bit(tr.write, 1), wz = bit(tr.write, 2);
          char mc = tr.move == Move::L ? 'L' : 'R';
          int a4 = b.state(nm(std::string("ph4y") + char('0' + wy) + "x" +
                                  char('0' + wx) + mc,
                              tr.next));
          b.t(a3, z, wz, Move::L, a4);
          int a5 = b.state(nm(std::string("ph5x") + char('0' + wx) + mc, tr.next));
          b.t_any(a4, wy, Move::L, a5);
          if (tr.next == p.halt_state()) {
            // The three writes are done; no relocation for a halted machine.
            b.t_any(a5, wx, tr.move, b.state("halt"));
          } else {
            int a6 = b.state(nm(std::string("ph6") + mc, tr.next));
            int a7 = b.state(nm(std::string("ph7") + mc, tr.next));
            b.t_any(a5, wx, tr.move, a6);
            b.t_copy(a6, tr.move, a7);
            b.t_copy(a7, tr.move, ph1(tr.next));
          }
        }
      }
    }
  }

  SimulateCompilation out{b.build(), {}};
  out.phase1_p_state.assign(static_cast<std::size_t>(out.q.state_count()), -1);
  for (int s = 0; s < p.state_count(); ++s) {
    if (s == p.halt_state()) continue;
    std::string name = s == p.start_state()   ? "start"
                       : s == p.limit_state() ? "limit"
                                              : nm("ph1", s);
    out.phase1_p_state[static_cast<std::size_t>(*out.q.state_index(name))] = s;
  }
  return out;
}

std::optional<Configuration> project_simulated(const SimulateCompilation& sc,
                                               const Configuration& qc) {
  int s = sc.phase1_p_state[static_cast<std::size_t>(qc.state)];
  if (s < 0) return std::nullopt;
  if (qc.head % 3 != 0) return std::nullopt;
  Configuration pc;
  pc.state = s;
  pc.head = qc.head / 3;
  pc.tapes = {qc.tapes[0].every_kth(3, 0), qc.tapes[0].every_kth(3, 1),
              qc.tapes[0].every_kth(3, 2)};
  return pc;
}

}  // namespace ittm
