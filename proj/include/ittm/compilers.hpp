#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ittm/machine.hpp"

namespace ittm {

/// Tape organization of a compiled one-tape program.
struct BlockLayout {
  std::size_t flag_cells = 0;   // cells reserved at the tape start
  std::size_t block_width = 3;  // cells per simulated column
  enum class Role { InputSim, ScratchSim, OutputSim, LeftmostMarker };
  std::vector<Role> field_roles;

  static BlockLayout three_wide();
  static BlockLayout four_wide_flagged();  // two flag cells + leftmost marker
};

/// One-tape simulation of a 3-tape program over blocks of three cells,
/// seven micro-steps per simulated step.
struct SimulateCompilation {
  Program q;
  // For q states that sit at a block boundary (micro-phase 1), the simulated
  // machine state; -1 elsewhere.
  std::vector<int> phase1_p_state;
};

SimulateCompilation compile_simulate(const Program& p);

/// q's configuration at micro-stage 7k projected back to the simulated
/// machine, or nullopt when the state is mid-phase.
std::optional<Configuration> project_simulated(const SimulateCompilation& sc,
                                               const Configuration& qc);

/// The one-tape program computing a |-> <a0 0 0 a1 0 0 ...> (width 3) or the
/// four-wide flagged variant used by the 1^f pipeline. Halts one step past
/// the w^2 limit.
Program stretch_program(const BlockLayout& layout);

/// Copies cell (block_width*i + field) to cell i in one sweep and halts at
/// its first limit.
Program compression_program(const BlockLayout& layout, std::size_t field);

/// Three-phase program computing 1^f: stretch four-wide, simulate f over
/// blocks of four, compress to <1 z0 z1 ...>; its halt fires straight out of
/// the final limit configuration.
struct OnehatCompilation {
  Program q;
  std::vector<int> cell0_states;  // states that only ever stand on cell 0
};

OnehatCompilation compile_onehat(const Program& p);

/// The 1^f pipeline guarded by a prefix sigma that no output of p extends;
/// the final sweep drops sigma and the leading 1, leaving f(a) exactly.
Program compile_notdense(const Program& p, const std::string& sigma);

/// compile_notdense with sigma = "01", for deciders whose outputs are the
/// constant reals 1(0) and (0).
Program compile_characteristic(const Program& p);

/// The 1^f program re-targeted so its cell 0 lives on a one-cell scratch
/// pad; the tape output is then f(a) exactly.
Program compile_scratchpad(const Program& p);

/// The stretch / simulate / compress programs whose serial composition
/// computes f.
struct PipelineManifest {
  Program stretch;
  Program simulate;
  Program compress;
};

PipelineManifest pipeline_manifest(const Program& p);

/// JSON manifest naming the emitted program files in chaining order.
std::string pipeline_manifest_json(const std::vector<std::string>& files);

}  // namespace ittm
