#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ittm/machine.hpp"
#include "ittm/ordinal.hpp"

namespace ittm {

/// Per-cell record of whether a cell displayed 1 at any stage within a run
/// segment, one word per tape plus one bit per pad cell.
struct SegmentSummary {
  std::vector<TapeWord> ever_one;
  Bits pad_ever;

  static SegmentSummary of_configuration(const Configuration& c);
  void merge(const SegmentSummary& later);
  bool operator==(const SegmentSummary&) const = default;
};

struct CycleEvidence {
  enum class Kind { Exact, Shifted };
  Kind kind = Kind::Exact;
  int level = 0;
  std::uint64_t base_index = 0;
  std::uint64_t period = 0;
  std::uint64_t drift = 0;      // shifted only: rightward drift per period
  std::uint64_t frontier = 0;   // shifted only: settled/repeating boundary
  std::uint64_t low_drift = 0;  // nonzero for sweeps that also settle cells
                                // at a slower rate behind the frontier
};

struct Budget {
  std::uint64_t steps_per_level = 50000;  // snapshots at level 0, items above
  int max_level = 3;                      // highest resolvable limit nesting
};

enum class RunStatus { Halted, UnresolvedLimit, BudgetExhausted };

struct TraceEvent {
  enum class Kind { Step, Limit, Resolve, Halt };
  Kind kind;
  Ordinal stage;
  Configuration config;  // full configuration at this event
  std::optional<CycleEvidence> evidence;
};

/// Result of a transfinite run. The halting stage counts the transitions
/// executed strictly before the halting transition: a machine whose halt
/// fires straight out of the limit configuration at L halts at stage L.
struct RunOutcome {
  RunStatus status = RunStatus::BudgetExhausted;
  Ordinal stage;
  std::vector<TapeWord> output;          // tapes after the halting write
  Bits pad_output;
  std::optional<Configuration> fire_config;  // config the halt fired from
  std::optional<CycleEvidence> evidence;     // last resolution, if any
  std::string diagnostic;
  std::vector<TraceEvent> trace;

  bool halted() const { return status == RunStatus::Halted; }
};

struct RunOptions {
  Budget budget;
  bool keep_step_events = true;  // step events can be dropped for big runs
  unsigned height = Ordinal::kDefaultHeight;
};

/// Runs a validated program from the start configuration on `input` through
/// successor and limit stages, resolving limits by cycle detection.
RunOutcome run(const Program& p, const TapeWord& input, const RunOptions& opts = {});

/// Runs from an explicit configuration at an explicit stage.
RunOutcome run_from(const Program& p, const Configuration& start,
                    const Ordinal& start_stage, const RunOptions& opts = {});

/// Halting stage of a run (throws if the run does not halt).
Ordinal measure(const Program& p, const TapeWord& input, const RunOptions& opts = {});

/// JSON-lines serialization of a trace: one event object per line with keys
/// event, stage, state, head, window (first `window` cells per tape) and,
/// for resolutions, evidence.
std::string trace_to_jsonl(const Program& p, const std::vector<TraceEvent>& events,
                           std::size_t window = 16);

}  // namespace ittm
