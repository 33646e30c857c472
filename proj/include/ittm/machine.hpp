#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ittm/tape_word.hpp"

namespace ittm {

/// Tape geometry of a machine. head_width 2 is the double-head variant and
/// only combines with a single tape.
struct MachineShape {
  int tapes = 1;
  int pad_cells = 0;
  int head_width = 1;

  int window_width() const { return tapes * head_width + pad_cells; }
  bool operator==(const MachineShape&) const = default;
};

enum class Move : std::int8_t { L = -1, R = 1 };

struct Transition {
  std::uint16_t write = 0;  // packed bits, same layout as the read window
  Move move = Move::R;
  int next = 0;
};

/// A finite transition table over named states. Three states are
/// distinguished: start, limit (entered at every limit stage) and halt
/// (no outgoing transitions). Transitions are total on all other states.
class Program {
 public:
  Program(MachineShape shape, std::vector<std::string> state_names,
          int start, int limit, int halt);

  const MachineShape& shape() const { return shape_; }
  int state_count() const { return static_cast<int>(names_.size()); }
  const std::string& state_name(int s) const { return names_[s]; }
  std::optional<int> state_index(const std::string& name) const;

  int start_state() const { return start_; }
  int limit_state() const { return limit_; }
  int halt_state() const { return halt_; }

  int window_width() const { return shape_.window_width(); }
  int read_count() const { return 1 << window_width(); }

  void set_transition(int state, unsigned read, Transition t);
  const Transition& transition(int state, unsigned read) const;
  bool has_transition(int state, unsigned read) const;

  /// Missing (state, read) entries and structural problems; empty when ok.
  std::vector<std::string> validate() const;

 private:
  MachineShape shape_;
  std::vector<std::string> names_;
  int start_, limit_, halt_;
  std::vector<std::vector<Transition>> table_;
  std::vector<std::vector<bool>> present_;
};

/// Machine state at one stage: control state, head position, tape contents
/// and scratch-pad bits. The head addresses all tapes at once.
struct Configuration {
  int state = 0;
  std::uint64_t head = 0;
  std::vector<TapeWord> tapes;
  Bits pad;

  bool operator==(const Configuration&) const = default;
  std::size_t hash() const;
};

/// Window bit layout: bit (t*head_width + w) is tape t at cell head+w; pad
/// bits follow at tapes*head_width + j.
unsigned read_window(const Program& p, const Configuration& c);

struct StepResult {
  Configuration next;
  bool clamped = false;   // attempted L at cell 0
  bool to_halt = false;   // the fired transition enters halt
};

/// One successor stage. Moving left at cell 0 leaves the head in place.
/// Pre: c.state is not halt.
StepResult step(const Program& p, const Configuration& c);

/// Start configuration: input on tape 0, other tapes zero, pad zero, head 0.
Configuration init_configuration(const Program& p, const TapeWord& input);

/// True when c2 is c1 with every tape shifted right by d from `frontier` on:
/// same state and pad, c2.head == c1.head + d, tapes agree below the
/// frontier and satisfy c2(x) == c1(x-d) for all x >= frontier + d. The
/// cells [frontier, frontier+d) of c2 are unconstrained (the deposited wake).
bool shift_equivalent(const Configuration& c1, const Configuration& c2,
                      std::size_t d, std::size_t frontier = 0);

}  // namespace ittm
