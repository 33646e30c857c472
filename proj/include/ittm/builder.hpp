#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "ittm/machine.hpp"

namespace ittm {

/// Accumulates named states and transitions, then assembles a Program.
/// States "start", "limit" and "halt" are created up front.
class ProgramBuilder {
 public:
  explicit ProgramBuilder(MachineShape shape) : shape_(shape) {
    state("start");
    state("limit");
    state("halt");
  }

  int state(const std::string& name) {
    auto it = index_.find(name);
    if (it != index_.end()) return it->second;
    int id = static_cast<int>(names_.size());
    names_.push_back(name);
    index_.emplace(name, id);
    return id;
  }

  void t(int s, unsigned read, unsigned write, Move m, int next) {
    rows_.push_back({s, read, Transition{static_cast<std::uint16_t>(write), m, next}});
  }

  /// Same action on every read vector.
  void t_any(int s, unsigned write, Move m, int next) {
    for (unsigned r = 0; r < (1u << shape_.window_width()); ++r)
      t(s, r, write, m, next);
  }

  /// Write back whatever was read, for every read vector.
  void t_copy(int s, Move m, int next) {
    for (unsigned r = 0; r < (1u << shape_.window_width()); ++r) t(s, r, r, m, next);
  }

  Program build() const {
    Program p(shape_, names_, 0, 1, 2);
    for (const Row& r : rows_) p.set_transition(r.s, r.read, r.t);
    return p;
  }

  const MachineShape& shape() const { return shape_; }

 private:
  struct Row {
    int s;
    unsigned read;
    Transition t;
  };
  MachineShape shape_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> index_;
  std::vector<Row> rows_;
};

}  // namespace ittm
