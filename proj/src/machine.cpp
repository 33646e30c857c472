#include "ittm/machine.hpp"

#include <stdexcept>

namespace ittm {

Program::Program(MachineShape shape, std::vector<std::string> state_names,
                 int start, int limit, int halt)
    : shape_(shape), names_(std::move(state_names)), start_(start),
      limit_(limit), halt_(halt) {
  if (shape_.tapes < 1 || shape_.pad_cells < 0)
    throw std::invalid_argument("bad machine shape");
  if (shape_.head_width != 1 && shape_.head_width != 2)
    throw std::invalid_argument("head width must be 1 or 2");
  if (shape_.head_width == 2 && shape_.tapes != 1)
    throw std::invalid_argument("double head requires a single tape");
  const int n = state_count();
  auto in_range = [n](int s) { return s >= 0 && s < n; };
  if (!in_range(start_) || !in_range(limit_) || !in_range(halt_))
    throw std::invalid_argument("designated state out of range");
  table_.assign(n, std::vector<Transition>(static_cast<std::size_t>(read_count())));
  present_.assign(n, std::vector<bool>(static_cast<std::size_t>(read_count()), false));
}

std::optional<int> Program::state_index(const std::string& name) const {
  for (int i = 0; i < state_count(); ++i)
    if (names_[i] == name) return i;
  return std::nullopt;
}

void Program::set_transition(int state, unsigned read, Transition t) {
  if (state < 0 || state >= state_count())
    throw std::out_of_range("state out of range");
  if (read >= static_cast<unsigned>(read_count()))
    throw std::out_of_range("read vector out of range");
  if (state == halt_)
    throw std::invalid_argument("halt state cannot have outgoing transitions");
  if (t.next < 0 || t.next >= state_count())
    throw std::out_of_range("next state out of range");
  table_[state][read] = t;
  present_[state][read] = true;
}

const Transition& Program::transition(int state, unsigned read) const {
  return table_[state][read];
}

bool Program::has_transition(int state, unsigned read) const {
  return present_[state][read];
}

std::vector<std::string> Program::validate() const {
  std::vector<std::string> report;
  for (int s = 0; s < state_count(); ++s) {
    if (s == halt_) continue;
    for (int r = 0; r < read_count(); ++r)
      if (!present_[s][r])
        report.push_back("missing transition (" + names_[s] + ", read=" +
                         std::to_string(r) + ")");
  }
  return report;
}

std::size_t Configuration::hash() const {
  std::size_t h = 1099511628211ull;
  auto mix = [&h](std::size_t v) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  };
  mix(static_cast<std::size_t>(state));
  mix(static_cast<std::size_t>(head));
  for (const TapeWord& t : tapes) mix(t.hash());
  for (auto b : pad) mix(b + 3);
  return h;
}

unsigned read_window(const Program& p, const Configuration& c) {
  const MachineShape& sh = p.shape();
  unsigned bits = 0;
  int idx = 0;
  for (int t = 0; t < sh.tapes; ++t)
    for (int w = 0; w < sh.head_width; ++w)
      bits |= static_cast<unsigned>(c.tapes[t].at(c.head + w)) << idx++;
  for (int j = 0; j < sh.pad_cells; ++j)
    bits |= static_cast<unsigned>(c.pad[j]) << idx++;
  return bits;
}

StepResult step(const Program& p, const Configuration& c) {
  if (c.state == p.halt_state())
    throw std::logic_error("step from the halt state");
  const MachineShape& sh = p.shape();
  const unsigned read = read_window(p, c);
  const Transition& t = p.transition(c.state, read);

  StepResult out;
  out.next = c;
  int idx = 0;
  for (int tp = 0; tp < sh.tapes; ++tp)
    for (int w = 0; w < sh.head_width; ++w) {
      std::uint8_t bit = (t.write >> idx++) & 1;
      out.next.tapes[tp] = out.next.tapes[tp].with_cell(c.head + w, bit);
    }
  for (int j = 0; j < sh.pad_cells; ++j)
    out.next.pad[j] = (t.write >> idx++) & 1;

  if (t.move == Move::L) {
    if (c.head == 0) {
      out.clamped = true;  // leftmost convention: the head stays put
    } else {
      out.next.head = c.head - 1;
    }
  } else {
    out.next.head = c.head + 1;
  }
  out.next.state = t.next;
  out.to_halt = t.next == p.halt_state();
  return out;
}

Configuration init_configuration(const Program& p, const TapeWord& input) {
  Configuration c;
  c.state = p.start_state();
  c.head = 0;
  c.tapes.assign(static_cast<std::size_t>(p.shape().tapes), TapeWord::zeros());
  c.tapes[0] = input;
  c.pad.assign(static_cast<std::size_t>(p.shape().pad_cells), 0);
  return c;
}

bool shift_equivalent(const Configuration& c1, const Configuration& c2,
                      std::size_t d, std::size_t frontier) {
  if (d == 0) return false;
  if (c1.state != c2.state || c1.pad != c2.pad) return false;
  if (c2.head != c1.head + d) return false;
  if (c1.tapes.size() != c2.tapes.size()) return false;
  for (std::size_t t = 0; t < c1.tapes.size(); ++t) {
    auto diff = TapeWord::diff_against_shifted(c2.tapes[t], c1.tapes[t], d);
    if (diff.unbounded) return false;
    if (diff.last >= 0 && static_cast<std::size_t>(diff.last) >= frontier + d)
      return false;
    // Below the frontier both configurations must agree outright.
    long fm = TapeWord::first_mismatch(c1.tapes[t], c2.tapes[t]);
    if (fm >= 0 && static_cast<std::size_t>(fm) < frontier) return false;
  }
  return true;
}

}  // namespace ittm
