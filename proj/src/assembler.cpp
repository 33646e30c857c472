#include "ittm/assembler.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ittm {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

unsigned parse_vector(const std::string& text, int width, const std::string& what) {
  auto parts = split(text, ',');
  if (static_cast<int>(parts.size()) != width)
    throw std::invalid_argument(what + " '" + text + "' has " +
                                std::to_string(parts.size()) + " bits, expected " +
                                std::to_string(width));
  unsigned bits = 0;
  for (int i = 0; i < width; ++i) {
    if (parts[i] != "0" && parts[i] != "1")
      throw std::invalid_argument(what + " '" + text + "' has a non-bit entry");
    if (parts[i] == "1") bits |= 1u << i;
  }
  return bits;
}

std::string format_vector(unsigned bits, int width) {
  std::string out;
  for (int i = 0; i < width; ++i) {
    if (i) out.push_back(',');
    out.push_back((bits >> i) & 1 ? '1' : '0');
  }
  return out;
}

}  // namespace

Program parse_program(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  MachineShape shape;
  bool have_machine = false;
  std::vector<std::string> names;
  std::string start_name = "start";
  struct Line {
    std::string state, read, write, move, next;
  };
  std::vector<Line> body;

  while (std::getline(in, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (tok == "machine") {
      std::string kv;
      while (ls >> kv) {
        auto eq = kv.find('=');
        if (eq == std::string::npos)
          throw std::invalid_argument("machine header: expected key=value, got '" + kv + "'");
        std::string key = kv.substr(0, eq);
        int val = std::stoi(kv.substr(eq + 1));
        if (key == "tapes")
          shape.tapes = val;
        else if (key == "pad")
          shape.pad_cells = val;
        else if (key == "head")
          shape.head_width = val;
        else
          throw std::invalid_argument("machine header: unknown key '" + key + "'");
      }
      have_machine = true;
    } else if (tok == "states") {
      std::string rest;
      ls >> rest;
      names = split(rest, ',');
    } else {
      std::vector<std::string> rest;
      std::string w;
      while (ls >> w) rest.push_back(w);
      // A lone token after "start" is the header; a state may also be named
      // "start" and begin a transition line.
      if (tok == "start" && rest.size() == 1) {
        start_name = rest[0];
        continue;
      }
      if (rest.size() != 5 || rest[1] != "->")
        throw std::invalid_argument("bad transition line: '" + line + "'");
      body.push_back({tok, rest[0], rest[2], rest[3], rest[4]});
    }
  }
  if (!have_machine) throw std::invalid_argument("missing 'machine' header");
  if (names.empty()) throw std::invalid_argument("missing 'states' header");

  auto find = [&names](const std::string& n) -> int {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == n) return static_cast<int>(i);
    throw std::invalid_argument("unknown state '" + n + "'");
  };
  int limit = find("limit");
  int halt = find("halt");
  int start = find(start_name);

  Program p(shape, names, start, limit, halt);
  for (const auto& l : body) {
    Transition t;
    t.write = static_cast<std::uint16_t>(
        parse_vector(l.write, p.window_width(), "write vector"));
    if (l.move == "L")
      t.move = Move::L;
    else if (l.move == "R")
      t.move = Move::R;
    else
      throw std::invalid_argument("move must be L or R, got '" + l.move + "'");
    t.next = find(l.next);
    p.set_transition(find(l.state),
                     parse_vector(l.read, p.window_width(), "read vector"), t);
  }
  return p;
}

std::string format_program(const Program& p) {
  std::ostringstream out;
  const MachineShape& sh = p.shape();
  out << "machine tapes=" << sh.tapes << " pad=" << sh.pad_cells << " head="
      << sh.head_width << "\n";
  out << "states ";
  for (int i = 0; i < p.state_count(); ++i) {
    if (i) out << ',';
    out << p.state_name(i);
  }
  out << "\nstart " << p.state_name(p.start_state()) << "\n";
  for (int s = 0; s < p.state_count(); ++s) {
    if (s == p.halt_state()) continue;
    for (int r = 0; r < p.read_count(); ++r) {
      if (!p.has_transition(s, static_cast<unsigned>(r))) continue;
      const Transition& t = p.transition(s, static_cast<unsigned>(r));
      out << p.state_name(s) << ' '
          << format_vector(static_cast<unsigned>(r), p.window_width()) << " -> "
          << format_vector(t.write, p.window_width()) << ' '
          << (t.move == Move::L ? 'L' : 'R') << ' ' << p.state_name(t.next)
          << "\n";
    }
  }
  return out.str();
}

Program load_program_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open program file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_program(ss.str());
}

void save_program_file(const Program& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write program file: " + path);
  out << format_program(p);
}

}  // namespace ittm
