#pragma once

#include <string>

#include "ittm/machine.hpp"

namespace ittm {

/// Program text format. Header lines, then one transition per line:
///
///   machine tapes=3 pad=0 head=1
///   states start,limit,halt,sweep
///   start start
///   sweep 0,0,0 -> 1,0,0 R sweep
///
/// Read/write vectors are comma-separated bits in window order (tape cells
/// under the head, then pad cells); MOVE is L or R. States named "limit" and
/// "halt" are the distinguished limit and halt states; the start header
/// picks the start state. '#' begins a comment.
Program parse_program(const std::string& text);

std::string format_program(const Program& p);

Program load_program_file(const std::string& path);
void save_program_file(const Program& p, const std::string& path);

}  // namespace ittm
