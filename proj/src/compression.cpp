#include <stdexcept>

#include "ittm/builder.hpp"
#include "ittm/compilers.hpp"

namespace ittm {

// One sweep copies cell (W*i + field) down to cell i. The consumed region is
// zeroed as the sweep passes; a 1 just past the last written output digit
// marks the next destination and a second 1 marks the next source block, so
// the machine never needs to count. Every cell stabilizes, the sweep's first
// limit configuration carries exactly the extracted word, and the program
// halts straight out of that limit.
Program compression_program(const BlockLayout& layout, std::size_t field) {
  const std::size_t w = layout.block_width;
  if (w < 2) throw std::invalid_argument("compression: block width must be >= 2");
  if (field >= w) throw std::invalid_argument("compression: field out of range");

  ProgramBuilder b(MachineShape{1, 0, 1});
  int start = b.state("start");
  int limit = b.state("limit");
  int halt = b.state("halt");
  int seekl[2] = {b.state("dest.seek0"), b.state("dest.seek1")};
  int mark = b.state("dest.mark");
  int seekr = b.state("src.seek");
  int pl[2] = {b.state("src.plant0"), b.state("src.plant1")};

  // Cleaning chain between the source pointer and the next field cell.
  std::vector<int> cln;
  for (std::size_t i = 0; i + 2 < w; ++i)
    cln.push_back(b.state("src.clean" + std::to_string(i)));
  int rd = b.state("src.read");

  b.t_copy(limit, Move::R, halt);

  for (unsigned u = 0; u < 2; ++u) {
    b.t(seekl[u], 0, 0, Move::L, seekl[u]);
    b.t(seekl[u], 1, u, Move::R, mark);
    b.t_any(pl[u], 1, Move::L, seekl[u]);
  }
  b.t_any(mark, 1, Move::R, seekr);
  b.t(seekr, 0, 0, Move::R, seekr);
  b.t(seekr, 1, 0, Move::R, cln.empty() ? rd : cln.front());
  for (std::size_t i = 0; i < cln.size(); ++i)
    b.t_any(cln[i], 0, Move::R, i + 1 < cln.size() ? cln[i + 1] : rd);
  for (unsigned z = 0; z < 2; ++z) b.t(rd, z, 0, Move::R, pl[z]);

  if (field == 0) {
    // z0 is already in place at cell 0; set the destination marker at cell 1
    // and enter the loop at the second block.
    int i1 = b.state("init.mark");
    b.t_copy(start, Move::R, i1);
    int prev = i1;
    // Clean cells 2..w-1, then read z1 at cell w.
    std::vector<int> ic;
    for (std::size_t c = 2; c < w; ++c) ic.push_back(b.state("init.clean" + std::to_string(c)));
    b.t_any(i1, 1, Move::R, ic.empty() ? rd : ic.front());
    for (std::size_t i = 0; i < ic.size(); ++i)
      b.t_any(ic[i], 0, Move::R, i + 1 < ic.size() ? ic[i + 1] : rd);
    (void)prev;
  } else {
    // Destination marker at cell 0, clean up to the field, read z0.
    std::vector<int> ic;
    for (std::size_t c = 1; c < field; ++c) ic.push_back(b.state("init.clean" + std::to_string(c)));
    b.t_any(start, 1, Move::R, ic.empty() ? rd : ic.front());
    for (std::size_t i = 0; i < ic.size(); ++i)
      b.t_any(ic[i], 0, Move::R, i + 1 < ic.size() ? ic[i + 1] : rd);
  }

  return b.build();
}

}  // namespace ittm
