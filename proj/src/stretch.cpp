#include <stdexcept>

#include "ittm/builder.hpp"
#include "ittm/compilers.hpp"
#include "onehat_detail.hpp"

namespace ittm {

// The movable-marker / flash-cell stretch machine. Each sweep shifts the
// remaining digits two cells right and advances the marker one block; the
// flash cell is pulsed once per sweep, so its limsup first shows 1 at the
// w^2 limit. One more step to reach it, erase it, and the machine halts with
// <a0 0 0 a1 0 0 ...> at stage w^2+1.
static Program stretch_three_wide() {
  ProgramBuilder b(MachineShape{1, 0, 1});
  int start = b.state("start");
  int limit = b.state("limit");
  int halt = b.state("halt");
  int nw0 = b.state("blk.zero");
  int nw1[2] = {b.state("blk.mark0"), b.state("blk.mark1")};
  int cp[2][2] = {{b.state("cp00"), b.state("cp01")},
                  {b.state("cp10"), b.state("cp11")}};
  int chk = b.state("chk");
  int fl1 = b.state("flash.back");
  int fl2 = b.state("flash.off");
  int w0 = b.state("walk0");
  int w1 = b.state("walk1");
  int w2 = b.state("walk2");
  int kd = b.state("keep");

  // Initial pass: keep a0, zero the flash cell, drop the marker, then carry
  // pairs rightward (a shift by two).
  b.t_copy(start, Move::R, nw0);
  for (unsigned v = 0; v < 2; ++v) b.t(nw0, v, 0, Move::R, nw1[v]);
  for (unsigned u = 0; u < 2; ++u)
    for (unsigned v = 0; v < 2; ++v) b.t(nw1[u], v, 1, Move::R, cp[u][v]);
  for (unsigned u = 0; u < 2; ++u)
    for (unsigned v = 0; v < 2; ++v)
      for (unsigned w = 0; w < 2; ++w) b.t(cp[u][v], w, u, Move::R, cp[v][w]);

  // At each limit: check the flash cell, pulse it, find the marker among the
  // third cells, then stretch one more block.
  b.t_copy(limit, Move::R, chk);
  b.t(chk, 1, 0, Move::L, halt);
  b.t(chk, 0, 1, Move::L, fl1);
  b.t_copy(fl1, Move::R, fl2);
  b.t_any(fl2, 0, Move::R, w2);
  b.t(w2, 1, 0, Move::R, kd);
  b.t(w2, 0, 0, Move::R, w0);
  b.t_copy(w0, Move::R, w1);
  b.t_copy(w1, Move::R, w2);
  b.t_copy(kd, Move::R, nw0);

  return b.build();
}

Program stretch_program(const BlockLayout& layout) {
  if (layout.block_width == 3 && layout.flag_cells == 0)
    return stretch_three_wide();
  if (layout.block_width == 4 && layout.flag_cells == 2)
    return detail::stretch_four_wide_standalone();
  throw std::invalid_argument("stretch_program: unsupported layout");
}

}  // namespace ittm
