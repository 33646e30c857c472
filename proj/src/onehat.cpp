#include <stdexcept>

#include "ittm/builder.hpp"
#include "ittm/compilers.hpp"
#include "onehat_detail.hpp"

namespace ittm {

namespace {

enum class Mode { StretchOnly, Onehat, Notdense };

// Emits the three-phase one-tape program over the four-wide layout
//
//   [sigma | ph3-flag | ph2-flag | block 0 | block 1 | ... ]
//
// with block fields (digit, scratch-sim, output-sim, leftmost-mark). The
// stretching phase keeps its movable marker in the output-sim cells and
// pulses block 0's scratch-sim cell once per sweep, so the pulse survives
// exactly at the w^2 limit. Phase two simulates the 3-tape program over the
// blocks, ten micro-steps per step, using the leftmost mark to reproduce
// left moves clamped at the simulated first column. Phase three compresses
// the output-sim cells down to the tape start in one sweep.
struct Emitter {
  // input_offset 1 reads the input from the second virtual cell on; the
  // scratch-pad wrapper maps its pad onto virtual cell 0.
  Emitter(const Program* p, std::string sigma, Mode mode, std::size_t input_offset = 0)
      : p_(p), sigma_(std::move(sigma)), mode_(mode), offset_(input_offset),
        b_(MachineShape{1, 0, 1}) {
    if (sigma_.size() > 6)
      throw std::invalid_argument("sigma longer than 6 is not supported");
    for (char c : sigma_)
      if (c != '0' && c != '1')
        throw std::invalid_argument("sigma must be a bit string");
    S_ = sigma_.size();
    F3_ = S_;
    F2_ = S_ + 1;
    BASE_ = S_ + 2;
  }

  OnehatCompilation emit() {
    start_ = b_.state("start");
    limit_ = b_.state("limit");
    halt_ = b_.state("halt");
    diverge_ = b_.state("diverge");
    b_.t_copy(diverge_, Move::R, diverge_);

    emit_pass_a();
    emit_limit_walk();
    emit_stretch_blocks();
    if (mode_ != Mode::StretchOnly) {
      emit_simulation();
      emit_compression();
    }

    OnehatCompilation out{b_.build(), {}};
    out.cell0_states = {start_, limit_};
    if (mode_ == Mode::Onehat && ef3_ >= 0) out.cell0_states.push_back(ef3_);
    return out;
  }

 private:
  // ---- pass A: install sigma, flags, block 0 and the first marker, and
  // shift all remaining digits right with a FIFO carry queue.
  void emit_pass_a() {
    const std::size_t last_header = BASE_ + 3;
    // Header cell writes; kQueue marks "write the dequeued digit".
    const unsigned kQueue = 2;
    std::vector<unsigned> header(last_header + 1);
    for (std::size_t j = 0; j < S_; ++j)
      header[j] = static_cast<unsigned>(sigma_[j] - '0');
    header[F3_] = 0;
    header[F2_] = 0;
    header[BASE_] = kQueue;  // a0 lands back on the block-0 digit cell
    header[BASE_ + 1] = 0;   // flash cell
    header[BASE_ + 2] = 1;   // initial stretch marker (block 0 output-sim)
    header[BASE_ + 3] = 1;   // leftmost mark

    // States carry the queue of digits read but not yet rewritten; the front
    // of the queue lives in bit 0.
    auto qname = [](const char* tag, std::size_t pos, unsigned q, std::size_t len) {
      std::string s = std::string(tag) + std::to_string(pos) + ":";
      for (std::size_t i = 0; i < len; ++i) s += char('0' + ((q >> i) & 1));
      return s;
    };
    // Queue length on entering cell j.
    auto qlen = [&](std::size_t j) {
      std::size_t len = j < offset_ ? 0 : j - offset_;
      if (j > BASE_) len -= 1;  // a0 was dequeued at BASE_
      return len;
    };
    const std::size_t steady = qlen(last_header + 1);
    for (std::size_t j = 0; j <= last_header; ++j) {
      std::size_t len = qlen(j);
      for (unsigned q = 0; q < (1u << len); ++q) {
        int s = j == 0 ? start_ : b_.state(qname("hdr", j, q, len));
        for (unsigned c = 0; c < 2; ++c) {
          unsigned nq = q;
          std::size_t nlen = len;
          if (j >= offset_) {  // enqueue the read digit
            nq |= c << nlen;
            nlen += 1;
          }
          unsigned wr = header[j];
          if (wr == kQueue) {
            wr = nq & 1;  // dequeue
            nq >>= 1;
            nlen -= 1;
          }
          int next;
          if (j == last_header)
            next = b_.state(qname("cp", 0, nq, nlen));
          else
            next = b_.state(qname("hdr", j + 1, nq, nlen));
          b_.t(s, c, wr, Move::R, next);
        }
      }
    }
    // Steady carry: write the oldest digit, enqueue the read one.
    for (unsigned q = 0; q < (1u << steady); ++q) {
      int s = b_.state(qname("cp", 0, q, steady));
      for (unsigned c = 0; c < 2; ++c) {
        unsigned nq = (q >> 1) | (c << (steady - 1));
        b_.t(s, c, q & 1, Move::R, b_.state(qname("cp", 0, nq, steady)));
      }
    }
  }

  // ---- the limit-state walk: verify sigma, read the phase flags, dispatch.
  void emit_limit_walk() {
    int ph3 = S_ == 0 ? limit_ : b_.state("lk.ph3");
    if (S_ > 0) {
      // sigma check; a mismatch is the computation's final output.
      int cur = limit_;
      for (std::size_t i = 0; i < S_; ++i) {
        int next = i + 1 == S_ ? ph3 : b_.state("lk.sig" + std::to_string(i + 1));
        unsigned good = static_cast<unsigned>(sigma_[i] - '0');
        b_.t(cur, good, good, Move::R, next);
        b_.t(cur, 1 - good, 1 - good, Move::R, halt_);
        cur = next;
      }
    }
    int ph2 = b_.state("lk.ph2");
    if (mode_ == Mode::Onehat) {
      b_.t(ph3, 1, 1, Move::R, halt_);  // the leading 1: computation complete
    } else {
      b_.t(ph3, 1, 1, Move::R, diverge_);
    }
    b_.t(ph3, 0, 0, Move::R, ph2);

    int ph1a = b_.state("lk.ph1a");
    if (mode_ == Mode::StretchOnly) {
      b_.t(ph2, 1, 1, Move::R, diverge_);
    } else {
      b_.t(ph2, 1, 1, Move::R, sim_state1(p_->limit_state()));
    }
    b_.t(ph2, 0, 0, Move::R, ph1a);

    int ph1b = b_.state("lk.ph1b");
    b_.t_copy(ph1a, Move::R, ph1b);

    // Flash cell holds 1: the stretch is complete.
    if (mode_ == Mode::StretchOnly) {
      b_.t(ph1b, 1, 0, Move::L, halt_);
    } else {
      int t1 = b_.state("lk.done.back");
      int t2 = b_.state("lk.done.flag");
      b_.t(ph1b, 1, 0, Move::L, t1);
      b_.t_copy(t1, Move::L, t2);
      b_.t_any(t2, 1, Move::R, sim_state1(p_->start_state()));
    }
    // Otherwise pulse it and stretch one more block.
    int fb1 = b_.state("lk.flash.back");
    int fb2 = b_.state("lk.flash.off");
    b_.t(ph1b, 0, 1, Move::L, fb1);
    b_.t_copy(fb1, Move::R, fb2);
    b_.t_any(fb2, 0, Move::R, b_.state("wz"));
  }

  // ---- stretch sweeps: walk the output-sim cells to the marker, rebuild
  // the next block head, then shift the remaining digits right by three.
  void emit_stretch_blocks() {
    int wz = b_.state("wz");
    int wm = b_.state("wm");
    int wx = b_.state("wx");
    int wy = b_.state("wy");
    int mk = b_.state("mark.keep");
    int kd = b_.state("digit.keep");
    int n1 = b_.state("blk.zero");
    int n2[2] = {b_.state("blk.mark:0"), b_.state("blk.mark:1")};

    b_.t(wz, 0, 0, Move::R, wm);
    b_.t(wz, 1, 0, Move::R, mk);  // marker found: erase it
    b_.t_copy(wm, Move::R, wx);
    b_.t_copy(wx, Move::R, wy);
    b_.t_copy(wy, Move::R, wz);
    b_.t_copy(mk, Move::R, kd);   // keep the leftmost mark (or a plain 0)
    b_.t_copy(kd, Move::R, n1);   // the next digit is already in place
    for (unsigned c = 0; c < 2; ++c) b_.t(n1, c, 0, Move::R, n2[c]);
    for (unsigned u = 0; u < 2; ++u)
      for (unsigned c = 0; c < 2; ++c)
        b_.t(n2[u], c, 1, Move::R, cp3(u, c, 0, 1));
    // cp3(u,v,w) consumed two digits so far; the third slot fills next step.
    // cp3 with arity tracking: see cp3().
    for (unsigned u = 0; u < 2; ++u)
      for (unsigned v = 0; v < 2; ++v)
        for (unsigned c = 0; c < 2; ++c)
          b_.t(cp3(u, v, 0, 1), c, 0, Move::R, cp3(u, v, c, 0));
    for (unsigned u = 0; u < 2; ++u)
      for (unsigned v = 0; v < 2; ++v)
        for (unsigned w = 0; w < 2; ++w)
          for (unsigned c = 0; c < 2; ++c)
            b_.t(cp3(u, v, w, 0), c, u, Move::R, cp3(v, w, c, 0));
  }

  // Carry-three copier states; partial == 1 marks the two-digit state that
  // still writes the mark-cell zero.
  int cp3(unsigned a, unsigned bb, unsigned c, int partial) {
    return b_.state("cp3:" + std::to_string(a) + std::to_string(bb) +
                    std::to_string(c) + (partial ? "p" : ""));
  }

  // ---- phase two: simulate p over blocks of four, ten micro-steps per
  // simulated step.
  int sim_state1(int s) { return b_.state("s1[" + p_->state_name(s) + "]"); }

  void emit_simulation() {
    auto nm = [this](const std::string& tag, int s) {
      return tag + "[" + p_->state_name(s) + "]";
    };
    auto bit = [](unsigned v, int i) { return (v >> i) & 1u; };
    for (int s = 0; s < p_->state_count(); ++s) {
      if (s == p_->halt_state()) continue;
      int s1 = sim_state1(s);
      for (unsigned x = 0; x < 2; ++x) {
        int s2 = b_.state(nm("s2x" + std::to_string(x), s));
        b_.t(s1, x, x, Move::R, s2);
        for (unsigned y = 0; y < 2; ++y) {
          int s3 = b_.state(nm("s3x" + std::to_string(x) + "y" + std::to_string(y), s));
          b_.t(s2, y, y, Move::R, s3);
          for (unsigned z = 0; z < 2; ++z) {
            const Transition& tr = p_->transition(s, x | (y << 1) | (z << 2));
            unsigned wx = bit(tr.write, 0), wy = bit(tr.write, 1), wz = bit(tr.write, 2);
            char mc = tr.move == Move::L ? 'L' : 'R';
            std::string carry = std::string("y") + char('0' + wy) + "x" +
                                char('0' + wx) + mc;
            int s4 = b_.state(nm("s4" + carry, tr.next));
            b_.t(s3, z, wz, Move::R, s4);
            for (unsigned lm = 0; lm < 2; ++lm) {
              int s5 = b_.state(nm("s5" + carry + "m" + std::to_string(lm), tr.next));
              b_.t(s4, lm, lm, Move::L, s5);
              int s6 = b_.state(nm("s6" + std::string("x") + char('0' + wx) + mc +
                                       "m" + std::to_string(lm),
                                   tr.next));
              b_.t_copy(s5, Move::L, s6);
              int s7 = b_.state(nm(std::string("s7x") + char('0' + wx) + mc + "m" +
                                       std::to_string(lm),
                                   tr.next));
              b_.t_any(s6, wy, Move::L, s7);
              emit_after_write(s7, wx, tr.move, lm == 1, tr.next);
            }
          }
        }
      }
    }
  }

  // The x' write (micro-step 7) plus relocation or the halt hand-off.
  void emit_after_write(int s7, unsigned wx, Move m, bool leftmost, int next) {
    if (next == p_->halt_state()) {
      if (leftmost) {
        b_.t_any(s7, wx, Move::L, ef2());
      } else {
        b_.t_any(s7, wx, Move::L, b_.state("e.walk"));
        emit_exit_walk();
      }
      return;
    }
    auto nm = [this, next](const std::string& tag) {
      return tag + "[" + p_->state_name(next) + "]";
    };
    if (m == Move::R) {
      int s8 = b_.state(nm("s8R"));
      int s9 = b_.state(nm("s9R"));
      int s10 = b_.state(nm("s10R"));
      b_.t_any(s7, wx, Move::R, s8);
      b_.t_copy(s8, Move::R, s9);
      b_.t_copy(s9, Move::R, s10);
      b_.t_copy(s10, Move::R, sim_state1(next));
    } else if (!leftmost) {
      int s8 = b_.state(nm("s8L"));
      int s9 = b_.state(nm("s9L"));
      int s10 = b_.state(nm("s10L"));
      b_.t_any(s7, wx, Move::L, s8);
      b_.t_copy(s8, Move::L, s9);
      b_.t_copy(s9, Move::L, s10);
      b_.t_copy(s10, Move::L, sim_state1(next));
    } else {
      // Leftmost convention: burn the relocation inside block 0.
      int s8 = b_.state(nm("s8C"));
      int s9 = b_.state(nm("s9C"));
      int s10 = b_.state(nm("s10C"));
      b_.t_any(s7, wx, Move::R, s8);
      b_.t_copy(s8, Move::L, s9);
      b_.t_copy(s9, Move::R, s10);
      b_.t_copy(s10, Move::L, sim_state1(next));
    }
  }

  // Walk left to the flag cells after the simulated halt: mark-class cells
  // are all zero except block 0's, so the first 1 anchors the flags.
  void emit_exit_walk() {
    if (exit_walk_done_) return;
    exit_walk_done_ = true;
    int e1 = b_.state("e.walk");
    int e1a = b_.state("e.walk.a");
    int e1b = b_.state("e.walk.b");
    int e1c = b_.state("e.walk.c");
    int e2a = b_.state("e.home.a");
    int e2b = b_.state("e.home.b");
    int e2c = b_.state("e.home.c");
    b_.t(e1, 0, 0, Move::L, e1a);
    b_.t(e1, 1, 1, Move::L, e2a);
    b_.t_copy(e1a, Move::L, e1b);
    b_.t_copy(e1b, Move::L, e1c);
    b_.t_copy(e1c, Move::L, e1);
    b_.t_copy(e2a, Move::L, e2b);
    b_.t_copy(e2b, Move::L, e2c);
    b_.t_copy(e2c, Move::L, ef2());
  }

  int ef2() {
    if (ef2_ < 0) {
      ef2_ = b_.state("e.flag2");
      ef3_ = b_.state("e.flag3");
      b_.t_any(ef2_, 0, Move::L, ef3_);
    }
    return ef2_;
  }

  // ---- phase three: compress the output-sim cells to the tape start.
  void emit_compression() {
    if (ef3_ < 0) return;  // the simulated program has no path into halt
    int seekl[2] = {b_.state("z.seek0"), b_.state("z.seek1")};
    int mark = b_.state("z.mark");
    int seekr = b_.state("z.src");
    int clna = b_.state("z.clean.a");
    int clnb = b_.state("z.clean.b");
    int rd = b_.state("z.read");
    int pl[2] = {b_.state("z.plant0"), b_.state("z.plant1")};
    for (unsigned u = 0; u < 2; ++u) {
      b_.t(seekl[u], 0, 0, Move::L, seekl[u]);
      b_.t(seekl[u], 1, u, Move::R, mark);
      b_.t_any(pl[u], 1, Move::L, seekl[u]);
    }
    b_.t_any(mark, 1, Move::R, seekr);
    b_.t(seekr, 0, 0, Move::R, seekr);
    b_.t(seekr, 1, 0, Move::R, clna);
    b_.t_any(clna, 0, Move::R, clnb);
    b_.t_any(clnb, 0, Move::R, rd);
    for (unsigned z = 0; z < 2; ++z) b_.t(rd, z, 0, Move::R, pl[z]);

    if (mode_ == Mode::Onehat) {
      // ef3 writes the leading 1 onto cell 0; destinations start at cell 1.
      int ci1 = b_.state("z.init.mark");
      int ci2 = b_.state("z.init.c1");
      int ci3 = b_.state("z.init.c2");
      b_.t_any(ef3_, 1, Move::R, ci1);
      b_.t_any(ci1, 1, Move::R, ci2);
      b_.t_any(ci2, 0, Move::R, ci3);
      b_.t_any(ci3, 0, Move::R, rd);
    } else {
      // Walk down to cell 0 and reuse it as the first destination; sigma and
      // the flags are consumed by the sweep.
      int cur = ef3_;
      for (std::size_t i = 0; i < S_; ++i) {
        int w = b_.state("z.home" + std::to_string(i));
        b_.t_any(cur, 0, Move::L, w);
        cur = w;
      }
      // cur stands on cell 0: plant the destination marker, then zero the
      // cells up to the first output-sim cell.
      int nxt = b_.state("z.init.c1");
      b_.t_any(cur, 1, Move::R, nxt);
      cur = nxt;
      for (std::size_t c = 2; c <= BASE_ + 1; ++c) {
        int w = b_.state("z.init.c" + std::to_string(c));
        b_.t_any(cur, 0, Move::R, w);
        cur = w;
      }
      b_.t_any(cur, 0, Move::R, rd);
    }
  }

  const Program* p_;
  std::string sigma_;
  Mode mode_;
  std::size_t offset_ = 0;
  ProgramBuilder b_;
  std::size_t S_, F3_, F2_, BASE_;
  int start_ = -1, limit_ = -1, halt_ = -1, diverge_ = -1;
  int ef2_ = -1, ef3_ = -1;
  bool exit_walk_done_ = false;
};

void require_three_tape(const Program& p, const char* who) {
  if (!(p.shape() == MachineShape{3, 0, 1}))
    throw std::invalid_argument(std::string(who) + " expects a plain 3-tape program");
  auto issues = p.validate();
  if (!issues.empty())
    throw std::invalid_argument(std::string(who) + ": program not total: " + issues.front());
}

}  // namespace

OnehatCompilation compile_onehat(const Program& p) {
  require_three_tape(p, "compile_onehat");
  return Emitter(&p, "", Mode::Onehat).emit();
}

// The pad plays the role of virtual cell 0; the real tape holds the virtual
// cells 1, 2, ... . States that only ever stand on virtual cell 0 read and
// write the pad and pin the head with a clamped left move, so the physical
// head always sits one cell behind the virtual one. The leading 1 of the
// virtual output lands on the pad and the tape carries f(a) exactly.
Program compile_scratchpad(const Program& p) {
  require_three_tape(p, "compile_scratchpad");
  OnehatCompilation oc = Emitter(&p, "", Mode::Onehat, 1).emit();
  const Program& q = oc.q;
  std::vector<bool> at0(static_cast<std::size_t>(q.state_count()), false);
  for (int s : oc.cell0_states) at0[static_cast<std::size_t>(s)] = true;

  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(q.state_count()));
  for (int i = 0; i < q.state_count(); ++i) names.push_back(q.state_name(i));
  Program out(MachineShape{1, 1, 1}, names, q.start_state(), q.limit_state(),
              q.halt_state());
  for (int s = 0; s < q.state_count(); ++s) {
    if (s == q.halt_state()) continue;
    for (unsigned bit = 0; bit < 2; ++bit) {
      const Transition& t = q.transition(s, bit);
      if (at0[static_cast<std::size_t>(s)]) {
        // Window bit 0 is the tape cell (written back), bit 1 the pad.
        for (unsigned tc = 0; tc < 2; ++tc)
          out.set_transition(
              s, tc | (bit << 1),
              {static_cast<std::uint16_t>(tc | (static_cast<unsigned>(t.write) << 1)),
               Move::L, t.next});
      } else {
        for (unsigned pd = 0; pd < 2; ++pd)
          out.set_transition(
              s, bit | (pd << 1),
              {static_cast<std::uint16_t>(static_cast<unsigned>(t.write) | (pd << 1)),
               t.move, t.next});
      }
    }
  }
  return out;
}

Program compile_notdense(const Program& p, const std::string& sigma) {
  require_three_tape(p, "compile_notdense");
  if (sigma.empty())
    throw std::invalid_argument("compile_notdense: sigma must be nonempty");
  return Emitter(&p, sigma, Mode::Notdense).emit().q;
}

Program compile_characteristic(const Program& p) {
  return compile_notdense(p, "01");
}

namespace detail {

Program stretch_four_wide_standalone() {
  return Emitter(nullptr, "", Mode::StretchOnly).emit().q;
}

}  // namespace detail

}  // namespace ittm
