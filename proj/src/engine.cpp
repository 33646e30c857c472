#include "ittm/engine.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace ittm {

SegmentSummary SegmentSummary::of_configuration(const Configuration& c) {
  SegmentSummary s;
  s.ever_one = c.tapes;
  s.pad_ever = c.pad;
  return s;
}

void SegmentSummary::merge(const SegmentSummary& later) {
  for (std::size_t t = 0; t < ever_one.size(); ++t)
    ever_one[t] = TapeWord::pointwise_or(ever_one[t], later.ever_one[t]);
  for (std::size_t j = 0; j < pad_ever.size(); ++j) pad_ever[j] |= later.pad_ever[j];
}

namespace {

Ordinal omega_power(unsigned exponent, unsigned height) {
  return Ordinal::omega_term(exponent, 1, height);
}

struct Item {
  Configuration cfg;       // limit configuration closing a block
  SegmentSummary summary;  // ever-one over that block
};

struct Resolution {
  Configuration limit_config;
  SegmentSummary block_summary;  // ever-one over the whole resolved block
  CycleEvidence evidence;
};

struct Block0Halt {
  std::uint64_t steps_before_fire;
  Configuration fire_config;
  Configuration final_config;
};

struct Block0Out {
  enum class Kind { Halted, Cycled, Unresolved } kind;
  Block0Halt halt;
  Resolution res;
  std::string diagnostic;
};

// ---------------------------------------------------------------------------
// Shape fitting on two verification windows. A sweep that keeps reaching new
// cells cannot repeat a configuration; instead three aligned snapshots
// C0, C1, C2 and the displays of the two windows between them are matched
// against a drift model. Either fit, once verified on both windows, yields
// the limit configuration exactly.

// Single drift: below the frontier f both windows display the same values
// (their limsup is the window OR); from f on, activity moves right by d per
// window, leaving a frozen wake of width d behind.
struct SingleDriftFit {
  std::size_t d = 0;
  std::size_t f = 0;
};

std::optional<SingleDriftFit> fit_single_drift(
    const Configuration& c0, const Configuration& c1, const Configuration& c2,
    const std::vector<TapeWord>& ev1, const std::vector<TapeWord>& ev2,
    const Bits& pev1, const Bits& pev2,
    const std::vector<std::size_t>& d_candidates) {
  if (c0.state != c1.state || c1.state != c2.state) return std::nullopt;
  if (c0.pad != c1.pad || c1.pad != c2.pad) return std::nullopt;
  if (pev1 != pev2) return std::nullopt;

  for (std::size_t d : d_candidates) {
    if (d == 0) continue;
    long f_lo = 0, f_hi = -1;  // -1 == no upper bound yet
    bool ok = true;
    auto lo = [&f_lo](long v) { f_lo = std::max(f_lo, v); };
    auto hi = [&f_hi](long v) {
      if (v < 0) return;
      f_hi = f_hi < 0 ? v : std::min(f_hi, v);
    };
    for (std::size_t t = 0; t < c0.tapes.size() && ok; ++t) {
      auto d1 = TapeWord::diff_against_shifted(c1.tapes[t], c0.tapes[t], d);
      auto d2 = TapeWord::diff_against_shifted(c2.tapes[t], c1.tapes[t], d);
      auto ds = TapeWord::diff_against_shifted(ev2[t], ev1[t], d);
      if (d1.unbounded || d2.unbounded || ds.unbounded) {
        ok = false;
        break;
      }
      if (d1.last >= 0) lo(d1.last - static_cast<long>(d) + 1);
      if (d2.last >= 0) lo(d2.last - 2 * static_cast<long>(d) + 1);
      if (ds.last >= 0) lo(ds.last - static_cast<long>(d) + 1);
      long e1 = TapeWord::first_mismatch(c0.tapes[t], c1.tapes[t]);
      long e2 = TapeWord::first_mismatch(c1.tapes[t], c2.tapes[t]);
      long cm = TapeWord::first_mismatch(ev1[t], ev2[t]);
      hi(e1);
      if (e2 >= 0) hi(e2 - static_cast<long>(d));
      hi(cm);
    }
    if (!ok) continue;
    long f_max = f_hi;
    if (f_max < 0) {
      std::size_t ext = 1;
      for (const TapeWord& tw : c2.tapes)
        ext = std::max(ext, tw.prefix().size() + tw.period().size());
      f_max = static_cast<long>(ext + d);
    }
    for (long f = f_lo; f <= f_max; ++f) {
      bool wake_ok = true;
      for (std::size_t t = 0; t < c0.tapes.size() && wake_ok; ++t)
        wake_ok = ev2[t].window(static_cast<std::size_t>(f), d) ==
                  c2.tapes[t].window(static_cast<std::size_t>(f), d);
      if (wake_ok)
        return SingleDriftFit{d, static_cast<std::size_t>(f)};
    }
  }
  return std::nullopt;
}

Configuration single_drift_limit(int limit_state, const Configuration& c2,
                                 const std::vector<TapeWord>& ev2,
                                 const Bits& pev2, const SingleDriftFit& fit) {
  Configuration lim;
  lim.state = limit_state;
  lim.head = 0;
  for (std::size_t t = 0; t < c2.tapes.size(); ++t)
    lim.tapes.push_back(
        TapeWord(ev2[t].window(0, fit.f), c2.tapes[t].window(fit.f, fit.d)));
  lim.pad = pev2;
  return lim;
}

// ever-one of the unobserved tail under the single-drift model.
void extend_summary_single_drift(SegmentSummary& total,
                                 const std::vector<TapeWord>& ev1,
                                 const std::vector<TapeWord>& ev2,
                                 const SingleDriftFit& fit) {
  for (std::size_t t = 0; t < total.ever_one.size(); ++t) {
    TapeWord ew = TapeWord::pointwise_or(ev1[t], ev2[t]);
    total.ever_one[t] = TapeWord::pointwise_or(
        total.ever_one[t], TapeWord::or_of_shifts(ew.zeroed_below(fit.f), fit.d));
  }
}

// Two drifts: cells settle left to right at rate delta per window (the
// deposited block W repeats), while the active zone and everything beyond it
// drifts right at rate d. The limit word is the settled prefix followed by
// W forever; nothing on the high side survives because the settled region
// eventually covers every cell.
struct TwoDriftFit {
  std::size_t d = 0;
  std::size_t delta = 0;
  std::size_t edge = 0;  // first cell not yet settled at C1-vs-C0
  std::vector<bool> stationary;
};

std::optional<TwoDriftFit> fit_two_drift(const Configuration& c0,
                                         const Configuration& c1,
                                         const Configuration& c2,
                                         const std::vector<TapeWord>& ev2,
                                         const Bits& pev1, const Bits& pev2,
                                         std::size_t d) {
  if (c0.state != c1.state || c1.state != c2.state) return std::nullopt;
  if (c0.pad != c1.pad || c1.pad != c2.pad) return std::nullopt;
  if (pev1 != pev2) return std::nullopt;

  long e1 = -1, e2 = -1;
  std::vector<bool> stationary(c0.tapes.size(), false);
  for (std::size_t t = 0; t < c0.tapes.size(); ++t) {
    long a = TapeWord::first_mismatch(c0.tapes[t], c1.tapes[t]);
    long b = TapeWord::first_mismatch(c1.tapes[t], c2.tapes[t]);
    stationary[t] = a < 0 && b < 0;  // e.g. an input tape that is only read
    if (a >= 0) e1 = e1 < 0 ? a : std::min(e1, a);
    if (b >= 0) e2 = e2 < 0 ? b : std::min(e2, b);
  }
  if (e1 < 0 || e2 <= e1) return std::nullopt;
  std::size_t edge = static_cast<std::size_t>(e1);
  std::size_t delta = static_cast<std::size_t>(e2 - e1);
  if (delta >= d) return std::nullopt;  // the high side must outrun the low

  for (std::size_t t = 0; t < c0.tapes.size(); ++t) {
    if (stationary[t]) {
      // A tape that never changes must not flicker either.
      if (!(ev2[t] == c2.tapes[t])) return std::nullopt;
      continue;
    }
    // The settled deposit repeats verbatim.
    if (c1.tapes[t].window(edge, delta) != c2.tapes[t].window(edge + delta, delta))
      return std::nullopt;
    // Below the settled edge the last window displayed only settled values.
    if (ev2[t].window(0, edge) != c2.tapes[t].window(0, edge)) return std::nullopt;
    // High side: a bounded mid-zone plus a rigid shift by d.
    auto dh1 = TapeWord::diff_against_shifted(c1.tapes[t], c0.tapes[t], d);
    auto dh2 = TapeWord::diff_against_shifted(c2.tapes[t], c1.tapes[t], d);
    if (dh1.unbounded || dh2.unbounded) return std::nullopt;
  }
  TwoDriftFit fit{d, delta, edge};
  fit.stationary = std::move(stationary);
  return fit;
}

Configuration two_drift_limit(int limit_state, const Configuration& c2,
                              const Bits& pev2, const TwoDriftFit& fit) {
  Configuration lim;
  lim.state = limit_state;
  lim.head = 0;
  for (std::size_t t = 0; t < c2.tapes.size(); ++t) {
    const TapeWord& tw = c2.tapes[t];
    if (fit.stationary[t])
      lim.tapes.push_back(tw);
    else
      lim.tapes.push_back(TapeWord(tw.window(0, fit.edge + 2 * fit.delta),
                                   tw.window(fit.edge + fit.delta, fit.delta)));
  }
  lim.pad = pev2;
  return lim;
}

// ---------------------------------------------------------------------------

// Runs successor steps from `start` until the program halts, a cycle is
// found, or the step budget runs out.
Block0Out run_block0(const Program& p, const Configuration& start,
                     const Ordinal& start_stage, const RunOptions& opts,
                     std::vector<TraceEvent>* trace) {
  Block0Out out{Block0Out::Kind::Unresolved, {}, {}, {}};
  std::vector<Configuration> snaps{start};
  std::vector<std::uint64_t> clamps;  // step indices with a left clamp

  // Chronological log of 1-writes: (step, tape-or-pad, cell).
  struct Write1 {
    std::uint64_t step;
    int tape;  // -1 for pad
    std::uint64_t cell;
  };
  std::vector<Write1> wlog;

  auto window_ever = [&](std::uint64_t from, std::uint64_t to) {
    // Displays over steps [from, to): values at `from` plus 1-writes within.
    SegmentSummary s = SegmentSummary::of_configuration(snaps[from]);
    auto it = std::lower_bound(wlog.begin(), wlog.end(), from,
                               [](const Write1& w, std::uint64_t v) { return w.step < v; });
    for (; it != wlog.end() && it->step < to; ++it) {
      if (it->tape < 0)
        s.pad_ever[it->cell] = 1;
      else
        s.ever_one[static_cast<std::size_t>(it->tape)] =
            s.ever_one[static_cast<std::size_t>(it->tape)].with_cell(it->cell, 1);
    }
    return s;
  };
  auto window_writes = [&](std::uint64_t from, std::uint64_t to) {
    // 1-writes within [from, to) as one finite-support word per tape.
    std::vector<TapeWord> w(snaps[0].tapes.size(), TapeWord::zeros());
    auto it = std::lower_bound(wlog.begin(), wlog.end(), from,
                               [](const Write1& a, std::uint64_t v) { return a.step < v; });
    for (; it != wlog.end() && it->step < to; ++it)
      if (it->tape >= 0)
        w[static_cast<std::size_t>(it->tape)] =
            w[static_cast<std::size_t>(it->tape)].with_cell(it->cell, 1);
    return w;
  };
  auto observed_summary = [&]() { return window_ever(0, snaps.size()); };
  auto clamp_in = [&](std::uint64_t from, std::uint64_t to) {
    return std::lower_bound(clamps.begin(), clamps.end(), from) !=
           std::lower_bound(clamps.begin(), clamps.end(), to);
  };

  std::unordered_map<std::size_t, std::vector<std::uint64_t>> by_hash;
  by_hash[start.hash()].push_back(0);

  struct Record {
    std::uint64_t index;
    std::uint64_t head;
    std::uint64_t min_head_since;
    std::size_t fingerprint;
  };
  std::vector<Record> records;
  // (state, head) -> record position in `records`.
  std::unordered_map<std::uint64_t, std::size_t> record_at;
  auto rec_key = [&p](int state, std::uint64_t head) {
    return head * static_cast<std::uint64_t>(p.state_count()) +
           static_cast<std::uint64_t>(state);
  };
  std::uint64_t max_head = start.head;

  auto fingerprint = [](const Configuration& c) {
    std::size_t h = 0x811c9dc5u;
    auto mix = [&h](std::size_t v) {
      h ^= v;
      h *= 0x01000193u;
    };
    mix(static_cast<std::size_t>(c.state));
    for (auto b : c.pad) mix(b + 2);
    for (const TapeWord& t : c.tapes)
      for (std::size_t i = 0; i < 8; ++i) mix(t.at(c.head + i) + 3);
    return h;
  };
  records.push_back({0, start.head, start.head, fingerprint(start)});
  record_at[rec_key(start.state, start.head)] = 0;

  auto finish_cycle = [&](CycleEvidence ev, Configuration lim, SegmentSummary total) {
    out.kind = Block0Out::Kind::Cycled;
    out.res = {std::move(lim), std::move(total), ev};
  };

  for (std::uint64_t k = 0;; ++k) {
    const Configuration& cur = snaps.back();
    unsigned read = read_window(p, cur);
    if (!p.has_transition(cur.state, read))
      throw std::logic_error("program not total at state " + p.state_name(cur.state));
    StepResult sr = step(p, cur);
    if (sr.to_halt) {
      out.kind = Block0Out::Kind::Halted;
      out.halt = {k, cur, sr.next};
      return out;
    }
    if (k >= opts.budget.steps_per_level) {
      std::ostringstream d;
      d << "no cycle within " << opts.budget.steps_per_level
        << " steps; distinct hashes " << by_hash.size() << "; records "
        << records.size();
      out.diagnostic = d.str();
      return out;
    }
    if (sr.clamped) clamps.push_back(k);
    {
      const Transition& tr = p.transition(cur.state, read);
      int idx = 0;
      for (int t = 0; t < p.shape().tapes; ++t)
        for (int w = 0; w < p.shape().head_width; ++w)
          if ((tr.write >> idx++) & 1)
            wlog.push_back({k, t, cur.head + static_cast<std::uint64_t>(w)});
      for (int j2 = 0; j2 < p.shape().pad_cells; ++j2)
        if ((tr.write >> idx++) & 1)
          wlog.push_back({k, -1, static_cast<std::uint64_t>(j2)});
    }
    snaps.push_back(std::move(sr.next));
    const std::uint64_t j = static_cast<std::uint64_t>(snaps.size()) - 1;
    const Configuration& now = snaps.back();
    if (trace && opts.keep_step_events)
      trace->push_back({TraceEvent::Kind::Step,
                        Ordinal::add(start_stage, Ordinal::from_natural(j)), now,
                        std::nullopt});

    // Exact cycle: earliest previous occurrence of this configuration. The
    // limsup of the periodic tail is the OR over one window.
    auto& bucket = by_hash[now.hash()];
    for (std::uint64_t i : bucket) {
      if (snaps[i] == now) {
        CycleEvidence ev;
        ev.kind = CycleEvidence::Kind::Exact;
        ev.level = 0;
        ev.base_index = i;
        ev.period = j - i;
        SegmentSummary win = window_ever(i, j);
        Configuration lim;
        lim.state = p.limit_state();
        lim.head = 0;
        lim.tapes = win.ever_one;
        lim.pad = win.pad_ever;
        finish_cycle(ev, std::move(lim), observed_summary());
        return out;
      }
    }
    bucket.push_back(j);

    const bool is_record = now.head > max_head;
    if (is_record) {
      std::size_t fp = fingerprint(now);

      // Sound shifted cycle: the whole suffix beyond the window's least head
      // moved right by d and nothing below it was touched, so the future is
      // a mirrored replay shifted right forever.
      int checked = 0;
      for (const Record& r : records) {
        if (checked >= 48) break;
        const Configuration& old = snaps[r.index];
        if (old.state != now.state || old.pad != now.pad) continue;
        if (r.fingerprint != fp) continue;
        ++checked;
        const std::uint64_t d = now.head - old.head;
        if (d == 0) continue;
        const std::uint64_t f = r.min_head_since;
        if (clamp_in(r.index, j)) continue;
        if (!shift_equivalent(old, now, d, f)) continue;

        CycleEvidence ev;
        ev.kind = CycleEvidence::Kind::Shifted;
        ev.level = 0;
        ev.base_index = r.index;
        ev.period = j - r.index;
        ev.drift = d;
        ev.frontier = f;

        Configuration lim;
        lim.state = p.limit_state();
        lim.head = 0;
        for (const TapeWord& tw : now.tapes)
          lim.tapes.push_back(TapeWord(tw.window(0, f), tw.window(f, d)));
        SegmentSummary win = window_ever(r.index, j + 1);
        lim.pad = win.pad_ever;

        SegmentSummary total = observed_summary();
        for (std::size_t t = 0; t < total.ever_one.size(); ++t) {
          TapeWord active = win.ever_one[t].zeroed_below(f);
          total.ever_one[t] = TapeWord::pointwise_or(
              total.ever_one[t], TapeWord::or_of_shifts(active, d));
        }
        finish_cycle(ev, std::move(lim), std::move(total));
        return out;
      }

      // Drift-model detection over two windows, anchored at three records in
      // the same state with equally spaced heads. Their head neighborhoods
      // must agree so the next actions coincide under the translation.
      int tried = 0;
      for (auto rit = records.rbegin(); rit != records.rend() && tried < 24; ++rit) {
        const Record& rm = *rit;
        const Configuration& cm = snaps[rm.index];
        if (cm.state != now.state || cm.pad != now.pad) continue;
        if (rm.fingerprint != fp) continue;
        const std::uint64_t d = now.head - rm.head;
        if (d == 0 || rm.head < d) continue;
        auto hit = record_at.find(rec_key(now.state, rm.head - d));
        if (hit == record_at.end()) continue;
        const Record& ri = records[hit->second];
        const Configuration& ci = snaps[ri.index];
        if (ci.pad != now.pad) continue;
        if (ri.fingerprint != fp) continue;
        ++tried;
        if (clamp_in(ri.index, j)) continue;

        SegmentSummary w1 = window_ever(ri.index, rm.index);
        SegmentSummary w2 = window_ever(rm.index, j);

        if (auto fit = fit_single_drift(ci, cm, now, w1.ever_one, w2.ever_one,
                                        w1.pad_ever, w2.pad_ever, {d})) {
          CycleEvidence ev;
          ev.kind = CycleEvidence::Kind::Shifted;
          ev.level = 0;
          ev.base_index = ri.index;
          ev.period = rm.index - ri.index;
          ev.drift = fit->d;
          ev.frontier = fit->f;
          Configuration lim = single_drift_limit(p.limit_state(), now,
                                                 w2.ever_one, w2.pad_ever, *fit);
          SegmentSummary total = observed_summary();
          extend_summary_single_drift(total, w1.ever_one, w2.ever_one, *fit);
          finish_cycle(ev, std::move(lim), std::move(total));
          return out;
        }

        if (auto fit = fit_two_drift(ci, cm, now, w2.ever_one, w1.pad_ever,
                                     w2.pad_ever, d)) {
          // The per-window 1-writes must split into a part advancing by
          // delta and a part advancing by d, giving the tail's displays.
          std::vector<TapeWord> a1 = window_writes(ri.index, rm.index);
          std::vector<TapeWord> a2 = window_writes(rm.index, j);
          long cut_lo = 0, cut_hi = -1;
          bool ok = true;
          for (std::size_t t = 0; t < a1.size() && ok; ++t) {
            auto md = TapeWord::diff_against_shifted(a2[t], a1[t], fit->d);
            auto mdelta = TapeWord::diff_against_shifted(a2[t], a1[t], fit->delta);
            if (md.unbounded || mdelta.unbounded) {
              ok = false;
              break;
            }
            if (md.last >= 0) {
              cut_lo = std::max(cut_lo, md.last + 1);
            }
            if (mdelta.first >= 0)
              cut_hi = cut_hi < 0 ? mdelta.first : std::min(cut_hi, mdelta.first);
          }
          // Low-part writes below delta in window 2 have no window-1 twin,
          // and high-part writes below d would have none either.
          for (std::size_t t = 0; t < a2.size() && ok; ++t)
            for (std::size_t x = 0; x < fit->delta; ++x)
              if (a2[t].at(x)) ok = false;
          std::size_t cut = static_cast<std::size_t>(cut_lo);
          for (std::size_t t = 0; t < a2.size() && ok; ++t)
            for (std::size_t x = cut; x < fit->d; ++x)
              if (a2[t].at(x)) ok = false;
          if (ok && (cut_hi < 0 || cut_lo <= cut_hi)) {
            CycleEvidence ev;
            ev.kind = CycleEvidence::Kind::Shifted;
            ev.level = 0;
            ev.base_index = ri.index;
            ev.period = rm.index - ri.index;
            ev.drift = fit->d;
            ev.low_drift = fit->delta;
            ev.frontier = fit->edge;
            Configuration lim =
                two_drift_limit(p.limit_state(), now, w2.pad_ever, *fit);
            SegmentSummary total = observed_summary();
            for (std::size_t t = 0; t < total.ever_one.size(); ++t) {
              // Window-2's writes recur shifted by low_drift below the cut
              // and by drift above it.
              TapeWord high = a2[t].zeroed_below(cut);
              Bits lowbits;
              for (std::size_t x = 0; x < cut; ++x) lowbits.push_back(a2[t].at(x));
              TapeWord low = TapeWord::from_support(lowbits);
              total.ever_one[t] = TapeWord::pointwise_or(
                  total.ever_one[t],
                  TapeWord::or_of_shifts(TapeWord::prepend(Bits(fit->delta, 0), low),
                                         fit->delta));
              total.ever_one[t] = TapeWord::pointwise_or(
                  total.ever_one[t],
                  TapeWord::or_of_shifts(TapeWord::prepend(Bits(fit->d, 0), high),
                                         fit->d));
            }
            finish_cycle(ev, std::move(lim), std::move(total));
            return out;
          }
        }
      }
    }

    // Bookkeeping after the checks so windows exclude the new step.
    for (Record& r : records) r.min_head_since = std::min(r.min_head_since, now.head);
    if (is_record) {
      max_head = now.head;
      if (records.size() < 8192) {
        record_at[rec_key(now.state, now.head)] = records.size();
        records.push_back({j, now.head, now.head, fingerprint(now)});
      }
    }
  }
}

// Cycle detection on a stream of limit configurations (detector level >= 1).
std::optional<Resolution> detect_items(const std::vector<Item>& items, int level) {
  const std::size_t n = items.size();
  if (n < 2) return std::nullopt;
  const std::size_t j = n - 1;

  // Exact: the limit configuration alone determines the future.
  for (std::size_t b = 0; b < j; ++b) {
    if (items[b].cfg == items[j].cfg) {
      CycleEvidence ev;
      ev.kind = CycleEvidence::Kind::Exact;
      ev.level = level;
      ev.base_index = b;
      ev.period = j - b;
      SegmentSummary win = items[b + 1].summary;
      for (std::size_t x = b + 2; x <= j; ++x) win.merge(items[x].summary);
      Configuration lim;
      lim.state = items[j].cfg.state;
      lim.head = 0;
      lim.tapes = win.ever_one;
      lim.pad = win.pad_ever;
      SegmentSummary total = items[0].summary;
      for (std::size_t x = 1; x <= j; ++x) total.merge(items[x].summary);
      return Resolution{std::move(lim), std::move(total), ev};
    }
  }

  // Shifted: verified over two consecutive windows ending at the newest item.
  for (std::size_t q = 1; 2 * q <= j; ++q) {
    const std::size_t b = j - 2 * q;
    const Configuration& cb = items[b].cfg;
    const Configuration& cm = items[b + q].cfg;
    const Configuration& cj = items[j].cfg;

    SegmentSummary w1 = items[b + 1].summary;
    for (std::size_t x = b + 2; x <= b + q; ++x) w1.merge(items[x].summary);
    SegmentSummary w2 = items[b + q + 1].summary;
    for (std::size_t x = b + q + 2; x <= j; ++x) w2.merge(items[x].summary);

    std::size_t d_cap = 8;
    for (const TapeWord& tw : cm.tapes)
      d_cap = std::max(d_cap, tw.prefix().size() + tw.period().size());
    d_cap = std::min<std::size_t>(d_cap, 512);
    std::vector<std::size_t> ds;
    for (std::size_t d = 1; d <= d_cap; ++d) ds.push_back(d);

    auto fit = fit_single_drift(cb, cm, cj, w1.ever_one, w2.ever_one,
                                w1.pad_ever, w2.pad_ever, ds);
    if (!fit) continue;

    CycleEvidence ev;
    ev.kind = CycleEvidence::Kind::Shifted;
    ev.level = level;
    ev.base_index = b;
    ev.period = q;
    ev.drift = fit->d;
    ev.frontier = fit->f;

    Configuration lim =
        single_drift_limit(cj.state, cj, w2.ever_one, w2.pad_ever, *fit);
    SegmentSummary total = items[0].summary;
    for (std::size_t x = 1; x <= j; ++x) total.merge(items[x].summary);
    extend_summary_single_drift(total, w1.ever_one, w2.ever_one, *fit);
    return Resolution{std::move(lim), std::move(total), ev};
  }
  return std::nullopt;
}

}  // namespace

RunOutcome run_from(const Program& p, const Configuration& start,
                    const Ordinal& start_stage, const RunOptions& opts) {
  auto issues = p.validate();
  if (!issues.empty())
    throw std::invalid_argument("program not total: " + issues.front());
  if (static_cast<unsigned>(opts.budget.max_level) >= opts.height)
    throw std::invalid_argument("max_level must stay below the ordinal height");

  RunOutcome out;
  Configuration cfg = start;
  Ordinal stage = start_stage;
  std::vector<std::vector<Item>> items(
      static_cast<std::size_t>(opts.budget.max_level) + 2);

  auto do_halt = [&](const Configuration& fire, std::uint64_t extra_steps) {
    StepResult sr = step(p, fire);
    out.status = RunStatus::Halted;
    out.stage = Ordinal::add(stage, Ordinal::from_natural(extra_steps));
    out.output = sr.next.tapes;
    out.pad_output = sr.next.pad;
    out.fire_config = fire;
    out.trace.push_back({TraceEvent::Kind::Halt, out.stage, sr.next, std::nullopt});
  };

  while (true) {
    Block0Out blk = run_block0(p, cfg, stage, opts, &out.trace);
    if (blk.kind == Block0Out::Kind::Halted) {
      do_halt(blk.halt.fire_config, blk.halt.steps_before_fire);
      return out;
    }
    if (blk.kind == Block0Out::Kind::Unresolved) {
      out.status = RunStatus::UnresolvedLimit;
      out.stage = stage;
      out.diagnostic = blk.diagnostic;
      return out;
    }

    Resolution res = std::move(blk.res);
    int nesting = 1;
    while (true) {
      stage = Ordinal::add(stage, omega_power(static_cast<unsigned>(nesting), opts.height));
      cfg = res.limit_config;
      out.evidence = res.evidence;
      out.trace.push_back({TraceEvent::Kind::Resolve, stage, cfg, res.evidence});
      out.trace.push_back({TraceEvent::Kind::Limit, stage, cfg, std::nullopt});

      // A halt that fires straight out of a limit configuration reports the
      // limit stage itself.
      unsigned read = read_window(p, cfg);
      if (p.has_transition(cfg.state, read) &&
          p.transition(cfg.state, read).next == p.halt_state()) {
        do_halt(cfg, 0);
        return out;
      }

      auto& lane = items[static_cast<std::size_t>(nesting)];
      lane.push_back({cfg, res.block_summary});
      if (lane.size() > opts.budget.steps_per_level) {
        out.status = RunStatus::UnresolvedLimit;
        out.stage = stage;
        out.diagnostic = "no cycle among " + std::to_string(lane.size()) +
                         " limit configurations at level " + std::to_string(nesting);
        return out;
      }
      auto det = detect_items(lane, nesting);
      if (!det) break;
      if (nesting + 1 > opts.budget.max_level) {
        out.status = RunStatus::BudgetExhausted;
        out.stage = stage;
        out.evidence = det->evidence;
        out.diagnostic = "limit nesting exceeds max_level " +
                         std::to_string(opts.budget.max_level);
        return out;
      }
      lane.clear();
      res = std::move(*det);
      ++nesting;
    }
  }
}

RunOutcome run(const Program& p, const TapeWord& input, const RunOptions& opts) {
  return run_from(p, init_configuration(p, input), Ordinal(), opts);
}

Ordinal measure(const Program& p, const TapeWord& input, const RunOptions& opts) {
  RunOutcome out = run(p, input, opts);
  if (!out.halted())
    throw std::runtime_error("run did not halt: " + out.diagnostic);
  return out.stage;
}

std::string trace_to_jsonl(const Program& p, const std::vector<TraceEvent>& events,
                           std::size_t window) {
  std::ostringstream out;
  for (const TraceEvent& e : events) {
    const char* kind = nullptr;
    switch (e.kind) {
      case TraceEvent::Kind::Step: kind = "step"; break;
      case TraceEvent::Kind::Limit: kind = "limit"; break;
      case TraceEvent::Kind::Resolve: kind = "resolve"; break;
      case TraceEvent::Kind::Halt: kind = "halt"; break;
    }
    out << "{\"event\":\"" << kind << "\",\"stage\":\"" << e.stage.format()
        << "\",\"state\":\"" << p.state_name(e.config.state) << "\",\"head\":"
        << e.config.head << ",\"window\":[";
    for (std::size_t t = 0; t < e.config.tapes.size(); ++t) {
      if (t) out << ',';
      out << '"';
      for (std::size_t i = 0; i < window; ++i)
        out << static_cast<int>(e.config.tapes[t].at(i));
      out << '"';
    }
    out << ']';
    if (!e.config.pad.empty()) {
      out << ",\"pad\":\"";
      for (auto b : e.config.pad) out << static_cast<int>(b);
      out << '"';
    }
    if (e.evidence) {
      const CycleEvidence& ev = *e.evidence;
      out << ",\"evidence\":{\"kind\":\""
          << (ev.kind == CycleEvidence::Kind::Exact ? "exact" : "shifted")
          << "\",\"level\":" << ev.level << ",\"base\":" << ev.base_index
          << ",\"period\":" << ev.period;
      if (ev.kind == CycleEvidence::Kind::Shifted) {
        out << ",\"drift\":" << ev.drift << ",\"frontier\":" << ev.frontier;
        if (ev.low_drift) out << ",\"low_drift\":" << ev.low_drift;
      }
      out << '}';
    }
    out << "}\n";
  }
  return out.str();
}

}  // namespace ittm
