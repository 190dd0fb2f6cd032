#pragma once

#include <algorithm>
#include <cstddef>

#include "mfotl/formula.hpp"
#include "mfotl/trace.hpp"

namespace mfotl {

// The number of time-points whose verdict is determined by the consumed
// prefix; the monitor has emitted exactly the time-points below it. For
// bounded-future operators a time-point is determined once some known stamp
// exits its window.
inline std::size_t progress(const TracePrefix& p, const Formula& f) {
  std::size_t steps = p.size();
  switch (f.kind) {
    case FKind::Pred:
    case FKind::Eq:
      return steps;
    case FKind::Neg:
    case FKind::Exists:
      return progress(p, *f.l);
    case FKind::And:
    case FKind::Or:
      return std::min(progress(p, *f.l), progress(p, *f.r));
    case FKind::Prev:
      return steps == 0 ? 0 : std::min(progress(p, *f.l) + 1, steps);
    case FKind::Next: {
      std::size_t c = progress(p, *f.l);
      return c == 0 ? 0 : c - 1;
    }
    case FKind::Since:
    case FKind::Trigger:
      return std::min(progress(p, *f.l), progress(p, *f.r));
    case FKind::Until:
    case FKind::Release: {
      std::size_t minp = std::min(progress(p, *f.l), progress(p, *f.r));
      // stamps up to index min(steps-1, minp) are known and bound the window
      for (std::size_t i = 0; i < minp; ++i) {
        bool pending = true;
        for (std::size_t k = 0; k < steps && k <= minp; ++k)
          if (!f.ivl.memR(monus(p.tau(k), p.tau(i)))) {
            pending = false;
            break;
          }
        if (pending) return i;
      }
      return minp;
    }
  }
  return steps;
}

}  // namespace mfotl
