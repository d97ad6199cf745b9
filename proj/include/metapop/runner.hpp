#pragma once

#include <iosfwd>
#include <string>

#include "metapop/config.hpp"

namespace metapop {

// Exit codes of run():
//   0 success (check-order: verdict ordered)
//   1 check-order verdict not-ordered
//   2 check-order verdict inconclusive
//   3 validation / usage error
//   4 I/O error
// Writes <out>.json always (when an out prefix is set) and <out>.csv for
// table/series experiments; prints a one-line summary to `log`. Outputs embed
// the resolved config and seed and are byte-identical across reruns and
// thread counts.
int run(const RunConfig& config, std::ostream& log);

}  // namespace metapop
