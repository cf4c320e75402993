#pragma once

#include <iosfwd>

namespace gos::cli {

struct SelftestArgs {
  bool quick = false;
  int jobs = 1;
};

int run_selftest(const SelftestArgs& a, std::ostream& out);

}  // namespace gos::cli
