// Acceptance runner: one line per criterion, non-zero exit if any fails.
#include <cstdio>

#include "pinchkit/checks.hpp"

int main() {
  const auto results = pinchkit::checks::run_suite("all");
  int failures = 0;
  for (const auto& r : results) {
    const bool ok = r.ok();
    if (!ok) ++failures;
    std::printf("criterion %2d: %s  %-28s %s  [%.2f s, limit %.0f s]\n", r.id, ok ? "PASS" : "FAIL", r.name.c_str(),
                r.detail.c_str(), r.seconds, r.time_limit);
  }
  std::printf("%zu criteria, %d failed\n", results.size(), failures);
  return failures == 0 ? 0 : 1;
}
