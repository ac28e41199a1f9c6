#include "mmbm/log.hpp"

#include <cstdarg>
#include <cstdio>
#include <cstdlib>

namespace mmbm {

int log_level() {
  static int level = [] {
    const char* e = std::getenv("MMBM_LOG");
    return e ? std::atoi(e) : 0;
  }();
  return level;
}

namespace {
void vlog(const char* fmt, va_list args) {
  std::fprintf(stderr, "[mmbm] ");
  std::vfprintf(stderr, fmt, args);
  std::fprintf(stderr, "\n");
}
}  // namespace

void log_info(const char* fmt, ...) {
  if (log_level() < 1) return;
  va_list args;
  va_start(args, fmt);
  vlog(fmt, args);
  va_end(args);
}

void log_debug(const char* fmt, ...) {
  if (log_level() < 2) return;
  va_list args;
  va_start(args, fmt);
  vlog(fmt, args);
  va_end(args);
}

}  // namespace mmbm
