#ifndef MMBM_LOG_HPP
#define MMBM_LOG_HPP

namespace mmbm {

// Verbosity from the MMBM_LOG environment variable: 0 quiet (default),
// 1 per-stage notes, 2 iteration traces.  Output goes to stderr.
int log_level();

void log_info(const char* fmt, ...);
void log_debug(const char* fmt, ...);

}  // namespace mmbm

#endif  // MMBM_LOG_HPP
