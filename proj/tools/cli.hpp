#pragma once

#include <iosfwd>

namespace xmarl {

// Exit codes: 0 ok, 2 bad input or usage, 3 timeout or size limit.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace xmarl
