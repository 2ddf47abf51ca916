#pragma once

#include <ostream>

namespace qfreg::cli {

/// Exit codes: 0 success or certified, 2 principled refusal, 1 error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qfreg::cli
