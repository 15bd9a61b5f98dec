#pragma once

#include <iostream>

namespace qcqps {

/// Exit codes: 0 success, 1 invalid input or usage, 2 inconclusive result.
int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout,
            std::ostream& err = std::cerr);

}  // namespace qcqps
