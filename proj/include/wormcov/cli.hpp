#pragma once

#include <iosfwd>

namespace wormcov {

/// Command-line front end. Exit codes: 0 success, 2 usage/argument/parse
/// errors, 3 sampling failures, 4 internal consistency errors.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace wormcov
