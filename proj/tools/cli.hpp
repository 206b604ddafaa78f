#pragma once

#include <ostream>

namespace supertau::cli {

// Exit codes: 0 all checks pass, 1 a check failed, 2 usage error, 3 validation error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace supertau::cli
