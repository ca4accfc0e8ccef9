#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ainfss {

/* Command-line surface: check, cohomology, transfer, pages, compare, einf,
 * selftest.  Exit codes: 0 pass, 1 check/comparison failure, 2 parse or
 * validation error. */
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ainfss
