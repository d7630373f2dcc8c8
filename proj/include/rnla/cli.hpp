#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rnla::cli {

// Runs one CLI invocation; the report (JSON unless --csv) goes to `out`.
// Exit codes: 0 success, 1 usage error, 2 numerical failure.
int run(const std::vector<std::string>& args, std::ostream& out);

int main_entry(int argc, char** argv);

}  // namespace rnla::cli
