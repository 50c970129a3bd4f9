#pragma once

#include <string>
#include <vector>

namespace gravent::cli {

// Exit codes: 0 success, 2 config error, 3 numerical or I/O failure,
// 4 infeasible target under --enforce.

int run_cli(const std::vector<std::string>& args);

}  // namespace gravent::cli
