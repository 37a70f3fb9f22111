#pragma once

#include <string>
#include <vector>

namespace grhmc::cli {

/// Entry point behind the `grhmc` binary; testable in-process.
/// Exit codes: 0 success, 1 trajectory/runtime failure, 2 config/data error.
int dispatch(const std::vector<std::string>& args);

}  // namespace grhmc::cli
