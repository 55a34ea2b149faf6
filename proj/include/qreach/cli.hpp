#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace qreach::cli {

enum ExitCode { kOk = 0, kInternalError = 1, kInvalidInput = 2, kBudgetExhausted = 3 };

/// Runs one command. `args` excludes the program name. Reports go to `out`
/// as JSON; human-readable errors go to `err`. "-" as a file name reads `in`.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

/// 64-bit FNV-1a, used for the inputs digest.
std::uint64_t fnv1a(const std::string& data, std::uint64_t seed = 14695981039346656037ull);

}  // namespace qreach::cli
