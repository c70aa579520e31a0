#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace coopbandit::cli {

inline constexpr const char* kThreadsEnvVar = "COOPBANDIT_THREADS";

/// Entry point shared by the `coopbandit` executable and the tests.
/// `args` excludes the program name. Returns the process exit status.
int main(std::span<const std::string> args, std::ostream& out, std::ostream& err);

int cmd_run(const std::string& config_path, const std::string& out_dir,
            std::span<const std::string> overrides, std::ostream& out, std::ostream& err);
int cmd_oracle(const std::string& config_path, std::span<const std::string> overrides,
               std::ostream& out, std::ostream& err);
int cmd_validate(const std::string& config_path, std::span<const std::string> overrides,
                 std::ostream& out, std::ostream& err);

}  // namespace coopbandit::cli
