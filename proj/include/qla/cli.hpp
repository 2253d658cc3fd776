#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace qla::cli {

enum class Command { RightEigs, LeftEigs, Rayleigh, Moments, MinMax, Check };
enum class Output { Human, Structured };

// Exit statuses.
inline constexpr int kOk = 0;
inline constexpr int kFalsified = 1;
inline constexpr int kParseError = 2;
inline constexpr int kPrecondition = 3;

struct RunConfig {
  Command command = Command::Check;
  std::string input_path;
  std::uint64_t seed = 42;
  std::size_t samples = 1'000'000;
  double tol = 1e-9;
  std::optional<std::string> vector;  // "q1,q2,..."
  std::optional<std::string> lambda;  // "a+bi+cj+dk"
  std::optional<std::size_t> k;
  Output output = Output::Human;
};

/// Runs one command; the report goes to `out`, diagnostics to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv-style arguments (without the program name) and runs.
int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qla::cli
