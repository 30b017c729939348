#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

namespace tqt::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitInputError = 2;

struct GenOptions {
  std::string kind = "matrix";  // matrix | torus | random
  std::string preset;           // matrix: "T1" or empty (then --dims with Q = 0)
  std::string dims;             // "2,2" = dimensions of degrees 0, 1, …
  int n_trunc = 1;
  std::string tau = "0,1";
  std::uint64_t seed = 0;
  int budget = 2;
  bool with_splitting = false;  // exact kinds: store the projector splitting for --seed
};

struct Config {
  std::optional<std::string> mode;  // exact | float; defaults to the instance scalar
  double tolerance = 1e-10;
  int max_arity = 4;
  long quad_budget = 1'000'000;
  std::uint64_t seed = 0;
  std::string output = "text";  // text | json
  std::optional<int> cyclic;
  bool quadrature = false;  // trace: evaluate F_k (k ≥ 2) by quadrature in float mode
};

/// Each command writes its report to `out` and returns an exit code; input
/// problems are raised as tqt::InputError / tqt::ShapeError.
int cmd_gen(const GenOptions& opts, std::ostream& out);
int cmd_verify(const std::string& instance, const Config& cfg, std::ostream& out);
int cmd_trace(const std::string& instance, const std::string& chain, const Config& cfg, std::ostream& out);

}  // namespace tqt::cli
