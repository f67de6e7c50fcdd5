#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace triq::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitValidation = 2;

inline constexpr const char* kSeedEnv = "TRIQ_LAB_SEED";

enum class SeedSource { Flag, Environment, Random };

struct RunConfig {
  std::string subcommand;
  std::size_t n = 1;
  std::uint64_t seed = 0;
  SeedSource seed_source = SeedSource::Random;
  std::size_t workers = 1;
  double tol = 1e-9;
  std::filesystem::path out;
  std::string format = "json";
};

/// Seed precedence: explicit flag, then TRIQ_LAB_SEED, then a fresh random
/// value. Throws std::invalid_argument for unparsable text.
std::uint64_t resolve_seed(const std::string& flag_text, SeedSource& source);

/// Runs one command line. Returns 0 on success, 1 on usage errors and 2 when
/// input validation (or a requested check) fails.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

}  // namespace triq::cli
