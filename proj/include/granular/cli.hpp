// Command implementations behind the granular_sim executable: run a
// scenario, export exact solutions, verify a finished output directory, and
// run a batch of scenarios concurrently. Exit codes: 0 success, 2 validation
// error, 3 unexpected blow-up, 4 verification failure.
#pragma once

#include <map>
#include <string>
#include <vector>

namespace granular {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitUnexpectedBlowup = 3;
inline constexpr int kExitVerifyFailure = 4;

int cmd_run(const std::string& scenario_path, const std::string& out_override = "");

// family: haff | steady | automodel | singular; params are "key=value" pairs.
int cmd_exact(const std::string& family, const std::vector<std::string>& params,
              const std::string& out_dir);

int cmd_verify(const std::string& out_dir);

// Runs every *.json scenario in the directory concurrently with isolated
// output directories under out_root; returns the worst exit status.
int cmd_batch(const std::string& scenario_dir, const std::string& out_root);

}  // namespace granular
