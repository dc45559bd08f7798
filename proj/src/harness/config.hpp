#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace eqtoda {

/** Run parameters shared by the verification registry and the compute
 *  commands.  Settings layer: built-in defaults, then the file named by
 *  EQTODA_CONFIG, then an explicit config file, then direct assignments. */
struct RunConfig {
    int eps_order = 6;     // working eps truncation
    int lambda_depth = 8;  // Lambda window depth for the dressing-side checks
    int n_max = 5;         // highest flow / Hamiltonian index swept
    int k_max = 4;         // highest solved constraint coefficient
    bool z_zero = false;   // specialize z_k = 0 in compute output
    bool t_zero = false;   // specialize t = 0 in compute output
    std::string format = "text";      // text | json | latex
    std::vector<std::string> checks;  // selection; empty = full registry
    uint64_t seed = 0x5eed0001u;      // randomized batteries
    bool timings = false;  // record wall times (reports stay byte-stable without)
    bool fault = false;    // failure-injection hook for the report pipeline
    int n = -1;            // single-instance override for n-parameterized checks
    int k = -1;            // single-instance override for k-parameterized checks
    int power = 1;         // compute lax: operator power
    int coeff = 0;         // compute lax: single coefficient degree
    bool coeff_set = false;
};

/** Bounds and name validity; throws ConfigError. */
void validate_config(const RunConfig& cfg);

/** One `key = value` assignment; throws ConfigError on unknown keys or
 *  malformed values. */
void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value);

/** Line-oriented `key = value` text; blank lines and '#' comments allowed. */
void load_config_file(RunConfig& cfg, const std::string& path);

/** Apply the file named by EQTODA_CONFIG when the variable is set. */
void load_config_env(RunConfig& cfg);

}  // namespace eqtoda
