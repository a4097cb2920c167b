#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "xyfid/chain.hpp"

namespace xyfid {

enum class Quantity { fidelity, chi_field, xi_thermal, cv, z };
enum class SweepMethod { exact, ppa, tla, ground, oracle };
enum class OutputFormat { csv, jsonl };

const char* quantity_name(Quantity q);
const char* sweep_method_name(SweepMethod m);
Quantity parse_quantity(const std::string& s);
SweepMethod parse_sweep_method(const std::string& s);

// Grid text: a single value, a comma list, or "start:stop:count[:log]".
struct GridSpec {
  std::vector<double> values;
  std::string source;
};

GridSpec parse_grid(const std::string& text);

struct SweepConfig {
  Quantity quantity = Quantity::chi_field;
  std::vector<SweepMethod> methods{SweepMethod::exact};
  std::vector<int> n_values{50};
  double gamma = 1.0;
  GridSpec g_grid;
  GridSpec beta_grid;
  // Fidelity reference state; NaN means "same as the row" for that
  // parameter, so setting exactly one of them selects the field- or
  // temperature-difference pairing.
  double g_ref = 0.0;
  double beta_ref = 0.0;
  bool has_g_ref = false;
  bool has_beta_ref = false;
  double step = 0.0;  // stencil step; 0 selects the documented defaults
  std::string out_path;  // empty = stdout
  OutputFormat format = OutputFormat::csv;
  int workers = 0;  // 0 = all hardware threads; 1 = serial reference path
  int oracle_cap = 12;
};

// Throws Error(domain, ...) naming the offending field.
void validate(const SweepConfig& config);

struct SweepRow {
  int n = 0;
  double gamma = 0.0;
  double g = 0.0;
  double beta = 0.0;
  SweepMethod method = SweepMethod::exact;
  Quantity quantity = Quantity::chi_field;
  double value = 0.0;   // NaN when `error` is set; ln Z for quantity z
  double step = 0.0;    // stencil step used; 0 for stencil-free quantities
  std::string error;    // error-code name, empty on success
};

// Evaluates one record per (N, g, beta, method) grid point, in that
// deterministic order. Points are independent; workers > 1 evaluates them
// in an OpenMP loop, workers == 1 takes the serial reference path. Rows
// are identical either way. Per-row numeric errors are recorded in the
// error column and the run continues.
std::vector<SweepRow> run_sweep(const SweepConfig& config);

void write_csv(std::ostream& os, const SweepConfig& config,
               const std::vector<SweepRow>& rows);
void write_jsonl(std::ostream& os, const SweepConfig& config,
                 const std::vector<SweepRow>& rows);

// Writes to config.out_path (stdout when empty) in config.format.
void write_output(const SweepConfig& config, const std::vector<SweepRow>& rows);

}  // namespace xyfid
