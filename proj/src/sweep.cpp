#include "xyfid/sweep.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "xyfid/fidelity.hpp"
#include "xyfid/finite_diff.hpp"
#include "xyfid/oracle.hpp"
#include "xyfid/partition.hpp"
#include "xyfid/response.hpp"

namespace xyfid {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

const char* quantity_name(Quantity q) {
  switch (q) {
    case Quantity::fidelity: return "fidelity";
    case Quantity::chi_field: return "chi_field";
    case Quantity::xi_thermal: return "xi_thermal";
    case Quantity::cv: return "cv";
    case Quantity::z: return "z";
  }
  return "unknown";
}

const char* sweep_method_name(SweepMethod m) {
  switch (m) {
    case SweepMethod::exact: return "exact";
    case SweepMethod::ppa: return "ppa";
    case SweepMethod::tla: return "tla";
    case SweepMethod::ground: return "ground";
    case SweepMethod::oracle: return "oracle";
  }
  return "unknown";
}

Quantity parse_quantity(const std::string& s) {
  if (s == "fidelity") return Quantity::fidelity;
  if (s == "chi_field") return Quantity::chi_field;
  if (s == "xi_thermal") return Quantity::xi_thermal;
  if (s == "cv") return Quantity::cv;
  if (s == "z") return Quantity::z;
  throw Error(ErrorCode::domain, "unknown quantity '" + s + "'");
}

SweepMethod parse_sweep_method(const std::string& s) {
  if (s == "exact") return SweepMethod::exact;
  if (s == "ppa") return SweepMethod::ppa;
  if (s == "tla") return SweepMethod::tla;
  if (s == "ground") return SweepMethod::ground;
  if (s == "oracle") return SweepMethod::oracle;
  throw Error(ErrorCode::domain, "unknown method '" + s + "'");
}

GridSpec parse_grid(const std::string& text) {
  GridSpec grid;
  grid.source = text;
  if (text.empty()) throw Error(ErrorCode::domain, "empty grid spec");
  if (text.find(':') != std::string::npos) {
    // start:stop:count[:log]
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() < 3 || parts.size() > 4 ||
        (parts.size() == 4 && parts[3] != "log"))
      throw Error(ErrorCode::domain,
                  "grid spec must be start:stop:count[:log], got '" + text + "'");
    double start, stop;
    long count;
    try {
      start = std::stod(parts[0]);
      stop = std::stod(parts[1]);
      count = std::stol(parts[2]);
    } catch (const std::exception&) {
      throw Error(ErrorCode::domain, "malformed grid spec '" + text + "'");
    }
    if (count < 1)
      throw Error(ErrorCode::domain, "grid count must be >= 1");
    const bool logscale = parts.size() == 4;
    if (logscale && !(start > 0.0 && stop > 0.0))
      throw Error(ErrorCode::domain, "log grid requires positive endpoints");
    grid.values.resize(count);
    for (long i = 0; i < count; ++i) {
      const double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
      grid.values[i] = logscale ? start * std::pow(stop / start, t)
                                : start + t * (stop - start);
    }
    return grid;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      grid.values.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw Error(ErrorCode::domain, "malformed grid value '" + item + "'");
    }
  }
  if (grid.values.empty()) throw Error(ErrorCode::domain, "empty grid spec");
  return grid;
}

void validate(const SweepConfig& config) {
  if (config.n_values.empty())
    throw Error(ErrorCode::domain, "n: empty size list");
  for (int n : config.n_values)
    if (n < 2 || n % 2 != 0)
      throw Error(ErrorCode::domain,
                  "n: sizes must be even and >= 2, got " + std::to_string(n));
  if (!(config.gamma >= 0.0 && config.gamma <= 1.0))
    throw Error(ErrorCode::domain, "gamma: must lie in [0, 1]");
  if (config.g_grid.values.empty())
    throw Error(ErrorCode::domain, "g: empty grid");
  if (config.beta_grid.values.empty())
    throw Error(ErrorCode::domain, "beta: empty grid");
  if (config.methods.empty())
    throw Error(ErrorCode::domain, "method: none requested");
  if (config.step < 0.0)
    throw Error(ErrorCode::domain, "step: must be positive when given");
  for (SweepMethod m : config.methods) {
    if (m == SweepMethod::oracle) {
      for (int n : config.n_values)
        if (n > config.oracle_cap)
          throw Error(ErrorCode::domain,
                      "method oracle: N = " + std::to_string(n) +
                          " exceeds the oracle cap " +
                          std::to_string(config.oracle_cap));
    }
    if ((m == SweepMethod::tla || m == SweepMethod::ground) &&
        config.gamma != 1.0)
      throw Error(ErrorCode::domain,
                  "method tla/ground: requires gamma = 1");
  }
  if (config.quantity == Quantity::fidelity && config.has_g_ref &&
      config.has_beta_ref) {
    for (SweepMethod m : config.methods)
      if (m == SweepMethod::tla)
        throw Error(ErrorCode::domain,
                    "method tla: fidelity supports either a field or a "
                    "temperature reference, not both");
  }
}

namespace {

double eval_fidelity(const SweepConfig& cfg, const ChainSpec& chain,
                     double g, double beta, SweepMethod m) {
  const double g_ref = cfg.has_g_ref ? cfg.g_ref : g;
  const double beta_ref = cfg.has_beta_ref ? cfg.beta_ref : beta;
  ChainSpec ref = chain;
  ref.field = g_ref;
  const GibbsPoint a{ref, beta_ref};
  const GibbsPoint b{chain, beta};
  switch (m) {
    case SweepMethod::exact:
      return fidelity_exact(a, b).value;
    case SweepMethod::ppa:
      return fidelity_ppa(a, b);
    case SweepMethod::tla:
      if (cfg.has_beta_ref)
        return fidelity_tla_thermal(beta_ref, beta - beta_ref, ref);
      return fidelity_tla_field(beta, ref, g - g_ref);
    case SweepMethod::oracle:
      return oracle::gibbs_and_fidelity(a, b, cfg.oracle_cap);
    case SweepMethod::ground:
      throw Error(ErrorCode::domain,
                  "method ground applies to chi_field only");
  }
  throw Error(ErrorCode::domain, "unreachable");
}

double eval_chi_field(const SweepConfig& cfg, const GibbsPoint& point,
                      SweepMethod m, double* step_used) {
  const StencilSpec spec{cfg.step > 0.0 ? cfg.step : default_field_step()};
  switch (m) {
    case SweepMethod::exact:
    case SweepMethod::ppa:
    case SweepMethod::tla: {
      const Method mm = m == SweepMethod::exact  ? Method::exact
                        : m == SweepMethod::ppa ? Method::ppa
                                                : Method::tla;
      *step_used = spec.step;
      return chi_field(point, mm, spec).value;
    }
    case SweepMethod::ground:
      return chi_ground(point.chain, Parity::even);
    case SweepMethod::oracle: {
      *step_used = spec.step;
      const auto f = [&](double d) {
        ChainSpec shifted = point.chain;
        shifted.field += d;
        return oracle::gibbs_and_fidelity(point, GibbsPoint{shifted, point.beta},
                                          cfg.oracle_cap);
      };
      return -second_derivative(f, 0.0, spec);
    }
  }
  throw Error(ErrorCode::domain, "unreachable");
}

double eval_xi_or_cv(const SweepConfig& cfg, const GibbsPoint& point,
                     SweepMethod m, bool want_cv, double* step_used) {
  if (m == SweepMethod::oracle) {
    const double xi = oracle::sector_observables(point, cfg.oracle_cap).cv /
                      (4.0 * point.beta * point.beta);
    return want_cv ? 4.0 * point.beta * point.beta * xi : xi;
  }
  if (m == SweepMethod::ground)
    throw Error(ErrorCode::domain, "method ground applies to chi_field only");
  const Method mm = m == SweepMethod::exact  ? Method::exact
                    : m == SweepMethod::ppa ? Method::ppa
                                            : Method::tla;
  const StencilSpec spec{cfg.step > 0.0 ? cfg.step
                                        : default_beta_step(point.beta)};
  *step_used = spec.step;
  const double xi = xi_thermal(point, mm, spec);
  return want_cv ? 4.0 * point.beta * point.beta * xi : xi;
}

double eval_log_z(const SweepConfig& cfg, const GibbsPoint& point,
                  SweepMethod m) {
  switch (m) {
    case SweepMethod::exact:
      return z_full(point).log_mag;
    case SweepMethod::ppa:
      return z_ppa(point).log_mag;
    case SweepMethod::tla:
      return z_tla(point).log_mag;
    case SweepMethod::oracle: {
      const auto obs = oracle::sector_observables(point, cfg.oracle_cap);
      return std::log(obs.z_plus + obs.z_minus);
    }
    case SweepMethod::ground:
      throw Error(ErrorCode::domain, "method ground applies to chi_field only");
  }
  throw Error(ErrorCode::domain, "unreachable");
}

void eval_row(const SweepConfig& cfg, SweepRow& row) {
  const ChainSpec chain{row.n, cfg.gamma, row.g};
  const GibbsPoint point{chain, row.beta};
  try {
    double step = 0.0;
    switch (cfg.quantity) {
      case Quantity::fidelity:
        row.value = eval_fidelity(cfg, chain, row.g, row.beta, row.method);
        break;
      case Quantity::chi_field:
        row.value = eval_chi_field(cfg, point, row.method, &step);
        break;
      case Quantity::xi_thermal:
        row.value = eval_xi_or_cv(cfg, point, row.method, false, &step);
        break;
      case Quantity::cv:
        row.value = eval_xi_or_cv(cfg, point, row.method, true, &step);
        break;
      case Quantity::z:
        row.value = eval_log_z(cfg, point, row.method);
        break;
    }
    row.step = step;
  } catch (const Error& err) {
    row.value = kNaN;
    row.error = error_code_name(err.code());
  } catch (const std::exception&) {
    row.value = kNaN;
    row.error = "evaluation";
  }
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepConfig& config) {
  validate(config);
  std::vector<SweepRow> rows;
  // Deterministic row order: N, then g, then beta, then method.
  for (int n : config.n_values)
    for (double g : config.g_grid.values)
      for (double beta : config.beta_grid.values)
        for (SweepMethod m : config.methods) {
          SweepRow row;
          row.n = n;
          row.gamma = config.gamma;
          row.g = g;
          row.beta = beta;
          row.method = m;
          row.quantity = config.quantity;
          rows.push_back(row);
        }

  const auto total = static_cast<std::ptrdiff_t>(rows.size());
  if (config.workers == 1) {
    // Serial reference path; rows must match the parallel path bit for bit.
    for (std::ptrdiff_t i = 0; i < total; ++i) eval_row(config, rows[i]);
  } else {
    const int threads =
        config.workers > 0 ? config.workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (std::ptrdiff_t i = 0; i < total; ++i) eval_row(config, rows[i]);
  }
  return rows;
}

namespace {

std::string format_value(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_metadata(std::ostream& os, const SweepConfig& config,
                    const char* prefix) {
  os << prefix << " xyfid sweep v1.0\n";
  os << prefix << " quantity=" << quantity_name(config.quantity)
     << " gamma=" << format_value(config.gamma);
  os << " n=";
  for (size_t i = 0; i < config.n_values.size(); ++i)
    os << (i ? "," : "") << config.n_values[i];
  os << " g=[" << config.g_grid.source << "]"
     << " beta=[" << config.beta_grid.source << "]";
  if (config.has_g_ref) os << " g_ref=" << format_value(config.g_ref);
  if (config.has_beta_ref) os << " beta_ref=" << format_value(config.beta_ref);
  os << "\n";
  os << prefix << " methods=";
  for (size_t i = 0; i < config.methods.size(); ++i)
    os << (i ? "," : "") << sweep_method_name(config.methods[i]);
  os << " step=" << (config.step > 0.0 ? format_value(config.step) : "default")
     << " workers=" << config.workers << "\n";
  os << prefix << " note: quantity z reports ln Z\n";
}

}  // namespace

void write_csv(std::ostream& os, const SweepConfig& config,
               const std::vector<SweepRow>& rows) {
  write_metadata(os, config, "#");
  os << "N,gamma,g,beta,method,quantity,value,step,error\n";
  for (const SweepRow& r : rows) {
    os << r.n << ',' << format_value(r.gamma) << ',' << format_value(r.g)
       << ',' << format_value(r.beta) << ',' << sweep_method_name(r.method)
       << ',' << quantity_name(r.quantity) << ',' << format_value(r.value)
       << ',' << format_value(r.step) << ',' << r.error << '\n';
  }
}

void write_jsonl(std::ostream& os, const SweepConfig& config,
                 const std::vector<SweepRow>& rows) {
  (void)config;
  for (const SweepRow& r : rows) {
    nlohmann::json j;
    j["N"] = r.n;
    j["gamma"] = r.gamma;
    j["g"] = r.g;
    j["beta"] = r.beta;
    j["method"] = sweep_method_name(r.method);
    j["quantity"] = quantity_name(r.quantity);
    if (std::isnan(r.value))
      j["value"] = nullptr;
    else
      j["value"] = r.value;
    j["step"] = r.step;
    j["error"] = r.error.empty() ? nlohmann::json() : nlohmann::json(r.error);
    os << j.dump() << '\n';
  }
}

void write_output(const SweepConfig& config, const std::vector<SweepRow>& rows) {
  const auto write = [&](std::ostream& os) {
    if (config.format == OutputFormat::csv)
      write_csv(os, config, rows);
    else
      write_jsonl(os, config, rows);
  };
  if (config.out_path.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream ofs(config.out_path);
  if (!ofs)
    throw Error(ErrorCode::evaluation,
                "cannot open output file '" + config.out_path + "'");
  write(ofs);
}

}  // namespace xyfid
