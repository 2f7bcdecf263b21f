#include "sntf/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "sntf/errors.hpp"
#include "sntf/rng.hpp"
#include "sntf/tprod.hpp"

namespace sntf {

Instance generate_instance(int n1, int n2, int n3, int r, double s, double b,
                           std::uint64_t seed) {
  if (!(s > 0.0 && s <= 1.0)) {
    throw NumericError("generate_instance: sparsity s must be in (0, 1], got " +
                       std::to_string(s));
  }
  if (r < 1 || r > std::min(n1, n2)) {
    throw ShapeError("generate_instance: need 1 <= r <= min(n1,n2)");
  }
  Instance inst;
  inst.a = Tensor3(n1, r, n3);
  {
    double* p = inst.a.data();
    const std::ptrdiff_t n = std::ptrdiff_t(inst.a.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t e = 0; e < n; ++e) {
      rng::EntryRng g(seed, rng::Stream::GenA, std::uint64_t(e));
      p[e] = g.uniform();
    }
  }

  // B*: exactly floor(s * r * n2 * n3) nonzeros at distinct positions drawn
  // by a partial Fisher-Yates shuffle of all positions.
  inst.b = Tensor3(r, n2, n3);
  const std::size_t total = inst.b.size();
  const std::size_t nnz = std::size_t(std::floor(s * double(total)));
  std::vector<std::size_t> perm(total);
  for (std::size_t t = 0; t < total; ++t) perm[t] = t;
  rng::EntryRng shuffler(seed, rng::Stream::GenB, 0);
  for (std::size_t t = 0; t < nnz; ++t) {
    const std::size_t pick = t + std::size_t(shuffler.uniform() * double(total - t));
    std::swap(perm[t], perm[std::min(pick, total - 1)]);
  }
  for (std::size_t t = 0; t < nnz; ++t) {
    rng::EntryRng g(seed, rng::Stream::GenB, 1 + perm[t]);
    inst.b.data()[perm[t]] = b * g.uniform();
  }

  inst.x = tprod(inst.a, inst.b);
  // The product of nonnegative factors is nonnegative; sweep away FFT dust so
  // Poisson synthesis sees exact zeros.
  {
    double* p = inst.x.data();
    const std::ptrdiff_t n = std::ptrdiff_t(inst.x.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t e = 0; e < n; ++e) {
      if (p[e] < 0.0) p[e] = (p[e] > -1e-9) ? 0.0 : p[e];
    }
  }
  require_finite(inst.x, "generated instance");
  inst.c = 2.0 * linf_norm(inst.x);
  return inst;
}

void ExperimentSpec::validate() const {
  const int axes = int(!sr_list.empty()) + int(!r_list.empty()) + int(!n_list.empty());
  if (axes != 1) {
    throw NumericError("ExperimentSpec: exactly one of sr_list/r_list/n_list must be set");
  }
  if (seeds.empty()) throw NumericError("ExperimentSpec: seeds must be nonempty");
  if (!(s > 0.0 && s <= 1.0)) throw NumericError("ExperimentSpec: s must be in (0, 1]");
  if (!(b > 0.0)) throw NumericError("ExperimentSpec: b must be positive");
  if (!(sr > 0.0 && sr <= 1.0)) throw NumericError("ExperimentSpec: sr must be in (0, 1]");
  if (n1 < 2 || n2 < 2 || n3 < 1) throw NumericError("ExperimentSpec: invalid dimensions");
  if (r_true < 1) throw NumericError("ExperimentSpec: r_true must be >= 1");
}

namespace {

SweepRow run_one(const ExperimentSpec& spec, int n1, int n2, int n3, int r, double sr,
                 double axis_value, std::uint64_t seed, std::uint64_t mask_salt) {
  SweepRow row;
  row.axis_value = axis_value;
  row.seed = seed;
  try {
    const Instance inst = generate_instance(n1, n2, n3, r, spec.s, spec.b, seed);
    const auto mask =
        sample_mask(n1, n2, n3, sr, rng::splitmix64(seed ^ (mask_salt * 0x9E3779B97F4A7C15ull)));
    const ObservationSet obs =
        synthesize(inst.x, mask, spec.noise, rng::splitmix64(seed + mask_salt));

    SolverConfig cfg;
    cfg.r = r;
    cfg.rho = spec.rho > 0.0 ? spec.rho : default_rho(spec.noise);
    cfg.lambda = spec.lambda > 0.0 ? spec.lambda : default_lambda(spec.noise);
    cfg.c = inst.c;
    cfg.b = spec.b;
    cfg.max_iters = spec.max_iters;
    cfg.tol = spec.tol;
    cfg.kkt_every = spec.kkt_every;
    cfg.seed = seed;

    const SolveReport report = solve(obs, cfg);
    row.realized_m = obs.m();
    row.re = relative_error(report.estimate(), inst.x);
    row.iters = report.iters_run;
    row.converged = report.converged;
    row.wall_time_ms = report.wall_time_ms;
  } catch (const std::exception&) {
    row.re = std::numeric_limits<double>::quiet_NaN();
    row.converged = false;
  }
  return row;
}

}  // namespace

std::vector<SweepRow> run_sweep(const ExperimentSpec& spec) {
  spec.validate();
  std::vector<SweepRow> rows;

  if (!spec.sr_list.empty()) {
    for (std::size_t a = 0; a < spec.sr_list.size(); ++a) {
      for (std::uint64_t seed : spec.seeds) {
        rows.push_back(run_one(spec, spec.n1, spec.n2, spec.n3, spec.r_true, spec.sr_list[a],
                               spec.sr_list[a], seed, a + 1));
      }
    }
  } else if (!spec.r_list.empty()) {
    for (std::size_t a = 0; a < spec.r_list.size(); ++a) {
      for (std::uint64_t seed : spec.seeds) {
        rows.push_back(run_one(spec, spec.n1, spec.n2, spec.n3, spec.r_list[a], spec.sr,
                               double(spec.r_list[a]), seed, a + 1));
      }
    }
  } else {
    for (std::size_t a = 0; a < spec.n_list.size(); ++a) {
      const int n = spec.n_list[a];
      for (std::uint64_t seed : spec.seeds) {
        rows.push_back(run_one(spec, n, n, n, spec.r_true, spec.sr, double(n), seed, a + 1));
      }
    }
  }
  return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "axis,seed,m,re,iters,converged,ms\n";
  char buf[160];
  for (const SweepRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%llu,%zu,%.17g,%d,%d,%.3f\n", r.axis_value,
                  static_cast<unsigned long long>(r.seed), r.realized_m, r.re, r.iters,
                  int(r.converged), r.wall_time_ms);
    os << buf;
  }
}

namespace {

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(text);
  while (std::getline(is, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    const auto e = item.find_last_not_of(" \t");
    out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

}  // namespace

ExperimentSpec load_experiment_spec(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open: " + path);
  ExperimentSpec spec;
  double noise_sigma = 0.1, noise_tau = 0.1;
  std::string noise_name = "gaussian";
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      if (line.find_first_not_of(" \t\r") != std::string::npos) {
        throw IoError(path + ":" + std::to_string(lineno) + ": expected `key = value`");
      }
      continue;
    }
    auto trim = [](std::string t) {
      const auto b = t.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      const auto e = t.find_last_not_of(" \t\r");
      return t.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "n1") spec.n1 = std::stoi(value);
      else if (key == "n2") spec.n2 = std::stoi(value);
      else if (key == "n3") spec.n3 = std::stoi(value);
      else if (key == "n") spec.n1 = spec.n2 = spec.n3 = std::stoi(value);
      else if (key == "r") spec.r_true = std::stoi(value);
      else if (key == "s") spec.s = std::stod(value);
      else if (key == "b") spec.b = std::stod(value);
      else if (key == "sr") spec.sr = std::stod(value);
      else if (key == "noise") noise_name = value;
      else if (key == "sigma") noise_sigma = std::stod(value);
      else if (key == "tau") noise_tau = std::stod(value);
      else if (key == "rho") spec.rho = std::stod(value);
      else if (key == "lambda") spec.lambda = std::stod(value);
      else if (key == "max_iters") spec.max_iters = std::stoi(value);
      else if (key == "tol") spec.tol = std::stod(value);
      else if (key == "kkt_every") spec.kkt_every = std::stoi(value);
      else if (key == "output") spec.output_path = value;
      else if (key == "sr_list") {
        for (const auto& v : split_list(value)) spec.sr_list.push_back(std::stod(v));
      } else if (key == "r_list") {
        for (const auto& v : split_list(value)) spec.r_list.push_back(std::stoi(v));
      } else if (key == "n_list") {
        for (const auto& v : split_list(value)) spec.n_list.push_back(std::stoi(v));
      } else if (key == "seeds") {
        for (const auto& v : split_list(value)) spec.seeds.push_back(std::stoull(v));
      } else {
        throw IoError(path + ":" + std::to_string(lineno) + ": unknown key `" + key + "`");
      }
    } catch (const IoError&) {
      throw;
    } catch (const std::exception&) {
      throw IoError(path + ":" + std::to_string(lineno) + ": invalid value for `" + key + "`");
    }
  }
  const double param = noise_name == "gaussian" ? noise_sigma
                       : noise_name == "laplace" ? noise_tau
                                                 : 0.0;
  spec.noise = make_noise(noise_name, param);
  return spec;
}

}  // namespace sntf
