#pragma once

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fockalg/fock.hpp"
#include "fockalg/gaussian.hpp"

namespace fockalg {

/// Everything a verification run needs. Loaded from JSON with flag
/// overrides on top; every field has a documented default so a missing
/// config file still yields the reference setup.
struct RunConfig {
  std::size_t dims = 3;
  std::uint32_t cap = 8;
  Spectrum spectrum{{0.8, 0.5, 0.3}};
  ConeSeries cone = ConeSeries::tau_p(1.0, 0.5, 8);
  std::size_t mc_samples = 1'000'000;
  std::uint64_t base_seed = 1;
  std::vector<std::uint64_t> seeds;  // default: base_seed .. base_seed + 29
  double sigma_band = 4.0;
  double relative_tol = 1e-10;
  std::string subconv_expect = "essential";  // or "non-essential"
  std::vector<HVector> points;               // optional pinned kernel checks
  std::string element_path;                  // eval inputs
  std::string point_path;
  std::string suite = "all";
  std::string out_dir = "fockalg_reports";

  std::vector<std::uint64_t> seed_list() const;
};

RunConfig default_run_config();
/// Default spectrum for a given dimension: (0.8, 0.5, 0.3, 0.15, 0.075, ...).
Spectrum default_spectrum(std::size_t dims);
RunConfig config_from_json(const nlohmann::json& j);

ContextPtr make_context(const RunConfig& cfg);
/// Same config at a different cap; family series are rebuilt from their
/// parameters, custom series must already cover the cap.
ContextPtr make_context(const RunConfig& cfg, std::uint32_t cap);

/// Deterministic pseudo-random element: `term_budget` coefficients (0 =
/// dense) on indices of degree <= max_deg, gaussian in the
/// normalized-monomial scale.
FockElement random_element(const ContextPtr& ctx, std::uint32_t max_deg,
                           std::size_t term_budget, std::uint64_t seed, std::uint64_t stream);

/// Nonnegative coefficients on powers of a single variable (normalized
/// scale): products of such pairs add constructively, which is what makes
/// unbounded multiplication visible in non-essential control families.
FockElement aligned_univariate(const ContextPtr& ctx, std::size_t var, std::uint32_t max_deg,
                               std::uint64_t seed, std::uint64_t stream);

/// One verification check. For Monte Carlo rows pass means
/// |estimate - analytic| <= sigma_band * std_error; for deterministic rows
/// std_error carries the tolerance and m_samples is 0. Complex estimates
/// report their modulus in `estimate`; the pass decision always uses the
/// full complex deviation.
struct CheckRow {
  std::string quantity;
  double analytic = 0.0;
  double estimate = 0.0;
  double std_error = 0.0;
  std::uint64_t m_samples = 0;
  std::uint64_t seed = 0;
  bool pass = false;
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckRow> rows;
  bool all_pass() const;
};

// Granular row generators. Suites are assembled from these; the acceptance
// gate calls them directly with its pinned configurations.
std::vector<CheckRow> moments_rows(const RunConfig& cfg);
std::vector<CheckRow> kernel_identity_rows(const RunConfig& cfg, std::size_t pairs, double max_cm);
std::vector<CheckRow> reproducing_rows(const RunConfig& cfg, std::size_t count);
std::vector<CheckRow> psd_rows(const RunConfig& cfg, std::size_t points);
std::vector<CheckRow> unitary_invariance_rows(const RunConfig& cfg, std::size_t count);
std::vector<CheckRow> hermitian_rows(const RunConfig& cfg, std::size_t count);
std::vector<CheckRow> pinned_point_rows(const RunConfig& cfg);
std::vector<CheckRow> algebra_bound_rows(const RunConfig& cfg, std::size_t pairs);
std::vector<CheckRow> algebra_growth_rows(const RunConfig& cfg);
std::vector<CheckRow> ccr_defect_rows(const RunConfig& cfg, std::size_t count);
std::vector<CheckRow> adjointness_rows(const RunConfig& cfg);
std::vector<CheckRow> gl_rows();
std::vector<CheckRow> coherent_rows(const RunConfig& cfg);
std::vector<CheckRow> isometry_rows(const RunConfig& cfg, std::size_t count);
std::vector<CheckRow> chain_rows(const RunConfig& cfg, std::size_t count);
std::vector<CheckRow> mc_l2_rows(const RunConfig& cfg, std::size_t count);
std::vector<CheckRow> t_apply_rows(const RunConfig& cfg);

const std::vector<std::string>& suite_names();  // moments kernel algebra ccr triple
SuiteReport run_suite(const std::string& name, const RunConfig& cfg);

/// Fixed columns: quantity,analytic,estimate,std_error,M,seed,pass.
/// Byte-identical for identical config and seeds.
void write_csv(const SuiteReport& report, std::ostream& out);
nlohmann::json summary_json(const std::vector<SuiteReport>& reports);

}  // namespace fockalg
