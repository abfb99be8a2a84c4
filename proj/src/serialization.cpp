#include "fockalg/serialization.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace fockalg {

namespace {

using nlohmann::json;

std::vector<double> double_array(const json& j, const char* what) {
  if (!j.is_array()) throw std::invalid_argument(std::string("json: expected an array for ") + what);
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) {
      throw std::invalid_argument(std::string("json: expected numbers in ") + what);
    }
    out.push_back(v.get<double>());
  }
  return out;
}

void check_rebuild(const std::vector<double>& stored, const ConeSeries& rebuilt) {
  const auto& fresh = rebuilt.coeffs();
  if (stored.size() != fresh.size()) {
    throw std::invalid_argument("json: cone coefficient count disagrees with cap");
  }
  for (std::size_t n = 0; n < stored.size(); ++n) {
    const double scale = std::max({std::abs(stored[n]), std::abs(fresh[n]), 1e-300});
    if (std::abs(stored[n] - fresh[n]) > 1e-12 * scale) {
      throw std::invalid_argument("json: stored cone coefficients disagree with the family parameters");
    }
  }
}

}  // namespace

json to_json(const MultiIndex& i) { return json(i.entries()); }

json to_json(const ConeSeries& s) {
  json params = json::object();
  switch (s.family()) {
    case SeriesFamily::tau_p:
      params["tau"] = s.param_tau();
      params["p"] = s.param_p();
      break;
    case SeriesFamily::geometric:
      params["rho"] = s.param_rho();
      break;
    case SeriesFamily::custom:
      break;
  }
  const char* name = s.family() == SeriesFamily::tau_p      ? "tau_p"
                     : s.family() == SeriesFamily::geometric ? "geometric"
                                                             : "custom";
  return json{{"family", name}, {"params", params}, {"cap", s.cap()}, {"coeffs", s.coeffs()}};
}

json to_json(const Spectrum& s) { return json{{"k", s.k_values()}}; }

json to_json(const HVector& v) {
  std::vector<double> re(v.dims()), im(v.dims());
  for (std::size_t j = 0; j < v.dims(); ++j) {
    re[j] = v.alpha[j].real();
    im[j] = v.alpha[j].imag();
  }
  return json{{"re", re}, {"im", im}};
}

json to_json(const FockElement& f) {
  const auto& ctx = *f.context();
  json terms = json::array();
  for (const auto& [idx, a] : f.terms()) {
    terms.push_back(json{{"index", idx.entries()}, {"re", a.real()}, {"im", a.imag()}});
  }
  return json{{"context",
               json{{"spectrum", to_json(ctx.spectrum())},
                    {"cone", to_json(ctx.cone())},
                    {"cap", ctx.cap()},
                    {"dims", ctx.dims()}}},
              {"terms", terms}};
}

MultiIndex multiindex_from_json(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("json: multi-index must be an array");
  std::vector<std::uint32_t> entries;
  entries.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number_unsigned()) {
      throw std::invalid_argument("json: multi-index entries must be nonnegative integers");
    }
    entries.push_back(v.get<std::uint32_t>());
  }
  return MultiIndex(entries);
}

ConeSeries cone_from_json(const json& j) {
  const auto family = j.at("family").get<std::string>();
  const auto cap = j.at("cap").get<std::uint32_t>();
  const auto stored = double_array(j.at("coeffs"), "cone coefficients");
  if (stored.size() != static_cast<std::size_t>(cap) + 1) {
    throw std::invalid_argument("json: cone coefficient count disagrees with cap");
  }
  const auto& params = j.at("params");
  if (family == "tau_p") {
    auto rebuilt = ConeSeries::tau_p(params.at("tau").get<double>(), params.at("p").get<double>(), cap);
    check_rebuild(stored, rebuilt);
    return rebuilt;
  }
  if (family == "geometric") {
    auto rebuilt = ConeSeries::geometric(params.at("rho").get<double>(), cap);
    check_rebuild(stored, rebuilt);
    return rebuilt;
  }
  if (family == "custom") return ConeSeries::custom(stored);
  throw std::invalid_argument("json: unknown cone family \"" + family + "\"");
}

Spectrum spectrum_from_json(const json& j) {
  return Spectrum(double_array(j.at("k"), "spectrum"));
}

HVector hvector_from_json(const json& j) {
  const auto re = double_array(j.at("re"), "point real parts");
  const auto im = double_array(j.at("im"), "point imaginary parts");
  if (re.size() != im.size()) {
    throw std::invalid_argument("json: point real/imaginary lengths differ");
  }
  HVector v = HVector::zero(re.size());
  for (std::size_t k = 0; k < re.size(); ++k) v.alpha[k] = {re[k], im[k]};
  return v;
}

FockElement element_from_json(const json& j) {
  const auto& cj = j.at("context");
  auto ctx = SpaceContext::make(spectrum_from_json(cj.at("spectrum")), cone_from_json(cj.at("cone")),
                                cj.at("dims").get<std::size_t>(), cj.at("cap").get<std::uint32_t>());
  FockElement f(ctx);
  for (const auto& term : j.at("terms")) {
    const auto idx = multiindex_from_json(term.at("index"));
    if (f.coeff(idx) != std::complex<double>(0.0)) {
      throw std::invalid_argument("json: duplicate term index");
    }
    f.set(idx, {term.at("re").get<double>(), term.at("im").get<double>()});
  }
  return f;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return json::parse(in);
}

void save_json_file(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("failed writing " + path);
}

}  // namespace fockalg
