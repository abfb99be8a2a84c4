#pragma once

#include <nlohmann/json_fwd.hpp>

#include <string>

#include "fockalg/fock.hpp"

// JSON formats (stable, round-trip exact for doubles):
//   MultiIndex   [1, 0, 2]                       canonical, trailing zeros trimmed
//   ConeSeries   {"family", "params", "cap", "coeffs"}
//   Spectrum     {"k": [..]}
//   HVector      {"re": [..], "im": [..]}
//   FockElement  {"context": {"spectrum", "cone", "cap", "dims"},
//                 "terms": [{"index": [..], "re": x, "im": y}, ..]}  grlex order
// Coefficient and coordinate arrays round-trip bit-exactly. Cone readers
// rebuild family series from the stored parameters and reject files whose
// stored coefficient array disagrees with the rebuild; custom series take
// the stored array verbatim.

namespace fockalg {

nlohmann::json to_json(const MultiIndex& i);
nlohmann::json to_json(const ConeSeries& s);
nlohmann::json to_json(const Spectrum& s);
nlohmann::json to_json(const HVector& v);
nlohmann::json to_json(const FockElement& f);

MultiIndex multiindex_from_json(const nlohmann::json& j);
ConeSeries cone_from_json(const nlohmann::json& j);
Spectrum spectrum_from_json(const nlohmann::json& j);
HVector hvector_from_json(const nlohmann::json& j);
FockElement element_from_json(const nlohmann::json& j);

nlohmann::json load_json_file(const std::string& path);
void save_json_file(const nlohmann::json& j, const std::string& path);

}  // namespace fockalg
