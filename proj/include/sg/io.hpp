#pragma once

#include "sg/asymptotics.hpp"
#include "sg/dressing.hpp"
#include "sg/radiation.hpp"
#include "sg/spectral.hpp"
#include "sg/validation.hpp"

#include <json.hpp>

#include <string>

namespace sg {

using json = nlohmann::ordered_json;

// Malformed input. The message names the line (syntax errors) or the field path (shape errors).
struct ParseError : UsageError {
  using UsageError::UsageError;
};

json parse_json(const std::string& text, const std::string& source = "<input>");
json load_json_file(const std::string& path);

PoleSet poles_from_json(const json& j);
json to_json(const PoleSet& poles);

BoundaryData boundary_from_json(const json& j);
json to_json(const BoundaryData& data);

RadiationProfile radiation_from_json(const json& j);
json to_json(const RadiationProfile& r);

json to_json(const SpectralTable& table);
json to_json(const AsymptoticReport& rep);
json to_json(const ValidationReport& rep);

}  // namespace sg
