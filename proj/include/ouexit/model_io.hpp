#pragma once

// JSON (de)serialization of LevyModel. Schema:
// {
//   "beta": 1.0, "drift": 0.0, "volatility": 0.0,
//   "pos_jumps": {"type": "exp", "rate": 1.0} | {"type": "gamma", "shape": 2.0},
//   "pos_intensity": 1.0,
//   "neg_jumps": null | {"type": "exp", "rate": 1.0} | {"type": "const", "size": 0.5},
//   "neg_intensity": 0.0
// }
// drift, volatility, neg_jumps and neg_intensity are optional. Errors name
// the offending field.

#include <string>

#include <json.hpp>

#include "ouexit/levy_model.hpp"

namespace ouexit {

LevyModel model_from_json(const nlohmann::json& j);
nlohmann::json model_to_json(const LevyModel& model);

LevyModel load_model_file(const std::string& path);

}  // namespace ouexit
