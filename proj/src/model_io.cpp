#include "ouexit/model_io.hpp"

#include <fstream>

namespace ouexit {

namespace {

double get_number(const nlohmann::json& j, const std::string& field, bool required,
                  double fallback = 0) {
  if (!j.contains(field)) {
    if (required) throw DomainError(field + ": missing required field");
    return fallback;
  }
  if (!j.at(field).is_number()) throw DomainError(field + ": must be a number");
  return j.at(field).get<double>();
}

PosJumpLaw pos_law_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string())
    throw DomainError("pos_jumps.type: missing or not a string");
  const std::string type = j.at("type").get<std::string>();
  if (type == "exp") return PosJumpLaw::exponential(get_number(j, "rate", true));
  if (type == "gamma") return PosJumpLaw::gamma(get_number(j, "shape", true));
  throw DomainError("pos_jumps.type: must be \"exp\" or \"gamma\"");
}

NegJumpLaw neg_law_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string())
    throw DomainError("neg_jumps.type: missing or not a string");
  const std::string type = j.at("type").get<std::string>();
  if (type == "exp") return NegJumpLaw::exponential(get_number(j, "rate", true));
  if (type == "const") return NegJumpLaw::constant(get_number(j, "size", true));
  throw DomainError("neg_jumps.type: must be \"exp\" or \"const\"");
}

}  // namespace

LevyModel model_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw DomainError("model: top level must be a JSON object");
  LevyModel m;
  m.beta = get_number(j, "beta", true);
  m.drift = get_number(j, "drift", false, 0.0);
  m.volatility = get_number(j, "volatility", false, 0.0);
  if (!j.contains("pos_jumps")) throw DomainError("pos_jumps: missing required field");
  m.pos_jumps = pos_law_from_json(j.at("pos_jumps"));
  m.pos_intensity = get_number(j, "pos_intensity", true);
  if (j.contains("neg_jumps") && !j.at("neg_jumps").is_null())
    m.neg_jumps = neg_law_from_json(j.at("neg_jumps"));
  m.neg_intensity = get_number(j, "neg_intensity", false, 0.0);
  m.validate();
  return m;
}

nlohmann::json model_to_json(const LevyModel& model) {
  nlohmann::json j;
  j["beta"] = model.beta;
  j["drift"] = model.drift;
  j["volatility"] = model.volatility;
  if (model.pos_jumps.type == PosJumpType::Exponential)
    j["pos_jumps"] = {{"type", "exp"}, {"rate", model.pos_jumps.rate}};
  else
    j["pos_jumps"] = {{"type", "gamma"}, {"shape", model.pos_jumps.shape}};
  j["pos_intensity"] = model.pos_intensity;
  if (model.neg_jumps) {
    if (model.neg_jumps->type == NegJumpType::Exponential)
      j["neg_jumps"] = {{"type", "exp"}, {"rate", model.neg_jumps->rate}};
    else
      j["neg_jumps"] = {{"type", "const"}, {"size", model.neg_jumps->size}};
  } else {
    j["neg_jumps"] = nullptr;
  }
  j["neg_intensity"] = model.neg_intensity;
  return j;
}

LevyModel load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("model file: cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError("model file: invalid JSON (" + std::string(e.what()) + ")");
  }
  return model_from_json(j);
}

}  // namespace ouexit
