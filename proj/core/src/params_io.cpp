#include <fstream>
#include <sstream>

#include "json.hpp"
#include "kaon/params.hpp"

namespace kaon {

namespace {

double required_number(const nlohmann::json& doc, const char* key) {
  const auto it = doc.find(key);
  if (it == doc.end()) {
    throw std::invalid_argument(std::string("parameter file is missing key '") + key + "'");
  }
  if (!it->is_number()) {
    throw std::invalid_argument(std::string("parameter '") + key + "' must be a number");
  }
  return it->get<double>();
}

}  // namespace

ParamSource parse_params_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("parameter file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw std::invalid_argument("parameter file must hold a flat JSON object");
  }

  PhysicalParams params(required_number(doc, "gamma_s"), required_number(doc, "gamma_l"),
                        required_number(doc, "m_s"), required_number(doc, "m_l"),
                        {required_number(doc, "epsilon_re"), required_number(doc, "epsilon_im")},
                        required_number(doc, "lambda"));

  double rest_mass = 0.5 * (params.m_s() + params.m_l());
  if (doc.contains("rest_mass")) {
    rest_mass = required_number(doc, "rest_mass");
    if (!(rest_mass > 0.0)) {
      throw std::invalid_argument("rest_mass must be positive");
    }
  }
  std::string name = "file";
  if (auto it = doc.find("name"); it != doc.end() && it->is_string()) {
    name = it->get<std::string>();
  }
  return {std::move(name), params, rest_mass};
}

ParamSource load_params_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open parameter file " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_params_json(buffer.str());
}

std::string params_to_json(const ParamSource& source) {
  const PhysicalParams& p = source.params;
  nlohmann::ordered_json doc;
  doc["name"] = source.name;
  doc["gamma_s"] = p.gamma_s();
  doc["gamma_l"] = p.gamma_l();
  doc["m_s"] = p.m_s();
  doc["m_l"] = p.m_l();
  doc["epsilon_re"] = p.epsilon().real();
  doc["epsilon_im"] = p.epsilon().imag();
  doc["lambda"] = p.lambda();
  doc["rest_mass"] = source.rest_mass;
  return doc.dump(2);
}

}  // namespace kaon
