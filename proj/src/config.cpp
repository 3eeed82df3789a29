#include "dihedral/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace dihedral {

using nlohmann::json;

namespace {

template <typename T>
T value_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InvalidSpec(std::string("config key '") + key + "': " + e.what());
  }
}

}  // namespace

Configuration parse_configuration(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InvalidSpec(std::string("malformed configuration JSON: ") + e.what());
  }
  if (!j.is_object()) throw InvalidSpec("configuration must be a JSON object");
  if (!j.contains("family")) throw InvalidSpec("configuration is missing 'family'");

  const Family family = family_from_string(value_or<std::string>(j, "family", ""));
  const int default_n = family == Family::ellipse ? 2 : 1;
  ObstacleSpec obstacle(family, value_or<int>(j, "n", default_n),
                        value_or<double>(j, "circumradius", 0.0),
                        value_or<double>(j, "epsilon", 0.0));
  Placement p;
  p.d = value_or<double>(j, "d", p.d);
  p.t = value_or<double>(j, "t", p.t);
  p.lambda = value_or<double>(j, "lambda", p.lambda);
  p.r1 = value_or<double>(j, "r1", p.r1);
  p.M = value_or<double>(j, "M", p.M);
  if (!(p.d >= 0.0)) throw InvalidSpec("d must be non-negative");
  if (!(p.lambda > 0.0)) throw InvalidSpec("lambda must be positive");
  if (!(p.r1 > 0.0)) throw InvalidSpec("r1 must be positive");
  return {obstacle, p};
}

Configuration load_configuration(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidSpec("cannot open configuration file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_configuration(buf.str());
}

std::string to_json(const Configuration& c) {
  nlohmann::ordered_json j;
  j["family"] = std::string(to_string(c.obstacle.family()));
  j["n"] = c.obstacle.order();
  j["circumradius"] = c.obstacle.circumradius();
  j["epsilon"] = c.obstacle.epsilon();
  j["d"] = c.placement.d;
  j["t"] = c.placement.t;
  j["lambda"] = c.placement.lambda;
  j["r1"] = c.placement.r1;
  j["M"] = c.placement.M;
  return j.dump();
}

}  // namespace dihedral
