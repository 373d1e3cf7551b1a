#include "splitlv/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace splitlv {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& context, const std::string& what) {
  throw ConfigError("config error at " + context + ": " + what);
}

void check_keys(const json& j, const std::string& context,
                const std::set<std::string>& allowed) {
  if (!j.is_object()) fail(context, "expected an object");
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key())) {
      fail(context, "unknown key \"" + item.key() + "\"");
    }
  }
}

const json& get_field(const json& j, const std::string& context,
                      const std::string& key) {
  const auto it = j.find(key);
  if (it == j.end()) fail(context, "missing key \"" + key + "\"");
  return *it;
}

double get_double(const json& j, const std::string& context) {
  if (!j.is_number()) fail(context, "expected a number");
  return j.get<double>();
}

std::int64_t get_int(const json& j, const std::string& context) {
  if (!j.is_number_integer()) fail(context, "expected an integer");
  return j.get<std::int64_t>();
}

std::uint64_t get_seed(const json& j, const std::string& context) {
  if (!j.is_number_integer() || j.is_number_float()) {
    fail(context, "expected an integer");
  }
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  const auto v = j.get<std::int64_t>();
  if (v < 0) fail(context, "seed must be nonnegative");
  return static_cast<std::uint64_t>(v);
}

Eigen::VectorXd get_vector(const json& j, const std::string& context) {
  if (!j.is_array()) fail(context, "expected an array of numbers");
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] =
        get_double(j[i], context + "[" + std::to_string(i) + "]");
  }
  return v;
}

Eigen::MatrixXd get_matrix(const json& j, const std::string& context) {
  if (!j.is_array() || j.empty()) fail(context, "expected an array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  Eigen::MatrixXd m(j.size(), cols);
  for (std::size_t r = 0; r < j.size(); ++r) {
    const std::string row_ctx = context + "[" + std::to_string(r) + "]";
    if (!j[r].is_array() || j[r].size() != cols) {
      fail(row_ctx, "rows must be equal-length arrays");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          get_double(j[r][c], row_ctx + "[" + std::to_string(c) + "]");
    }
  }
  return m;
}

ModelParams parse_model(const json& j) {
  check_keys(j, "model",
             {"d", "m", "gamma1", "gamma2", "eta1", "eta2", "sigma1",
              "sigma2"});
  ModelParams p;
  p.d = static_cast<Eigen::Index>(get_int(get_field(j, "model", "d"), "model.d"));
  p.m = static_cast<Eigen::Index>(get_int(get_field(j, "model", "m"), "model.m"));
  p.gamma1 = get_matrix(get_field(j, "model", "gamma1"), "model.gamma1");
  p.gamma2 = get_matrix(get_field(j, "model", "gamma2"), "model.gamma2");
  p.eta1 = get_vector(get_field(j, "model", "eta1"), "model.eta1");
  p.eta2 = get_vector(get_field(j, "model", "eta2"), "model.eta2");
  p.sigma1 = get_matrix(get_field(j, "model", "sigma1"), "model.sigma1");
  p.sigma2 = get_matrix(get_field(j, "model", "sigma2"), "model.sigma2");
  return p;
}

State parse_state(const json& j, const std::string& context) {
  check_keys(j, context, {"x", "y"});
  State z;
  z.x = get_vector(get_field(j, context, "x"), context + ".x");
  z.y = get_vector(get_field(j, context, "y"), context + ".y");
  return z;
}

PhaseAreaConfig parse_phase_area(const json& j) {
  check_keys(j, "phase_area",
             {"starts", "horizon", "step_exponent", "reference_exponent"});
  PhaseAreaConfig pa;
  const json& starts = get_field(j, "phase_area", "starts");
  if (!starts.is_array() || starts.size() != 3) {
    fail("phase_area.starts", "expected exactly 3 points");
  }
  for (std::size_t c = 0; c < 3; ++c) {
    const std::string ctx = "phase_area.starts[" + std::to_string(c) + "]";
    const Eigen::VectorXd point = get_vector(starts[c], ctx);
    if (point.size() != 2) fail(ctx, "expected a 2-component point");
    pa.starts[c].x = point.head(1);
    pa.starts[c].y = point.tail(1);
    if (!pa.starts[c].strictly_positive()) {
      fail(ctx, "start point must be strictly positive");
    }
  }
  pa.horizon =
      get_double(get_field(j, "phase_area", "horizon"), "phase_area.horizon");
  pa.step_exponent =
      static_cast<int>(get_int(get_field(j, "phase_area", "step_exponent"),
                               "phase_area.step_exponent"));
  pa.reference_exponent = static_cast<int>(
      get_int(get_field(j, "phase_area", "reference_exponent"),
              "phase_area.reference_exponent"));
  if (!(pa.horizon > 0.0) || !std::isfinite(pa.horizon)) {
    fail("phase_area.horizon", "must be positive and finite");
  }
  if (pa.step_exponent < 1) fail("phase_area.step_exponent", "must be >= 1");
  if (pa.reference_exponent < pa.step_exponent) {
    fail("phase_area.reference_exponent",
         "must be >= phase_area.step_exponent");
  }
  return pa;
}

}  // namespace

double ExperimentConfig::step_size(int exponent) const {
  return std::ldexp(horizon, -exponent);
}

std::vector<double> ExperimentConfig::ladder() const {
  std::vector<double> steps;
  steps.reserve(step_exponents.size());
  for (const int e : step_exponents) steps.push_back(step_size(e));
  return steps;
}

double ExperimentConfig::reference_h() const {
  return step_size(reference_exponent);
}

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(j, "config",
             {"schema_version", "model", "initial_state", "horizon",
              "schemes", "step_exponents", "reference_exponent", "n_paths",
              "master_seed", "moment_order", "phase_area", "output_dir"});

  ExperimentConfig cfg;
  cfg.schema_version = static_cast<int>(get_int(
      get_field(j, "config", "schema_version"), "schema_version"));
  if (cfg.schema_version != 1) {
    fail("schema_version", "unsupported version " +
                               std::to_string(cfg.schema_version) +
                               " (this build understands 1)");
  }

  cfg.model = parse_model(get_field(j, "config", "model"));
  ensure_valid(cfg.model);

  cfg.initial_state =
      parse_state(get_field(j, "config", "initial_state"), "initial_state");
  if (cfg.initial_state.x.size() != cfg.model.d ||
      cfg.initial_state.y.size() != cfg.model.d) {
    fail("initial_state", "x and y must each have d components");
  }
  if (!cfg.initial_state.strictly_positive()) {
    fail("initial_state", "must be strictly positive");
  }

  cfg.horizon = get_double(get_field(j, "config", "horizon"), "horizon");
  if (!(cfg.horizon > 0.0) || !std::isfinite(cfg.horizon)) {
    fail("horizon", "must be positive and finite");
  }

  const json& schemes = get_field(j, "config", "schemes");
  if (!schemes.is_array() || schemes.empty()) {
    fail("schemes", "expected a nonempty array of scheme names");
  }
  for (const auto& name : schemes) {
    if (!name.is_string()) fail("schemes", "scheme names must be strings");
    const auto scheme = parse_scheme(name.get<std::string>());
    if (!scheme) {
      fail("schemes", "unknown scheme \"" + name.get<std::string>() +
                          "\" (expected lie_trotter, strang or "
                          "euler_maruyama)");
    }
    cfg.schemes.push_back(*scheme);
  }

  const json& ladder = get_field(j, "config", "step_exponents");
  if (!ladder.is_array() || ladder.empty()) {
    fail("step_exponents", "expected a nonempty array of integers");
  }
  int previous = 0;
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    const std::string ctx = "step_exponents[" + std::to_string(i) + "]";
    const int e = static_cast<int>(get_int(ladder[i], ctx));
    if (e < 1 || e > 40) fail(ctx, "must be in [1, 40]");
    if (e <= previous) fail(ctx, "exponents must be strictly increasing");
    cfg.step_exponents.push_back(e);
    previous = e;
  }

  cfg.reference_exponent = static_cast<int>(get_int(
      get_field(j, "config", "reference_exponent"), "reference_exponent"));
  if (cfg.reference_exponent < cfg.step_exponents.back() ||
      cfg.reference_exponent > 40) {
    fail("reference_exponent",
         "must be >= the largest step exponent and <= 40");
  }

  cfg.n_paths = static_cast<int>(
      get_int(get_field(j, "config", "n_paths"), "n_paths"));
  if (cfg.n_paths < 1) fail("n_paths", "must be >= 1");

  cfg.master_seed =
      get_seed(get_field(j, "config", "master_seed"), "master_seed");

  if (j.contains("moment_order")) {
    cfg.moment_order = get_double(j["moment_order"], "moment_order");
    if (!(cfg.moment_order >= 1.0)) fail("moment_order", "must be >= 1");
  }
  if (j.contains("phase_area")) {
    cfg.phase_area = parse_phase_area(j["phase_area"]);
  }
  if (j.contains("output_dir")) {
    if (!j["output_dir"].is_string()) fail("output_dir", "expected a string");
    cfg.output_dir = j["output_dir"].get<std::string>();
    if (cfg.output_dir.empty()) fail("output_dir", "must not be empty");
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("unreadable config: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (!in && !in.eof()) throw ConfigError("unreadable config: " + path);
  return parse_config(buffer.str());
}

}  // namespace splitlv
