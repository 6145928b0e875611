#include "hindsight/experiment/run_config.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <set>

#include "hindsight/common/error.hpp"

namespace hindsight::experiment {

using nlohmann::json;

ExperimentKind parse_experiment(std::string_view name) {
  if (name == "train") return ExperimentKind::train;
  if (name == "overest") return ExperimentKind::overest;
  if (name == "noise_bound") return ExperimentKind::noise_bound;
  if (name == "delta_sweep") return ExperimentKind::delta_sweep;
  throw ContractViolation("unknown experiment '" + std::string(name) + "'");
}

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::train: return "train";
    case ExperimentKind::overest: return "overest";
    case ExperimentKind::noise_bound: return "noise_bound";
    case ExperimentKind::delta_sweep: return "delta_sweep";
  }
  return "train";
}

envs::TabularMDP EnvSpec::build() const {
  if (kind == "chain") return envs::chain_mdp(n, gamma);
  return envs::gridworld_mdp(gamma);
}

namespace {

// Reads one JSON object, remembering which keys were consumed so leftovers
// can be reported.
class ObjectReader {
 public:
  ObjectReader(const json& object, std::string path) : object_(object), path_(std::move(path)) {
    if (!object_.is_object()) throw ConfigError(path_.empty() ? "/" : path_, "expected an object");
  }

  std::string at(std::string_view key) const { return path_ + "/" + std::string(key); }

  const json* find(std::string_view key) {
    const auto it = object_.find(std::string(key));
    if (it == object_.end()) return nullptr;
    seen_.insert(std::string(key));
    return &*it;
  }

  double number(std::string_view key, double fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_number()) throw ConfigError(at(key), "expected a number");
    const double x = v->get<double>();
    if (!std::isfinite(x)) throw ConfigError(at(key), "expected a finite number");
    return x;
  }

  std::uint64_t count(std::string_view key, std::uint64_t fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    return as_count(*v, at(key));
  }

  bool flag(std::string_view key, bool fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_boolean()) throw ConfigError(at(key), "expected true or false");
    return v->get<bool>();
  }

  std::string text(std::string_view key, std::string fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_string()) throw ConfigError(at(key), "expected a string");
    return v->get<std::string>();
  }

  static std::uint64_t as_count(const json& v, const std::string& path) {
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
      throw ConfigError(path, "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }

  void finish() const {
    for (const auto& item : object_.items()) {
      if (!seen_.count(item.key())) throw ConfigError(at(item.key()), "unknown key");
    }
  }

 private:
  const json& object_;
  std::string path_;
  std::set<std::string> seen_;
};

template <typename Parse>
auto parse_enum(ObjectReader& reader, std::string_view key, std::string fallback, Parse parse) {
  const auto name = reader.text(key, std::move(fallback));
  try {
    return parse(name);
  } catch (const ContractViolation& e) {
    throw ConfigError(reader.at(key), e.what());
  }
}

void check(bool ok, const std::string& path, const std::string& message) {
  if (!ok) throw ConfigError(path, message);
}

void parse_env(const json& node, EnvSpec& env) {
  ObjectReader r(node, "/env");
  env.kind = r.text("kind", env.kind);
  check(env.kind == "chain" || env.kind == "gridworld", r.at("kind"),
        "expected \"chain\" or \"gridworld\"");
  env.n = r.count("n", env.n);
  check(env.n >= 2, r.at("n"), "chain needs at least 2 states");
  env.gamma = r.number("gamma", env.gamma);
  check(env.gamma >= 0.0 && env.gamma < 1.0, r.at("gamma"), "gamma must lie in [0, 1)");
  r.finish();
}

void parse_network(const json& node, trainer::NetworkOptions& net) {
  ObjectReader r(node, "/agent/network");
  if (const json* hidden = r.find("hidden")) {
    check(hidden->is_array(), r.at("hidden"), "expected an array of widths");
    net.hidden.clear();
    for (std::size_t i = 0; i < hidden->size(); ++i) {
      const auto path = r.at("hidden") + "/" + std::to_string(i);
      const auto w = ObjectReader::as_count((*hidden)[i], path);
      check(w > 0, path, "width must be positive");
      net.hidden.push_back(w);
    }
  }
  net.activation = parse_enum(r, "activation", std::string(approx::to_string(net.activation)),
                              approx::parse_activation);
  net.bias = r.flag("bias", net.bias);
  r.finish();
}

// Returns true when the agent sets its own discount.
bool parse_agent(const json& node, RunConfig& config) {
  ObjectReader r(node, "/agent");
  auto& a = config.agent;
  a.alpha = r.number("alpha", a.alpha);
  check(a.alpha >= 0.0, r.at("alpha"), "alpha must be non-negative");
  const bool own_gamma = r.find("gamma") != nullptr;
  if (own_gamma) {
    a.gamma = r.number("gamma", a.gamma);
    check(a.gamma >= 0.0 && a.gamma <= 1.0, r.at("gamma"), "gamma must lie in [0, 1]");
  }
  a.delta = r.number("delta", a.delta);
  check(a.delta > -1.0, r.at("delta"), "delta must be greater than -1");
  a.batch_size = r.count("batch_size", a.batch_size);
  check(a.batch_size > 0, r.at("batch_size"), "batch_size must be positive");
  a.buffer_capacity = r.count("buffer_capacity", a.buffer_capacity);
  check(a.buffer_capacity >= a.batch_size, r.at("buffer_capacity"),
        "buffer_capacity must be at least batch_size");
  a.target_sync_period = static_cast<std::int64_t>(r.count("target_sync_period", a.target_sync_period));
  check(a.target_sync_period > 0, r.at("target_sync_period"), "must be positive");
  a.q_ceiling = r.number("q_ceiling", a.q_ceiling);
  check(a.q_ceiling > 0.0, r.at("q_ceiling"), "must be positive");
  if (const json* eps = r.find("epsilon")) {
    ObjectReader e(*eps, "/agent/epsilon");
    a.epsilon.start = e.number("start", a.epsilon.start);
    a.epsilon.end = e.number("end", a.epsilon.end);
    a.epsilon.decay_steps = static_cast<std::int64_t>(e.count("decay_steps", a.epsilon.decay_steps));
    check(a.epsilon.start >= 0.0 && a.epsilon.start <= 1.0, e.at("start"), "must lie in [0, 1]");
    check(a.epsilon.end >= 0.0 && a.epsilon.end <= 1.0, e.at("end"), "must lie in [0, 1]");
    e.finish();
  }
  config.train.max_episode_steps =
      static_cast<std::int64_t>(r.count("max_episode_steps", config.train.max_episode_steps));
  check(config.train.max_episode_steps > 0, r.at("max_episode_steps"), "must be positive");
  if (const json* net = r.find("network")) parse_network(*net, config.train.network);
  r.finish();
  return own_gamma;
}

void parse_variants(const json& node, RunConfig& config) {
  check(node.is_array() && !node.empty(), "/variants", "expected a non-empty array");
  for (std::size_t i = 0; i < node.size(); ++i) {
    ObjectReader r(node[i], "/variants/" + std::to_string(i));
    VariantSpec v;
    v.base = parse_enum(r, "base", "dqn", trainer::parse_base);
    v.hindsight = r.flag("hindsight", v.hindsight);
    v.lr_half = r.flag("lr_half", v.lr_half);
    if (r.find("delta")) {
      v.delta = r.number("delta", 0.0);
      check(*v.delta > -1.0, r.at("delta"), "delta must be greater than -1");
    }
    if (v.base == trainer::BaseAlgorithm::duel) {
      check(!config.train.network.hidden.empty(), r.at("base"),
            "duel needs at least one hidden layer in /agent/network/hidden");
    }
    r.finish();
    config.variants.push_back(v);
  }
}

void parse_overest(const json& node, OverestSpec& spec) {
  ObjectReader r(node, "/overest");
  spec.true_value = parse_enum(r, "true_value", std::string(envs::to_string(spec.true_value)),
                               envs::parse_true_value);
  if (const json* methods = r.find("methods")) {
    check(methods->is_array() && !methods->empty(), r.at("methods"), "expected a non-empty array");
    spec.methods.clear();
    for (std::size_t i = 0; i < methods->size(); ++i) {
      const auto path = r.at("methods") + "/" + std::to_string(i);
      check((*methods)[i].is_string(), path, "expected a method name");
      try {
        spec.methods.push_back(overest::parse_method((*methods)[i].get<std::string>()));
      } catch (const ContractViolation& e) {
        throw ConfigError(path, e.what());
      }
    }
  }
  spec.rounds = r.count("rounds", spec.rounds);
  check(spec.rounds >= 1, r.at("rounds"), "rounds must be at least 1");
  spec.degree = r.count("degree", spec.degree);
  spec.gamma = r.number("gamma", spec.gamma);
  check(spec.gamma >= 0.0 && spec.gamma <= 1.0, r.at("gamma"), "gamma must lie in [0, 1]");
  spec.delta = r.number("delta", spec.delta);
  check(spec.delta > -1.0, r.at("delta"), "delta must be greater than -1");
  spec.record_all_rounds = r.flag("record_all_rounds", spec.record_all_rounds);
  r.finish();
}

void parse_noise(const json& node, NoiseSpec& spec) {
  ObjectReader r(node, "/noise");
  spec.model.m = r.count("m", spec.model.m);
  check(spec.model.m >= 1, r.at("m"), "m must be at least 1");
  spec.model.epsilon = r.number("epsilon", spec.model.epsilon);
  check(spec.model.epsilon >= 0.0, r.at("epsilon"), "epsilon must be non-negative");
  spec.model.gamma = r.number("gamma", spec.model.gamma);
  check(spec.model.gamma >= 0.0 && spec.model.gamma <= 1.0, r.at("gamma"),
        "gamma must lie in [0, 1]");
  spec.trials = r.count("trials", spec.trials);
  check(spec.trials >= 1, r.at("trials"), "trials must be at least 1");
  r.finish();
}

}  // namespace

RunConfig parse_run_config(const json& document) {
  RunConfig config;
  config.source = document;
  ObjectReader r(document, "");

  if (!r.find("experiment")) throw ConfigError("/experiment", "missing required key");
  config.experiment = parse_enum(r, "experiment", "train", parse_experiment);
  config.output_dir = r.text("output_dir", config.output_dir);
  config.allow_divergence_study = r.flag("allow_divergence_study", false);

  const json* seeds = r.find("seeds");
  check(seeds && seeds->is_array() && !seeds->empty(), "/seeds", "expected a non-empty array");
  for (std::size_t i = 0; i < seeds->size(); ++i) {
    config.seeds.push_back(ObjectReader::as_count((*seeds)[i], "/seeds/" + std::to_string(i)));
  }

  // Agent settings first: variant validation depends on the network shape.
  bool own_gamma = false;
  if (const json* agent = r.find("agent")) own_gamma = parse_agent(*agent, config);
  if (const json* env = r.find("env")) parse_env(*env, config.env);
  if (!own_gamma) config.agent.gamma = config.env.gamma;

  config.frames = static_cast<std::int64_t>(r.count("frames", config.frames));
  config.train.eval_interval =
      static_cast<std::int64_t>(r.count("eval_interval", config.train.eval_interval));
  config.train.eval_episodes = r.count("eval_episodes", config.train.eval_episodes);

  const bool trains = config.experiment == ExperimentKind::train ||
                      config.experiment == ExperimentKind::delta_sweep;
  if (const json* variants = r.find("variants")) {
    parse_variants(*variants, config);
  } else if (trains) {
    throw ConfigError("/variants", "missing required key");
  }
  if (const json* deltas = r.find("deltas")) {
    check(deltas->is_array(), "/deltas", "expected an array");
    for (std::size_t i = 0; i < deltas->size(); ++i) {
      const auto path = "/deltas/" + std::to_string(i);
      check((*deltas)[i].is_number(), path, "expected a number");
      const double d = (*deltas)[i].get<double>();
      check(std::isfinite(d) && d > -1.0, path, "delta must be greater than -1");
      config.deltas.push_back(d);
    }
  }
  if (trains) check(config.frames > 0, "/frames", "frames must be positive");
  if (config.experiment == ExperimentKind::delta_sweep) {
    check(!config.deltas.empty(), "/deltas", "delta_sweep needs at least one delta");
  }
  if (const json* overest = r.find("overest")) parse_overest(*overest, config.overest);
  if (const json* noise = r.find("noise")) parse_noise(*noise, config.noise);
  r.finish();
  return config;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("/", "cannot read " + path.string());
  json document;
  try {
    document = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("/", std::string("malformed JSON: ") + e.what());
  }
  return parse_run_config(document);
}

std::string config_hash(const json& document) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : document.dump()) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", hash);
}

}  // namespace hindsight::experiment
