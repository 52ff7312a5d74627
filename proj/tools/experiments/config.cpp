#include "experiments/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "pswarm/models.hpp"

namespace pswarm::experiments {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::stringstream stream(value);
  std::string item;
  while (std::getline(stream, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

double parse_real(const std::string& key, const std::string& text) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) throw ConfigError(key, "expected a real number, got '" + text + "'");
  return value;
}

std::uint64_t parse_uint(const std::string& key, const std::string& text) {
  std::uint64_t value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) throw ConfigError(key, "expected a nonnegative integer, got '" + text + "'");
  return value;
}

std::size_t parse_positive(const std::string& key, const std::string& text) {
  const auto value = parse_uint(key, text);
  if (value == 0) throw ConfigError(key, "must be >= 1");
  return static_cast<std::size_t>(value);
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError(key, "expected true/false, got '" + text + "'");
}

Output parse_output(const std::string& text) {
  if (text == "forecast_intervals") return Output::kForecastIntervals;
  if (text == "f2_replication_std") return Output::kF2ReplicationStd;
  if (text == "convergence_table") return Output::kConvergenceTable;
  if (text == "marginal_lik") return Output::kMarginalLik;
  throw ConfigError("run.outputs", "unknown output '" + text + "'");
}

std::vector<std::size_t> parse_ladder(const std::string& key, const std::string& text) {
  std::vector<std::size_t> ladder;
  for (const auto& item : split_list(text)) ladder.push_back(parse_positive(key, item));
  if (ladder.empty()) throw ConfigError(key, "ladder must have at least one rung");
  return ladder;
}

const std::map<std::string, std::string> kEmptySection;

}  // namespace

IniDocument IniDocument::parse(const std::string& text) {
  IniDocument doc;
  std::string current;
  std::istringstream stream(text);
  std::string raw;
  std::size_t line_number = 0;
  while (std::getline(stream, raw)) {
    ++line_number;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("line " + std::to_string(line_number), "unterminated section header");
      current = trim(std::string_view(line).substr(1, line.size() - 2));
      doc.sections_[current];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line_number), "expected 'key = value'");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_number), "empty key");
    auto& section = doc.sections_[current];
    if (section.contains(key)) throw ConfigError(current + "." + key, "duplicate key");
    section[key] = trim(std::string_view(line).substr(eq + 1));
  }
  return doc;
}

IniDocument IniDocument::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open config file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

bool IniDocument::has(const std::string& section, const std::string& key) const {
  return get(section, key).has_value();
}

std::optional<std::string> IniDocument::get(const std::string& section, const std::string& key) const {
  const auto s = sections_.find(section);
  if (s == sections_.end()) return std::nullopt;
  const auto k = s->second.find(key);
  if (k == s->second.end()) return std::nullopt;
  return k->second;
}

const std::map<std::string, std::string>& IniDocument::section(const std::string& name) const {
  const auto s = sections_.find(name);
  return s == sections_.end() ? kEmptySection : s->second;
}

std::vector<std::string> IniDocument::sections() const {
  std::vector<std::string> names;
  for (const auto& [name, _] : sections_) names.push_back(name);
  return names;
}

const std::vector<std::string>& parameter_names(ModelKind kind) {
  static const std::vector<std::string> sv{"phi", "beta", "sigma"};
  static const std::vector<std::string> lg{"a", "q", "c", "r", "m1", "p1"};
  return kind == ModelKind::kSv ? sv : lg;
}

ExperimentConfig ExperimentConfig::from_document(const IniDocument& doc) {
  for (const auto& name : doc.sections()) {
    if (name != "model" && name != "prior" && name != "run") {
      throw ConfigError(name.empty() ? "(top level)" : name, "unknown section");
    }
  }

  ExperimentConfig cfg;
  const auto model_name = doc.get("model", "name");
  if (!model_name) throw ConfigError("model.name", "missing");
  if (*model_name == "sv") {
    cfg.model = ModelKind::kSv;
    cfg.model_params = SvParams{}.to_params();
  } else if (*model_name == "lg") {
    cfg.model = ModelKind::kLg;
    cfg.model_params = LgParams{}.to_params();
  } else {
    throw ConfigError("model.name", "unknown model '" + *model_name + "' (expected sv or lg)");
  }

  const auto& names = parameter_names(cfg.model);
  auto index_of = [&](const std::string& section, const std::string& key) {
    const auto it = std::find(names.begin(), names.end(), key);
    if (it == names.end()) throw ConfigError(section + "." + key, "not a parameter of model " + *model_name);
    return static_cast<std::size_t>(it - names.begin());
  };

  for (const auto& [key, value] : doc.section("model")) {
    if (key == "name") continue;
    cfg.model_params[index_of("model", key)] = parse_real("model." + key, value);
  }
  try {
    if (cfg.model == ModelKind::kSv) {
      SvParams::from_params(cfg.model_params).validate();
    } else {
      LgParams::from_params(cfg.model_params).validate();
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError("model", e.what());
  }

  // Default prior: the published uniform box for sv, a point mass for lg.
  if (cfg.model == ModelKind::kSv) {
    const SvPrior prior;
    cfg.prior_lower = {prior.phi_support[0], prior.beta_support[0], prior.sigma_support[0]};
    cfg.prior_upper = {prior.phi_support[1], prior.beta_support[1], prior.sigma_support[1]};
  } else {
    cfg.prior_lower = cfg.model_params;
    cfg.prior_upper = cfg.model_params;
  }
  for (const auto& [key, value] : doc.section("prior")) {
    const std::string full = "prior." + key;
    const auto k = index_of("prior", key);
    const auto bounds = split_list(value);
    if (bounds.size() == 1) {
      cfg.prior_lower[k] = cfg.prior_upper[k] = parse_real(full, bounds[0]);
    } else if (bounds.size() == 2) {
      cfg.prior_lower[k] = parse_real(full, bounds[0]);
      cfg.prior_upper[k] = parse_real(full, bounds[1]);
      if (!(cfg.prior_lower[k] <= cfg.prior_upper[k])) throw ConfigError(full, "lower bound exceeds upper bound");
    } else {
      throw ConfigError(full, "expected 'lower, upper' or a single fixed value");
    }
  }

  for (const auto& [key, value] : doc.section("run")) {
    const std::string full = "run." + key;
    if (key == "n_theta") {
      cfg.n_theta = parse_positive(full, value);
    } else if (key == "n_particles") {
      cfg.n_particles = parse_positive(full, value);
    } else if (key == "seed") {
      cfg.seed = parse_uint(full, value);
    } else if (key == "T") {
      cfg.length = parse_positive(full, value);
    } else if (key == "replications") {
      cfg.replications = parse_positive(full, value);
    } else if (key == "outputs") {
      for (const auto& item : split_list(value)) cfg.outputs.push_back(parse_output(item));
    } else if (key == "estimator") {
      if (value == "hat") {
        cfg.estimator = Estimator::kHat;
      } else if (value == "check") {
        cfg.estimator = Estimator::kCheck;
      } else {
        throw ConfigError(full, "expected hat or check");
      }
    } else if (key == "dead_filters") {
      if (value == "abort") {
        cfg.dead_filter_policy = DeadFilterPolicy::kAbort;
      } else if (value == "drop") {
        cfg.dead_filter_policy = DeadFilterPolicy::kDrop;
      } else {
        throw ConfigError(full, "expected abort or drop");
      }
    } else if (key == "resampling") {
      if (value == "multinomial") {
        cfg.resampling = Resampling::kMultinomial;
      } else if (value == "systematic") {
        cfg.resampling = Resampling::kSystematic;
      } else {
        throw ConfigError(full, "expected multinomial or systematic");
      }
    } else if (key == "clamp_variance") {
      cfg.clamp_variance = parse_bool(full, value);
    } else if (key == "truncate_bound") {
      cfg.truncate_bound = parse_real(full, value);
      if (!(*cfg.truncate_bound > 0.0)) throw ConfigError(full, "must be positive");
    } else if (key == "nx_ladder") {
      cfg.nx_ladder = parse_ladder(full, value);
    } else if (key == "ntheta_ladder") {
      cfg.ntheta_ladder = parse_ladder(full, value);
    } else if (key == "ladder_particles") {
      cfg.ladder_particles = parse_positive(full, value);
    } else if (key == "workers") {
      cfg.workers = parse_positive(full, value);
    } else {
      throw ConfigError(full, "unknown key");
    }
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  return from_document(IniDocument::load(path));
}

ModelSpec ExperimentConfig::model_spec() const { return model == ModelKind::kSv ? sv_model() : lg_model(); }

PriorSpec ExperimentConfig::prior_spec() const { return uniform_box_prior(prior_lower, prior_upper); }

std::vector<FilterFunctional> ExperimentConfig::forecast_functionals() const {
  if (model == ModelKind::kLg) return {lg_f1(), lg_f2()};
  FilterFunctional f2 = sv_f2();
  if (truncate_bound) f2 = truncate(std::move(f2), *truncate_bound);
  return {sv_f1(), std::move(f2)};
}

SwarmConfig ExperimentConfig::swarm_config(std::vector<FilterFunctional> functionals, std::uint64_t replicate) const {
  SwarmConfig swarm;
  swarm.n_theta = n_theta;
  swarm.n_particles = n_particles;
  swarm.seed = seed;
  swarm.replicate = replicate;
  swarm.functionals = std::move(functionals);
  swarm.report_marginal_likelihood = wants(Output::kMarginalLik);
  swarm.estimator = estimator;
  swarm.dead_filter_policy = dead_filter_policy;
  swarm.resampling = resampling;
  return swarm;
}

bool ExperimentConfig::wants(Output output) const {
  return std::find(outputs.begin(), outputs.end(), output) != outputs.end();
}

}  // namespace pswarm::experiments
