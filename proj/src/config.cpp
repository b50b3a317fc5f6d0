#include "amle/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "amle/io.hpp"

namespace amle {

namespace {

using nlohmann::json;

class Issues {
 public:
  template <typename... Ts>
  void add(Ts&&... parts) {
    std::ostringstream ss;
    (ss << ... << parts);
    items_.push_back(ss.str());
  }
  [[nodiscard]] bool empty() const { return items_.empty(); }
  [[nodiscard]] std::vector<std::string> take() { return std::move(items_); }

 private:
  std::vector<std::string> items_;
};

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where, Issues& issues) {
  for (const auto& [key, value] : obj.items()) {
    if (allowed.find(key) == allowed.end()) issues.add(where, ": unknown key '", key, "'");
  }
}

bool require(const json& obj, const char* key, const std::string& where, Issues& issues) {
  if (!obj.contains(key)) {
    issues.add(where, ": missing required key '", key, "'");
    return false;
  }
  return true;
}

}  // namespace

std::string ExperimentConfig::content_hash() const {
  std::ostringstream ss;
  ss << experiment << '|' << model_name << '|' << n << '|' << size << '|' << t0 << '|' << include_skewness << '|'
     << io::write_vector_line(ecf_grid) << '|' << beta_fixed << '|' << q1 << '|' << q2 << '|' << map_g_inverse
     << '|' << data_path.generic_string() << '|' << prices_path.generic_string() << '|' << has_generator << '|'
     << io::write_vector_line(generator_theta) << '|' << generator_seed << '|';
  for (const auto& d : prior) {
    if (const auto* c = std::get_if<ContinuousDim>(&d)) {
      ss << 'c' << c->name << ':' << io::format_double(c->lower) << ':' << io::format_double(c->upper) << ';';
    } else {
      const auto& dd = std::get<DiscreteDim>(d);
      ss << 'd' << dd.name << ':';
      for (long v : dd.values) ss << v << ' ';
      ss << ';';
    }
  }
  ss << '|';
  for (double e : epsilons) ss << io::format_double(e) << ' ';
  ss << '|' << m << '|' << replicates << '|' << study_mode << '|' << distance << '|';
  for (double s : distance_scale) ss << io::format_double(s) << ' ';
  ss << '|' << kernel << '|' << bandwidth << '|' << n_starts << '|' << max_proposals << '|' << seed;
  return io::string_hash_hex(ss.str());
}

ExperimentConfig parse_config(const std::filesystem::path& path) {
  Issues issues;
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config: " + path.string(), {"cannot open config: " + path.string()});
  json j;
  try {
    j = json::parse(in, nullptr, /*allow_exceptions=*/true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError("config parse error", {std::string("parse error: ") + e.what()});
  }

  ExperimentConfig cfg;
  cfg.base_dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");

  static const std::set<std::string> top_keys = {
      "experiment", "model",  "data",   "prior",     "epsilons",      "m",       "replicates",
      "study",      "distance", "kernel", "kde",     "max_proposals", "seed",    "threads",
      "save_abc_samples", "surface", "output_dir"};
  check_keys(j, top_keys, "config", issues);

  if (require(j, "experiment", "config", issues)) {
    if (!j["experiment"].is_string() || j["experiment"].get<std::string>().empty()) {
      issues.add("experiment: must be a nonempty string");
    } else {
      cfg.experiment = j["experiment"].get<std::string>();
    }
  }

  // --- model ---
  if (require(j, "model", "config", issues) && j["model"].is_object()) {
    const json& jm = j["model"];
    static const std::set<std::string> model_keys = {"name", "n",  "size", "t0", "include_skewness",
                                                     "ecf_grid", "beta", "q1", "q2", "map_g_inverse"};
    check_keys(jm, model_keys, "model", issues);
    if (require(jm, "name", "model", issues)) cfg.model_name = jm.value("name", "");
    cfg.n = jm.value("n", 0);
    cfg.size = jm.value("size", 10);
    cfg.t0 = jm.value("t0", 0.0);
    cfg.include_skewness = jm.value("include_skewness", true);
    cfg.beta_fixed = jm.value("beta", 0.0);
    cfg.q1 = jm.value("q1", 0.25);
    cfg.q2 = jm.value("q2", 0.75);
    cfg.map_g_inverse = jm.value("map_g_inverse", true);
    if (jm.contains("ecf_grid")) {
      if (!jm["ecf_grid"].is_array() || jm["ecf_grid"].empty()) {
        issues.add("model.ecf_grid: must be a nonempty array");
      } else {
        cfg.ecf_grid.resize(static_cast<Eigen::Index>(jm["ecf_grid"].size()));
        for (std::size_t i = 0; i < jm["ecf_grid"].size(); ++i) {
          cfg.ecf_grid[static_cast<Eigen::Index>(i)] = jm["ecf_grid"][i].get<double>();
        }
      }
    }
    static const std::set<std::string> known_models = {"binomial", "normal", "stable", "superposed_gamma",
                                                       "locscale_quantile"};
    if (!cfg.model_name.empty() && known_models.find(cfg.model_name) == known_models.end()) {
      issues.add("model.name: unknown model '", cfg.model_name, "'");
    }
    const bool needs_n = cfg.model_name == "binomial" || cfg.model_name == "normal" ||
                         cfg.model_name == "stable" || cfg.model_name == "locscale_quantile";
    if (needs_n && cfg.n < 1) issues.add("model.n: must be >= 1 for model '", cfg.model_name, "'");
    if (cfg.model_name == "superposed_gamma" && !(cfg.t0 > 0.0)) issues.add("model.t0: must be positive");
    if (cfg.model_name == "stable" && cfg.ecf_grid.size() == 0) issues.add("model.ecf_grid: required for stable");
  }

  // --- data ---
  if (require(j, "data", "config", issues) && j["data"].is_object()) {
    const json& jd = j["data"];
    static const std::set<std::string> data_keys = {"path", "prices_path", "generator"};
    check_keys(jd, data_keys, "data", issues);
    int sources = 0;
    if (jd.contains("path")) {
      ++sources;
      cfg.data_path = cfg.base_dir / jd["path"].get<std::string>();
      if (!std::filesystem::exists(cfg.data_path)) issues.add("data.path: file not found: ", cfg.data_path.string());
    }
    if (jd.contains("prices_path")) {
      ++sources;
      cfg.prices_path = cfg.base_dir / jd["prices_path"].get<std::string>();
      if (!std::filesystem::exists(cfg.prices_path)) {
        issues.add("data.prices_path: file not found: ", cfg.prices_path.string());
      }
    }
    if (jd.contains("generator")) {
      ++sources;
      const json& jg = jd["generator"];
      static const std::set<std::string> gen_keys = {"theta", "seed"};
      check_keys(jg, gen_keys, "data.generator", issues);
      cfg.has_generator = true;
      if (require(jg, "theta", "data.generator", issues) && jg["theta"].is_array() && !jg["theta"].empty()) {
        cfg.generator_theta.resize(static_cast<Eigen::Index>(jg["theta"].size()));
        for (std::size_t i = 0; i < jg["theta"].size(); ++i) {
          cfg.generator_theta[static_cast<Eigen::Index>(i)] = jg["theta"][i].get<double>();
        }
      }
      cfg.generator_seed = jg.value("seed", 0ull);
    }
    if (sources != 1) issues.add("data: exactly one of path, prices_path, generator required (got ", sources, ")");
  }

  // --- prior ---
  if (require(j, "prior", "config", issues)) {
    if (!j["prior"].is_array() || j["prior"].empty()) {
      issues.add("prior: must be a nonempty array of dims");
    } else {
      for (std::size_t i = 0; i < j["prior"].size(); ++i) {
        const json& jp = j["prior"][i];
        const std::string where = "prior[" + std::to_string(i) + "]";
        if (!jp.is_object() || !jp.contains("name")) {
          issues.add(where, ": each dim needs a name");
          continue;
        }
        const bool continuous = jp.contains("lower") || jp.contains("upper");
        const bool discrete = jp.contains("values");
        if (continuous == discrete) {
          issues.add(where, ": specify either lower/upper or values");
          continue;
        }
        static const std::set<std::string> dim_keys = {"name", "lower", "upper", "values"};
        check_keys(jp, dim_keys, where, issues);
        if (continuous) {
          if (!jp.contains("lower") || !jp.contains("upper")) {
            issues.add(where, ": continuous dim needs both lower and upper");
            continue;
          }
          ContinuousDim d{jp["name"].get<std::string>(), jp["lower"].get<double>(), jp["upper"].get<double>()};
          if (!(d.lower < d.upper)) issues.add(where, ": needs lower < upper");
          cfg.prior.emplace_back(d);
        } else {
          DiscreteDim d{jp["name"].get<std::string>(), {}};
          for (const auto& v : jp["values"]) d.values.push_back(v.get<long>());
          if (d.values.empty()) issues.add(where, ": values must be nonempty");
          cfg.prior.emplace_back(d);
        }
      }
    }
  }

  // --- estimation knobs ---
  if (require(j, "epsilons", "config", issues)) {
    if (!j["epsilons"].is_array() || j["epsilons"].empty()) {
      issues.add("epsilons: must be a nonempty array");
    } else {
      for (const auto& e : j["epsilons"]) {
        const double v = e.get<double>();
        if (!(v > 0.0)) issues.add("epsilons: entries must be positive (got ", v, ")");
        cfg.epsilons.push_back(v);
      }
    }
  }
  cfg.m = j.value("m", 10000);
  if (cfg.m < 1) issues.add("m: must be >= 1");
  cfg.replicates = j.value("replicates", 1);
  if (cfg.replicates < 1) issues.add("replicates: must be >= 1");
  cfg.study_mode = j.value("study", "fixed");
  if (cfg.study_mode != "fixed" && cfg.study_mode != "fresh") issues.add("study: must be 'fixed' or 'fresh'");
  if (cfg.study_mode == "fresh" && !cfg.has_generator) issues.add("study: fresh-data mode needs data.generator");

  if (j.contains("distance")) {
    if (j["distance"].is_string()) {
      cfg.distance = j["distance"].get<std::string>();
      if (cfg.distance != "euclidean" && cfg.distance != "pilot") {
        issues.add("distance: must be 'euclidean', 'pilot', or an object with 'scale'");
      }
    } else if (j["distance"].is_object()) {
      static const std::set<std::string> dist_keys = {"scale"};
      check_keys(j["distance"], dist_keys, "distance", issues);
      cfg.distance = "weighted";
      if (require(j["distance"], "scale", "distance", issues)) {
        for (const auto& s : j["distance"]["scale"]) {
          const double v = s.get<double>();
          if (!(v > 0.0)) issues.add("distance.scale: entries must be positive");
          cfg.distance_scale.push_back(v);
        }
      }
    } else {
      issues.add("distance: must be a string or an object");
    }
  }
  cfg.kernel = j.value("kernel", "indicator");
  if (cfg.kernel != "indicator" && cfg.kernel != "truncated_gaussian") {
    issues.add("kernel: must be 'indicator' or 'truncated_gaussian'");
  }
  if (j.contains("kde") && j["kde"].is_object()) {
    static const std::set<std::string> kde_keys = {"bandwidth", "n_starts"};
    check_keys(j["kde"], kde_keys, "kde", issues);
    cfg.bandwidth = j["kde"].value("bandwidth", "silverman");
    if (cfg.bandwidth != "silverman" && cfg.bandwidth != "lscv") {
      issues.add("kde.bandwidth: must be 'silverman' or 'lscv'");
    }
    cfg.n_starts = j["kde"].value("n_starts", 50);
    if (cfg.n_starts < 1) issues.add("kde.n_starts: must be >= 1");
  }
  cfg.max_proposals = j.value("max_proposals", 10'000'000ull);
  cfg.seed = j.value("seed", 0ull);
  cfg.threads = j.value("threads", 0);
  cfg.save_abc_samples = j.value("save_abc_samples", false);
  if (j.contains("output_dir")) cfg.output_dir = j["output_dir"].get<std::string>();

  if (j.contains("surface") && j["surface"].is_object()) {
    const json& js = j["surface"];
    static const std::set<std::string> surf_keys = {"epsilon", "n_sims", "grid"};
    check_keys(js, surf_keys, "surface", issues);
    cfg.has_surface = true;
    cfg.surface_epsilon = js.value("epsilon", 0.0);
    if (!(cfg.surface_epsilon > 0.0)) issues.add("surface.epsilon: must be positive");
    cfg.surface_n_sims = js.value("n_sims", 0);
    if (cfg.surface_n_sims < 1) issues.add("surface.n_sims: must be >= 1");
    if (require(js, "grid", "surface", issues) && js["grid"].is_array() && !js["grid"].empty()) {
      for (const auto& ax : js["grid"]) {
        static const std::set<std::string> ax_keys = {"name", "from", "to", "count"};
        check_keys(ax, ax_keys, "surface.grid", issues);
        GridAxis a;
        a.name = ax.value("name", "");
        a.from = ax.value("from", 0.0);
        a.to = ax.value("to", 0.0);
        a.count = ax.value("count", 0);
        if (a.name.empty()) issues.add("surface.grid: axis needs a name");
        if (a.count < 1) issues.add("surface.grid: axis count must be >= 1");
        if (a.count > 1 && !(a.from < a.to)) issues.add("surface.grid: axis needs from < to");
        cfg.surface_grid.push_back(a);
      }
    }
  }

  // generator theta must match the prior dimension
  if (cfg.has_generator && !cfg.prior.empty() && cfg.generator_theta.size() > 0 &&
      cfg.generator_theta.size() != static_cast<Eigen::Index>(cfg.prior.size())) {
    issues.add("data.generator.theta: length ", cfg.generator_theta.size(), " does not match prior dimension ",
               cfg.prior.size());
  }

  if (!issues.empty()) {
    auto items = issues.take();
    std::string what = "config validation failed (" + std::to_string(items.size()) + " issue(s))";
    throw ConfigError(what, std::move(items));
  }
  return cfg;
}

ModelSpec build_model(const ExperimentConfig& cfg) {
  if (cfg.model_name == "binomial") return make_binomial_model(cfg.n, cfg.size);
  if (cfg.model_name == "normal") return make_normal_model(cfg.n);
  if (cfg.model_name == "stable") return make_stable_model(cfg.n, make_ecf_grid(cfg.ecf_grid), cfg.beta_fixed);
  if (cfg.model_name == "superposed_gamma") return make_superposed_gamma_model(cfg.t0, cfg.include_skewness);
  if (cfg.model_name == "locscale_quantile") {
    return make_locscale_quantile_model(cfg.n, cfg.q1, cfg.q2, cfg.map_g_inverse);
  }
  throw std::invalid_argument("build_model: unknown model '" + cfg.model_name + "'");
}

ParameterSpace build_space(const ExperimentConfig& cfg) { return ParameterSpace(cfg.prior); }

SummaryVector load_observed(const ExperimentConfig& cfg, const ModelSpec& model) {
  Dataset data = RealSample{Eigen::MatrixXd::Zero(1, 1)};
  if (cfg.has_generator) {
    RngStream rng(RngSeed{cfg.generator_seed, 0}.child(stream_tag::kGenerator));
    data = model.simulate(cfg.generator_theta, rng);
  } else if (!cfg.prices_path.empty()) {
    data = io::load_returns_csv(cfg.prices_path);
  } else if (cfg.model_name == "superposed_gamma") {
    data = io::load_event_times_csv(cfg.data_path);
  } else {
    data = io::load_real_sample_csv(cfg.data_path);
  }
  auto summ = model.statistic(data);
  if (!summ) {
    throw EstimationFailureError("load_observed: statistic not computable on the observed dataset");
  }
  return std::move(*summ);
}

}  // namespace amle
