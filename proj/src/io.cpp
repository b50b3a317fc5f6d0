#include "amle/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <system_error>

#include <nlohmann/json.hpp>

#include "amle/stats.hpp"

namespace amle::io {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(trim(cur));
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write file: " + path.string());
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s, const std::string& context) {
  const std::string t = trim(s);
  double v = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size()) {
    throw std::runtime_error(context + ": cannot parse number '" + s + "'");
  }
  return v;
}

std::string string_hash_hex(const std::string& content) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : content) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

std::string file_hash_hex(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot hash missing file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return string_hash_hex(ss.str());
}

RealSample load_real_sample_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto cells = split_csv(line);
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(parse_double(c, path.string() + ":" + std::to_string(lineno)));
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": inconsistent column count");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error(path.string() + ": no observations");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  return make_real_sample(std::move(m));
}

EventTimes load_event_times_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::string line;
  double t0 = 0.0;
  bool have_t0 = false;
  std::vector<double> times;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (!have_t0) {
      if (t.rfind("t0=", 0) != 0) {
        throw std::runtime_error(path.string() + ": first line must be 't0=<horizon>'");
      }
      t0 = parse_double(t.substr(3), path.string() + ":" + std::to_string(lineno));
      have_t0 = true;
      continue;
    }
    times.push_back(parse_double(t, path.string() + ":" + std::to_string(lineno)));
  }
  if (!have_t0) throw std::runtime_error(path.string() + ": missing t0 header line");
  Eigen::VectorXd v = Eigen::Map<Eigen::VectorXd>(times.data(), static_cast<Eigen::Index>(times.size()));
  return make_event_times(std::move(v), t0);
}

RealSample load_returns_csv(const std::filesystem::path& path) {
  const RealSample prices = load_real_sample_csv(path);
  if (prices.values.cols() != 1) throw std::runtime_error(path.string() + ": prices must be a single column");
  const Eigen::Index n = prices.values.rows();
  if (n < 2) throw std::runtime_error(path.string() + ": need at least two prices for returns");
  Eigen::MatrixXd r(n - 1, 1);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const double p0 = prices.values(i, 0), p1 = prices.values(i + 1, 0);
    if (!(p0 > 0.0 && p1 > 0.0)) throw std::runtime_error(path.string() + ": prices must be positive");
    r(i, 0) = std::log(p1 / p0);
  }
  return make_real_sample(std::move(r));
}

std::string write_vector_line(const Eigen::VectorXd& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i > 0) out += ',';
    out += format_double(v[i]);
  }
  return out;
}

Eigen::VectorXd parse_vector_line(const std::string& line, const std::string& context) {
  const auto cells = split_csv(line);
  Eigen::VectorXd v(static_cast<Eigen::Index>(cells.size()));
  for (std::size_t i = 0; i < cells.size(); ++i) v[static_cast<Eigen::Index>(i)] = parse_double(cells[i], context);
  return v;
}

void write_abc_sample(const AbcSample& sample, const ParameterSpace& space,
                      const std::filesystem::path& csv_path, const std::filesystem::path& meta_path) {
  auto csv = open_out(csv_path);
  const auto names = space.names();
  for (std::size_t i = 0; i < names.size(); ++i) csv << names[i] << ',';
  csv << "distance\n";
  for (Eigen::Index r = 0; r < sample.draws.rows(); ++r) {
    for (Eigen::Index c = 0; c < sample.draws.cols(); ++c) csv << format_double(sample.draws(r, c)) << ',';
    csv << format_double(sample.distances[r]) << '\n';
  }
  auto meta = open_out(meta_path);
  meta << "epsilon=" << format_double(sample.epsilon) << '\n';
  meta << "seed=" << sample.seed.seed << '\n';
  meta << "stream=" << sample.seed.stream << '\n';
  meta << "proposals_used=" << sample.proposals_used << '\n';
  meta << "acceptance_rate=" << format_double(sample.acceptance_rate) << '\n';
  if (sample.resolved_scale.size() > 0) meta << "resolved_scale=" << write_vector_line(sample.resolved_scale) << '\n';
}

AbcSample read_abc_sample(const std::filesystem::path& csv_path, const std::filesystem::path& meta_path) {
  AbcSample out;
  {
    auto in = open_in(csv_path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(csv_path.string() + ": empty sample file");
    const auto header = split_csv(line);
    const auto cols = static_cast<Eigen::Index>(header.size());
    std::vector<Eigen::VectorXd> rows;
    int lineno = 1;
    while (std::getline(in, line)) {
      ++lineno;
      if (trim(line).empty()) continue;
      Eigen::VectorXd v = parse_vector_line(line, csv_path.string() + ":" + std::to_string(lineno));
      if (v.size() != cols) {
        throw std::runtime_error(csv_path.string() + ":" + std::to_string(lineno) + ": wrong column count");
      }
      rows.push_back(std::move(v));
    }
    out.draws.resize(static_cast<Eigen::Index>(rows.size()), cols - 1);
    out.distances.resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      out.draws.row(static_cast<Eigen::Index>(i)) = rows[i].head(cols - 1).transpose();
      out.distances[static_cast<Eigen::Index>(i)] = rows[i][cols - 1];
    }
  }
  {
    auto in = open_in(meta_path);
    std::string line;
    while (std::getline(in, line)) {
      const std::string t = trim(line);
      if (t.empty()) continue;
      const auto eq = t.find('=');
      if (eq == std::string::npos) throw std::runtime_error(meta_path.string() + ": malformed metadata line");
      const std::string key = t.substr(0, eq), val = t.substr(eq + 1);
      if (key == "epsilon") {
        out.epsilon = parse_double(val, meta_path.string());
      } else if (key == "seed") {
        out.seed.seed = std::stoull(val);
      } else if (key == "stream") {
        out.seed.stream = std::stoull(val);
      } else if (key == "proposals_used") {
        out.proposals_used = std::stoull(val);
      } else if (key == "acceptance_rate") {
        out.acceptance_rate = parse_double(val, meta_path.string());
      } else if (key == "resolved_scale") {
        out.resolved_scale = parse_vector_line(val, meta_path.string());
      }
    }
  }
  return out;
}

void write_study_csv(const StudyResult& study, const ParameterSpace& space, const std::string& config_hash,
                     double epsilon, int m, const std::filesystem::path& path) {
  auto out = open_out(path);
  const auto names = space.names();
  out << "config_hash,epsilon,m,replicate,seed,stream,status,acceptance_rate,proposals,density_at_mode";
  for (const auto& n : names) out << ",est_" << n;
  out << '\n';
  for (const auto& row : study.rows) {
    out << config_hash << ',' << format_double(epsilon) << ',' << m << ',' << row.replicate << ',' << row.seed.seed
        << ',' << row.seed.stream << ',' << to_string(row.status);
    if (row.status == ReplicateStatus::kOk) {
      out << ',' << format_double(row.result.acceptance_rate) << ',' << row.result.proposals_used << ','
          << format_double(row.result.density_at_mode);
      for (Eigen::Index i = 0; i < row.result.theta.size(); ++i) out << ',' << format_double(row.result.theta[i]);
    } else {
      out << ",,,";
      for (std::size_t i = 0; i < names.size(); ++i) out << ',';
    }
    out << '\n';
  }
}

void write_summary_json(const StudyResult& study, const std::string& experiment, const std::string& config_hash,
                        double epsilon, int m, const std::filesystem::path& path) {
  nlohmann::ordered_json j;
  j["experiment"] = experiment;
  j["config_hash"] = config_hash;
  j["epsilon"] = epsilon;
  j["m"] = m;
  j["replicates"] = static_cast<int>(study.rows.size());
  j["failures"] = study.failures;
  j["parameters"] = nlohmann::ordered_json::array();
  for (const auto& p : study.summary) {
    j["parameters"].push_back({{"name", p.name},
                               {"min", p.min},
                               {"q1", p.q1},
                               {"median", p.median},
                               {"q3", p.q3},
                               {"max", p.max}});
  }
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

void write_plotdata_csv(const std::vector<std::filesystem::path>& study_csvs, const std::filesystem::path& out_path) {
  struct Group {
    std::vector<double> values;
  };
  // key: (parameter appearance order, epsilon)
  std::vector<std::string> param_order;
  std::map<std::pair<std::size_t, double>, Group> groups;

  for (const auto& path : study_csvs) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path.string() + ": empty study file");
    const auto header = split_csv(line);
    std::ptrdiff_t eps_col = -1, status_col = -1;
    std::vector<std::pair<std::size_t, std::string>> est_cols;
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (header[c] == "epsilon") eps_col = static_cast<std::ptrdiff_t>(c);
      if (header[c] == "status") status_col = static_cast<std::ptrdiff_t>(c);
      if (header[c].rfind("est_", 0) == 0) est_cols.emplace_back(c, header[c].substr(4));
    }
    if (eps_col < 0 || status_col < 0 || est_cols.empty()) {
      throw std::runtime_error(path.string() + ": not a study CSV (need epsilon, status, est_* columns)");
    }
    int lineno = 1;
    while (std::getline(in, line)) {
      ++lineno;
      if (trim(line).empty()) continue;
      const auto cells = split_csv(line);
      if (cells.size() != header.size()) {
        throw std::runtime_error(path.string() + ": line " + std::to_string(lineno) + ": wrong column count");
      }
      if (cells[static_cast<std::size_t>(status_col)] != "ok") continue;
      const double eps =
          parse_double(cells[static_cast<std::size_t>(eps_col)], path.string() + ": line " + std::to_string(lineno));
      for (const auto& [col, name] : est_cols) {
        auto it = std::find(param_order.begin(), param_order.end(), name);
        std::size_t pidx;
        if (it == param_order.end()) {
          param_order.push_back(name);
          pidx = param_order.size() - 1;
        } else {
          pidx = static_cast<std::size_t>(it - param_order.begin());
        }
        groups[{pidx, eps}].values.push_back(
            parse_double(cells[col], path.string() + ": line " + std::to_string(lineno)));
      }
    }
  }
  if (groups.empty()) throw std::runtime_error("plotdata: no successful replicate rows found");

  auto out = open_out(out_path);
  out << "parameter,epsilon,min,q1,median,q3,max\n";
  for (std::size_t p = 0; p < param_order.size(); ++p) {
    // epsilon groups in descending order
    std::vector<std::pair<double, const Group*>> eps_groups;
    for (const auto& [key, g] : groups) {
      if (key.first == p) eps_groups.emplace_back(key.second, &g);
    }
    std::sort(eps_groups.begin(), eps_groups.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    for (const auto& [eps, g] : eps_groups) {
      Eigen::VectorXd v =
          Eigen::Map<const Eigen::VectorXd>(g->values.data(), static_cast<Eigen::Index>(g->values.size()));
      const FiveNumberSummary f = five_number_summary(v);
      out << param_order[p] << ',' << format_double(eps) << ',' << format_double(f.min) << ','
          << format_double(f.q1) << ',' << format_double(f.median) << ',' << format_double(f.q3) << ','
          << format_double(f.max) << '\n';
    }
  }
}

void write_kde_surface_csv(const KdeModel& model, const Eigen::MatrixXd& grid,
                           const std::vector<std::string>& coord_names, const std::filesystem::path& path,
                           int n_threads) {
  if (grid.cols() != model.points.cols()) throw std::invalid_argument("write_kde_surface_csv: dimension mismatch");
  const Eigen::VectorXd dens = kde_eval_rows(model, grid, n_threads);
  auto out = open_out(path);
  for (const auto& n : coord_names) out << n << ',';
  out << "density\n";
  for (Eigen::Index i = 0; i < grid.rows(); ++i) {
    for (Eigen::Index j = 0; j < grid.cols(); ++j) out << format_double(grid(i, j)) << ',';
    out << format_double(dens[i]) << '\n';
  }
}

void write_likelihood_curve_csv(const std::vector<LikelihoodPoint>& curve,
                                const std::vector<std::string>& coord_names, const std::filesystem::path& path) {
  auto out = open_out(path);
  for (const auto& n : coord_names) out << n << ',';
  out << "estimate,std_error\n";
  for (const auto& p : curve) {
    for (Eigen::Index j = 0; j < p.theta.size(); ++j) out << format_double(p.theta[j]) << ',';
    out << format_double(p.estimate) << ',' << format_double(p.std_error) << '\n';
  }
}

void write_manifest(const std::filesystem::path& dir, const std::vector<std::filesystem::path>& artifacts,
                    const std::string& config_hash, bool complete) {
  std::vector<std::pair<std::string, std::string>> entries;
  for (const auto& a : artifacts) {
    entries.emplace_back(std::filesystem::relative(a, dir).generic_string(), file_hash_hex(a));
  }
  std::sort(entries.begin(), entries.end());
  auto out = open_out(dir / "manifest.txt");
  out << "status=" << (complete ? "complete" : "partial") << '\n';
  out << "config_hash=" << config_hash << '\n';
  for (const auto& [rel, hash] : entries) out << hash << "  " << rel << '\n';
}

}  // namespace amle::io
