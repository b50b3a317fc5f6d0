#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "amle/abc.hpp"
#include "amle/estimate.hpp"
#include "amle/kde.hpp"
#include "amle/types.hpp"

namespace amle::io {

/// Shortest round-trip decimal representation (read(write(x)) == x).
std::string format_double(double v);
double parse_double(const std::string& s, const std::string& context);

/// FNV-1a 64-bit hash of a file's bytes, as fixed-width hex.
std::string file_hash_hex(const std::filesystem::path& path);
std::string string_hash_hex(const std::string& content);

// --- dataset loaders -------------------------------------------------------

/// One observation per row, comma-separated columns, no header.
RealSample load_real_sample_csv(const std::filesystem::path& path);

/// First nonblank line "t0=<value>", then one event time per row.
EventTimes load_event_times_csv(const std::filesystem::path& path);

/// One price per row; transformed to log-returns r_t = log(p_t / p_{t-1}).
RealSample load_returns_csv(const std::filesystem::path& path);

// --- parameter vectors ------------------------------------------------------

std::string write_vector_line(const Eigen::VectorXd& v);
Eigen::VectorXd parse_vector_line(const std::string& line, const std::string& context);

// --- ABC sample persistence -------------------------------------------------

/// CSV with one accepted draw per row (parameter columns then distance),
/// plus a key=value sidecar holding epsilon, seeds, proposals and rate.
void write_abc_sample(const AbcSample& sample, const ParameterSpace& space,
                      const std::filesystem::path& csv_path, const std::filesystem::path& meta_path);
AbcSample read_abc_sample(const std::filesystem::path& csv_path, const std::filesystem::path& meta_path);

// --- study output -----------------------------------------------------------

void write_study_csv(const StudyResult& study, const ParameterSpace& space, const std::string& config_hash,
                     double epsilon, int m, const std::filesystem::path& path);

void write_summary_json(const StudyResult& study, const std::string& experiment, const std::string& config_hash,
                        double epsilon, int m, const std::filesystem::path& path);

/// Boxplot-ready quantiles: one row per (parameter, epsilon) group, epsilon
/// descending; input is one or more study CSVs.
void write_plotdata_csv(const std::vector<std::filesystem::path>& study_csvs, const std::filesystem::path& out);

// --- surfaces ----------------------------------------------------------------

void write_kde_surface_csv(const KdeModel& model, const Eigen::MatrixXd& grid,
                           const std::vector<std::string>& coord_names, const std::filesystem::path& path,
                           int n_threads = 0);

void write_likelihood_curve_csv(const std::vector<LikelihoodPoint>& curve,
                                const std::vector<std::string>& coord_names, const std::filesystem::path& path);

// --- manifest ----------------------------------------------------------------

/// "status=..." header plus one "<hash>  <relative path>" line per artifact,
/// sorted by path; hashes cover file contents.
void write_manifest(const std::filesystem::path& dir, const std::vector<std::filesystem::path>& artifacts,
                    const std::string& config_hash, bool complete);

}  // namespace amle::io
