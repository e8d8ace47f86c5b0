#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <Eigen/Core>

#include "netfrac/dynamics.hpp"

namespace netfrac {

enum class OutputFormat { csv, json };

OutputFormat parse_output_format(std::string_view text);

/// Heat: `t,p_1,...,p_n`. Schrodinger: `t,re_1,im_1,...,re_n,im_n,prob_1,...,prob_n`.
/// Numbers use the shortest round-trip decimal form.
std::string trajectory_csv(const Trajectory& traj);
/// Object with "model", "t" and per-sample arrays "p" (heat) or "re", "im",
/// "prob" (schrodinger).
std::string trajectory_json(const Trajectory& traj);

/// Throws IoError naming the path on failure.
void write_trajectory(const Trajectory& traj, const std::filesystem::path& path,
                      OutputFormat format);

/// Inverse of trajectory_csv / trajectory_json; statistics are not stored and
/// come back zero.
Trajectory parse_trajectory_csv(std::string_view text);
Trajectory parse_trajectory_json(std::string_view text);
Trajectory read_trajectory(const std::filesystem::path& path, OutputFormat format);

/// One row per line, comma separated.
std::string matrix_csv(const Eigen::MatrixXd& m);

void write_text(const std::filesystem::path& path, std::string_view content);
std::string read_text(const std::filesystem::path& path);

}  // namespace netfrac
