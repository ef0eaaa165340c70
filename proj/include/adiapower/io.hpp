#pragma once

#include "adiapower/experiments.hpp"
#include "adiapower/propagator.hpp"

#include <string>
#include <vector>

namespace adiapower {

/// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double v);

/// Comma-separated table: header line plus one line per row, '\n' endings,
/// locale independent.
std::string to_csv(const std::vector<std::string>& columns,
                   const std::vector<std::vector<double>>& rows);

/// Trajectory table with the fixed column set
/// t,re_aS,im_aS,re_aD,im_aD,E_S,E_D,kappa,delta,theta,epsilon,r,acc_S,acc_D.
/// The trajectory must be annotated (theta/epsilon/ratio filled).
std::string trajectory_csv(const Trajectory& trajectory);

/// Minimal standalone line plot of E_S and E_D against time.
std::string trajectory_svg(const Trajectory& trajectory);

/// Write text to path, replacing any existing file; throws std::runtime_error
/// on failure.
void write_text_file(const std::string& path, const std::string& content);

} // namespace adiapower
