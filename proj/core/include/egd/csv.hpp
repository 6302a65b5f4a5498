#pragma once

#include <string>
#include <vector>

#include "egd/diagnostics.hpp"
#include "egd/dynamics.hpp"

namespace egd {

/// Fixed CSV float format: 17 significant digits, '.' decimal separator.
/// Identical inputs serialize byte-identically.
std::string csv_double(double value);

/// density CSV: one row per cell per sampled time; columns t,x,pdf (1D) or
/// t,x,z,pdf (2D), x fastest within a sample.
void write_density_csv(const std::string& path, const SimResult& result);

/// eta CSV: one row per executed step; columns t,eta plus E_t on
/// quadratic-cost (pairwise) runs.
void write_eta_csv(const std::string& path, const SimResult& result,
                   bool pairwise, const HjbParams& params);

/// One-row run summary: mean_action,steps,stationary,nash_gap,eta.
void write_summary_csv(const std::string& path, const SimResult& result);

/// Budget-refinement table: I,epsilon,average,error,rate (rate empty on
/// the first level).
void write_table1_csv(const std::string& path,
                      const std::vector<RateTableRow>& rows);

}  // namespace egd
