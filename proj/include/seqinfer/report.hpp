// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "seqinfer/harness.hpp"

namespace seqinfer {

enum class ReportFormat { Csv, Json };

/// Numbers with 6 significant digits.
std::string format_number(double x);

/// CSV columns: mu,method,L_pct,U_pct,L_se,U_se,mean_length,mean_T.
std::string render_report(const CoverageReport& report, ReportFormat format);
void write_report(const CoverageReport& report, const std::filesystem::path& path, ReportFormat format);
CoverageReport parse_report(std::string_view text, ReportFormat format);

/// CSV columns: delta,mu,statistic,2.5,5,10,20,50,80,90,95,97.5.
std::string render_quantile_table(const QuantileTable& table, ReportFormat format);
void write_quantile_table(const QuantileTable& table, const std::filesystem::path& path, ReportFormat format);

std::string interval_to_json(const IntervalResult& result);

}  // namespace seqinfer
