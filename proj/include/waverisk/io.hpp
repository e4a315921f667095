#pragma once

#include <string>
#include <vector>

#include "waverisk/risk.hpp"
#include "waverisk/signal.hpp"
#include "waverisk/threshold.hpp"

namespace waverisk {

// All writers go through a temp file plus rename so a crashed run never
// leaves a partial file behind. Numbers are printed with %.17g: reruns must
// be byte-identical and round-trips exact.

void write_text_atomic(const std::string& path, const std::string& content);

// One sample per line.
Signal read_signal(const std::string& path);
std::string format_signal(const Signal& x);

// level,index,value rows; the scaling block is level -1.
std::string format_pyramid_csv(const CoeffPyramid& p);

// level,index,kept rows, same level convention.
std::string format_mask_csv(const RetentionMask& m);

std::string format_report_csv(const std::vector<RiskRow>& rows);
std::string format_rate_fit_footer(const std::vector<RateFit>& fits);

// Reads a report back, skipping '#' footer lines. The header must match
// format_report_csv exactly.
std::vector<RiskRow> read_report_csv(const std::string& path);

}  // namespace waverisk
