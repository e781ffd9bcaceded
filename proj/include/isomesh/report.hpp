#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "isomesh/metrics.hpp"

namespace isomesh {

/// One row of the radius-sweep report.
struct SweepRow {
    double radius = 0.0;
    std::string method;
    std::size_t triangle_count = 0;
    std::size_t vertex_count = 0;
    double area = 0.0;
    std::optional<double> volume;
    std::optional<double> volume_rel_error;
};

uint64_t fnv1a64(std::string_view data);

/// Shortest round-trippable decimal form of d ("%.17g"); "na" columns are
/// handled by the writers, not here.
std::string format_double(double d);

/// CSV with a leading `# isomesh-report v1 config=0x...` comment, a header
/// row, then one row per entry. Missing values print as "na". The column
/// set is versioned: any change bumps the v-number in the comment line.
void write_report_csv(std::ostream& os, const std::vector<MetricsReport>& rows,
                      uint64_t config_hash);
void write_report_json(std::ostream& os, const std::vector<MetricsReport>& rows,
                       uint64_t config_hash);

/// `# isomesh-sweep v1 config=0x...`, columns radius,method,triangles,...
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows, uint64_t config_hash);

}  // namespace isomesh
