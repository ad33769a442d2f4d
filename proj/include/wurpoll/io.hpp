#pragma once

#include <span>
#include <string>
#include <vector>

#include "wurpoll/metrics.hpp"
#include "wurpoll/steplog.hpp"

namespace wurpoll {

// Shortest decimal form that round-trips the exact double; locale-independent,
// so identical runs serialize to identical bytes.
std::string format_double(double v);

// All CSV outputs start with a "# config <hash>" provenance comment when a
// hash is supplied; the header is the first non-comment line.
void write_steps_csv(const std::string& path, std::span<const StepLog> logs,
                     const std::string& config_hash = "");
void write_updates_csv(const std::string& path, std::span<const UpdateLogRow> rows,
                       const std::string& config_hash = "");
void write_index_dump_csv(const std::string& path, std::span<const IndexLogRow> rows,
                          const std::string& config_hash = "");
void write_summary_json(const std::string& path, const RunSummary& summary);

std::vector<StepLog> read_steps_csv(const std::string& path);
std::vector<UpdateLogRow> read_updates_csv(const std::string& path);

}  // namespace wurpoll
