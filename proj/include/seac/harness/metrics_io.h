#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "seac/agent/trainer.h"

namespace seac {

// Plain-text tables: a "# <schema> v<version> key=value ..." line, a CSV
// header, then one row per record. Doubles use shortest round-trip formatting
// so identical runs produce identical bytes.

inline constexpr const char* kMetricsSchema = "seac-metrics";
inline constexpr const char* kEvalSchema = "seac-eval";
inline constexpr const char* kTraceSchema = "seac-trace";
inline constexpr const char* kProgressSchema = "seac-eval-progress";
inline constexpr const char* kTimingSchema = "seac-timing";
inline constexpr int kSchemaVersion = 1;

inline constexpr const char* kMetricsColumns = "episode,env_steps,env_seed,return,steps,energy,sim_time,outcome";
inline constexpr const char* kEvalColumns = "episode,env_seed,return,steps,energy,sim_time,outcome";
inline constexpr const char* kTraceColumns = "step,duration,frequency,pos_x,pos_y,force_x,force_y,reward";
inline constexpr const char* kProgressColumns =
    "env_steps,episodes,success_rate,mean_return,mean_steps,mean_sim_time";
inline constexpr const char* kTimingColumns = "episode,wall_clock";

Termination parse_termination(const std::string& text);

struct TableHeader {
  std::string schema;
  int version = 0;
  std::map<std::string, std::string> attributes;
};

std::string format_header(const std::string& schema, const std::map<std::string, std::string>& attributes,
                          const char* columns);

std::string format_metrics_row(const EpisodeRecord& r);
std::string format_eval_row(int index, const EpisodeRecord& r);
std::string format_trace_row(const StepTraceRow& r);

/// Evaluation table as written by `eval` and at the end of `train`.
struct EvalTable {
  TableHeader header;
  std::vector<EpisodeRecord> episodes;
};

void write_eval_table(const std::filesystem::path& path, const std::map<std::string, std::string>& attributes,
                      const std::vector<EpisodeRecord>& episodes);
/// Throws std::runtime_error on a missing file or a schema/column mismatch.
EvalTable read_eval_table(const std::filesystem::path& path);

void write_trace(const std::filesystem::path& path, const std::map<std::string, std::string>& attributes,
                 const std::vector<StepTraceRow>& rows);
std::vector<StepTraceRow> read_trace(const std::filesystem::path& path);

std::vector<EpisodeRecord> read_metrics(const std::filesystem::path& path);

}  // namespace seac
