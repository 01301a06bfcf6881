#include "seac/harness/metrics_io.h"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

namespace seac {
namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string part;
  while (std::getline(ss, part, sep)) out.push_back(part);
  return out;
}

TableHeader parse_header_line(const std::string& line, const std::filesystem::path& path) {
  if (line.rfind("# ", 0) != 0) throw std::runtime_error(path.string() + ": missing schema header line");
  const auto parts = split(line.substr(2), ' ');
  if (parts.size() < 2 || parts[1].size() < 2 || parts[1][0] != 'v') {
    throw std::runtime_error(path.string() + ": malformed schema header");
  }
  TableHeader h;
  h.schema = parts[0];
  h.version = std::stoi(parts[1].substr(1));
  for (std::size_t i = 2; i < parts.size(); ++i) {
    const auto eq = parts[i].find('=');
    if (eq != std::string::npos) h.attributes[parts[i].substr(0, eq)] = parts[i].substr(eq + 1);
  }
  return h;
}

struct RawTable {
  TableHeader header;
  std::vector<std::vector<std::string>> rows;
};

RawTable read_table(const std::filesystem::path& path, const char* schema, const char* columns) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path.string() + ": empty file");
  RawTable t;
  t.header = parse_header_line(line, path);
  if (t.header.schema != schema || t.header.version != kSchemaVersion) {
    throw std::runtime_error(fmt::format("{}: schema '{} v{}' where '{} v{}' was expected", path.string(),
                                         t.header.schema, t.header.version, schema, kSchemaVersion));
  }
  if (!std::getline(in, line) || line != columns) {
    throw std::runtime_error(path.string() + ": unexpected column set '" + line + "'");
  }
  const std::size_t ncols = split(columns, ',').size();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split(line, ',');
    if (cells.size() != ncols) throw std::runtime_error(path.string() + ": ragged row '" + line + "'");
    t.rows.push_back(std::move(cells));
  }
  return t;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

}  // namespace

Termination parse_termination(const std::string& text) {
  for (auto r : {Termination::Running, Termination::GoalReached, Termination::Crashed, Termination::Timeout}) {
    if (text == to_string(r)) return r;
  }
  throw std::runtime_error("unknown outcome '" + text + "'");
}

std::string format_header(const std::string& schema, const std::map<std::string, std::string>& attributes,
                          const char* columns) {
  std::string line = fmt::format("# {} v{}", schema, kSchemaVersion);
  for (const auto& [k, v] : attributes) line += fmt::format(" {}={}", k, v);
  return line + "\n" + columns + "\n";
}

std::string format_metrics_row(const EpisodeRecord& r) {
  return fmt::format("{},{},{},{},{},{},{},{}\n", r.episode, r.env_steps, r.env_seed, r.ret, r.steps, r.energy,
                     r.sim_time, to_string(r.outcome));
}

std::string format_eval_row(int index, const EpisodeRecord& r) {
  return fmt::format("{},{},{},{},{},{},{}\n", index, r.env_seed, r.ret, r.steps, r.energy, r.sim_time,
                     to_string(r.outcome));
}

std::string format_trace_row(const StepTraceRow& r) {
  return fmt::format("{},{},{},{},{},{},{},{}\n", r.step, r.duration, r.frequency, r.position.x, r.position.y,
                     r.force.x, r.force.y, r.reward);
}

void write_eval_table(const std::filesystem::path& path, const std::map<std::string, std::string>& attributes,
                      const std::vector<EpisodeRecord>& episodes) {
  auto out = open_for_write(path);
  out << format_header(kEvalSchema, attributes, kEvalColumns);
  for (std::size_t i = 0; i < episodes.size(); ++i) out << format_eval_row(static_cast<int>(i), episodes[i]);
}

EvalTable read_eval_table(const std::filesystem::path& path) {
  const RawTable raw = read_table(path, kEvalSchema, kEvalColumns);
  EvalTable t;
  t.header = raw.header;
  for (const auto& c : raw.rows) {
    EpisodeRecord r;
    r.episode = std::stoll(c[0]);
    r.env_seed = std::stoull(c[1]);
    r.ret = std::stod(c[2]);
    r.steps = std::stoi(c[3]);
    r.energy = std::stod(c[4]);
    r.sim_time = std::stod(c[5]);
    r.outcome = parse_termination(c[6]);
    t.episodes.push_back(r);
  }
  return t;
}

void write_trace(const std::filesystem::path& path, const std::map<std::string, std::string>& attributes,
                 const std::vector<StepTraceRow>& rows) {
  auto out = open_for_write(path);
  out << format_header(kTraceSchema, attributes, kTraceColumns);
  for (const auto& r : rows) out << format_trace_row(r);
}

std::vector<StepTraceRow> read_trace(const std::filesystem::path& path) {
  const RawTable raw = read_table(path, kTraceSchema, kTraceColumns);
  std::vector<StepTraceRow> rows;
  for (const auto& c : raw.rows) {
    rows.push_back({std::stoi(c[0]), std::stod(c[1]), std::stod(c[2]), {std::stod(c[3]), std::stod(c[4])},
                    {std::stod(c[5]), std::stod(c[6])}, std::stod(c[7])});
  }
  return rows;
}

std::vector<EpisodeRecord> read_metrics(const std::filesystem::path& path) {
  const RawTable raw = read_table(path, kMetricsSchema, kMetricsColumns);
  std::vector<EpisodeRecord> out;
  for (const auto& c : raw.rows) {
    EpisodeRecord r;
    r.episode = std::stoll(c[0]);
    r.env_steps = std::stoll(c[1]);
    r.env_seed = std::stoull(c[2]);
    r.ret = std::stod(c[3]);
    r.steps = std::stoi(c[4]);
    r.energy = std::stod(c[5]);
    r.sim_time = std::stod(c[6]);
    r.outcome = parse_termination(c[7]);
    out.push_back(r);
  }
  return out;
}

}  // namespace seac
