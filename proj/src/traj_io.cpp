#include "sts/traj_io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sts {

namespace {

constexpr const char* kTrajHeader = "client_id,traj_id,seq,t_ms,x_m,y_m";
constexpr const char* kResultHeader = "query_traj,client_id,data_traj,cdds_s";

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = line.find(',', pos);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(pos));
      break;
    }
    out.push_back(line.substr(pos, comma - pos));
    pos = comma + 1;
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view s, T& value) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  const auto res = std::from_chars(first, last, value);
  return res.ec == std::errc() && res.ptr == last;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

LoadReport load_trajectories(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open trajectory file: " + path);
  }
  std::string line;
  if (!std::getline(in, line) || line != kTrajHeader) {
    throw std::runtime_error(path + ": missing or unexpected header, want '" +
                             std::string(kTrajHeader) + "'");
  }

  struct Raw {
    long seq;
    TrajPoint point;
  };
  std::vector<std::pair<std::string, std::string>> order;
  std::map<std::pair<std::string, std::string>, std::vector<Raw>> grouped;
  LoadReport report;

  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) {
      continue;
    }
    const auto fields = split_fields(line);
    long seq = 0;
    long long t = 0;
    double x = 0.0, y = 0.0;
    if (fields.size() != 6 || fields[0].empty() || fields[1].empty() ||
        !parse_number(fields[2], seq) || !parse_number(fields[3], t) ||
        !parse_number(fields[4], x) || !parse_number(fields[5], y)) {
      report.warnings.push_back("line " + std::to_string(lineno) +
                                ": malformed row rejected");
      continue;
    }
    auto key = std::make_pair(std::string(fields[0]), std::string(fields[1]));
    auto [it, fresh] = grouped.try_emplace(key);
    if (fresh) {
      order.push_back(key);
    }
    it->second.push_back({seq, {x, y, static_cast<TimestampMs>(t)}});
  }

  for (const auto& key : order) {
    auto& raws = grouped[key];
    std::stable_sort(raws.begin(), raws.end(),
                     [](const Raw& a, const Raw& b) { return a.seq < b.seq; });
    Trajectory traj;
    traj.client_id = key.first;
    traj.local_id = key.second;
    traj.points.reserve(raws.size());
    for (const Raw& r : raws) {
      traj.points.push_back(r.point);
    }
    try {
      validate_trajectory(traj);
    } catch (const std::exception& e) {
      report.warnings.push_back("trajectory " + key.first + "/" + key.second +
                                " rejected: " + e.what());
      continue;
    }
    report.trajectories.push_back(std::move(traj));
  }
  return report;
}

void write_trajectories(const std::string& path,
                        const std::vector<Trajectory>& trajectories) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write trajectory file: " + path);
  }
  out << kTrajHeader << "\n";
  for (const Trajectory& traj : trajectories) {
    long seq = 0;
    for (const TrajPoint& p : traj.points) {
      out << traj.client_id << ',' << traj.local_id << ',' << seq++ << ','
          << p.t << ',' << format_double(p.x) << ',' << format_double(p.y)
          << "\n";
    }
  }
}

void write_results(const std::string& path,
                   const std::vector<ResultRow>& rows) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write results file: " + path);
  }
  out << kResultHeader << "\n";
  char buf[40];
  for (const ResultRow& r : rows) {
    std::snprintf(buf, sizeof(buf), "%.6f", r.cdds_s);
    out << r.query_traj << ',' << r.client_id << ',' << r.data_traj << ','
        << buf << "\n";
  }
}

std::vector<ResultRow> read_results(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open results file: " + path);
  }
  std::string line;
  if (!std::getline(in, line) || line != kResultHeader) {
    throw std::runtime_error(path + ": missing or unexpected results header");
  }
  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    const auto fields = split_fields(line);
    double cdds_s = 0.0;
    if (fields.size() != 4 || !parse_number(fields[3], cdds_s)) {
      throw std::runtime_error(path + ": malformed results row: " + line);
    }
    rows.push_back({std::string(fields[0]), std::string(fields[1]),
                    std::string(fields[2]), cdds_s});
  }
  return rows;
}

void write_metrics(
    const std::string& path, const JoinMetrics& metrics,
    const std::vector<std::pair<std::string, std::string>>& extra) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write metrics file: " + path);
  }
  out << metrics.to_text();
  for (const auto& [k, v] : extra) {
    out << k << '=' << v << "\n";
  }
}

}  // namespace sts
