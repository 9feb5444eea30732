#include "migsched/json_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace migsched {

json rational_to_json(const Rational& value) { return to_string(value); }

Rational rational_from_json(const json& value) {
  if (value.is_number_integer()) return Rational(value.get<long>());
  if (value.is_string()) return parse_rational(value.get<std::string>());
  if (value.is_number_float()) {
    // Floats are accepted through their shortest decimal text.
    std::ostringstream os;
    os << value.dump();
    return parse_rational(os.str());
  }
  throw std::invalid_argument("expected a rational, got " + value.dump());
}

Instance instance_from_json(const json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("instance must be a JSON object");
  const int hosts = doc.at("hosts").get<int>();
  const int dim = doc.value("dim", 1);
  const int horizon = doc.value("horizon", 0);
  std::vector<Job> jobs;
  for (const auto& item : doc.at("jobs")) {
    Job j;
    j.id = item.at("id").get<int>();
    j.release = item.at("release").get<int>();
    j.due = item.at("due").get<int>();
    j.length = item.at("length").get<int>();
    const auto& demand = item.at("demand");
    if (demand.is_array()) {
      for (const auto& s : demand) j.demand.push_back(rational_from_json(s));
    } else {
      j.demand.push_back(rational_from_json(demand));
    }
    if (item.contains("weight")) {
      j.weight = rational_from_json(item.at("weight"));
    } else {
      j.weight = area(j);
    }
    jobs.push_back(std::move(j));
  }
  return Instance(std::move(jobs), hosts, dim, horizon);
}

json instance_to_json(const Instance& instance) {
  json jobs = json::array();
  for (const auto& j : instance.jobs()) {
    json demand = json::array();
    for (const auto& s : j.demand) demand.push_back(rational_to_json(s));
    jobs.push_back({{"id", j.id},
                    {"release", j.release},
                    {"due", j.due},
                    {"length", j.length},
                    {"weight", rational_to_json(j.weight)},
                    {"demand", demand}});
  }
  return {{"hosts", instance.hosts()}, {"dim", instance.dim()}, {"horizon", instance.horizon()}, {"jobs", jobs}};
}

Schedule schedule_from_json(const json& doc) {
  Schedule schedule;
  const json& placements = doc.contains("placements") ? doc.at("placements") : doc;
  for (auto it = placements.begin(); it != placements.end(); ++it) {
    int id = std::stoi(it.key());
    auto& list = schedule.placements()[id];
    for (const auto& pair : it.value()) {
      if (!pair.is_array() || pair.size() != 2) {
        throw std::invalid_argument("placement must be [host, slot]");
      }
      list.push_back({pair[0].get<int>(), pair[1].get<int>()});
    }
  }
  return schedule;
}

json schedule_to_json(const Schedule& schedule) {
  Schedule canonical = schedule;
  canonical.normalize();
  json placements = json::object();
  for (const auto& [id, list] : canonical.placements()) {
    json arr = json::array();
    for (const auto& p : list) arr.push_back({p.host, p.slot});
    placements[std::to_string(id)] = arr;
  }
  return {{"placements", placements}};
}

json report_to_json(const ValidationReport& report) {
  json violations = json::array();
  for (const auto& v : report.violations) {
    json entry = {{"kind", to_string(v.kind)}};
    if (v.job >= 0 || v.kind == ViolationKind::UnknownJob) entry["job"] = v.job;
    if (v.host >= 0) entry["host"] = v.host;
    if (v.slot >= 0) entry["slot"] = v.slot;
    if (v.dimension >= 0) entry["dimension"] = v.dimension;
    violations.push_back(entry);
  }
  return {{"feasible", report.feasible},
          {"violations", violations},
          {"completed_ids", report.completed_ids},
          {"total_weight", rational_to_json(report.total_weight)},
          {"total_area", rational_to_json(report.total_area)}};
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const json& doc) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

Instance load_instance(const std::filesystem::path& path) { return instance_from_json(read_json_file(path)); }

std::string instance_digest(const Instance& instance) {
  const std::string text = instance_to_json(instance).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace migsched
