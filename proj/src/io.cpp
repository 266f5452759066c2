#include "flowlab/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace flowlab {

using nlohmann::json;

std::string instance_to_json(const Instance& instance) {
  json doc;
  doc["m"] = instance.machines;
  doc["allow_zero_size"] = instance.allow_zero_size;
  doc["jobs"] = json::array();
  for (const auto& j : instance.jobs) {
    json jj;
    jj["id"] = j.id;
    jj["r"] = j.release.str();
    jj["p"] = j.size.str();
    doc["jobs"].push_back(jj);
  }
  doc["meta"] = json::object();
  for (const auto& [k, v] : instance.meta) doc["meta"][k] = v;
  return doc.dump(2) + "\n";
}

Instance instance_from_json(const std::string& text) {
  json doc = json::parse(text);
  Instance inst;
  inst.machines = doc.at("m").get<int>();
  inst.allow_zero_size = doc.value("allow_zero_size", false);
  for (const auto& jj : doc.at("jobs")) {
    Job j;
    j.id = jj.at("id").get<int>();
    j.release = TimeQ::parse(jj.at("r").get<std::string>());
    j.size = TimeQ::parse(jj.at("p").get<std::string>());
    inst.jobs.push_back(j);
  }
  if (doc.contains("meta")) {
    for (auto it = doc["meta"].begin(); it != doc["meta"].end(); ++it) {
      inst.meta[it.key()] =
          it.value().is_string() ? it.value().get<std::string>() : it.value().dump();
    }
  }
  inst.sort_jobs();
  inst.check();
  return inst;
}

std::string schedule_to_jsonl(const Schedule& schedule) {
  std::ostringstream os;
  os << json{{"model", to_string(schedule.model)}}.dump() << "\n";
  for (const auto& s : schedule.segments) {
    json line;
    line["job"] = s.job;
    line["machine"] = s.machine;
    line["start"] = s.start.str();
    line["end"] = s.end.str();
    line["outcome"] = s.outcome == Outcome::Completed ? "completed" : "killed";
    os << line.dump() << "\n";
  }
  return os.str();
}

Schedule schedule_from_jsonl(const std::string& text) {
  Schedule sched;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    json doc = json::parse(line);
    if (doc.contains("model")) {
      sched.model = model_from_string(doc["model"].get<std::string>());
      continue;
    }
    ScheduleSegment s;
    s.job = doc.at("job").get<int>();
    s.machine = doc.at("machine").get<int>();
    s.start = TimeQ::parse(doc.at("start").get<std::string>());
    s.end = TimeQ::parse(doc.at("end").get<std::string>());
    std::string oc = doc.at("outcome").get<std::string>();
    if (oc == "completed") s.outcome = Outcome::Completed;
    else if (oc == "killed") s.outcome = Outcome::Killed;
    else throw std::invalid_argument("bad outcome: " + oc);
    sched.segments.push_back(s);
  }
  return sched;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << content;
}

void write_instance(const std::string& path, const Instance& instance) {
  write_file(path, instance_to_json(instance));
}

Instance read_instance(const std::string& path) {
  return instance_from_json(read_file(path));
}

void write_schedule(const std::string& path, const Schedule& schedule) {
  write_file(path, schedule_to_jsonl(schedule));
}

Schedule read_schedule(const std::string& path) {
  return schedule_from_jsonl(read_file(path));
}

}  // namespace flowlab
