#pragma once

#include <iosfwd>
#include <string>

#include "flowlab/types.hpp"

namespace flowlab {

// Instance file: one JSON document
//   {"m": int, "allow_zero_size": bool,
//    "jobs": [{"id": int, "r": "p/q", "p": "p/q"}, ...], "meta": {...}}
// Rationals are strings ("p/q", integer, or plain decimal), parsed exactly.
std::string instance_to_json(const Instance& instance);
Instance instance_from_json(const std::string& text);
void write_instance(const std::string& path, const Instance& instance);
Instance read_instance(const std::string& path);

// Schedule file: JSON lines. A {"model": ...} header line, then one segment
// per line: {"job", "machine", "start", "end", "outcome"}.
std::string schedule_to_jsonl(const Schedule& schedule);
Schedule schedule_from_jsonl(const std::string& text);
void write_schedule(const std::string& path, const Schedule& schedule);
Schedule read_schedule(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace flowlab
