#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "anchorfree/anchorfree.hpp"
#include "anchorfree/eval.hpp"
#include "anchorfree/topic_model.hpp"

namespace anchorfree {

/// 64-bit FNV-1a of a canonical configuration string, as 16 hex digits.
std::string config_hash(const std::string& canonical_config);

/// RFC 4180 writer: CRLF line ends; fields containing a comma, quote, CR or
/// LF are quoted with embedded quotes doubled.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}
  void row(const std::vector<std::string>& fields);

 private:
  std::ostream& out_;
};

std::string csv_field(const std::string& field);
/// Shortest decimal that reads back as the same double.
std::string format_double(double v);

/// {f, method, top_n, topics: [{words, probs}], e, diagnostics: {sweeps,
/// det_trajectory}}. Words are the top_n most probable per topic, probs in
/// descending order. `report` may be null (no AO diagnostics).
nlohmann::ordered_json topics_json(const TopicModel& model, const std::vector<std::string>& vocab,
                                   Index top_n, const SolverReport* report);

nlohmann::ordered_json eval_report_json(const EvalReport& report);

}  // namespace anchorfree
