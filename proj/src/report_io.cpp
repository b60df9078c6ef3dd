#include "anchorfree/report_io.hpp"

#include <array>
#include <charconv>
#include <cstdint>
#include <ostream>

namespace anchorfree {

std::string config_hash(const std::string& canonical_config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical_config) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = kHex[h & 0xf];
  return out;
}

std::string csv_field(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

void CsvWriter::row(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out_ << ',';
    out_ << csv_field(fields[i]);
  }
  out_ << "\r\n";
}

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

nlohmann::ordered_json topics_json(const TopicModel& model, const std::vector<std::string>& vocab,
                                   Index top_n, const SolverReport* report) {
  nlohmann::ordered_json j;
  j["f"] = model.n_topics();
  j["method"] = to_string(model.method);
  j["top_n"] = top_n;
  nlohmann::ordered_json topics = nlohmann::ordered_json::array();
  for (const auto& words : top_word_indices(model.c, top_n)) {
    nlohmann::ordered_json t;
    std::vector<std::string> tokens;
    std::vector<double> probs;
    const Index f = static_cast<Index>(topics.size());
    for (Index v : words) {
      tokens.push_back(static_cast<std::size_t>(v) < vocab.size() ? vocab[v]
                                                                  : "w" + std::to_string(v + 1));
      probs.push_back(model.c(v, f));
    }
    t["words"] = tokens;
    t["probs"] = probs;
    topics.push_back(std::move(t));
  }
  j["topics"] = std::move(topics);
  nlohmann::ordered_json e = nlohmann::ordered_json::array();
  for (Index r = 0; r < model.e.rows(); ++r) {
    std::vector<double> row(model.e.cols());
    for (Index c = 0; c < model.e.cols(); ++c) row[c] = model.e(r, c);
    e.push_back(row);
  }
  j["e"] = std::move(e);
  nlohmann::ordered_json diag;
  diag["sweeps"] = report ? report->sweeps : 0;
  diag["det_trajectory"] = report ? report->det_trajectory : std::vector<double>{};
  j["diagnostics"] = std::move(diag);
  return j;
}

nlohmann::ordered_json eval_report_json(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["coherence_per_topic"] = report.coherence_per_topic;
  j["sim_count"] = report.sim_count;
  j["clust_acc"] = report.clust_acc ? nlohmann::ordered_json(*report.clust_acc) : nullptr;
  j["recovery_err_c"] =
      report.recovery_err_c ? nlohmann::ordered_json(*report.recovery_err_c) : nullptr;
  j["recovery_err_e"] =
      report.recovery_err_e ? nlohmann::ordered_json(*report.recovery_err_e) : nullptr;
  j["top_words"] = report.top_words;
  return j;
}

}  // namespace anchorfree
