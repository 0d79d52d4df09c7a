#include "outfit/eval.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

#include "outfit/io.hpp"

namespace outfit {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string{} : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::map<std::string, std::vector<std::size_t>> group_by_query(const std::vector<RatingRecord>& records) {
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < records.size(); ++i) groups[records[i].query_id].push_back(i);
  return groups;
}

// gamma for every record, aligned with `records`.
std::vector<double> gammas(const std::vector<RatingRecord>& records,
                           const std::map<std::string, std::vector<std::size_t>>& groups) {
  std::vector<double> out(records.size(), 0.0);
  for (const auto& [qid, idx] : groups) {
    std::vector<RatingRecord> rows;
    for (std::size_t i : idx) rows.push_back(records[i]);
    const auto g = disagreement(rows);
    for (std::size_t r = 0; r < idx.size(); ++r) out[idx[r]] = g[r];
  }
  return out;
}

}  // namespace

RatingsTable parse_ratings_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  RatingsTable table;
  bool header_seen = false;
  bool has_class = false;
  std::size_t columns = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split_csv_line(line);
    if (!header_seen) {
      if (cells.size() < 3 || cells[0] != "query_id" || cells[1] != "rater_id")
        throw DataError("ratings line " + std::to_string(lineno) +
                        ": header must start with query_id,rater_id and name at least one algorithm");
      has_class = cells.back() == "query_class";
      table.algorithms.assign(cells.begin() + 2, cells.end() - (has_class ? 1 : 0));
      if (table.algorithms.empty()) throw DataError("ratings: no algorithm columns");
      columns = cells.size();
      header_seen = true;
      continue;
    }
    if (cells.size() != columns)
      throw DataError("ratings line " + std::to_string(lineno) + ": expected " + std::to_string(columns) +
                      " columns, got " + std::to_string(cells.size()));
    RatingRecord r;
    r.query_id = cells[0];
    r.rater_id = cells[1];
    for (std::size_t a = 0; a < table.algorithms.size(); ++a) {
      int v = 0;
      try {
        std::size_t used = 0;
        v = std::stoi(cells[2 + a], &used);
        if (used != cells[2 + a].size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw DataError("ratings line " + std::to_string(lineno) + ": '" + cells[2 + a] +
                        "' is not an integer rating");
      }
      if (v < kMinRating || v > kMaxRating)
        throw DataError("ratings line " + std::to_string(lineno) + ": rating " + std::to_string(v) +
                        " outside [-1, 2]");
      r.ratings.push_back(v);
    }
    if (has_class) {
      const std::string& c = cells.back();
      if (c == "solid")
        r.query_class = PatternClass::Solid;
      else if (c == "patterned")
        r.query_class = PatternClass::Patterned;
      else if (!c.empty())
        throw DataError("ratings line " + std::to_string(lineno) + ": unknown query_class '" + c + "'");
    }
    table.records.push_back(std::move(r));
  }
  if (!header_seen) throw DataError("ratings: missing header");
  return table;
}

std::string ratings_to_csv(const RatingsTable& table) {
  const bool has_class = std::any_of(table.records.begin(), table.records.end(),
                                     [](const RatingRecord& r) { return r.query_class.has_value(); });
  std::ostringstream out;
  out << "query_id,rater_id";
  for (const auto& a : table.algorithms) out << ',' << a;
  if (has_class) out << ",query_class";
  out << '\n';
  for (const auto& r : table.records) {
    out << r.query_id << ',' << r.rater_id;
    for (int v : r.ratings) out << ',' << v;
    if (has_class) out << ',' << (r.query_class ? to_string(*r.query_class) : "");
    out << '\n';
  }
  return out.str();
}

std::vector<double> disagreement(const std::vector<RatingRecord>& query_records) {
  std::vector<double> g(query_records.size(), 0.0);
  if (query_records.empty()) return g;
  const std::size_t A = query_records.front().ratings.size();
  for (const auto& r : query_records)
    if (r.ratings.size() != A) throw std::invalid_argument("disagreement: inconsistent number of algorithms");
  for (std::size_t i = 0; i < query_records.size(); ++i)
    for (std::size_t j = 0; j < query_records.size(); ++j)
      for (std::size_t a = 0; a < A; ++a)
        g[i] += std::abs(query_records[i].ratings[a] - query_records[j].ratings[a]);
  return g;
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of empty set");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::vector<double> all_disagreements(const std::vector<RatingRecord>& records) {
  return gammas(records, group_by_query(records));
}

AgreementStats score(const std::vector<RatingRecord>& records, double threshold,
                     std::vector<std::string> algorithms) {
  if (records.empty()) throw std::invalid_argument("score: empty record set");
  const std::size_t A = records.front().ratings.size();
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& r : records) {
    if (r.ratings.size() != A) throw std::invalid_argument("score: inconsistent number of algorithms");
    if (!seen.insert({r.query_id, r.rater_id}).second)
      throw std::invalid_argument("score: duplicate rating by '" + r.rater_id + "' on '" + r.query_id + "'");
  }
  if (algorithms.empty())
    for (std::size_t a = 0; a < A; ++a) algorithms.push_back("algo" + std::to_string(a));
  if (algorithms.size() != A) throw std::invalid_argument("score: algorithm names do not match ratings");

  AgreementStats s;
  s.algorithms = std::move(algorithms);
  s.threshold = threshold;
  const auto groups = group_by_query(records);
  s.gamma = gammas(records, groups);
  s.raw_score.assign(A, 0.0);

  for (const auto& [qid, idx] : groups) {
    QueryScore q;
    q.query_id = qid;
    q.raters = idx.size();
    std::vector<double> sums(A, 0.0);
    for (std::size_t i : idx) {
      if (!(s.gamma[i] < threshold)) continue;
      ++q.retained;
      for (std::size_t a = 0; a < A; ++a) sums[a] += records[i].ratings[a];
    }
    q.confidence = static_cast<double>(q.retained) / static_cast<double>(q.raters);
    if (q.contributes()) {
      q.retained_mean.resize(A);
      for (std::size_t a = 0; a < A; ++a) {
        q.retained_mean[a] = sums[a] / static_cast<double>(q.retained);
        s.raw_score[a] += q.confidence * q.retained_mean[a];
      }
      s.confidence_mass += q.confidence;
    } else {
      ++s.excluded_queries;
    }
    s.queries.push_back(std::move(q));
  }

  s.normalized.assign(A, std::nullopt);
  if (s.confidence_mass > 0.0)
    for (std::size_t a = 0; a < A; ++a)
      s.normalized[a] = (s.raw_score[a] / s.confidence_mass - kMinRating) / (kMaxRating - kMinRating);
  return s;
}

AgreementStats evaluate(const RatingsTable& table) {
  if (table.records.empty()) throw std::invalid_argument("evaluate: empty record set");
  return score(table.records, median(all_disagreements(table.records)), table.algorithms);
}

nlohmann::json stats_to_json(const AgreementStats& s) {
  nlohmann::json algos = nlohmann::json::array();
  for (std::size_t a = 0; a < s.algorithms.size(); ++a) {
    algos.push_back({{"name", s.algorithms[a]},
                     {"raw_score", s.raw_score[a]},
                     {"normalized", s.normalized[a] ? nlohmann::json(*s.normalized[a]) : nlohmann::json(nullptr)}});
  }
  std::size_t contributing = s.queries.size() - s.excluded_queries;
  return {{"agreement_threshold", s.threshold}, {"queries", s.queries.size()},
          {"contributing_queries", contributing}, {"excluded_queries", s.excluded_queries},
          {"confidence_mass", s.confidence_mass}, {"algorithms", algos}};
}

SolidProbability solid_probability(const std::vector<RatedRetrieval>& rated, double threshold) {
  SolidProbability out;
  std::map<int, double> sum;
  for (const auto& r : rated) {
    if (r.retrieved.empty()) continue;
    std::size_t solid = 0;
    for (const auto& d : r.retrieved)
      if (solid_pattern_classify(d, threshold) == PatternClass::Solid) ++solid;
    sum[r.rating] += static_cast<double>(solid) / static_cast<double>(r.retrieved.size());
    ++out.lists[r.rating];
  }
  for (const auto& [rating, total] : sum) out.mean_fraction[rating] = total / static_cast<double>(out.lists[rating]);
  return out;
}

AgreementReport agreement_report(const std::vector<RatingRecord>& records, double threshold) {
  AgreementReport rep;
  if (records.empty()) return rep;
  const auto groups = group_by_query(records);
  const auto g = gammas(records, groups);
  for (const auto& [qid, idx] : groups) {
    const auto& cls = records[idx.front()].query_class;
    for (std::size_t i : idx)
      if (records[i].query_class != cls || !cls)
        throw DataError("agreement report: query '" + qid + "' lacks a consistent query_class");
    AgreementHistogram& h = *cls == PatternClass::Solid ? rep.solid : rep.patterned;
    std::size_t retained = 0;
    for (std::size_t i : idx) {
      if (!(g[i] < threshold)) continue;
      ++retained;
      for (int v : records[i].ratings) ++h.ratings[static_cast<std::size_t>(v - kMinRating)];
    }
    if (h.retained_counts.size() <= retained) h.retained_counts.resize(retained + 1, 0);
    ++h.retained_counts[retained];
    ++h.queries;
  }
  return rep;
}

nlohmann::json report_to_json(const AgreementReport& r) {
  auto one = [](const AgreementHistogram& h) {
    return nlohmann::json{{"queries", h.queries}, {"retained_counts", h.retained_counts}, {"ratings", h.ratings}};
  };
  return {{"solid", one(r.solid)}, {"patterned", one(r.patterned)}};
}

}  // namespace outfit
