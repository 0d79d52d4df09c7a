#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "outfit/descriptor.hpp"
#include "outfit/recommenders/tar.hpp"

namespace outfit {

inline constexpr int kMinRating = -1;
inline constexpr int kMaxRating = 2;
inline constexpr std::size_t kRatingLevels = kMaxRating - kMinRating + 1;

/// One rater's overall ratings of every algorithm for one query.
struct RatingRecord {
  std::string query_id;
  std::string rater_id;
  std::vector<int> ratings;                // one per algorithm, each in [-1, 2]
  std::optional<PatternClass> query_class;  // needed only for agreement reports
};

struct RatingsTable {
  std::vector<std::string> algorithms;
  std::vector<RatingRecord> records;
};

/// CSV with header `query_id,rater_id,<algorithm>...[,query_class]`.
/// Throws DataError with the offending line number.
RatingsTable parse_ratings_csv(const std::string& text);
std::string ratings_to_csv(const RatingsTable& table);

/// gamma_i = sum over raters j of ||zeta_i - zeta_j||_1, for the raters of a
/// single query. Throws if rating vectors differ in length.
std::vector<double> disagreement(const std::vector<RatingRecord>& query_records);

/// Median; the mean of the middle pair for even counts. Throws on empty input.
double median(std::vector<double> values);

struct QueryScore {
  std::string query_id;
  std::size_t raters = 0;
  std::size_t retained = 0;
  double confidence = 0.0;               // retained / raters
  std::vector<double> retained_mean;     // per algorithm; empty when nothing retained
  bool contributes() const { return retained > 0; }
};

struct AgreementStats {
  std::vector<std::string> algorithms;
  double threshold = 0.0;                 // A_T
  std::vector<double> gamma;              // aligned with the input records
  std::vector<QueryScore> queries;        // ordered by query id
  std::vector<double> raw_score;          // S_a
  double confidence_mass = 0.0;           // sum of C_q over contributing queries
  std::vector<std::optional<double>> normalized;  // (S_a / confidence_mass + 1) / 3
  std::size_t excluded_queries = 0;       // no rater below the threshold
};

/// All gamma values of a record set, grouped by query.
std::vector<double> all_disagreements(const std::vector<RatingRecord>& records);

/// Aggregates with raters kept only when gamma < threshold (strict).
/// Queries with no kept rater contribute nothing and are tallied in
/// `excluded_queries`. Throws on an empty record set, a duplicate
/// (query, rater) pair, or inconsistent rating lengths.
AgreementStats score(const std::vector<RatingRecord>& records, double threshold,
                     std::vector<std::string> algorithms = {});

/// score() with the threshold set to the median gamma of the same records.
AgreementStats evaluate(const RatingsTable& table);

nlohmann::json stats_to_json(const AgreementStats& s);

/// A rated retrieval list: the rating one rater gave an algorithm on a query
/// and the descriptors that algorithm retrieved.
struct RatedRetrieval {
  int rating = 0;
  std::vector<PartDescriptor> retrieved;
};

struct SolidProbability {
  std::map<int, double> mean_fraction;  // rating -> mean fraction of solid retrievals
  std::map<int, std::size_t> lists;     // rating -> number of rated lists
};

SolidProbability solid_probability(const std::vector<RatedRetrieval>& rated,
                                   double threshold = kDefaultSolidThreshold);

struct AgreementHistogram {
  std::size_t queries = 0;
  std::vector<std::size_t> retained_counts;          // index = retained raters for a query
  std::array<std::size_t, kRatingLevels> ratings{};  // retained ratings, index = rating + 1
};

struct AgreementReport {
  AgreementHistogram solid;
  AgreementHistogram patterned;
};

/// Splits by query class; every record must carry one. Throws DataError
/// otherwise.
AgreementReport agreement_report(const std::vector<RatingRecord>& records, double threshold);

nlohmann::json report_to_json(const AgreementReport& r);

}  // namespace outfit
