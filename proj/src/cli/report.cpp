#include "outfit/cli/report.hpp"

#include <algorithm>
#include <iomanip>
#include <random>
#include <sstream>

#include "outfit/io.hpp"

namespace outfit::cli {

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::uint64_t query_seed(std::uint64_t seed, const std::string& id) {
  return seed ^ std::stoull(fingerprint(id), nullptr, 16);
}

void tile(std::ostringstream& out, const std::optional<std::string>& src, const std::string& label) {
  if (src)
    out << "<td><img src=\"" << escape(*src) << "\" alt=\"" << escape(label) << "\" height=\"120\"></td>";
  else
    out << "<td class=\"placeholder\">" << escape(label) << "</td>";
}

const char* kStyle =
    "<style>body{font-family:sans-serif}table{border-collapse:collapse;margin-bottom:1.5em}"
    "td,th{border:1px solid #ccc;padding:4px;text-align:center}"
    ".placeholder{width:80px;height:120px;background:#eee;color:#888;font-size:small}</style>\n";

std::string fixed(double v, int digits = 3) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

void stats_table(std::ostringstream& out, const std::string& title, const AgreementStats& s) {
  out << "<h2>" << escape(title) << "</h2>\n<p>threshold " << fixed(s.threshold) << ", " << s.queries.size()
      << " queries, " << s.excluded_queries << " excluded, confidence mass " << fixed(s.confidence_mass)
      << "</p>\n<table><tr><th>algorithm</th><th>raw score</th><th>normalised</th></tr>\n";
  for (std::size_t a = 0; a < s.algorithms.size(); ++a) {
    out << "<tr><td>" << escape(s.algorithms[a]) << "</td><td>" << fixed(s.raw_score[a]) << "</td><td>"
        << (s.normalized[a] ? fixed(*s.normalized[a]) : std::string("n/a")) << "</td></tr>\n";
  }
  out << "</table>\n";
}

void histogram_table(std::ostringstream& out, const std::string& title, const AgreementHistogram& h) {
  out << "<h3>" << escape(title) << " (" << h.queries << " queries)</h3>\n<table><tr><th>retained raters</th>";
  for (std::size_t i = 0; i < h.retained_counts.size(); ++i) out << "<th>" << i << "</th>";
  out << "</tr><tr><td>queries</td>";
  for (auto c : h.retained_counts) out << "<td>" << c << "</td>";
  out << "</tr></table>\n<table><tr><th>rating</th>";
  for (int r = kMinRating; r <= kMaxRating; ++r) out << "<th>" << r << "</th>";
  out << "</tr><tr><td>retained ratings</td>";
  for (auto c : h.ratings) out << "<td>" << c << "</td>";
  out << "</tr></table>\n";
}

}  // namespace

Gallery build_gallery(const std::vector<GalleryQuery>& queries, std::uint64_t seed, const ImageLookup& image_for) {
  Gallery g;
  g.seed = seed;
  for (const auto& q : queries) {
    GalleryGrid grid;
    grid.query_id = q.query_id;
    grid.query_src = image_for(q.query_id);
    if (!grid.query_src) g.warnings.push_back("missing image for query " + q.query_id);

    std::vector<std::string> order;
    for (const auto& [name, ids] : q.ranked) order.push_back(name);
    std::mt19937_64 rng(query_seed(seed, q.query_id));
    std::shuffle(order.begin(), order.end(), rng);

    for (const auto& name : order) {
      const auto& ids = q.ranked.at(name);
      GalleryRow row{name, {}};
      for (std::size_t c = 0; c < kGalleryColumns; ++c) {
        GalleryCell cell;
        if (c < ids.size()) {
          cell.item_id = ids[c];
          cell.src = image_for(ids[c]);
          if (!cell.src) g.warnings.push_back("missing image for item " + ids[c]);
        }
        row.cells.push_back(std::move(cell));
      }
      grid.rows.push_back(std::move(row));
    }
    g.grids.push_back(std::move(grid));
  }
  return g;
}

std::string render_gallery_html(const Gallery& g) {
  std::ostringstream out;
  out << "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\"><title>Recommendation gallery</title>\n" << kStyle
      << "</head><body>\n<h1>Recommendation gallery</h1>\n<p>row order seed: " << g.seed << ", queries: "
      << g.grids.size() << "</p>\n";
  for (const auto& grid : g.grids) {
    out << "<h2>query " << escape(grid.query_id) << "</h2>\n<table>\n<tr><th>query</th>";
    tile(out, grid.query_src, grid.query_id);
    out << "</tr>\n";
    for (std::size_t r = 0; r < grid.rows.size(); ++r) {
      // Rows are labelled by position; the algorithm sits in a data attribute.
      out << "<tr data-algorithm=\"" << escape(grid.rows[r].algorithm) << "\"><th>" << (r + 1) << "</th>";
      for (const auto& cell : grid.rows[r].cells) tile(out, cell.src, cell.item_id.empty() ? "-" : cell.item_id);
      out << "</tr>\n";
    }
    out << "</table>\n";
  }
  out << "</body></html>\n";
  return out.str();
}

std::string render_evaluation_html(const EvaluationSummary& s) {
  std::ostringstream out;
  out << "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\"><title>Evaluation</title>\n" << kStyle
      << "</head><body>\n<h1>Evaluation</h1>\n";
  stats_table(out, "All queries", s.overall);
  for (const auto& [cls, stats] : s.per_class) stats_table(out, cls + " queries", stats);
  if (s.agreement) {
    out << "<h2>Rater agreement</h2>\n";
    histogram_table(out, "solid", s.agreement->solid);
    histogram_table(out, "patterned", s.agreement->patterned);
  }
  if (s.solid) {
    out << "<h2>Solid retrievals by rating</h2>\n<table><tr><th>rating</th><th>lists</th><th>mean solid fraction</th></tr>\n";
    for (const auto& [rating, frac] : s.solid->mean_fraction)
      out << "<tr><td>" << rating << "</td><td>" << s.solid->lists.at(rating) << "</td><td>" << fixed(frac)
          << "</td></tr>\n";
    out << "</table>\n";
  }
  out << "</body></html>\n";
  return out.str();
}

}  // namespace outfit::cli
