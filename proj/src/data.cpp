#include "powerfit/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>

#include "powerfit/errors.hpp"

namespace powerfit {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::int64_t parse_int(std::string_view field, std::size_t line,
                       const char *name) {
  field = trim(field);
  std::int64_t v = 0;
  const auto *end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (field.empty() || ec != std::errc() || ptr != end) {
    throw ParseError(std::string("malformed ") + name + " '" +
                         std::string(field) + "'",
                     line);
  }
  return v;
}

}  // namespace

void CompensatedSum::add(double v) {
  const double t = sum_ + v;
  if (std::fabs(sum_) >= std::fabs(v)) {
    comp_ += (sum_ - t) + v;
  } else {
    comp_ += (v - t) + sum_;
  }
  sum_ = t;
}

FrequencyTable::FrequencyTable(std::vector<FrequencyRow> rows)
    : rows_(std::move(rows)) {
  if (rows_.empty()) throw EmptyInputError("frequency table has no rows");
  std::sort(rows_.begin(), rows_.end(),
            [](const auto &a, const auto &b) { return a.x < b.x; });
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const auto &r = rows_[i];
    if (r.x < 1) {
      throw InvalidParamsError("x must be >= 1, got " + std::to_string(r.x));
    }
    if (r.count < 1) {
      throw InvalidParamsError("count must be >= 1, got " +
                               std::to_string(r.count));
    }
    if (i > 0 && rows_[i - 1].x == r.x) {
      throw DuplicateXError("duplicate x = " + std::to_string(r.x));
    }
    n_ += r.count;
  }
}

FrequencyTable load_frequency_table(std::istream &in) {
  std::vector<FrequencyRow> rows;
  std::string raw;
  std::size_t line_no = 0;
  bool seen_header = false;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string_view::npos ||
        line.find(',', comma + 1) != std::string_view::npos) {
      throw ParseError("expected exactly two comma-separated fields", line_no);
    }
    if (!seen_header) {
      if (trim(line.substr(0, comma)) != "x" ||
          trim(line.substr(comma + 1)) != "count") {
        throw ParseError("expected header 'x,count'", line_no);
      }
      seen_header = true;
      continue;
    }
    const auto x = parse_int(line.substr(0, comma), line_no, "x");
    const auto count = parse_int(line.substr(comma + 1), line_no, "count");
    if (x < 1) throw ParseError("x must be >= 1", line_no);
    if (count < 1) throw ParseError("count must be >= 1", line_no);
    rows.push_back({x, count});
  }
  if (rows.empty()) throw EmptyInputError("no data rows in input");
  return FrequencyTable(std::move(rows));
}

void write_frequency_table(std::ostream &out, const FrequencyTable &table) {
  out << "x,count\n";
  for (const auto &r : table.rows()) out << r.x << ',' << r.count << '\n';
}

SufficientStats sufficient_stats(const FrequencyTable &table) {
  SufficientStats s;
  CompensatedSum log_sum;
  for (const auto &r : table.rows()) {
    s.n += r.count;
    s.sum_z += r.x * r.count;
    log_sum.add(static_cast<double>(r.count) *
                std::log(static_cast<double>(r.x)));
  }
  s.sum_log_z = log_sum.value();
  return s;
}

double empirical_cdf(const FrequencyTable &table, std::int64_t x) {
  std::int64_t below = 0;
  for (const auto &r : table.rows()) {
    if (r.x > x) break;
    below += r.count;
  }
  return static_cast<double>(below) / static_cast<double>(table.n());
}

CurveData to_curve(const FrequencyTable &table) {
  CurveData curve;
  curve.points.reserve(table.size());
  const double n = static_cast<double>(table.n());
  for (const auto &r : table.rows()) {
    curve.points.push_back({r.x, static_cast<double>(r.count) / n});
  }
  return curve;
}

CurveData truncate_distribution(const CurveData &curve, std::int64_t x_cut) {
  CurveData out;
  for (const auto &p : curve.points) {
    if (p.x <= x_cut) out.points.push_back(p);
  }
  if (out.points.empty()) {
    throw EmptyResultError("no points with x <= " + std::to_string(x_cut));
  }
  return out;
}

CurveData truncate_data(const FrequencyTable &table, std::int64_t x_cut) {
  std::int64_t kept = 0;
  for (const auto &r : table.rows()) {
    if (r.x <= x_cut) kept += r.count;
  }
  if (kept == 0) {
    throw EmptyResultError("no rows with x <= " + std::to_string(x_cut));
  }
  CurveData out;
  for (const auto &r : table.rows()) {
    if (r.x > x_cut) break;
    out.points.push_back(
        {r.x, static_cast<double>(r.count) / static_cast<double>(kept)});
  }
  return out;
}

CurveData truncate_data(const CurveData &curve, std::int64_t x_cut) {
  CurveData out = truncate_distribution(curve, x_cut);
  CompensatedSum total;
  for (const auto &p : out.points) total.add(p.y);
  const double mass = total.value();
  for (auto &p : out.points) p.y /= mass;
  return out;
}

std::uint64_t table_checksum(const FrequencyTable &table) {
  std::ostringstream os;
  write_frequency_table(os, table);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : os.str()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace powerfit
