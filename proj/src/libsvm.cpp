#include "asal/libsvm.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>
#include <vector>

namespace asal {

namespace {

// Full-token double parse; accepts an optional leading '+' (common in labels).
bool parse_double(std::string_view tok, double& out) {
  if (!tok.empty() && tok.front() == '+') {
    tok.remove_prefix(1);
    if (tok.empty() || tok.front() == '-' || tok.front() == '+') return false;
  }
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

bool parse_index(std::string_view tok, long& out) {
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

struct RawRow {
  double label;
  std::vector<std::pair<long, double>> entries;
};

}  // namespace

Dataset parse_libsvm(std::istream& in) {
  std::vector<RawRow> rows;
  long max_index = 0;
  std::set<double> distinct_labels;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    std::size_t pos = 0;
    auto next_token = [&]() -> std::string_view {
      while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r')) {
        ++pos;
      }
      const std::size_t start = pos;
      while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t' && line[pos] != '\r') {
        ++pos;
      }
      return std::string_view(line).substr(start, pos - start);
    };

    const std::string_view label_tok = next_token();
    if (label_tok.empty()) {
      continue;  // blank line
    }
    RawRow row;
    if (!parse_double(label_tok, row.label)) {
      throw ParseError(line_no, "non-numeric label '" + std::string(label_tok) + "'");
    }

    long prev_index = 0;
    for (std::string_view tok = next_token(); !tok.empty(); tok = next_token()) {
      const auto colon = tok.find(':');
      if (colon == std::string_view::npos) {
        throw ParseError(line_no, "malformed token '" + std::string(tok) + "': expected idx:val");
      }
      long index = 0;
      double value = 0.0;
      if (!parse_index(tok.substr(0, colon), index) || index < 1) {
        throw ParseError(line_no, "malformed feature index in '" + std::string(tok) + "'");
      }
      if (!parse_double(tok.substr(colon + 1), value)) {
        throw ParseError(line_no, "malformed feature value in '" + std::string(tok) + "'");
      }
      if (index <= prev_index) {
        throw ParseError(line_no, "feature indices must be strictly increasing (" +
                                      std::to_string(index) + " after " +
                                      std::to_string(prev_index) + ")");
      }
      prev_index = index;
      row.entries.emplace_back(index, value);
    }
    max_index = std::max(max_index, prev_index);
    distinct_labels.insert(row.label);
    rows.push_back(std::move(row));
  }

  // Label normalization. {-1,+1} passes through, {0,1} maps 0 -> -1,
  // {1,2} maps 2 -> -1; anything else is rejected.
  double negative_label = -1.0;
  if (!rows.empty()) {
    auto subset_of = [&](std::initializer_list<double> allowed) {
      return std::all_of(distinct_labels.begin(), distinct_labels.end(), [&](double l) {
        return std::find(allowed.begin(), allowed.end(), l) != allowed.end();
      });
    };
    if (subset_of({-1.0, 1.0})) {
      negative_label = -1.0;
    } else if (subset_of({0.0, 1.0})) {
      negative_label = 0.0;
    } else if (subset_of({1.0, 2.0})) {
      negative_label = 2.0;
    } else {
      std::ostringstream msg;
      msg << "cannot map label set {";
      bool first = true;
      for (double l : distinct_labels) {
        msg << (first ? "" : ", ") << l;
        first = false;
      }
      msg << "} onto {-1, +1}";
      throw ConfigError(msg.str());
    }
  }

  Dataset d;
  d.features = Matrix::Zero(static_cast<std::int64_t>(rows.size()), max_index);
  d.labels = Vector(static_cast<std::int64_t>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    d.labels[static_cast<std::int64_t>(i)] = (rows[i].label == negative_label) ? -1.0 : 1.0;
    for (const auto& [index, value] : rows[i].entries) {
      d.features(static_cast<std::int64_t>(i), index - 1) = value;
    }
  }
  return d;
}

Dataset parse_libsvm_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open dataset file '" + path + "'");
  }
  return parse_libsvm(in);
}

std::string serialize_libsvm(const Dataset& d) {
  std::string out;
  char buf[64];
  for (std::int64_t i = 0; i < d.rows(); ++i) {
    std::snprintf(buf, sizeof(buf), "%g", d.labels[i]);
    out += buf;
    for (std::int64_t j = 0; j < d.cols(); ++j) {
      const double v = d.features(i, j);
      if (v != 0.0) {
        std::snprintf(buf, sizeof(buf), " %lld:%.17g", static_cast<long long>(j + 1), v);
        out += buf;
      }
    }
    out += '\n';
  }
  return out;
}

}  // namespace asal
