#pragma once

#include <iosfwd>
#include <string>

#include "asal/core.hpp"

namespace asal {

/// Dense classification dataset with labels normalized to {-1, +1}.
struct Dataset {
  Matrix features;  // N x n
  Vector labels;    // entries in {-1, +1}

  std::int64_t rows() const { return features.rows(); }
  std::int64_t cols() const { return features.cols(); }
};

/// Parses LIBSVM text ("label idx:val idx:val ..." per line, 1-based strictly
/// increasing indices, '#' starts a comment). The feature count is the largest
/// index seen; missing entries are zero. Label alphabets {-1,+1}, {0,1} and
/// {1,2} are mapped onto {-1,+1}; anything else raises a ConfigError listing
/// the distinct labels. Malformed lines raise ParseError with the line number.
Dataset parse_libsvm(std::istream& in);
Dataset parse_libsvm_file(const std::string& path);

/// Canonical text form: "label idx:val ..." with 17-significant-digit values.
/// parse_libsvm(serialize_libsvm(d)) reproduces d exactly.
std::string serialize_libsvm(const Dataset& d);

}  // namespace asal
