#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace citenet {

/// True iff `candidate` has the shape NNNN-NNNC (C a digit or 'X') and the
/// mod-11 weighted check digit matches.
bool validate_issn(std::string_view candidate);

/// Computes the check character ('0'-'9' or 'X') for seven leading digits.
char issn_check_character(std::string_view seven_digits);

struct IssnScanOptions {
  bool case_insensitive_keyword = true;
  std::size_t window = 5;
};

/// Scans the tokens following each `ISSN` / `ISSN:` keyword and returns the
/// valid ISSNs among them, deduplicated in first-appearance order. Tokens are
/// separated by whitespace and any of ,;()<>"'
std::vector<std::string> extract_issns(std::string_view text, const IssnScanOptions& options = {});

}  // namespace citenet
