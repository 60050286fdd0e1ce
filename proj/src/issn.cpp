#include "citenet/issn.hpp"

#include <algorithm>
#include <cctype>

namespace citenet {

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool is_separator(char c) {
  return std::isspace(static_cast<unsigned char>(c)) || c == ',' || c == ';' || c == '(' ||
         c == ')' || c == '<' || c == '>' || c == '"' || c == '\'';
}

bool is_keyword(std::string_view token, bool case_insensitive) {
  auto equals = [&](std::string_view word) {
    if (token.size() != word.size()) return false;
    for (std::size_t i = 0; i < word.size(); ++i) {
      char c = token[i];
      if (case_insensitive) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      if (c != word[i]) return false;
    }
    return true;
  };
  return equals("ISSN") || equals("ISSN:");
}

}  // namespace

char issn_check_character(std::string_view seven_digits) {
  int sum = 0;
  for (std::size_t i = 0; i < 7; ++i) sum += (seven_digits[i] - '0') * static_cast<int>(8 - i);
  const int check = (11 - sum % 11) % 11;
  return check == 10 ? 'X' : static_cast<char>('0' + check);
}

bool validate_issn(std::string_view candidate) {
  if (candidate.size() != 9 || candidate[4] != '-') return false;
  std::string digits;
  digits.reserve(7);
  for (std::size_t i = 0; i < 8; ++i) {
    const char c = candidate[i < 4 ? i : i + 1];
    if (i < 7) {
      if (!is_digit(c)) return false;
      digits.push_back(c);
    } else if (!is_digit(c) && c != 'X') {
      return false;
    }
  }
  return issn_check_character(digits) == candidate[8];
}

std::vector<std::string> extract_issns(std::string_view text, const IssnScanOptions& options) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_separator(text[i])) ++i;
    const std::size_t start = i;
    while (i < text.size() && !is_separator(text[i])) ++i;
    if (i > start) tokens.push_back(text.substr(start, i - start));
  }

  std::vector<std::string> found;
  for (std::size_t k = 0; k < tokens.size(); ++k) {
    if (!is_keyword(tokens[k], options.case_insensitive_keyword)) continue;
    const std::size_t end = std::min(tokens.size(), k + 1 + options.window);
    for (std::size_t w = k + 1; w < end; ++w) {
      if (!validate_issn(tokens[w])) continue;
      std::string issn(tokens[w]);
      if (std::find(found.begin(), found.end(), issn) == found.end()) found.push_back(std::move(issn));
    }
  }
  return found;
}

}  // namespace citenet
