#pragma once
// Small text helpers shared across modules: normalization, tokenization,
// stable hashing, sentence splitting, heading extraction.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace litrev {

// Lowercases ASCII letters, leaves everything else untouched.
std::string to_lower(std::string_view text);

// Collapses runs of whitespace to single spaces and trims the ends.
std::string collapse_whitespace(std::string_view text);

// Canonical form used for title matching and heading dedup:
// lowercase, punctuation stripped to spaces, whitespace collapsed.
std::string normalize_title(std::string_view title);

// Whitespace tokenization after normalize_title; empty input -> empty list.
std::vector<std::string> normalized_tokens(std::string_view text);

// |A ∩ B| / |A ∪ B| over token *sets*; 0 when both are empty.
double token_set_jaccard(const std::vector<std::string>& a,
                         const std::vector<std::string>& b);

// FNV-1a 64-bit. Stable across platforms, unlike std::hash.
std::uint64_t fnv1a64(std::string_view data);

// Splits text into sentences on ./!/? followed by whitespace or end of text.
// Keeps the terminator with the sentence. Blank results are dropped.
std::vector<std::string> split_sentences(std::string_view text);

// Splits on blank lines; each paragraph keeps its internal newlines.
std::vector<std::string> split_paragraphs(std::string_view text);

struct Heading {
    int level = 0;
    std::string text;
};

// ATX markdown headings ("# Title" .. "###### Title"), in document order.
// Headings inside ``` fences are ignored.
std::vector<Heading> extract_headings(std::string_view markdown);

// True when the string has at least one non-whitespace character.
bool has_content(std::string_view text);

}  // namespace litrev
