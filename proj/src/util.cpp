#include "litrev/util.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

namespace litrev {

std::string to_lower(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string collapse_whitespace(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool in_space = true;  // leading whitespace is dropped
    for (unsigned char c : text) {
        if (std::isspace(c)) {
            if (!in_space) out.push_back(' ');
            in_space = true;
        } else {
            out.push_back(static_cast<char>(c));
            in_space = false;
        }
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out;
}

std::string normalize_title(std::string_view title) {
    std::string out;
    out.reserve(title.size());
    for (unsigned char c : title) {
        if (std::isalnum(c)) {
            out.push_back(static_cast<char>(std::tolower(c)));
        } else {
            out.push_back(' ');
        }
    }
    return collapse_whitespace(out);
}

std::vector<std::string> normalized_tokens(std::string_view text) {
    std::vector<std::string> tokens;
    std::string norm = normalize_title(text);
    std::size_t pos = 0;
    while (pos < norm.size()) {
        std::size_t end = norm.find(' ', pos);
        if (end == std::string::npos) end = norm.size();
        if (end > pos) tokens.emplace_back(norm.substr(pos, end - pos));
        pos = end + 1;
    }
    return tokens;
}

double token_set_jaccard(const std::vector<std::string>& a,
                         const std::vector<std::string>& b) {
    std::unordered_set<std::string> sa(a.begin(), a.end());
    std::unordered_set<std::string> sb(b.begin(), b.end());
    if (sa.empty() && sb.empty()) return 0.0;
    std::size_t inter = 0;
    for (const auto& t : sa)
        if (sb.count(t)) ++inter;
    const std::size_t uni = sa.size() + sb.size() - inter;
    return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::vector<std::string> split_sentences(std::string_view text) {
    std::vector<std::string> sentences;
    std::size_t start = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (c == '.' || c == '!' || c == '?') {
            const bool at_end = i + 1 >= text.size();
            if (at_end || std::isspace(static_cast<unsigned char>(text[i + 1]))) {
                std::string s(text.substr(start, i - start + 1));
                s = collapse_whitespace(s);
                if (!s.empty()) sentences.push_back(std::move(s));
                start = i + 1;
            }
        }
    }
    if (start < text.size()) {
        std::string tail = collapse_whitespace(text.substr(start));
        if (!tail.empty()) sentences.push_back(std::move(tail));
    }
    return sentences;
}

std::vector<std::string> split_paragraphs(std::string_view text) {
    std::vector<std::string> paras;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t brk = text.find("\n\n", pos);
        if (brk == std::string_view::npos) brk = text.size();
        std::string_view chunk = text.substr(pos, brk - pos);
        // trim outer whitespace but keep interior newlines
        std::size_t b = chunk.find_first_not_of(" \t\r\n");
        std::size_t e = chunk.find_last_not_of(" \t\r\n");
        if (b != std::string_view::npos)
            paras.emplace_back(chunk.substr(b, e - b + 1));
        pos = brk + 2;
    }
    return paras;
}

std::vector<Heading> extract_headings(std::string_view markdown) {
    std::vector<Heading> headings;
    bool in_fence = false;
    std::size_t pos = 0;
    while (pos <= markdown.size()) {
        std::size_t eol = markdown.find('\n', pos);
        if (eol == std::string_view::npos) eol = markdown.size();
        std::string_view line = markdown.substr(pos, eol - pos);
        if (line.rfind("```", 0) == 0) {
            in_fence = !in_fence;
        } else if (!in_fence) {
            int level = 0;
            while (level < static_cast<int>(line.size()) && line[level] == '#') ++level;
            if (level >= 1 && level <= 6 && level < static_cast<int>(line.size()) &&
                line[level] == ' ') {
                std::string text = collapse_whitespace(line.substr(level + 1));
                if (!text.empty()) headings.push_back({level, std::move(text)});
            }
        }
        if (eol == markdown.size()) break;
        pos = eol + 1;
    }
    return headings;
}

bool has_content(std::string_view text) {
    return std::any_of(text.begin(), text.end(),
                       [](unsigned char c) { return !std::isspace(c); });
}

}  // namespace litrev
