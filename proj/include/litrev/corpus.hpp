#pragma once
// Data model and ingestion for reference pools, review tasks and gold
// articles. Records are immutable after load and safe to share.

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "litrev/util.hpp"

namespace litrev {

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Reference {
    std::string id;
    std::string title;
    std::string abstract;  // may be empty; real corpora are incomplete
    std::optional<std::string> full_text;
    std::optional<int> year;
    // researcher-agent output, flattened to one string per finding
    std::optional<std::vector<std::string>> findings;
};

class ReferencePool {
public:
    ReferencePool() = default;

    // Validates invariants: unique ids, unique normalized titles, non-empty
    // titles. Throws ValidationError naming the offender.
    explicit ReferencePool(std::vector<Reference> references);

    const std::vector<Reference>& references() const { return references_; }
    std::size_t size() const { return references_.size(); }
    bool empty() const { return references_.empty(); }

    const Reference* by_id(const std::string& id) const;
    const Reference* by_normalized_title(const std::string& normalized) const;
    // position in pool order, used for deterministic tie-breaking
    std::optional<std::size_t> position_of(const std::string& id) const;

private:
    std::vector<Reference> references_;
    std::unordered_map<std::string, std::size_t> by_id_;
    std::unordered_map<std::string, std::size_t> by_title_;
};

struct GoldArticle {
    std::string title;
    std::vector<std::string> headings;  // stored explicitly or extracted
    std::string full_text;
    std::vector<std::string> cited_reference_ids;
};

struct ReviewTask {
    std::string topic;
    ReferencePool references;
    std::optional<GoldArticle> gold_article;
    std::optional<int> target_reference_count;  // retrieval mode
    std::string task_id;                        // defaults to the file stem
};

enum class RecordFormat { JsonRecord, MarkdownWithFrontmatter };

// Loads and validates one review-task record.
//   json-record: one JSON document {topic, references[], gold?, ...}
//   markdown-with-frontmatter: "---" key/value block + gold article body;
//     the `references` key names a JSON pool file relative to the record.
// Throws ParseError naming the offending field and ValidationError on
// invariant violations (duplicate id, duplicate title, empty topic, ...).
ReviewTask load_dataset_record(const std::filesystem::path& path, RecordFormat format);

// JSON-record serialization; load(serialize(t)) is structurally equal to t.
std::string serialize_task(const ReviewTask& task);
void save_dataset_record(const ReviewTask& task, const std::filesystem::path& path);

// Parses a JSON array of reference objects (the canned corpus file format).
std::vector<Reference> parse_reference_array(const std::string& json_text,
                                             const std::string& context);

}  // namespace litrev
