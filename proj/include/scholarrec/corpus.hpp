#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

namespace scholarrec {

/// One catalog record. Optional scalar fields are empty when absent; list
/// fields are empty when absent.
struct Article {
    std::string id;
    std::optional<std::string> title;
    std::optional<std::string> abstract_text;
    std::vector<std::string> authors;
    std::vector<std::string> tags;
    std::vector<std::string> keywords;
    std::vector<std::string> mesh_terms;
    std::vector<std::string> textrank_keywords;
    std::optional<std::string> venue_id;
    std::vector<std::string> group_ids;
    std::vector<std::string> owner_user_ids;

    bool operator==(const Article&) const = default;
};

struct UserLibrary {
    std::string user_id;
    std::set<std::string> article_ids;
    // Display name used by the author-name leakage fallback. Not part of the
    // csv format; jsonl rows may carry it as "user_name".
    std::optional<std::string> user_name;

    bool operator==(const UserLibrary&) const = default;
};

/// Immutable once loaded. Libraries are kept sorted by user id.
struct Catalog {
    std::map<std::string, Article> articles;
    std::vector<UserLibrary> libraries;

    const Article* find(const std::string& id) const;
};

enum class LibraryFormat { csv, jsonl };

std::vector<Article> parse_articles(std::istream& in, const std::string& source = "<stream>");
std::vector<Article> load_articles(const std::filesystem::path& path);

void write_articles(std::ostream& out, const std::vector<Article>& articles);
void save_articles(const std::filesystem::path& path, const std::vector<Article>& articles);

std::vector<UserLibrary> parse_libraries(std::istream& in, LibraryFormat format,
                                         const std::string& source = "<stream>");
std::vector<UserLibrary> load_libraries(const std::filesystem::path& path, LibraryFormat format);
std::vector<UserLibrary> load_libraries(const std::filesystem::path& path);  // format from extension

void write_libraries(std::ostream& out, const std::vector<UserLibrary>& libraries,
                     LibraryFormat format);
void save_libraries(const std::filesystem::path& path, const std::vector<UserLibrary>& libraries,
                    LibraryFormat format);

/// Builds a catalog; duplicate article ids across fragments are an error.
Catalog make_catalog(std::vector<Article> articles, std::vector<UserLibrary> libraries);

std::vector<Article> catalog_articles(const Catalog& catalog);

struct FieldPopulation {
    std::string field;
    std::size_t populated = 0;
    double ratio = 0.0;
};

struct ValidationReport {
    std::size_t article_count = 0;
    std::size_t library_count = 0;
    std::vector<FieldPopulation> fields;
    std::vector<std::string> unresolved_ids;  // sorted, distinct

    double population(const std::string& field) const;
    std::string to_json() const;
};

ValidationReport validate(const Catalog& catalog);

}  // namespace scholarrec
