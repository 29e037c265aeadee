#include "scholarrec/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "scholarrec/error.hpp"

namespace scholarrec {

using nlohmann::json;

namespace {

std::string where(const std::string& source, std::size_t line)
{
    return source + ":" + std::to_string(line);
}

std::optional<std::string> optional_string(const json& record, const char* key,
                                           const std::string& at)
{
    auto it = record.find(key);
    if (it == record.end() || it->is_null()) {
        return std::nullopt;
    }
    if (!it->is_string()) {
        fail(ErrorCategory::parse, at + ": field '" + key + "' must be a string");
    }
    return it->get<std::string>();
}

std::vector<std::string> string_list(const json& record, const char* key, const std::string& at)
{
    auto it = record.find(key);
    if (it == record.end() || it->is_null()) {
        return {};
    }
    if (!it->is_array()) {
        fail(ErrorCategory::parse, at + ": field '" + key + "' must be an array of strings");
    }
    std::vector<std::string> values;
    values.reserve(it->size());
    for (const auto& v : *it) {
        if (!v.is_string()) {
            fail(ErrorCategory::parse, at + ": field '" + key + "' must be an array of strings");
        }
        values.push_back(v.get<std::string>());
    }
    return values;
}

Article article_from_json(const json& record, const std::string& at)
{
    if (!record.is_object()) {
        fail(ErrorCategory::parse, at + ": article record must be a json object");
    }
    Article a;
    auto id = optional_string(record, "id", at);
    if (!id || id->empty()) {
        fail(ErrorCategory::parse, at + ": article id missing or empty");
    }
    a.id = *id;
    a.title = optional_string(record, "title", at);
    a.abstract_text = optional_string(record, "abstract", at);
    a.authors = string_list(record, "authors", at);
    a.tags = string_list(record, "tags", at);
    a.keywords = string_list(record, "keywords", at);
    a.mesh_terms = string_list(record, "mesh_terms", at);
    a.textrank_keywords = string_list(record, "textrank_keywords", at);
    a.venue_id = optional_string(record, "venue_id", at);
    a.group_ids = string_list(record, "group_ids", at);
    a.owner_user_ids = string_list(record, "owner_user_ids", at);
    return a;
}

json article_to_json(const Article& a)
{
    json j = json::object();
    j["id"] = a.id;
    if (a.title) j["title"] = *a.title;
    if (a.abstract_text) j["abstract"] = *a.abstract_text;
    auto put_list = [&](const char* key, const std::vector<std::string>& v) {
        if (!v.empty()) j[key] = v;
    };
    put_list("authors", a.authors);
    put_list("tags", a.tags);
    put_list("keywords", a.keywords);
    put_list("mesh_terms", a.mesh_terms);
    put_list("textrank_keywords", a.textrank_keywords);
    if (a.venue_id) j["venue_id"] = *a.venue_id;
    put_list("group_ids", a.group_ids);
    put_list("owner_user_ids", a.owner_user_ids);
    return j;
}

bool skippable(const std::string& line)
{
    auto first = line.find_first_not_of(" \t\r");
    return first == std::string::npos || line[first] == '#';
}

std::string trim_cr(std::string line)
{
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    return line;
}

std::ifstream open_input(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        fail(ErrorCategory::io, "cannot open '" + path.string() + "' for reading");
    }
    return in;
}

std::ofstream open_output(const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        fail(ErrorCategory::io, "cannot open '" + path.string() + "' for writing");
    }
    return out;
}

}  // namespace

const Article* Catalog::find(const std::string& id) const
{
    auto it = articles.find(id);
    return it == articles.end() ? nullptr : &it->second;
}

std::vector<Article> parse_articles(std::istream& in, const std::string& source)
{
    std::vector<Article> articles;
    std::set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim_cr(std::move(line));
        if (skippable(line)) {
            continue;
        }
        const auto at = where(source, line_no);
        json record;
        try {
            record = json::parse(line);
        } catch (const json::parse_error& e) {
            fail(ErrorCategory::parse, at + ": malformed json: " + e.what());
        }
        Article a = article_from_json(record, at);
        if (!seen.insert(a.id).second) {
            fail(ErrorCategory::data, at + ": duplicate article id '" + a.id + "'");
        }
        articles.push_back(std::move(a));
    }
    return articles;
}

std::vector<Article> load_articles(const std::filesystem::path& path)
{
    auto in = open_input(path);
    return parse_articles(in, path.string());
}

void write_articles(std::ostream& out, const std::vector<Article>& articles)
{
    for (const auto& a : articles) {
        out << article_to_json(a).dump() << '\n';
    }
}

void save_articles(const std::filesystem::path& path, const std::vector<Article>& articles)
{
    auto out = open_output(path);
    write_articles(out, articles);
}

std::vector<UserLibrary> parse_libraries(std::istream& in, LibraryFormat format,
                                         const std::string& source)
{
    std::map<std::string, UserLibrary> by_user;
    std::string line;
    std::size_t line_no = 0;
    bool header_checked = false;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim_cr(std::move(line));
        if (skippable(line)) {
            continue;
        }
        const auto at = where(source, line_no);
        if (format == LibraryFormat::csv) {
            if (!header_checked) {
                header_checked = true;
                if (line == "user_id,article_id") {
                    continue;
                }
            }
            auto comma = line.find(',');
            if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
                fail(ErrorCategory::parse, at + ": expected 'user_id,article_id'");
            }
            std::string user = line.substr(0, comma);
            std::string article = line.substr(comma + 1);
            if (user.empty() || article.empty()) {
                fail(ErrorCategory::parse, at + ": empty user_id or article_id");
            }
            auto& lib = by_user[user];
            lib.user_id = user;
            lib.article_ids.insert(std::move(article));
        } else {
            json record;
            try {
                record = json::parse(line);
            } catch (const json::parse_error& e) {
                fail(ErrorCategory::parse, at + ": malformed json: " + e.what());
            }
            if (!record.is_object()) {
                fail(ErrorCategory::parse, at + ": library record must be a json object");
            }
            auto user = optional_string(record, "user_id", at);
            if (!user || user->empty()) {
                fail(ErrorCategory::parse, at + ": empty user_id");
            }
            auto& lib = by_user[*user];
            lib.user_id = *user;
            for (auto& id : string_list(record, "article_ids", at)) {
                if (id.empty()) {
                    fail(ErrorCategory::parse, at + ": empty article_id");
                }
                lib.article_ids.insert(std::move(id));
            }
            if (auto name = optional_string(record, "user_name", at)) {
                lib.user_name = std::move(name);
            }
        }
    }
    std::vector<UserLibrary> libraries;
    libraries.reserve(by_user.size());
    for (auto& [_, lib] : by_user) {
        libraries.push_back(std::move(lib));
    }
    return libraries;
}

std::vector<UserLibrary> load_libraries(const std::filesystem::path& path, LibraryFormat format)
{
    auto in = open_input(path);
    return parse_libraries(in, format, path.string());
}

std::vector<UserLibrary> load_libraries(const std::filesystem::path& path)
{
    auto ext = path.extension().string();
    return load_libraries(path, ext == ".jsonl" || ext == ".json" ? LibraryFormat::jsonl
                                                                   : LibraryFormat::csv);
}

void write_libraries(std::ostream& out, const std::vector<UserLibrary>& libraries,
                     LibraryFormat format)
{
    if (format == LibraryFormat::csv) {
        out << "user_id,article_id\n";
        for (const auto& lib : libraries) {
            for (const auto& id : lib.article_ids) {
                out << lib.user_id << ',' << id << '\n';
            }
        }
        return;
    }
    for (const auto& lib : libraries) {
        json j = {{"user_id", lib.user_id},
                  {"article_ids", std::vector<std::string>(lib.article_ids.begin(),
                                                           lib.article_ids.end())}};
        if (lib.user_name) {
            j["user_name"] = *lib.user_name;
        }
        out << j.dump() << '\n';
    }
}

void save_libraries(const std::filesystem::path& path, const std::vector<UserLibrary>& libraries,
                    LibraryFormat format)
{
    auto out = open_output(path);
    write_libraries(out, libraries, format);
}

Catalog make_catalog(std::vector<Article> articles, std::vector<UserLibrary> libraries)
{
    Catalog catalog;
    for (auto& a : articles) {
        auto id = a.id;
        if (!catalog.articles.emplace(id, std::move(a)).second) {
            fail(ErrorCategory::data, "duplicate article id '" + id + "'");
        }
    }
    std::sort(libraries.begin(), libraries.end(),
              [](const UserLibrary& x, const UserLibrary& y) { return x.user_id < y.user_id; });
    for (std::size_t i = 1; i < libraries.size(); ++i) {
        if (libraries[i].user_id == libraries[i - 1].user_id) {
            fail(ErrorCategory::data, "duplicate library for user '" + libraries[i].user_id + "'");
        }
    }
    catalog.libraries = std::move(libraries);
    return catalog;
}

std::vector<Article> catalog_articles(const Catalog& catalog)
{
    std::vector<Article> out;
    out.reserve(catalog.articles.size());
    for (const auto& [_, a] : catalog.articles) {
        out.push_back(a);
    }
    return out;
}

double ValidationReport::population(const std::string& field) const
{
    for (const auto& f : fields) {
        if (f.field == field) {
            return f.ratio;
        }
    }
    return 0.0;
}

std::string ValidationReport::to_json() const
{
    json j;
    j["articles"] = article_count;
    j["libraries"] = library_count;
    json fields_json = json::object();
    for (const auto& f : fields) {
        fields_json[f.field] = {{"populated", f.populated}, {"ratio", f.ratio}};
    }
    j["fields"] = fields_json;
    j["unresolved_library_ids"] = unresolved_ids.size();
    return j.dump(2);
}

ValidationReport validate(const Catalog& catalog)
{
    ValidationReport report;
    report.article_count = catalog.articles.size();
    report.library_count = catalog.libraries.size();

    struct Probe {
        const char* name;
        bool (*populated)(const Article&);
    };
    static constexpr Probe probes[] = {
        {"title", [](const Article& a) { return a.title.has_value() && !a.title->empty(); }},
        {"abstract",
         [](const Article& a) { return a.abstract_text.has_value() && !a.abstract_text->empty(); }},
        {"authors", [](const Article& a) { return !a.authors.empty(); }},
        {"tags", [](const Article& a) { return !a.tags.empty(); }},
        {"keywords", [](const Article& a) { return !a.keywords.empty(); }},
        {"mesh_terms", [](const Article& a) { return !a.mesh_terms.empty(); }},
        {"textrank_keywords", [](const Article& a) { return !a.textrank_keywords.empty(); }},
        {"venue_id", [](const Article& a) { return a.venue_id.has_value(); }},
        {"group_ids", [](const Article& a) { return !a.group_ids.empty(); }},
        {"owner_user_ids", [](const Article& a) { return !a.owner_user_ids.empty(); }},
    };
    for (const auto& probe : probes) {
        FieldPopulation f;
        f.field = probe.name;
        for (const auto& [_, a] : catalog.articles) {
            f.populated += probe.populated(a) ? 1 : 0;
        }
        f.ratio = report.article_count == 0
                      ? 0.0
                      : static_cast<double>(f.populated) / static_cast<double>(report.article_count);
        report.fields.push_back(std::move(f));
    }

    std::set<std::string> unresolved;
    for (const auto& lib : catalog.libraries) {
        for (const auto& id : lib.article_ids) {
            if (!catalog.articles.count(id)) {
                unresolved.insert(id);
            }
        }
    }
    report.unresolved_ids.assign(unresolved.begin(), unresolved.end());
    return report;
}

}  // namespace scholarrec
