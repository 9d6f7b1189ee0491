#include "repairlab/error.hpp"
#include "repairlab/textio/textio.hpp"

#include <json.hpp>

#include <algorithm>

#include <charconv>
#include <fstream>
#include <sstream>

namespace repairlab::textio {

namespace {

struct CsvField
{
    std::string text;
    std::size_t column = 1;
};

/// Splits CSV text into records of fields. Quoted fields may contain commas, doubled quotes and newlines.
std::vector<std::pair<std::size_t, std::vector<CsvField>>> split_csv(std::string_view text, const std::string &file)
{
    std::vector<std::pair<std::size_t, std::vector<CsvField>>> records;
    std::size_t i = 0, line = 1, column = 1;
    while (i < text.size()) {
        std::size_t record_line = line;
        if (text[i] == '\n' || (text[i] == '\r' && i + 1 < text.size() && text[i + 1] == '\n')) {
            i += text[i] == '\r' ? 2 : 1;
            ++line;
            column = 1;
            continue;
        }
        std::vector<CsvField> fields;
        for (;;) {
            CsvField field;
            field.column = column;
            if (i < text.size() && text[i] == '"') {
                std::size_t open_line = line;
                ++i;
                ++column;
                for (;;) {
                    if (i >= text.size())
                        throw ParseError(SourceSpan{file, open_line, field.column, field.column + 1},
                                         "unterminated quoted field");
                    char c = text[i];
                    if (c == '"') {
                        if (i + 1 < text.size() && text[i + 1] == '"') {
                            field.text += '"';
                            i += 2;
                            column += 2;
                            continue;
                        }
                        ++i;
                        ++column;
                        break;
                    }
                    field.text += c;
                    ++i;
                    if (c == '\n') {
                        ++line;
                        column = 1;
                    } else {
                        ++column;
                    }
                }
                if (i < text.size() && text[i] != ',' && text[i] != '\n' && text[i] != '\r')
                    throw ParseError(SourceSpan{file, line, column, column + 1},
                                     "unexpected character after closing quote");
            } else {
                while (i < text.size() && text[i] != ',' && text[i] != '\n' &&
                       !(text[i] == '\r' && i + 1 < text.size() && text[i + 1] == '\n')) {
                    if (text[i] == '"')
                        throw ParseError(SourceSpan{file, line, column, column + 1},
                                         "quote inside an unquoted field");
                    field.text += text[i];
                    ++i;
                    ++column;
                }
            }
            fields.push_back(std::move(field));
            if (i < text.size() && text[i] == ',') {
                ++i;
                ++column;
                continue;
            }
            break;
        }
        records.emplace_back(record_line, std::move(fields));
    }
    return records;
}

bool needs_quotes(const std::string &s)
{
    return s.empty() || s.find_first_of(",\"\r\n") != std::string::npos;
}

std::string csv_escape(const std::string &s)
{
    if (!needs_quotes(s))
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

std::optional<std::int64_t> parse_integer(const std::string &text)
{
    std::int64_t n = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), n);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
        return std::nullopt;
    return n;
}

/// Line and column of a byte offset, both 1-based.
std::pair<std::size_t, std::size_t> locate(std::string_view text, std::size_t offset)
{
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

}

Instance parse_csv(std::string_view text, const RelationSchema &relation, const std::string &file)
{
    auto records = split_csv(text, file);
    if (records.empty())
        throw ParseError(SourceSpan{file, 1, 1, 2}, "missing header row for relation " + relation.name());
    const auto &[header_line, header] = records.front();
    if (header.size() != relation.arity())
        throw ParseError(SourceSpan{file, header_line, 1, 2},
                         "header has " + std::to_string(header.size()) + " columns, relation " + relation.name() +
                             " has " + std::to_string(relation.arity()));
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i].text == relation.attribute(i).name)
            continue;
        const auto &h = header[i];
        std::string msg = relation.position_of(h.text)
                              ? "column " + h.text + " is out of schema order"
                              : "unknown attribute " + h.text + " in header of " + relation.name();
        throw ParseError(SourceSpan{file, header_line, h.column, h.column + std::max<std::size_t>(h.text.size(), 1)},
                         msg);
    }
    Instance out;
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto &[line, fields] = records[r];
        if (fields.size() != relation.arity())
            throw ParseError(SourceSpan{file, line, 1, 2},
                             "row has " + std::to_string(fields.size()) + " fields, expected " +
                                 std::to_string(relation.arity()));
        Fact fact{relation.name(), {}};
        for (std::size_t i = 0; i < fields.size(); ++i) {
            const auto &f = fields[i];
            if (relation.attribute(i).sort == Sort::Symbolic) {
                fact.values.push_back(sym(f.text));
                continue;
            }
            auto n = parse_integer(f.text);
            if (!n)
                throw ParseError(SourceSpan{file, line, f.column, f.column + std::max<std::size_t>(f.text.size(), 1)},
                                 "'" + f.text + "' is not an integer (column " + relation.attribute(i).name + ")");
            fact.values.push_back(num(*n));
        }
        out.insert(std::move(fact));
    }
    return out;
}

std::string serialize_csv(const Instance &instance, const RelationSchema &relation)
{
    std::string out;
    for (std::size_t i = 0; i < relation.arity(); ++i)
        out += (i ? "," : "") + csv_escape(relation.attribute(i).name);
    out += "\n";
    for (const auto &fact : instance.relation(relation.name())) {
        for (std::size_t i = 0; i < fact.values.size(); ++i)
            out += (i ? "," : "") + csv_escape(fact.values[i].to_plain());
        out += "\n";
    }
    return out;
}

Instance parse_json_bundle(std::string_view text, const Schema &schema, const std::string &file)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        auto [line, column] = locate(text, e.byte == 0 ? 0 : e.byte - 1);
        throw ParseError(SourceSpan{file, line, column, column + 1}, "invalid JSON: " + std::string(e.what()));
    }
    SourceSpan whole{file, 1, 1, 2};
    if (!doc.is_object())
        throw ParseError(whole, "instance bundle must be a JSON object mapping relation names to row arrays");
    Instance out;
    for (const auto &[name, rows] : doc.items()) {
        const auto *rel = schema.find(name);
        if (!rel)
            throw ParseError(whole, "unknown relation " + name + " in instance bundle");
        if (!rows.is_array())
            throw ParseError(whole, "rows of " + name + " must be an array");
        for (const auto &row : rows) {
            if (!row.is_array() || row.size() != rel->arity())
                throw ParseError(whole, "row " + row.dump() + " of " + name + " must be an array of " +
                                            std::to_string(rel->arity()) + " values");
            Fact fact{name, {}};
            for (std::size_t i = 0; i < row.size(); ++i) {
                const auto &cell = row[i];
                if (rel->attribute(i).sort == Sort::Symbolic) {
                    if (!cell.is_string())
                        throw ParseError(whole, "value " + cell.dump() + " in " + name + " column " +
                                                    rel->attribute(i).name + " must be a string");
                    fact.values.push_back(sym(cell.get<std::string>()));
                } else {
                    if (!cell.is_number_integer())
                        throw ParseError(whole, "value " + cell.dump() + " in " + name + " column " +
                                                    rel->attribute(i).name + " must be an integer");
                    fact.values.push_back(num(cell.get<std::int64_t>()));
                }
            }
            out.insert(std::move(fact));
        }
    }
    return out;
}

std::string serialize_json_bundle(const Instance &instance, const Schema &schema)
{
    nlohmann::ordered_json doc = nlohmann::ordered_json::object();
    for (const auto &rel : schema.relations()) {
        auto rows = nlohmann::ordered_json::array();
        for (const auto &fact : instance.relation(rel.name())) {
            auto row = nlohmann::ordered_json::array();
            for (const auto &v : fact.values) {
                if (v.is_number())
                    row.push_back(v.as_number());
                else
                    row.push_back(v.as_symbol());
            }
            rows.push_back(std::move(row));
        }
        doc[rel.name()] = std::move(rows);
    }
    return doc.dump(2) + "\n";
}

std::string read_file(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path &path, std::string_view contents)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write " + path.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out)
        throw IoError("cannot write " + path.string());
}

Instance read_instance(const std::filesystem::path &path, const Schema &schema)
{
    namespace fs = std::filesystem;
    std::error_code ec;
    if (fs::is_directory(path, ec)) {
        Instance out;
        std::vector<fs::path> files;
        for (const auto &entry : fs::directory_iterator(path))
            if (entry.is_regular_file() && entry.path().extension() == ".csv")
                files.push_back(entry.path());
        std::sort(files.begin(), files.end());
        for (const auto &file : files) {
            auto name = file.stem().string();
            const auto *rel = schema.find(name);
            if (!rel)
                throw ParseError(SourceSpan{file.string(), 1, 1, 2}, "file names unknown relation " + name);
            for (auto &fact : parse_csv(read_file(file), *rel, file.string()))
                out.insert(fact);
        }
        return out;
    }
    if (!fs::exists(path, ec))
        throw IoError("no such file or directory: " + path.string());
    if (path.extension() == ".json")
        return parse_json_bundle(read_file(path), schema, path.string());
    if (path.extension() == ".csv") {
        auto name = path.stem().string();
        const auto *rel = schema.find(name);
        if (!rel)
            throw ParseError(SourceSpan{path.string(), 1, 1, 2}, "file names unknown relation " + name);
        return parse_csv(read_file(path), *rel, path.string());
    }
    throw IoError("instance path must be a directory, a .csv file or a .json bundle: " + path.string());
}

void write_instance_dir(const Instance &instance, const Schema &schema, const std::filesystem::path &directory)
{
    std::error_code ec;
    std::filesystem::create_directories(directory, ec);
    if (ec)
        throw IoError("cannot create directory " + directory.string() + ": " + ec.message());
    for (const auto &rel : schema.relations())
        write_file(directory / (rel.name() + ".csv"), serialize_csv(instance, rel));
}

}
