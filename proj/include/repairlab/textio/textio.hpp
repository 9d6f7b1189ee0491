#pragma once

#include "repairlab/model/constraint.hpp"
#include "repairlab/model/instance.hpp"
#include "repairlab/model/query.hpp"
#include "repairlab/model/schema.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace repairlab::textio {

/// `relation R(a: sym, b: num)`, `key R: a`, `primary key R: a`. Lines starting with `#` are comments.
Schema parse_schema(std::string_view text, const std::string &file = "<schema>");
/// `fd R: a -> b, c`, `ind S[a] <= R[b]`, `denial not [ R(x, y), R(x, z), y != z ]`.
ConstraintSet parse_constraints(std::string_view text, const Schema &schema,
                                const std::string &file = "<constraints>");
/// `[query] [exists x, y:] formula`. Formulas with variables must be conjunctions; they are normalized.
Query parse_query(std::string_view text, const Schema &schema, const std::string &file = "<query>");

std::string serialize_schema(const Schema &schema);
std::string serialize_constraints(const ConstraintSet &ics);
std::string serialize_query(const Query &query);

/// One relation in CSV form: a header row with the attribute names in schema order, then one row per fact.
Instance parse_csv(std::string_view text, const RelationSchema &relation, const std::string &file = "<csv>");
std::string serialize_csv(const Instance &instance, const RelationSchema &relation);

/// `{"R": [["a", 1], ...], ...}`. Relations missing from the bundle are empty.
Instance parse_json_bundle(std::string_view text, const Schema &schema, const std::string &file = "<json>");
std::string serialize_json_bundle(const Instance &instance, const Schema &schema);

/// Reads a directory of `<Relation>.csv` files, a single `.csv` file named after its relation, or a `.json` bundle.
Instance read_instance(const std::filesystem::path &path, const Schema &schema);
/// Writes one `<Relation>.csv` per schema relation into `directory`, creating it if needed.
void write_instance_dir(const Instance &instance, const Schema &schema, const std::filesystem::path &directory);

std::string read_file(const std::filesystem::path &path);
void write_file(const std::filesystem::path &path, std::string_view contents);

}
