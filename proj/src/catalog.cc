//
// Copyright 2026 The sqltrace Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "sqltrace/catalog.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "json.hpp"
#include "sqltrace/error.h"

namespace sqltrace {
namespace {

using nlohmann::json;

[[noreturn]] void Violation(const std::string& message) {
  throw ParseError(ParseError::Kind::kResolution, 0, message);
}

std::string NaturalFromIdentifier(std::string_view name) {
  std::string out = ToLowerAscii(name);
  std::replace(out.begin(), out.end(), '_', ' ');
  return out;
}

const json& Field(const json& entry, const char* key) {
  auto it = entry.find(key);
  if (it == entry.end()) Violation(std::string("catalog is missing field '") + key + "'");
  return *it;
}

template <typename T>
T As(const json& value, const std::string& what) {
  try {
    return value.get<T>();
  } catch (const json::exception&) {
    Violation("catalog field " + what + " has the wrong type");
  }
}

Catalog FromSpiderEntry(const json& entry) {
  if (!entry.is_object()) Violation("catalog entry must be a JSON object");
  const auto db_id = As<std::string>(Field(entry, "db_id"), "db_id");
  const auto table_names =
      As<std::vector<std::string>>(Field(entry, "table_names_original"),
                                   "table_names_original");
  const json& columns = Field(entry, "column_names_original");
  const auto column_types =
      As<std::vector<std::string>>(Field(entry, "column_types"), "column_types");
  if (!columns.is_array()) Violation("column_names_original must be an array");
  if (columns.size() != column_types.size()) {
    Violation("column_types has " + std::to_string(column_types.size()) +
              " entries but column_names_original has " +
              std::to_string(columns.size()));
  }

  std::vector<std::string> table_naturals;
  if (auto it = entry.find("table_names"); it != entry.end()) {
    table_naturals = As<std::vector<std::string>>(*it, "table_names");
    if (table_naturals.size() != table_names.size()) {
      Violation("table_names and table_names_original differ in length");
    }
  }
  const json* column_naturals = nullptr;
  if (auto it = entry.find("column_names"); it != entry.end()) {
    column_naturals = &*it;
    if (!it->is_array() || it->size() != columns.size()) {
      Violation("column_names and column_names_original differ in length");
    }
  }

  std::vector<TableDef> tables(table_names.size());
  for (std::size_t t = 0; t < table_names.size(); ++t) {
    tables[t].name = table_names[t];
    tables[t].natural_name = table_naturals.empty()
                                 ? NaturalFromIdentifier(table_names[t])
                                 : table_naturals[t];
  }

  // Spider addresses columns by their global index; -1 marks the '*' entry.
  std::vector<std::optional<ColumnId>> global(columns.size());
  for (std::size_t i = 0; i < columns.size(); ++i) {
    const json& pair = columns[i];
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer() ||
        !pair[1].is_string()) {
      Violation("column_names_original[" + std::to_string(i) +
                "] must be a [table_index, name] pair");
    }
    const int table = pair[0].get<int>();
    if (table == -1) continue;
    if (table < 0 || static_cast<std::size_t>(table) >= tables.size()) {
      Violation("column '" + pair[1].get<std::string>() +
                "' references missing table " + std::to_string(table));
    }
    ColumnDef def;
    def.name = pair[1].get<std::string>();
    def.type = column_types[i];
    def.natural_name = NaturalFromIdentifier(def.name);
    if (column_naturals != nullptr) {
      const json& natural = (*column_naturals)[i];
      if (natural.is_array() && natural.size() == 2 && natural[1].is_string()) {
        def.natural_name = natural[1].get<std::string>();
      }
    }
    auto& cols = tables[table].columns;
    global[i] = ColumnId{table, static_cast<int>(cols.size())};
    cols.push_back(std::move(def));
  }

  auto resolve = [&](const json& index, const char* what) -> ColumnId {
    if (!index.is_number_integer()) Violation(std::string(what) + " must be integers");
    const auto i = index.get<long long>();
    if (i < 0 || static_cast<std::size_t>(i) >= global.size() || !global[i]) {
      Violation(std::string(what) + " references missing column " + std::to_string(i));
    }
    return *global[i];
  };

  std::vector<ColumnId> primary_keys;
  const json& pks = Field(entry, "primary_keys");
  if (!pks.is_array()) Violation("primary_keys must be an array");
  for (const json& pk : pks) {
    // Newer Spider releases list composite keys as nested arrays.
    if (pk.is_array()) {
      for (const json& part : pk) primary_keys.push_back(resolve(part, "primary key"));
    } else {
      primary_keys.push_back(resolve(pk, "primary key"));
    }
  }

  std::vector<ForeignKey> foreign_keys;
  const json& fks = Field(entry, "foreign_keys");
  if (!fks.is_array()) Violation("foreign_keys must be an array");
  for (const json& fk : fks) {
    if (!fk.is_array() || fk.size() != 2) {
      Violation("foreign_keys entries must be [column, column] pairs");
    }
    foreign_keys.push_back({resolve(fk[0], "foreign key"), resolve(fk[1], "foreign key")});
  }

  return Catalog(db_id, std::move(tables), std::move(primary_keys),
                 std::move(foreign_keys));
}

json ParseJsonOrThrow(std::string_view raw) {
  try {
    return json::parse(raw);
  } catch (const json::parse_error& e) {
    const std::size_t at = e.byte == 0 ? 0 : std::min<std::size_t>(e.byte - 1, raw.size());
    throw ParseError(ParseError::Kind::kGrammar, at, "invalid catalog JSON");
  }
}

}  // namespace

bool EqualsIgnoreCase(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

std::string ToLowerAscii(std::string_view text) {
  std::string out(text);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string ToUpperAscii(std::string_view text) {
  std::string out(text);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::string ReadFileOrThrow(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Catalog::Catalog(std::string db_id, std::vector<TableDef> tables,
                 std::vector<ColumnId> primary_keys,
                 std::vector<ForeignKey> foreign_keys)
    : db_id_(std::move(db_id)),
      tables_(std::move(tables)),
      primary_keys_(std::move(primary_keys)),
      foreign_keys_(std::move(foreign_keys)) {
  if (db_id_.empty()) Violation("db_id must be non-empty");
  std::set<std::string> table_names;
  for (const TableDef& table : tables_) {
    if (table.name.empty()) Violation("empty table name in '" + db_id_ + "'");
    if (!table_names.insert(ToLowerAscii(table.name)).second) {
      Violation("duplicate table name '" + table.name + "' in '" + db_id_ + "'");
    }
    std::set<std::string> column_names;
    for (const ColumnDef& column : table.columns) {
      if (column.name.empty()) Violation("empty column name in table '" + table.name + "'");
      if (!column_names.insert(ToLowerAscii(column.name)).second) {
        Violation("duplicate column name '" + column.name + "' in table '" +
                  table.name + "'");
      }
    }
  }
  auto check = [&](ColumnId id, const char* what) {
    if (id.table < 0 || id.table >= table_count() || id.column < 0 ||
        id.column >= static_cast<int>(tables_[id.table].columns.size())) {
      Violation(std::string(what) + " references a missing column");
    }
  };
  for (ColumnId pk : primary_keys_) check(pk, "primary key");
  for (const ForeignKey& fk : foreign_keys_) {
    check(fk.from, "foreign key");
    check(fk.to, "foreign key");
  }

  slot_count_ = tables_.size();
  column_offsets_.reserve(tables_.size());
  for (const TableDef& table : tables_) {
    column_offsets_.push_back(slot_count_);
    slot_count_ += table.columns.size();
  }
}

const ColumnDef& Catalog::column(ColumnId id) const {
  return tables_.at(id.table).columns.at(id.column);
}

std::size_t Catalog::table_slot(int table) const {
  return static_cast<std::size_t>(table);
}

std::size_t Catalog::column_slot(ColumnId id) const {
  return column_offsets_.at(id.table) + static_cast<std::size_t>(id.column);
}

bool Catalog::slot_is_table(std::size_t slot) const { return slot < tables_.size(); }

ColumnId Catalog::slot_column(std::size_t slot) const {
  // column_offsets_ is sorted; find the last offset not exceeding slot.
  auto it = std::upper_bound(column_offsets_.begin(), column_offsets_.end(), slot);
  const auto table = static_cast<int>(std::distance(column_offsets_.begin(), it)) - 1;
  return ColumnId{table, static_cast<int>(slot - column_offsets_[table])};
}

std::string Catalog::slot_name(std::size_t slot) const {
  if (slot_is_table(slot)) return tables_[slot].name;
  return QualifiedName(slot_column(slot));
}

std::string Catalog::slot_natural_name(std::size_t slot) const {
  if (slot_is_table(slot)) return tables_[slot].natural_name;
  return column(slot_column(slot)).natural_name;
}

std::string Catalog::QualifiedName(ColumnId id) const {
  return tables_.at(id.table).name + "." + column(id).name;
}

std::optional<int> Catalog::FindTable(std::string_view name) const {
  for (int t = 0; t < table_count(); ++t) {
    if (EqualsIgnoreCase(tables_[t].name, name)) return t;
  }
  return std::nullopt;
}

std::optional<ColumnId> Catalog::FindColumn(int table, std::string_view name) const {
  const auto& columns = tables_.at(table).columns;
  for (int c = 0; c < static_cast<int>(columns.size()); ++c) {
    if (EqualsIgnoreCase(columns[c].name, name)) return ColumnId{table, c};
  }
  return std::nullopt;
}

std::optional<std::size_t> Catalog::FindSlot(std::string_view name) const {
  const auto dot = name.find('.');
  const auto table = FindTable(name.substr(0, dot));
  if (!table) return std::nullopt;
  if (dot == std::string_view::npos) return table_slot(*table);
  const auto column = FindColumn(*table, name.substr(dot + 1));
  if (!column) return std::nullopt;
  return column_slot(*column);
}

bool Catalog::IsNumeric(ColumnId id) const {
  return EqualsIgnoreCase(column(id).type, "number");
}

bool Catalog::operator==(const Catalog& other) const {
  if (db_id_ != other.db_id_ || tables_.size() != other.tables_.size()) return false;
  for (std::size_t t = 0; t < tables_.size(); ++t) {
    const TableDef& a = tables_[t];
    const TableDef& b = other.tables_[t];
    if (a.name != b.name || a.columns.size() != b.columns.size()) return false;
    for (std::size_t c = 0; c < a.columns.size(); ++c) {
      if (a.columns[c].name != b.columns[c].name) return false;
    }
  }
  return true;
}

Catalog ValidateCatalog(std::string_view raw) {
  return FromSpiderEntry(ParseJsonOrThrow(raw));
}

std::vector<Catalog> ParseCatalogFile(std::string_view raw) {
  const json doc = ParseJsonOrThrow(raw);
  std::vector<Catalog> out;
  if (doc.is_array()) {
    out.reserve(doc.size());
    for (const json& entry : doc) out.push_back(FromSpiderEntry(entry));
  } else {
    out.push_back(FromSpiderEntry(doc));
  }
  return out;
}

CatalogSet::CatalogSet(std::vector<Catalog> catalogs) {
  for (Catalog& catalog : catalogs) Add(std::move(catalog));
}

CatalogSet CatalogSet::Load(const std::string& path) {
  return CatalogSet(ParseCatalogFile(ReadFileOrThrow(path)));
}

void CatalogSet::Add(Catalog catalog) {
  std::string id = catalog.db_id();
  if (by_id_.contains(id)) Violation("duplicate db_id '" + id + "'");
  if (by_id_.empty()) first_id_ = id;
  by_id_.emplace(std::move(id), std::make_shared<const Catalog>(std::move(catalog)));
}

std::shared_ptr<const Catalog> CatalogSet::Find(std::string_view db_id) const {
  auto it = by_id_.find(db_id);
  return it == by_id_.end() ? nullptr : it->second;
}

const Catalog& CatalogSet::Get(std::string_view db_id) const {
  auto found = Find(db_id);
  if (!found) throw DataError("unknown db_id '" + std::string(db_id) + "'");
  return *found;
}

std::vector<std::string> CatalogSet::db_ids() const {
  std::vector<std::string> ids;
  for (const auto& [id, _] : by_id_) ids.push_back(id);
  return ids;
}

std::shared_ptr<const Catalog> CatalogSet::first() const {
  return first_id_.empty() ? nullptr : Find(first_id_);
}

}  // namespace sqltrace
