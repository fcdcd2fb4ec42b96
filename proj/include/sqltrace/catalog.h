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

#ifndef SQLTRACE_CATALOG_H_
#define SQLTRACE_CATALOG_H_

#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sqltrace {

// A column addressed by table index and column index within that table.
struct ColumnId {
  int table = 0;
  int column = 0;

  auto operator<=>(const ColumnId&) const = default;
};

struct ColumnDef {
  std::string name;          // as declared, used in canonical SQL
  std::string natural_name;  // human-readable form used in utterances
  std::string type;          // Spider column type: text, number, time, ...
};

struct TableDef {
  std::string name;
  std::string natural_name;
  std::vector<ColumnDef> columns;
};

struct ForeignKey {
  ColumnId from;
  ColumnId to;

  bool operator==(const ForeignKey&) const = default;
};

// The database schema a conversation is bound to. Schema slots are every
// table followed by every column (grouped by table, declaration order), so
// slot_count() = tables + total columns.
//
// Name lookups are case-insensitive; uniqueness is enforced the same way.
class Catalog {
 public:
  // Throws ParseError(kResolution) naming the first violated invariant.
  Catalog(std::string db_id, std::vector<TableDef> tables,
          std::vector<ColumnId> primary_keys,
          std::vector<ForeignKey> foreign_keys);

  const std::string& db_id() const { return db_id_; }
  std::span<const TableDef> tables() const { return tables_; }
  int table_count() const { return static_cast<int>(tables_.size()); }
  const TableDef& table(int index) const { return tables_.at(index); }
  const ColumnDef& column(ColumnId id) const;
  std::span<const ColumnId> primary_keys() const { return primary_keys_; }
  std::span<const ForeignKey> foreign_keys() const { return foreign_keys_; }

  std::size_t slot_count() const { return slot_count_; }
  std::size_t table_slot(int table) const;
  std::size_t column_slot(ColumnId id) const;
  bool slot_is_table(std::size_t slot) const;
  // Canonical slot name: "table" or "table.column".
  std::string slot_name(std::size_t slot) const;
  // Natural-language rendering of a slot, used for template filling.
  std::string slot_natural_name(std::size_t slot) const;
  // Inverse of column_slot(); only valid for column slots.
  ColumnId slot_column(std::size_t slot) const;

  std::string QualifiedName(ColumnId id) const;
  std::optional<int> FindTable(std::string_view name) const;
  std::optional<ColumnId> FindColumn(int table, std::string_view name) const;
  // Finds a slot by canonical name ("cars" / "cars.name").
  std::optional<std::size_t> FindSlot(std::string_view name) const;
  bool IsNumeric(ColumnId id) const;

  bool operator==(const Catalog& other) const;

 private:
  std::string db_id_;
  std::vector<TableDef> tables_;
  std::vector<ColumnId> primary_keys_;
  std::vector<ForeignKey> foreign_keys_;
  std::vector<std::size_t> column_offsets_;  // first column slot per table
  std::size_t slot_count_ = 0;
};

// Parses one Spider tables.json entry (a JSON object with db_id,
// table_names_original, column_names_original, column_types, primary_keys,
// foreign_keys; table_names / column_names are optional natural names).
// Throws ParseError on malformed JSON or violated invariants.
Catalog ValidateCatalog(std::string_view raw);

// Accepts either a single entry or a JSON array of entries (tables.json).
std::vector<Catalog> ParseCatalogFile(std::string_view raw);

// Catalogs indexed by db_id.
class CatalogSet {
 public:
  CatalogSet() = default;
  explicit CatalogSet(std::vector<Catalog> catalogs);

  // Reads and parses a catalog file. Throws IoError when unreadable.
  static CatalogSet Load(const std::string& path);

  void Add(Catalog catalog);
  // nullptr when db_id is unknown.
  std::shared_ptr<const Catalog> Find(std::string_view db_id) const;
  // Throws DataError when db_id is unknown.
  const Catalog& Get(std::string_view db_id) const;
  std::size_t size() const { return by_id_.size(); }
  bool empty() const { return by_id_.empty(); }
  std::vector<std::string> db_ids() const;
  std::shared_ptr<const Catalog> first() const;

 private:
  std::map<std::string, std::shared_ptr<const Catalog>, std::less<>> by_id_;
  std::string first_id_;
};

// Case-insensitive ASCII comparison shared by catalog and parser lookups.
bool EqualsIgnoreCase(std::string_view a, std::string_view b);
std::string ToLowerAscii(std::string_view text);
std::string ToUpperAscii(std::string_view text);
std::string ReadFileOrThrow(const std::string& path);

}  // namespace sqltrace

#endif  // SQLTRACE_CATALOG_H_
