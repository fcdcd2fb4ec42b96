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

#ifndef SQLTRACE_TESTS_SUPPORT_TEST_CATALOGS_H_
#define SQLTRACE_TESTS_SUPPORT_TEST_CATALOGS_H_

#include <string>

#include "sqltrace/catalog.h"

namespace sqltrace::testing {

// cars(name text, year number)
Catalog CarsCatalog();

// cars(id, name, year, horsepower, maker_id), makers(id, name, country),
// owners(id, name, age, car_id) with keys cars.maker_id -> makers.id and
// owners.car_id -> cars.id.
Catalog CarDbCatalog();
std::string CarDbJson();

// candidate(candidate_id, people_id, support_rate, poll_source),
// people(people_id, name)
Catalog CandidateCatalog();

std::string DataPath(const std::string& name);
std::string TemplatePath();
CatalogSet DataCatalogs();

}  // namespace sqltrace::testing

#endif  // SQLTRACE_TESTS_SUPPORT_TEST_CATALOGS_H_
