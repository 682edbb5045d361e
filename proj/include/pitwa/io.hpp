// Copyright 2026 The pitwa Authors
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

#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "pitwa/observables.hpp"

namespace pitwa {

inline constexpr int kSchemaVersion = 1;

// results.csv: time,observable,value,stderr,n_traj_alive. Rows are ordered by
// time, then by column order. Numbers use 17 significant digits so files are
// byte-reproducible.
void write_results_csv(std::ostream& os, const ObservableTable& table);
void write_results_csv(const std::string& path, const ObservableTable& table);
ObservableTable read_results_csv(std::istream& is);
ObservableTable read_results_csv(const std::string& path);

// One CSV record split into fields, honoring double quotes.
std::vector<std::string> split_csv_line(const std::string& line);
std::string csv_field(const std::string& s);

// Lowercase hex SHA-1 of raw bytes, and of the git blob object holding them.
std::string sha1_hex(const std::string& data);
std::string git_blob_id(const std::string& data);

// Frozen reference curve: '#'-prefixed header with spec hash, tolerance and
// content id of the body, followed by a results.csv body.
struct Fixture {
    std::map<std::string, std::string> header;
    ObservableTable table;
};
std::string fixture_text(const ObservableTable& table, const std::string& spec_json, double tolerance,
                         const std::string& description);
// Throws std::runtime_error if the content id does not match the body.
Fixture parse_fixture(const std::string& text);
Fixture read_fixture(const std::string& path);

struct SeriesComparison {
    std::string name;
    DiffSummary diff;
    double time_of_max = 0.0;
    double combined_stderr_at_max = 0.0;
};

// Max-abs and RMS differences for every observable present in both tables.
// Throws std::invalid_argument on mismatched record times or no overlap.
std::vector<SeriesComparison> compare_tables(const ObservableTable& a, const ObservableTable& b,
                                             const std::vector<std::string>& only = {});
void write_comparison_csv(std::ostream& os, const std::vector<SeriesComparison>& rows);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace pitwa
