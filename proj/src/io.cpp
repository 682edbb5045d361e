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

#include "pitwa/io.hpp"

#include <boost/uuid/detail/sha1.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pitwa {

namespace {

std::string number(double x) {
    if (std::isnan(x)) return "NaN";
    if (std::isinf(x)) return x > 0 ? "Infinity" : "-Infinity";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

double parse_number(const std::string& s) {
    if (s == "NaN" || s == "nan") return kUndefined;
    if (s == "Infinity") return HUGE_VAL;
    if (s == "-Infinity") return -HUGE_VAL;
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("malformed number '" + s + "'");
    return v;
}

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

}  // namespace

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (quoted) throw std::invalid_argument("unterminated quote in CSV record");
    out.push_back(cur);
    return out;
}

void write_results_csv(std::ostream& os, const ObservableTable& table) {
    os << "time,observable,value,stderr,n_traj_alive\r\n";
    for (std::size_t k = 0; k < table.times.size(); ++k) {
        const long alive = k < table.alive.size() ? table.alive[k] : 0;
        for (std::size_t o = 0; o < table.names.size(); ++o) {
            os << number(table.times[k]) << ',' << csv_field(table.names[o]) << ',' << number(table.values[o][k])
               << ',' << number(table.errors[o][k]) << ',' << alive << "\r\n";
        }
    }
}

void write_results_csv(const std::string& path, const ObservableTable& table) {
    std::ostringstream os;
    write_results_csv(os, table);
    write_text_file(path, os.str());
}

ObservableTable read_results_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::invalid_argument("results CSV is empty");
    while (!line.empty() && line[0] == '#') {
        if (!std::getline(is, line)) throw std::invalid_argument("results CSV has no header");
    }
    if (strip_cr(line) != "time,observable,value,stderr,n_traj_alive") {
        throw std::invalid_argument("results CSV header mismatch: '" + strip_cr(line) + "'");
    }
    ObservableTable t;
    while (std::getline(is, line)) {
        line = strip_cr(line);
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 5) throw std::invalid_argument("results CSV record needs 5 fields: '" + line + "'");
        const double time = parse_number(f[0]);
        if (t.times.empty() || t.times.back() != time) {
            t.times.push_back(time);
            t.alive.push_back(std::stol(f[4]));
            t.small_spin_fraction.push_back(0.0);
            for (auto& v : t.values) v.push_back(kUndefined);
            for (auto& e : t.errors) e.push_back(kUndefined);
        }
        const std::size_t o = t.ensure(f[1]);
        t.values[o].back() = parse_number(f[2]);
        t.errors[o].back() = parse_number(f[3]);
    }
    return t;
}

ObservableTable read_results_csv(const std::string& path) {
    std::istringstream is(read_text_file(path));
    return read_results_csv(is);
}

std::string sha1_hex(const std::string& data) {
    boost::uuids::detail::sha1 h;
    h.process_bytes(data.data(), data.size());
    boost::uuids::detail::sha1::digest_type d;
    h.get_digest(d);
    char buf[41];
    for (int i = 0; i < 5; ++i) std::snprintf(buf + 8 * i, 9, "%08x", d[i]);
    return std::string(buf, 40);
}

std::string git_blob_id(const std::string& data) {
    std::string obj = "blob " + std::to_string(data.size());
    obj.push_back('\0');
    return sha1_hex(obj + data);
}

std::string fixture_text(const ObservableTable& table, const std::string& spec_json, double tolerance,
                         const std::string& description) {
    std::ostringstream body;
    write_results_csv(body, table);
    const std::string b = body.str();
    std::ostringstream os;
    os << "# pitwa reference fixture v" << kSchemaVersion << "\n";
    os << "# description = " << description << "\n";
    os << "# spec = " << spec_json << "\n";
    os << "# spec_hash = " << sha1_hex(spec_json) << "\n";
    os << "# tolerance = " << number(tolerance) << "\n";
    os << "# content_id = " << git_blob_id(b) << "\n";
    os << b;
    return os.str();
}

Fixture parse_fixture(const std::string& text) {
    Fixture fx;
    std::size_t pos = 0;
    while (pos < text.size() && text[pos] == '#') {
        const std::size_t end = text.find('\n', pos);
        if (end == std::string::npos) throw std::runtime_error("fixture ends inside its header");
        const std::string line = text.substr(pos + 1, end - pos - 1);
        const std::size_t eq = line.find(" = ");
        if (eq != std::string::npos) {
            std::string key = line.substr(0, eq);
            key.erase(0, key.find_first_not_of(' '));
            fx.header[key] = line.substr(eq + 3);
        }
        pos = end + 1;
    }
    const std::string body = text.substr(pos);
    const auto it = fx.header.find("content_id");
    if (it == fx.header.end()) throw std::runtime_error("fixture header lacks content_id");
    if (git_blob_id(body) != it->second) throw std::runtime_error("fixture content id mismatch");
    const auto spec = fx.header.find("spec");
    const auto hash = fx.header.find("spec_hash");
    if (spec != fx.header.end() && hash != fx.header.end() && sha1_hex(spec->second) != hash->second) {
        throw std::runtime_error("fixture spec hash mismatch");
    }
    std::istringstream is(body);
    fx.table = read_results_csv(is);
    return fx;
}

Fixture read_fixture(const std::string& path) { return parse_fixture(read_text_file(path)); }

std::vector<SeriesComparison> compare_tables(const ObservableTable& a, const ObservableTable& b,
                                             const std::vector<std::string>& only) {
    if (a.times.size() != b.times.size()) throw std::invalid_argument("compare: record counts differ");
    for (std::size_t k = 0; k < a.times.size(); ++k) {
        if (std::abs(a.times[k] - b.times[k]) > 1e-9 * std::max(1.0, std::abs(a.times[k]))) {
            throw std::invalid_argument("compare: record times differ at index " + std::to_string(k));
        }
    }
    std::vector<SeriesComparison> out;
    for (const std::string& name : a.names) {
        if (!b.has(name)) continue;
        if (!only.empty() && std::find(only.begin(), only.end(), name) == only.end()) continue;
        const auto& va = a.series(name);
        const auto& vb = b.series(name);
        SeriesComparison c;
        c.name = name;
        c.diff = diff_series(va, vb);
        double worst = -1.0;
        for (std::size_t k = 0; k < va.size(); ++k) {
            const double d = std::abs(va[k] - vb[k]);
            if (std::isnan(d) || d <= worst) continue;
            worst = d;
            c.time_of_max = a.times[k];
            const double ea = a.error_series(name)[k], eb = b.error_series(name)[k];
            c.combined_stderr_at_max = std::sqrt((std::isnan(ea) ? 0.0 : ea * ea) + (std::isnan(eb) ? 0.0 : eb * eb));
        }
        out.push_back(c);
    }
    if (out.empty()) throw std::invalid_argument("compare: no common observables");
    for (const std::string& name : only) {
        if (std::none_of(out.begin(), out.end(), [&](const SeriesComparison& c) { return c.name == name; })) {
            throw std::invalid_argument("compare: observable '" + name + "' missing from an input");
        }
    }
    return out;
}

void write_comparison_csv(std::ostream& os, const std::vector<SeriesComparison>& rows) {
    os << "observable,max_abs,rms,time_of_max,combined_stderr_at_max\r\n";
    for (const auto& r : rows) {
        os << csv_field(r.name) << ',' << number(r.diff.max_abs) << ',' << number(r.diff.rms) << ','
           << number(r.time_of_max) << ',' << number(r.combined_stderr_at_max) << "\r\n";
    }
}

std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << text;
    if (!f) throw std::runtime_error("write failed for " + path);
}

}  // namespace pitwa
