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

// Regenerates the frozen reference fixtures, or checks them with --check.

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "pitwa/fixtures.hpp"
#include "pitwa/io.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Regenerate or check the frozen reference fixtures"};
    std::string dir = "fixtures";
    bool check = false;
    double tol = 1e-9;
    app.add_option("dir", dir, "Fixture directory");
    app.add_flag("--check", check, "Compare instead of writing");
    app.add_option("--tolerance", tol, "Relative tolerance for --check");
    CLI11_PARSE(app, argc, argv);

    int failures = 0;
    for (const auto& fx : pitwa::reference_fixtures()) {
        const std::string path = dir + "/" + fx.file;
        const std::string text = fx.generate();
        if (!check) {
            pitwa::write_text_file(path, text);
            std::printf("wrote %s\n", path.c_str());
            continue;
        }
        std::string why;
        const bool ok = pitwa::fixture_texts_match(pitwa::read_text_file(path), text, tol, &why);
        std::printf("%s %s%s%s\n", ok ? "ok  " : "DIFF", fx.file.c_str(), ok ? "" : ": ", why.c_str());
        failures += ok ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
