/*
* Copyright (C) 2026 The lctsim Authors
*
* Licensed under the Apache License, Version 2.0 (the "License");
* you may not use this file except in compliance with the License.
* You may obtain a copy of the License at
*
*     http://www.apache.org/licenses/LICENSE-2.0
*
* Unless required by applicable law or agreed to in writing, software
* distributed under the License is distributed on an "AS IS" BASIS,
* WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
* See the License for the specific language governing permissions and
* limitations under the License.
*/
#include "lctsim/error.h"
#include "lctsim/io.h"
#include "lctsim/scenarios.h"

#include "CLI11.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    using namespace lctsim;
    CLI::App app{"Write synthetic reported cases and ICU data generated by a forward simulation."};
    std::string out_dir = "data", date = "2020-10-01", model_name = "lctvar";
    int first = -40, last = 55;
    app.add_option("--out", out_dir, "Output directory")->capture_default_str();
    app.add_option("--date", date, "Reference date t = 0 (YYYY-MM-DD)")->capture_default_str();
    app.add_option("--first", first, "First reported day relative to the reference date (days)")->capture_default_str();
    app.add_option("--last", last, "Last reported day relative to the reference date (days)")->capture_default_str();
    app.add_option("--model", model_name, "Generating model: ode, lctX, lctvar")->capture_default_str();
    CLI11_PARSE(app, argc, argv);

    try {
        auto [model, y_start] = scenarios::synthetic_generator(model_name);
        const int t0          = parse_date(date);
        auto synthetic = scenarios::synthesize_reported(model, y_start, scenarios::synthetic_generator_start, last + 35, t0, first, last);
        const fs::path dir(out_dir);
        write_reported(dir / "synthetic_cases.csv", dir / "synthetic_icu.csv", synthetic.data);
        write_trajectory(dir / "synthetic_generator_trajectory.csv", model,
                         scenarios::daily_snapshots(synthetic.trajectory));
        std::cout << "Wrote synthetic_cases.csv, synthetic_icu.csv and synthetic_generator_trajectory.csv to "
                  << dir.string() << ".\n";
    }
    catch (const Error& e) {
        std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
        return is_numerical(e.kind()) ? 3 : 2;
    }
    return 0;
}
