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
#include "lctsim/io.h"
#include "lctsim/error.h"
#include "lctsim/presets.h"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

namespace lctsim
{

using json = nlohmann::json;

namespace
{

constexpr const char* chain_keys[] = {"E", "C", "I", "H", "U"};

std::string trim(const std::string& s)
{
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return "";
    }
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv_line(const std::string& line)
{
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) {
        fields.push_back(trim(field));
    }
    if (!line.empty() && line.back() == ',') {
        fields.emplace_back();
    }
    return fields;
}

// Nonempty lines of a text file.
std::vector<std::string> read_lines(const fs::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::Io, "Cannot open '" + path.string() + "' for reading.");
    }
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!trim(line).empty()) {
            lines.push_back(trim(line));
        }
    }
    return lines;
}

std::string location(const fs::path& path, std::size_t line)
{
    return path.string() + ":" + std::to_string(line);
}

// Cursor into a JSON document that knows its own path for error messages.
class Node
{
public:
    Node(const json& value, std::string path)
        : m_value(value)
        , m_path(std::move(path))
    {
    }

    [[noreturn]] void fail(const std::string& msg) const
    {
        throw Error(ErrorKind::Validation, m_path + ": " + msg);
    }

    const json& value() const
    {
        return m_value;
    }

    const std::string& path() const
    {
        return m_path;
    }

    bool has(const std::string& key) const
    {
        return m_value.is_object() && m_value.contains(key);
    }

    Node operator[](const std::string& key) const
    {
        require_object();
        if (!m_value.contains(key)) {
            fail("missing key '" + key + "'");
        }
        return Node(m_value.at(key), m_path + "." + key);
    }

    Node operator[](std::size_t i) const
    {
        return Node(m_value.at(i), m_path + "[" + std::to_string(i) + "]");
    }

    void require_object() const
    {
        if (!m_value.is_object()) {
            fail("expected an object");
        }
    }

    std::size_t array_size() const
    {
        if (!m_value.is_array()) {
            fail("expected an array");
        }
        return m_value.size();
    }

    void allow_keys(std::initializer_list<const char*> keys) const
    {
        require_object();
        std::set<std::string> allowed(keys.begin(), keys.end());
        for (auto it = m_value.begin(); it != m_value.end(); ++it) {
            if (!allowed.count(it.key())) {
                fail("unknown key '" + it.key() + "'");
            }
        }
    }

    ScalarType number() const
    {
        if (!m_value.is_number()) {
            fail("expected a number");
        }
        ScalarType v = m_value.get<ScalarType>();
        if (!std::isfinite(v)) {
            fail("expected a finite number");
        }
        return v;
    }

    std::size_t count() const
    {
        if (!m_value.is_number_integer() || m_value.get<long long>() < 1) {
            fail("expected a positive integer");
        }
        return m_value.get<std::size_t>();
    }

    std::string string() const
    {
        if (!m_value.is_string()) {
            fail("expected a string");
        }
        return m_value.get<std::string>();
    }

    bool boolean() const
    {
        if (!m_value.is_boolean()) {
            fail("expected true or false");
        }
        return m_value.get<bool>();
    }

    // A number for all groups or an array with one number per group.
    std::vector<ScalarType> per_group(std::size_t m) const
    {
        if (m_value.is_array()) {
            if (m_value.size() != m) {
                fail("expected " + std::to_string(m) + " values, one per age group, got " +
                     std::to_string(m_value.size()));
            }
            std::vector<ScalarType> v;
            for (std::size_t i = 0; i < m; ++i) {
                v.push_back((*this)[i].number());
            }
            return v;
        }
        return std::vector<ScalarType>(m, number());
    }

    std::vector<std::size_t> per_group_count(std::size_t m) const
    {
        if (m_value.is_array()) {
            if (m_value.size() != m) {
                fail("expected " + std::to_string(m) + " counts, one per age group");
            }
            std::vector<std::size_t> v;
            for (std::size_t i = 0; i < m; ++i) {
                v.push_back((*this)[i].count());
            }
            return v;
        }
        return std::vector<std::size_t>(m, count());
    }

    Matrix<ScalarType> matrix() const
    {
        const std::size_t rows = array_size();
        Matrix<ScalarType> out;
        for (std::size_t i = 0; i < rows; ++i) {
            Node row          = (*this)[i];
            const std::size_t cols = row.array_size();
            if (i == 0) {
                out.resize(Eigen::Index(rows), Eigen::Index(cols));
            }
            else if (Eigen::Index(cols) != out.cols()) {
                row.fail("rows have different lengths");
            }
            for (std::size_t k = 0; k < cols; ++k) {
                out(Eigen::Index(i), Eigen::Index(k)) = row[k].number();
            }
        }
        return out;
    }

private:
    const json& m_value;
    std::string m_path;
};

json matrix_to_json(const Matrix<ScalarType>& m)
{
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) {
            row.push_back(m(i, k));
        }
        rows.push_back(row);
    }
    return rows;
}

Matrix<ScalarType> matrix_from(const Node& node, const fs::path& base_dir, json& resolved)
{
    if (node.has("matrix") == node.has("file")) {
        node.fail("expected exactly one of 'matrix' or 'file'");
    }
    Matrix<ScalarType> m;
    if (node.has("matrix")) {
        m = node["matrix"].matrix();
    }
    else {
        fs::path p = base_dir / node["file"].string();
        if (!fs::exists(p)) {
            node["file"].fail("file '" + p.string() + "' does not exist");
        }
        m = read_matrix_csv(p);
    }
    resolved = matrix_to_json(m);
    return m;
}

ModelSpec<ScalarType> parse_model(const Node& root, const fs::path& base_dir, json& resolved)
{
    ModelSpec<ScalarType> spec;

    Node groups           = root["age_groups"];
    const std::size_t m   = groups.array_size();
    if (m == 0) {
        groups.fail("at least one age group is required");
    }
    std::vector<ScalarType> population;
    std::set<std::string> names;
    for (std::size_t i = 0; i < m; ++i) {
        Node g = groups[i];
        g.allow_keys({"name", "population"});
        auto name = g["name"].string();
        if (!names.insert(name).second) {
            g["name"].fail("duplicate age group '" + name + "'");
        }
        spec.group_names.push_back(name);
        population.push_back(g["population"].number());
        resolved["age_groups"].push_back({{"name", name}, {"population", population.back()}});
    }

    Node par = root["parameters"];
    par.allow_keys({"transmission_risk", "isolation_carrier", "isolation_infected", "stay_time", "transition_prob"});
    auto rho  = par["transmission_risk"].per_group(m);
    auto xi_c = par["isolation_carrier"].per_group(m);
    auto xi_i = par["isolation_infected"].per_group(m);
    Node stay = par["stay_time"];
    stay.allow_keys({"E", "C", "I", "H", "U"});
    std::vector<std::vector<ScalarType>> stays;
    for (auto key : chain_keys) {
        stays.push_back(stay[key].per_group(m));
    }
    Node prob = par["transition_prob"];
    prob.allow_keys({"C_to_I", "I_to_H", "H_to_U", "U_to_D"});
    auto mu_ci = prob["C_to_I"].per_group(m);
    auto mu_ih = prob["I_to_H"].per_group(m);
    auto mu_hu = prob["H_to_U"].per_group(m);
    auto mu_ud = prob["U_to_D"].per_group(m);

    for (std::size_t i = 0; i < m; ++i) {
        AgeGroupParams<ScalarType> p;
        p.transmission_risk  = rho[i];
        p.isolation_carrier  = xi_c[i];
        p.isolation_infected = xi_i[i];
        for (std::size_t z = 0; z < 5; ++z) {
            p.stay_time[z] = stays[z][i];
        }
        p.prob_carrier_to_infected      = mu_ci[i];
        p.prob_infected_to_hospitalized = mu_ih[i];
        p.prob_hospitalized_to_icu      = mu_hu[i];
        p.prob_icu_to_dead              = mu_ud[i];
        p.population                    = population[i];
        try {
            p.validate(spec.group_names[i]);
        }
        catch (const Error& e) {
            par.fail(e.what());
        }
        spec.groups.push_back(p);
    }
    json& rp                = resolved["parameters"];
    rp["transmission_risk"] = rho;
    rp["isolation_carrier"] = xi_c;
    rp["isolation_infected"] = xi_i;
    for (std::size_t z = 0; z < 5; ++z) {
        rp["stay_time"][chain_keys[z]] = stays[z];
    }
    rp["transition_prob"] = {{"C_to_I", mu_ci}, {"I_to_H", mu_ih}, {"H_to_U", mu_hu}, {"U_to_D", mu_ud}};

    Node sub = root["subcompartments"];
    if (sub.value().is_string()) {
        try {
            spec.subcompartments = presets::subcompartments_from_name(sub.string(), spec.groups);
        }
        catch (const Error& e) {
            sub.fail(e.what());
        }
    }
    else {
        sub.allow_keys({"E", "C", "I", "H", "U"});
        spec.subcompartments = SubcompartmentConfig::uniform(m, 1);
        for (std::size_t z = 0; z < 5; ++z) {
            if (sub.has(chain_keys[z])) {
                auto counts = sub[chain_keys[z]].per_group_count(m);
                for (std::size_t i = 0; i < m; ++i) {
                    spec.subcompartments.set(i, chain_states[z], counts[i]);
                }
            }
        }
    }
    for (std::size_t z = 0; z < 5; ++z) {
        std::vector<std::size_t> counts;
        for (std::size_t i = 0; i < m; ++i) {
            counts.push_back(spec.subcompartments.get(i, chain_states[z]));
        }
        resolved["subcompartments"][chain_keys[z]] = counts;
    }

    Node contacts = root["contacts"];
    contacts.allow_keys({"matrix", "file", "change_points"});
    spec.contacts = ContactSchedule<ScalarType>(matrix_from(contacts, base_dir, resolved["contacts"]["baseline"]));
    if (static_cast<std::size_t>(spec.contacts.num_groups()) != m) {
        contacts.fail("contact matrix has dimension " + std::to_string(spec.contacts.num_groups()) + ", expected " +
                      std::to_string(m) + " (number of age groups)");
    }
    resolved["contacts"]["change_points"] = json::array();
    if (contacts.has("change_points")) {
        Node cps = contacts["change_points"];
        for (std::size_t k = 0; k < cps.array_size(); ++k) {
            Node cp = cps[k];
            cp.allow_keys({"day", "scale", "matrix", "file"});
            ScalarType day = cp["day"].number();
            json entry     = {{"day", day}};
            try {
                if (cp.has("scale")) {
                    if (cp.has("matrix") || cp.has("file")) {
                        cp.fail("expected either 'scale' or a matrix");
                    }
                    spec.contacts.add_scale(day, cp["scale"].number());
                    entry["scale"] = cp["scale"].number();
                }
                else {
                    spec.contacts.add_matrix(day, matrix_from(cp, base_dir, entry["matrix"]));
                }
            }
            catch (const Error& e) {
                if (std::string(e.what()).rfind("$", 0) == 0) {
                    throw;
                }
                cp.fail(e.what());
            }
            resolved["contacts"]["change_points"].push_back(entry);
        }
    }

    try {
        spec.validate();
    }
    catch (const Error& e) {
        root.fail(e.what());
    }
    return spec;
}

InitialStatePlan parse_initial(const Node& node, const ModelSpec<ScalarType>& spec, const fs::path& base_dir,
                               json& resolved)
{
    node.allow_keys({"totals", "constant_dynamics", "from_data"});
    if (node.value().size() != 1) {
        node.fail("expected exactly one of 'totals', 'constant_dynamics' or 'from_data'");
    }
    InitialStatePlan plan;
    const std::size_t m = spec.num_groups();
    if (node.has("totals")) {
        plan.kind  = InitialStatePlan::Kind::Totals;
        Node tot   = node["totals"];
        if (tot.array_size() != m) {
            tot.fail("expected one entry per age group");
        }
        plan.totals = CompartmentTotals<ScalarType>::Zero(Eigen::Index(m), Eigen::Index(num_infection_states));
        for (std::size_t i = 0; i < m; ++i) {
            Node g = tot[i];
            g.allow_keys({"S", "E", "C", "I", "H", "U", "R", "D"});
            ScalarType others = 0;
            for (auto s : all_infection_states) {
                const std::string key(to_string(s));
                if (s != InfectionState::S && g.has(key)) {
                    ScalarType v = g[key].number();
                    if (v < 0) {
                        g[key].fail("compartment totals must be nonnegative");
                    }
                    plan.totals(Eigen::Index(i), Eigen::Index(s)) = v;
                    others += v;
                }
            }
            ScalarType sus = g.has("S") ? g["S"].number() : spec.groups[i].population - others;
            if (sus < 0) {
                g.fail("compartment totals exceed the population of group " + spec.group_names[i]);
            }
            if (g.has("S") && std::abs(sus + others - spec.groups[i].population) >
                                  1e-9 * std::max<ScalarType>(1, spec.groups[i].population)) {
                g.fail("compartment totals do not add up to the population of group " + spec.group_names[i]);
            }
            plan.totals(Eigen::Index(i), 0) = sus;
            json entry;
            for (auto s : all_infection_states) {
                entry[std::string(to_string(s))] = plan.totals(Eigen::Index(i), Eigen::Index(s));
            }
            resolved["totals"].push_back(entry);
        }
    }
    else if (node.has("constant_dynamics")) {
        plan.kind = InitialStatePlan::Kind::ConstantDynamics;
        Node cd   = node["constant_dynamics"];
        cd.allow_keys({"sigma"});
        plan.sigma = cd["sigma"].number();
        if (plan.sigma < 0) {
            cd["sigma"].fail("daily new transmissions must be nonnegative");
        }
        if (m != 1) {
            cd.fail("constant-dynamics initialization needs exactly one age group");
        }
        resolved["constant_dynamics"]["sigma"] = plan.sigma;
    }
    else {
        plan.kind = InitialStatePlan::Kind::FromData;
        Node fd   = node["from_data"];
        fd.allow_keys({"cases", "icu", "t0", "detection_ratio", "icu_rescale"});
        plan.cases = fs::absolute(base_dir / fd["cases"].string());
        if (!fs::exists(plan.cases)) {
            fd["cases"].fail("file '" + plan.cases.string() + "' does not exist");
        }
        plan.icu_rescale = fd.has("icu_rescale") ? fd["icu_rescale"].boolean() : true;
        if (fd.has("icu")) {
            plan.icu = fs::absolute(base_dir / fd["icu"].string());
            if (!fs::exists(*plan.icu)) {
                fd["icu"].fail("file '" + plan.icu->string() + "' does not exist");
            }
        }
        else if (plan.icu_rescale) {
            fd.fail("'icu' is required when icu_rescale is true");
        }
        try {
            plan.t0_stamp = parse_date(fd["t0"].string());
        }
        catch (const Error& e) {
            fd["t0"].fail(e.what());
        }
        plan.detection_ratio = fd.has("detection_ratio") ? fd["detection_ratio"].number() : 1.0;
        if (!(plan.detection_ratio > 0 && plan.detection_ratio <= 1)) {
            fd["detection_ratio"].fail("detection ratio must be in (0, 1]");
        }
        json& r             = resolved["from_data"];
        r["cases"]          = plan.cases.string();
        r["icu"]            = plan.icu ? json(plan.icu->string()) : json(nullptr);
        r["t0"]             = format_date(plan.t0_stamp);
        r["detection_ratio"] = plan.detection_ratio;
        r["icu_rescale"]    = plan.icu_rescale;
    }
    return plan;
}

SolverPlan parse_solver(const Node& node, json& resolved)
{
    SolverPlan plan;
    const std::string type = node["type"].string();
    if (type == "fixed") {
        node.allow_keys({"type", "dt"});
        plan.type = SolverPlan::Type::Fixed;
        if (node.has("dt")) {
            plan.dt = node["dt"].number();
        }
        if (!(plan.dt > 0)) {
            node["dt"].fail("step size must be positive");
        }
        resolved = {{"type", type}, {"dt", plan.dt}};
    }
    else if (type == "adaptive") {
        node.allow_keys({"type", "abs_tol", "rel_tol"});
        plan.type = SolverPlan::Type::Adaptive;
        if (node.has("abs_tol")) {
            plan.abs_tol = node["abs_tol"].number();
        }
        if (node.has("rel_tol")) {
            plan.rel_tol = node["rel_tol"].number();
        }
        if (!(plan.abs_tol > 0) || !(plan.rel_tol > 0)) {
            node.fail("tolerances must be positive");
        }
        resolved = {{"type", type}, {"abs_tol", plan.abs_tol}, {"rel_tol", plan.rel_tol}};
    }
    else {
        node["type"].fail("expected 'fixed' or 'adaptive'");
    }
    return plan;
}

} // namespace

int parse_date(const std::string& text)
{
    using namespace std::chrono;
    int y = 0;
    unsigned mo = 0, d = 0;
    char rest   = 0;
    if (text.size() != 10 || std::sscanf(text.c_str(), "%4d-%2u-%2u%c", &y, &mo, &d, &rest) != 3 ||
        text[4] != '-' || text[7] != '-') {
        throw Error(ErrorKind::Validation, "Invalid date '" + text + "', expected YYYY-MM-DD.");
    }
    year_month_day ymd{year{y}, month{mo}, day{d}};
    if (!ymd.ok()) {
        throw Error(ErrorKind::Validation, "Invalid date '" + text + "'.");
    }
    return static_cast<int>(sys_days(ymd).time_since_epoch().count());
}

std::string format_date(int day_stamp)
{
    using namespace std::chrono;
    year_month_day ymd{sys_days{days{day_stamp}}};
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", int(ymd.year()), unsigned(ymd.month()), unsigned(ymd.day()));
    return buf;
}

std::string format_number(ScalarType value)
{
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

ScalarType parse_number(const std::string& text, const std::string& where)
{
    ScalarType v = 0;
    const char* begin = text.data();
    const char* end   = text.data() + text.size();
    auto res          = std::from_chars(begin, end, v);
    if (res.ec != std::errc() || res.ptr != end) {
        throw Error(ErrorKind::Validation, where + ": '" + text + "' is not a number.");
    }
    return v;
}

Matrix<ScalarType> read_matrix_csv(const fs::path& path)
{
    auto lines = read_lines(path);
    if (lines.empty()) {
        throw Error(ErrorKind::Validation, path.string() + ": contact matrix file is empty.");
    }
    Matrix<ScalarType> m(Eigen::Index(lines.size()), Eigen::Index(lines.size()));
    for (std::size_t i = 0; i < lines.size(); ++i) {
        auto fields = split_csv_line(lines[i]);
        if (fields.size() != lines.size()) {
            throw Error(ErrorKind::Validation, location(path, i + 1) + ": expected " + std::to_string(lines.size()) +
                                                   " values for a square matrix, got " +
                                                   std::to_string(fields.size()) + ".");
        }
        for (std::size_t k = 0; k < fields.size(); ++k) {
            m(Eigen::Index(i), Eigen::Index(k)) = parse_number(fields[k], location(path, i + 1));
        }
    }
    return m;
}

ReportedData load_reported(const fs::path& cases, const std::optional<fs::path>& icu)
{
    auto lines = read_lines(cases);
    if (lines.empty() || lines[0] != "date,age_group,cumulative_confirmed,cumulative_deaths") {
        throw Error(ErrorKind::Validation,
                    cases.string() + ": expected header date,age_group,cumulative_confirmed,cumulative_deaths.");
    }
    ReportedData data;
    struct Row {
        ScalarType confirmed;
        ScalarType deaths;
        std::size_t line;
    };
    std::map<std::string, std::map<int, Row>> rows;
    int first = 0, last = 0;
    for (std::size_t l = 1; l < lines.size(); ++l) {
        auto f = split_csv_line(lines[l]);
        if (f.size() != 4) {
            throw Error(ErrorKind::Validation, location(cases, l + 1) + ": expected 4 fields.");
        }
        int day = parse_date(f[0]);
        if (!rows.count(f[1])) {
            data.group_names.push_back(f[1]);
        }
        auto& group = rows[f[1]];
        if (group.count(day)) {
            throw Error(ErrorKind::Validation,
                        location(cases, l + 1) + ": duplicate row for " + f[0] + " and group " + f[1] + ".");
        }
        group[day] = {parse_number(f[2], location(cases, l + 1)), parse_number(f[3], location(cases, l + 1)), l + 1};
        first      = l == 1 ? day : std::min(first, day);
        last       = l == 1 ? day : std::max(last, day);
    }
    if (data.group_names.empty()) {
        throw Error(ErrorKind::Validation, cases.string() + ": no data rows.");
    }
    for (const auto& name : data.group_names) {
        const auto& group = rows[name];
        DailyReport conf{first, {}}, dead{first, {}};
        for (int day = first; day <= last; ++day) {
            auto it = group.find(day);
            if (it == group.end()) {
                throw Error(ErrorKind::Validation, cases.string() + ": group " + name + " has no row for " +
                                                       format_date(day) + ".");
            }
            const Row& row = it->second;
            if (!conf.values.empty() && (row.confirmed < conf.values.back() || row.deaths < dead.values.back())) {
                throw Error(ErrorKind::Validation, location(cases, row.line) + ": cumulative values of group " +
                                                       name + " decrease on " + format_date(day) + ".");
            }
            conf.values.push_back(row.confirmed);
            dead.values.push_back(row.deaths);
        }
        data.confirmed.push_back(std::move(conf));
        data.deaths.push_back(std::move(dead));
    }

    if (icu) {
        auto icu_lines = read_lines(*icu);
        if (icu_lines.empty() || icu_lines[0] != "date,icu_occupancy") {
            throw Error(ErrorKind::Validation, icu->string() + ": expected header date,icu_occupancy.");
        }
        for (std::size_t l = 1; l < icu_lines.size(); ++l) {
            auto f = split_csv_line(icu_lines[l]);
            if (f.size() != 2) {
                throw Error(ErrorKind::Validation, location(*icu, l + 1) + ": expected 2 fields.");
            }
            int day = parse_date(f[0]);
            if (l == 1) {
                data.icu.first_day = day;
            }
            else if (day != data.icu.last_day() + 1) {
                throw Error(ErrorKind::Validation, location(*icu, l + 1) + ": expected one row per day, got " + f[0] +
                                                       " after " + format_date(data.icu.last_day()) + ".");
            }
            ScalarType v = parse_number(f[1], location(*icu, l + 1));
            if (v < 0) {
                throw Error(ErrorKind::Validation, location(*icu, l + 1) + ": ICU occupancy is negative.");
            }
            data.icu.values.push_back(v);
        }
    }
    data.validate();
    return data;
}

std::ofstream open_output(const fs::path& path)
{
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
        if (ec) {
            throw Error(ErrorKind::Io, "Cannot create directory '" + path.parent_path().string() + "': " + ec.message());
        }
    }
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorKind::Io, "Cannot open '" + path.string() + "' for writing.");
    }
    return out;
}

void write_reported(const fs::path& cases, const fs::path& icu, const ReportedData& data)
{
    data.validate();
    auto out = open_output(cases);
    out << "date,age_group,cumulative_confirmed,cumulative_deaths\n";
    const int first = data.confirmed.front().first_day;
    const int last  = data.confirmed.front().last_day();
    for (int day = first; day <= last; ++day) {
        for (std::size_t i = 0; i < data.group_names.size(); ++i) {
            const auto k = std::size_t(day - first);
            out << format_date(day) << ',' << data.group_names[i] << ',' << format_number(data.confirmed[i].values[k])
                << ',' << format_number(data.deaths[i].values[k]) << '\n';
        }
    }
    auto icu_out = open_output(icu);
    icu_out << "date,icu_occupancy\n";
    for (std::size_t k = 0; k < data.icu.values.size(); ++k) {
        icu_out << format_date(data.icu.first_day + int(k)) << ',' << format_number(data.icu.values[k]) << '\n';
    }
}

RunConfig parse_config(const json& doc, const fs::path& base_dir)
{
    Node root(doc, "$");
    root.allow_keys({"description", "age_groups", "parameters", "subcompartments", "contacts", "initial_state",
                     "solver", "horizon"});
    RunConfig cfg;
    cfg.resolved = json::object();
    if (root.has("description")) {
        cfg.resolved["description"] = root["description"].string();
    }
    cfg.spec    = parse_model(root, base_dir, cfg.resolved);
    cfg.initial = parse_initial(root["initial_state"], cfg.spec, base_dir, cfg.resolved["initial_state"]);
    cfg.solver  = root.has("solver") ? parse_solver(root["solver"], cfg.resolved["solver"])
                                     : parse_solver(Node(json{{"type", "fixed"}}, "$.solver"), cfg.resolved["solver"]);

    Node hz = root["horizon"];
    hz.allow_keys({"t_start", "t_end", "output_cadence_days"});
    cfg.horizon.t_start        = hz.has("t_start") ? hz["t_start"].number() : 0;
    cfg.horizon.t_end          = hz["t_end"].number();
    cfg.horizon.output_cadence = hz.has("output_cadence_days") ? hz["output_cadence_days"].number() : 1;
    if (!(cfg.horizon.t_end > cfg.horizon.t_start)) {
        hz.fail("t_end must be larger than t_start");
    }
    if (!(cfg.horizon.output_cadence >= 0)) {
        hz["output_cadence_days"].fail("cadence must be nonnegative");
    }
    cfg.resolved["horizon"] = {{"t_start", cfg.horizon.t_start},
                               {"t_end", cfg.horizon.t_end},
                               {"output_cadence_days", cfg.horizon.output_cadence}};
    return cfg;
}

RunConfig load_config(const fs::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::Io, "Cannot open configuration '" + path.string() + "'.");
    }
    json doc;
    try {
        doc = json::parse(in);
    }
    catch (const json::parse_error& e) {
        throw Error(ErrorKind::Validation, path.string() + ": " + e.what());
    }
    return parse_config(doc, fs::absolute(path).parent_path());
}

std::string config_hash(const json& doc)
{
    const std::string text = doc.dump();
    std::uint64_t h        = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Vector<ScalarType> build_initial_state(const Model<ScalarType>& model, const RunConfig& cfg)
{
    const auto& plan = cfg.initial;
    switch (plan.kind) {
    case InitialStatePlan::Kind::Totals:
        return uniform_fill(model, plan.totals);
    case InitialStatePlan::Kind::ConstantDynamics:
        return constant_dynamics_init(model, plan.sigma);
    case InitialStatePlan::Kind::FromData:
        break;
    }
    auto data = load_reported(plan.cases, plan.icu);
    InitSettings s;
    s.t0              = plan.t0_stamp;
    s.detection_ratio = plan.detection_ratio;
    s.icu_rescale     = plan.icu_rescale;
    return init_from_data(model, data, s);
}

Trajectory<ScalarType> simulate(const Model<ScalarType>& model, const Vector<ScalarType>& y0, const RunConfig& cfg)
{
    if (cfg.solver.type == SolverPlan::Type::Fixed) {
        FixedStepSettings<ScalarType> s;
        s.dt             = cfg.solver.dt;
        s.t_start        = cfg.horizon.t_start;
        s.t_end          = cfg.horizon.t_end;
        s.output_cadence = cfg.horizon.output_cadence;
        return integrate_fixed(model, y0, s);
    }
    AdaptiveSettings<ScalarType> s;
    s.abs_tol        = cfg.solver.abs_tol;
    s.rel_tol        = cfg.solver.rel_tol;
    s.t_start        = cfg.horizon.t_start;
    s.t_end          = cfg.horizon.t_end;
    s.output_cadence = cfg.horizon.output_cadence;
    return integrate_adaptive(model, y0, s);
}

std::vector<std::string> trajectory_columns(const Model<ScalarType>& model, bool subcompartments)
{
    std::vector<std::string> cols{"t"};
    const auto& lo = model.layout();
    for (std::size_t i = 0; i < model.num_groups(); ++i) {
        for (auto s : all_infection_states) {
            const std::string base = model.spec().group_names[i] + "_" + std::string(to_string(s));
            if (subcompartments && is_chain_state(s)) {
                for (std::size_t j = 1; j <= lo.count(i, s); ++j) {
                    cols.push_back(base + "_" + std::to_string(j));
                }
            }
            else {
                cols.push_back(base);
            }
        }
    }
    return cols;
}

void write_trajectory(const fs::path& path, const Model<ScalarType>& model, const Trajectory<ScalarType>& traj,
                      bool subcompartments)
{
    Table table;
    table.columns = trajectory_columns(model, subcompartments);
    for (std::size_t k = 0; k < traj.size(); ++k) {
        std::vector<ScalarType> row{traj.time(k)};
        if (subcompartments) {
            const auto& v = traj.value(k);
            row.insert(row.end(), v.data(), v.data() + v.size());
        }
        else {
            auto totals = model.aggregate(traj.value(k));
            for (Eigen::Index i = 0; i < totals.rows(); ++i) {
                for (Eigen::Index s = 0; s < totals.cols(); ++s) {
                    row.push_back(totals(i, s));
                }
            }
        }
        table.rows.push_back(std::move(row));
    }
    write_table(path, table);
}

Table read_table(const fs::path& path)
{
    auto lines = read_lines(path);
    if (lines.empty()) {
        throw Error(ErrorKind::Validation, path.string() + ": missing header.");
    }
    Table table;
    table.columns = split_csv_line(lines[0]);
    for (std::size_t l = 1; l < lines.size(); ++l) {
        auto f = split_csv_line(lines[l]);
        if (f.size() != table.columns.size()) {
            throw Error(ErrorKind::Validation, location(path, l + 1) + ": expected " +
                                                   std::to_string(table.columns.size()) + " fields.");
        }
        std::vector<ScalarType> row;
        for (const auto& x : f) {
            row.push_back(parse_number(x, location(path, l + 1)));
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

void write_table(const fs::path& path, const Table& table)
{
    auto out = open_output(path);
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        out << (c ? "," : "") << table.columns[c];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            out << (c ? "," : "") << format_number(row[c]);
        }
        out << '\n';
    }
    if (!out) {
        throw Error(ErrorKind::Io, "Writing '" + path.string() + "' failed.");
    }
}

void write_series(const fs::path& path, const DailySeries& series)
{
    series.validate();
    Table t;
    t.columns = {"day", series.label};
    for (std::size_t k = 0; k < series.size(); ++k) {
        t.rows.push_back({series.days[k], series.values[k]});
    }
    write_table(path, t);
}

DailySeries read_series(const fs::path& path)
{
    Table t = read_table(path);
    if (t.columns.size() != 2 || t.columns[0] != "day") {
        throw Error(ErrorKind::Validation, path.string() + ": expected header day,<label>.");
    }
    DailySeries s;
    s.label = t.columns[1];
    for (const auto& row : t.rows) {
        s.days.push_back(row[0]);
        s.values.push_back(row[1]);
    }
    s.validate();
    return s;
}

void write_percentiles(const fs::path& path, const std::vector<PercentileBand>& bands)
{
    auto out = open_output(path);
    out << "day,series,p5,p25,p50,p75,p95\n";
    for (const auto& band : bands) {
        for (std::size_t d = 0; d < band.days.size(); ++d) {
            out << format_number(band.days[d]) << ',' << band.series;
            for (auto v : band.values[d]) {
                out << ',' << format_number(v);
            }
            out << '\n';
        }
    }
}

std::vector<PercentileBand> read_percentiles(const fs::path& path)
{
    auto lines = read_lines(path);
    if (lines.empty() || lines[0] != "day,series,p5,p25,p50,p75,p95") {
        throw Error(ErrorKind::Validation, path.string() + ": expected header day,series,p5,p25,p50,p75,p95.");
    }
    std::vector<PercentileBand> bands;
    for (std::size_t l = 1; l < lines.size(); ++l) {
        auto f = split_csv_line(lines[l]);
        if (f.size() != 7) {
            throw Error(ErrorKind::Validation, location(path, l + 1) + ": expected 7 fields.");
        }
        if (bands.empty() || bands.back().series != f[1]) {
            bands.push_back(PercentileBand{f[1], {}, {}});
        }
        bands.back().days.push_back(parse_number(f[0], location(path, l + 1)));
        std::array<ScalarType, 5> q{};
        for (std::size_t k = 0; k < 5; ++k) {
            q[k] = parse_number(f[k + 2], location(path, l + 1));
        }
        bands.back().values.push_back(q);
    }
    return bands;
}

void write_timing(const fs::path& path, const std::vector<TimingRow>& rows)
{
    Table t;
    t.columns = {"workers", "wall_seconds", "speedup"};
    for (const auto& r : rows) {
        t.rows.push_back({ScalarType(r.workers), r.wall_seconds, r.speedup});
    }
    write_table(path, t);
}

void write_metadata(const fs::path& path, const json& resolved, const SolverStats& stats)
{
    json meta;
    meta["spec_hash"]        = config_hash(resolved);
    meta["software_version"] = software_version;
    meta["solver_stats"]     = {{"accepted_steps", stats.accepted_steps},
                                {"rejected_steps", stats.rejected_steps},
                                {"rhs_evaluations", stats.rhs_evaluations}};
    meta["config"]           = resolved;
    auto out                 = open_output(path);
    out << meta.dump(2) << '\n';
}

} // namespace lctsim
