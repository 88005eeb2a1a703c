// Copyright 2026 The vvbo Authors.
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

#include "core/csv_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "core/error.hpp"

namespace vvbo {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& s) {
    if (s == "nan") return std::nan("");
    if (s == "inf") return HUGE_VAL;
    if (s == "-inf") return -HUGE_VAL;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw InputError("not a number: '" + s + "'");
    return v;
}

namespace {

int parse_int(const std::string& s) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw InputError("not an integer: '" + s + "'");
    return v;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(std::move(cur));
    return out;
}

}  // namespace

std::size_t CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw InputError("csv: missing column '" + name + "'");
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path.string() + "'");
    CsvTable t;
    std::string line;
    if (!std::getline(in, line)) throw InputError("'" + path.string() + "' is empty");
    t.header = split(line);
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        auto fields = split(line);
        if (fields.size() != t.header.size()) {
            throw InputError(path.string() + ":" + std::to_string(lineno) + ": expected " +
                             std::to_string(t.header.size()) + " fields, got " + std::to_string(fields.size()));
        }
        t.rows.push_back(std::move(fields));
    }
    return t;
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
    std::ostringstream os;
    auto line = [&os](const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) os << ',';
            os << fields[i];
        }
        os << '\n';
    };
    line(table.header);
    for (const auto& r : table.rows) line(r);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write '" + path.string() + "'");
    out << os.str();
    if (!out) throw InputError("write failed for '" + path.string() + "'");
}

CsvTable trace_table(const RegretTrace& trace, int input_dim) {
    CsvTable t;
    t.header = {"run", "iteration", "phase"};
    for (int k = 0; k < input_dim; ++k) t.header.push_back("x" + std::to_string(k));
    for (const char* c : {"f_value", "simple_regret", "cumulative_regret", "beta", "acquisition", "posterior_size",
                          "wall_ms"})
        t.header.emplace_back(c);
    for (const auto& r : trace) {
        if (r.x.size() != input_dim) throw InputError("trace_table: record has the wrong input dimension");
        std::vector<std::string> row{std::to_string(r.run), std::to_string(r.iteration), std::to_string(r.phase)};
        for (int k = 0; k < input_dim; ++k) row.push_back(format_double(r.x(k)));
        row.push_back(format_double(r.f_value));
        row.push_back(format_double(r.simple_regret));
        row.push_back(format_double(r.cumulative_regret));
        row.push_back(format_double(r.beta));
        row.push_back(format_double(r.acquisition));
        row.push_back(std::to_string(r.posterior_size));
        row.push_back(format_double(r.wall_ms));
        t.rows.push_back(std::move(row));
    }
    return t;
}

void write_trace_csv(const std::filesystem::path& path, const RegretTrace& trace, int input_dim) {
    write_csv(path, trace_table(trace, input_dim));
}

RegretTrace read_trace_csv(const std::filesystem::path& path) {
    const CsvTable t = read_csv(path);
    int dim = 0;
    while (true) {
        bool found = false;
        for (const auto& h : t.header) found = found || h == "x" + std::to_string(dim);
        if (!found) break;
        ++dim;
    }
    const std::size_t c_run = t.column("run"), c_it = t.column("iteration"), c_ph = t.column("phase"),
                      c_f = t.column("f_value"), c_s = t.column("simple_regret"),
                      c_c = t.column("cumulative_regret"), c_b = t.column("beta"), c_a = t.column("acquisition"),
                      c_p = t.column("posterior_size"), c_w = t.column("wall_ms");
    std::vector<std::size_t> c_x;
    for (int k = 0; k < dim; ++k) c_x.push_back(t.column("x" + std::to_string(k)));
    RegretTrace trace;
    for (const auto& row : t.rows) {
        TraceRecord r;
        r.run = parse_int(row[c_run]);
        r.iteration = parse_int(row[c_it]);
        r.phase = parse_int(row[c_ph]);
        r.x.resize(dim);
        for (int k = 0; k < dim; ++k) r.x(k) = parse_double(row[c_x[static_cast<std::size_t>(k)]]);
        r.f_value = parse_double(row[c_f]);
        r.simple_regret = parse_double(row[c_s]);
        r.cumulative_regret = parse_double(row[c_c]);
        r.beta = parse_double(row[c_b]);
        r.acquisition = parse_double(row[c_a]);
        r.posterior_size = parse_int(row[c_p]);
        r.wall_ms = parse_double(row[c_w]);
        trace.push_back(std::move(r));
    }
    return trace;
}

CsvTable aggregate_table(const std::vector<AggregateRow>& rows, const AggregateLabels& labels) {
    CsvTable t;
    t.header = {"method",         "benchmark",          "regime",
                "iteration",      "phase",              "n_runs",
                "f_value_mean",   "f_value_std",        "simple_regret_mean",
                "simple_regret_std", "cumulative_regret_mean", "cumulative_regret_std"};
    for (const auto& r : rows) {
        t.rows.push_back({r.method, labels.benchmark, labels.regime, std::to_string(r.iteration),
                          std::to_string(r.phase), std::to_string(r.n_runs), format_double(r.f_value.mean),
                          format_double(r.f_value.std), format_double(r.simple_regret.mean),
                          format_double(r.simple_regret.std), format_double(r.cumulative_regret.mean),
                          format_double(r.cumulative_regret.std)});
    }
    return t;
}

CsvTable plotdata_table(const std::vector<AggregateRow>& rows, const AggregateLabels& labels) {
    CsvTable t;
    t.header = {"method", "benchmark", "regime", "iteration", "metric", "mean", "std"};
    for (const auto& r : rows) {
        const std::string it = std::to_string(r.iteration);
        t.rows.push_back({r.method, labels.benchmark, labels.regime, it, "simple_regret",
                          format_double(r.simple_regret.mean), format_double(r.simple_regret.std)});
        t.rows.push_back({r.method, labels.benchmark, labels.regime, it, "cumulative_regret",
                          format_double(r.cumulative_regret.mean), format_double(r.cumulative_regret.std)});
    }
    return t;
}

void write_trajectories_csv(const std::filesystem::path& path, const Eigen::MatrixXd& samples) {
    CsvTable t;
    for (Eigen::Index j = 0; j < samples.cols(); ++j) t.header.push_back("s" + std::to_string(j));
    for (Eigen::Index i = 0; i < samples.rows(); ++i) {
        std::vector<std::string> row;
        for (Eigen::Index j = 0; j < samples.cols(); ++j) row.push_back(format_double(samples(i, j)));
        t.rows.push_back(std::move(row));
    }
    write_csv(path, t);
}

Eigen::MatrixXd read_trajectories_csv(const std::filesystem::path& path) {
    const CsvTable t = read_csv(path);
    Eigen::MatrixXd out(static_cast<Eigen::Index>(t.rows.size()), static_cast<Eigen::Index>(t.header.size()));
    for (std::size_t i = 0; i < t.rows.size(); ++i)
        for (std::size_t j = 0; j < t.header.size(); ++j)
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = parse_double(t.rows[i][j]);
    return out;
}

}  // namespace vvbo
