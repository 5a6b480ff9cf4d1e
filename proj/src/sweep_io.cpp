#include "pandasim/sweep_io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <unistd.h>

#include "pandasim/error.hpp"

namespace pandasim {

namespace fs = std::filesystem;

std::function<void(const std::string&)> g_before_rename_hook;

namespace {

constexpr int kKeyColumns = 5;

std::string number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> header_columns() {
    std::vector<std::string> cols{"scenario_id", "g2g", "f2e", "year", "n_replicates"};
    for (const auto& f : YearlyIndicators::fields()) {
        cols.push_back(std::string(f.name) + "_mean");
        cols.push_back(std::string(f.name) + "_std");
    }
    return cols;
}

std::string join(const std::vector<std::string>& cols) {
    std::string out;
    for (std::size_t i = 0; i < cols.size(); ++i) {
        if (i) out += ',';
        out += cols[i];
    }
    return out;
}

/// Split one CSV record; fields may be double-quoted with "" as an escaped quote.
std::vector<std::string> split_csv(const std::string& line, long row) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    bool was_quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            if (!cur.empty() || was_quoted) throw DataError("sweep CSV line " + std::to_string(row) + ": stray quote", row);
            quoted = was_quoted = true;
        } else if (c == ',') {
            out.push_back(cur);
            cur.clear();
            was_quoted = false;
        } else {
            cur += c;
        }
    }
    if (quoted) throw DataError("sweep CSV line " + std::to_string(row) + ": unterminated quote", row);
    out.push_back(cur);
    return out;
}

double parse_number(const std::string& s, long row, const std::string& column) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used == s.size() && std::isfinite(v)) return v;
    } catch (const std::exception&) {
    }
    throw DataError("sweep CSV line " + std::to_string(row) + ": column '" + column + "' has bad value '" + s + "'",
                    row);
}

}  // namespace

nlohmann::ordered_json metadata_json(const SweepMetadata& m) {
    nlohmann::ordered_json j;
    j["version"] = m.version;
    j["config_hash"] = m.config_hash;
    j["base_seed"] = m.base_seed;
    j["n_replicates"] = m.n_replicates;
    j["start_year"] = m.start_year;
    j["years"] = m.years;
    return j;
}

void write_sweep_csv(std::ostream& out, const SweepResult& sweep) {
    out << "# " << metadata_json(sweep.metadata).dump() << '\n';
    out << join(header_columns()) << '\n';
    const auto& fields = YearlyIndicators::fields();
    for (const auto& r : sweep.results) {
        for (std::size_t y = 0; y < r.per_year_mean.size(); ++y) {
            const auto& mean = r.per_year_mean[y];
            const auto& sd = r.per_year_stddev[y];
            out << '"' << r.scenario.id() << '"' << ',' << number(r.scenario.g2g_compensation) << ','
                << number(r.scenario.f2e_price) << ',' << mean.year << ',' << r.n_replicates;
            for (const auto& f : fields) out << ',' << number(mean.*f.member) << ',' << number(sd.*f.member);
            out << '\n';
        }
    }
}

std::string sweep_csv(const SweepResult& sweep) {
    std::ostringstream ss;
    write_sweep_csv(ss, sweep);
    return ss.str();
}

SweepResult read_sweep_csv(std::istream& in) {
    SweepResult sweep;
    std::string line;
    long row = 0;
    bool have_header = false;
    const auto expected = header_columns();
    const auto& fields = YearlyIndicators::fields();
    std::map<std::string, std::size_t> index_of;  // scenario id -> result index

    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (have_header) throw DataError("sweep CSV line " + std::to_string(row) + ": comment after header", row);
            try {
                const auto j = nlohmann::json::parse(line.substr(1));
                auto& m = sweep.metadata;
                m.version = j.value("version", std::string());
                m.config_hash = j.value("config_hash", std::string());
                m.base_seed = j.value("base_seed", std::uint64_t{0});
                m.n_replicates = j.value("n_replicates", 0);
                m.start_year = j.value("start_year", 0);
                m.years = j.value("years", 0);
            } catch (const nlohmann::json::exception& e) {
                throw DataError("sweep CSV line " + std::to_string(row) + ": bad metadata: " + e.what(), row);
            }
            continue;
        }
        const auto cols = split_csv(line, row);
        if (!have_header) {
            if (cols != expected)
                throw DataError("sweep CSV line " + std::to_string(row) + ": unexpected header", row);
            have_header = true;
            continue;
        }
        if (cols.size() != expected.size())
            throw DataError("sweep CSV line " + std::to_string(row) + ": expected " + std::to_string(expected.size()) +
                                " columns, found " + std::to_string(cols.size()),
                            row);
        const PolicyScenario scenario(parse_number(cols[1], row, "g2g"), parse_number(cols[2], row, "f2e"));
        if (scenario.id() != cols[0])
            throw DataError("sweep CSV line " + std::to_string(row) + ": scenario id '" + cols[0] +
                                "' does not match g2g/f2e columns",
                            row);
        const double year = parse_number(cols[3], row, "year");
        const double n = parse_number(cols[4], row, "n_replicates");
        if (year != std::floor(year) || n != std::floor(n) || n < 1)
            throw DataError("sweep CSV line " + std::to_string(row) + ": year and n_replicates must be integers", row);

        YearlyIndicators mean;
        YearlyIndicators sd;
        mean.year = sd.year = static_cast<int>(year);
        for (std::size_t k = 0; k < fields.size(); ++k) {
            const auto c = kKeyColumns + 2 * k;
            mean.*fields[k].member = parse_number(cols[c], row, expected[c]);
            sd.*fields[k].member = parse_number(cols[c + 1], row, expected[c + 1]);
        }

        auto [it, inserted] = index_of.try_emplace(cols[0], sweep.results.size());
        if (inserted) {
            ScenarioResult r;
            r.scenario = scenario;
            r.n_replicates = static_cast<int>(n);
            sweep.results.push_back(std::move(r));
        }
        auto& r = sweep.results[it->second];
        if (!inserted && r.per_year_mean.back().year + 1 != mean.year)
            throw DataError("sweep CSV line " + std::to_string(row) + ": years of " + cols[0] + " are not consecutive",
                            row);
        if (r.n_replicates != static_cast<int>(n))
            throw DataError("sweep CSV line " + std::to_string(row) + ": inconsistent n_replicates", row);
        r.per_year_mean.push_back(mean);
        r.per_year_stddev.push_back(sd);
    }
    if (!have_header) throw DataError("sweep CSV line " + std::to_string(row + 1) + ": missing header", row + 1);
    if (sweep.results.empty()) throw DataError("sweep CSV: no data rows", row);
    const std::size_t years = sweep.results.front().per_year_mean.size();
    for (const auto& r : sweep.results)
        if (r.per_year_mean.size() != years)
            throw DataError("sweep CSV: scenario " + r.scenario.id() + " has a different number of years", row);
    if (sweep.metadata.n_replicates == 0) sweep.metadata.n_replicates = sweep.results.front().n_replicates;
    if (sweep.metadata.years == 0) sweep.metadata.years = static_cast<int>(years);
    return sweep;
}

SweepResult load_sweep_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read '" + path + "'");
    return read_sweep_csv(in);
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const fs::path target(path);
    if (target.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(target.parent_path(), ec);
        if (ec) throw IoError("cannot create directory '" + target.parent_path().string() + "': " + ec.message());
    }
    const std::string temp = path + ".tmp-" + std::to_string(::getpid());
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write '" + temp + "'");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(temp, ec);
            throw IoError("write failed for '" + temp + "'");
        }
    }
    if (g_before_rename_hook) g_before_rename_hook(temp);
    std::error_code ec;
    fs::rename(temp, target, ec);
    if (ec) {
        fs::remove(temp, ec);
        throw IoError("cannot rename onto '" + path + "'");
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace pandasim
