#include "plawlab/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include "plaw/errors.hpp"

namespace plawlab {

using plaw::DomainError;

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size()) {
        throw DomainError("not a number: '" + std::string(text) + "'");
    }
    return value;
}

namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = text.find(sep, start);
        out.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) return out;
        start = pos + 1;
    }
}

}  // namespace

plaw::Vec2 parse_vec2(std::string_view text) {
    const auto parts = split(text, ',');
    if (parts.size() != 2) throw DomainError("expected 'x,y', got '" + std::string(text) + "'");
    return {parse_double(parts[0]), parse_double(parts[1])};
}

std::vector<double> parse_grid(std::string_view text) {
    if (text.starts_with("log:") || text.starts_with("lin:")) {
        const auto parts = split(text.substr(4), ':');
        if (parts.size() != 3) throw DomainError("grid must be kind:lo:hi:n, got '" + std::string(text) + "'");
        const double lo = parse_double(parts[0]);
        const double hi = parse_double(parts[1]);
        const double n_real = parse_double(parts[2]);
        if (!(n_real >= 1.0) || n_real != std::floor(n_real) || n_real > 1e7) {
            throw DomainError("grid size must be a positive integer");
        }
        const auto n = static_cast<std::size_t>(n_real);
        if (text.starts_with("log:")) return plaw::log_grid(lo, hi, n);
        if (!(hi >= lo) || !std::isfinite(lo) || !std::isfinite(hi)) throw DomainError("grid requires lo <= hi");
        std::vector<double> out(n, lo);
        for (std::size_t i = 1; i < n; ++i) {
            out[i] = i + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
        }
        return out;
    }
    std::vector<double> out;
    for (auto part : split(text, ',')) out.push_back(parse_double(part));
    return out;
}

std::string CsvTable::render() const {
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out += ',';
        out += header[i];
    }
    out += '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format_double(row[i]);
        }
        out += '\n';
    }
    return out;
}

CsvTable parse_csv(std::string_view text) {
    CsvTable table;
    bool first = true;
    for (auto line : split(text, '\n')) {
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        const auto cells = split(line, ',');
        if (first) {
            for (auto c : cells) table.header.emplace_back(c);
            first = false;
            continue;
        }
        if (cells.size() != table.header.size()) throw DomainError("csv: row width differs from header");
        std::vector<double> row;
        row.reserve(cells.size());
        for (auto c : cells) row.push_back(parse_double(c));
        table.rows.push_back(std::move(row));
    }
    if (first) throw DomainError("csv: missing header");
    return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str());
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
    const std::filesystem::path tmp = path.string() + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DomainError("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw DomainError("write failed for " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw DomainError("cannot rename onto " + path.string());
    }
}

CsvTable trajectory_table(const plaw::Trajectory& traj) {
    CsvTable t{{"t", "x", "y", "vx", "vy", "E", "J"}, {}};
    t.rows.reserve(traj.size());
    for (const auto& s : traj.samples()) {
        t.rows.push_back({s.t, s.q.x, s.q.y, s.v.x, s.v.y, plaw::energy(traj.problem(), s), plaw::angular_momentum(s)});
    }
    return t;
}

CsvTable scatter_table(const std::vector<plaw::ScatterRecord>& records) {
    CsvTable t{{"b", "J", "sweep", "deflection"}, {}};
    for (const auto& r : records) t.rows.push_back({r.b, r.J, r.swept, r.deflection});
    return t;
}

CsvTable starburst_table(const plaw::StarburstStudy& study) {
    CsvTable t{{"J", "lobe_angle", "error_vs_pi_over_c"}, {}};
    for (const auto& r : study.rows) t.rows.push_back({r.J, r.lobe_angle, r.error_vs_limit});
    return t;
}

namespace {

void expect_header(const CsvTable& table, const std::vector<std::string>& header) {
    if (table.header != header) throw DomainError("csv: unexpected columns");
}

}  // namespace

plaw::Trajectory trajectory_from_table(const CsvTable& table, const plaw::PowerLawProblem& problem,
                                       double drift_budget) {
    expect_header(table, {"t", "x", "y", "vx", "vy", "E", "J"});
    std::vector<plaw::PhaseState> samples;
    samples.reserve(table.rows.size());
    for (const auto& r : table.rows) {
        plaw::PhaseState s{{r[1], r[2]}, {r[3], r[4]}, r[0]};
        if (plaw::energy(problem, s) != r[5] || plaw::angular_momentum(s) != r[6]) {
            throw DomainError("csv: conserved columns do not match the state");
        }
        samples.push_back(s);
    }
    return plaw::Trajectory(problem, std::move(samples), drift_budget);
}

std::vector<plaw::ScatterRecord> scatter_from_table(const CsvTable& table, double E) {
    expect_header(table, {"b", "J", "sweep", "deflection"});
    std::vector<plaw::ScatterRecord> out;
    out.reserve(table.rows.size());
    for (const auto& r : table.rows) out.push_back({E, r[0], r[1], r[2], r[3]});
    return out;
}

}  // namespace plawlab
