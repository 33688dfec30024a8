#include "fogfed/report.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "fogfed/error.hpp"

namespace fogfed {

namespace {

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) {
        out.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

template <typename T>
T parse_number(const std::string& s, std::size_t line, const char* column) {
    T value{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw Error(ErrorCode::Parse, "row " + std::to_string(line) + ": bad " + column + " '" + s + "'");
    }
    return value;
}

CellKey key_of(const RunRow& r) {
    return CellKey{r.scenario, r.requests, r.mix, r.degree};
}

struct Grouped {
    std::vector<CellKey> cells;
    std::map<CellKey, std::vector<std::string>> methods;
    std::map<std::pair<CellKey, std::string>, std::vector<const RunRow*>> runs;
};

Grouped group(const std::vector<RunRow>& rows) {
    Grouped g;
    for (const auto& r : rows) {
        const CellKey k = key_of(r);
        auto [it, fresh] = g.methods.try_emplace(k);
        if (fresh) {
            g.cells.push_back(k);
        }
        auto& ms = it->second;
        if (std::find(ms.begin(), ms.end(), r.method) == ms.end()) {
            ms.push_back(r.method);
        }
        g.runs[{k, r.method}].push_back(&r);
    }
    return g;
}

std::string describe(const CellKey& k) {
    return k.scenario + " requests=" + std::to_string(k.requests) + " mix=" + fixed(k.mix, 2) +
           " degree=" + std::to_string(k.degree);
}

} // namespace

void write_csv(std::ostream& out, const std::vector<RunRow>& rows) {
    out << kCsvHeader << '\n';
    for (const auto& r : rows) {
        out << r.scenario << ',' << r.method << ',' << r.requests << ',' << fixed(r.mix, 4) << ','
            << r.degree << ',' << r.seed << ',' << fixed(r.meet_rate, 6) << ','
            << fixed(r.avg_makespan_ms, 3) << '\n';
    }
}

std::vector<RunRow> read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw Error(ErrorCode::Parse, "row 1: empty input, expected the header");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    if (line != kCsvHeader) {
        throw Error(ErrorCode::Parse, "row 1: unexpected header '" + line + "'");
    }
    std::vector<RunRow> rows;
    std::size_t n = 1;
    while (std::getline(in, line)) {
        ++n;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        const auto f = split_fields(line);
        if (f.size() != 8) {
            throw Error(ErrorCode::Parse, "row " + std::to_string(n) + ": expected 8 fields, got " +
                                              std::to_string(f.size()));
        }
        RunRow r;
        r.scenario = f[0];
        r.method = f[1];
        if (r.scenario.empty() || r.method.empty()) {
            throw Error(ErrorCode::Parse, "row " + std::to_string(n) + ": empty scenario or method");
        }
        r.requests = parse_number<std::size_t>(f[2], n, "requests");
        r.mix = parse_number<double>(f[3], n, "mix");
        r.degree = parse_number<int>(f[4], n, "degree");
        r.seed = parse_number<std::uint64_t>(f[5], n, "seed");
        r.meet_rate = parse_number<double>(f[6], n, "meet_rate");
        r.avg_makespan_ms = parse_number<double>(f[7], n, "avg_makespan_ms");
        if (r.meet_rate < 0.0 || r.meet_rate > 1.0 || r.avg_makespan_ms < 0.0) {
            throw Error(ErrorCode::Parse, "row " + std::to_string(n) + ": metric out of range");
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<CellSummary> summarize(const std::vector<RunRow>& rows) {
    const Grouped g = group(rows);
    std::vector<CellSummary> out;
    for (const auto& k : g.cells) {
        for (const auto& m : g.methods.at(k)) {
            std::vector<double> meet;
            std::vector<double> span;
            for (const RunRow* r : g.runs.at({k, m})) {
                meet.push_back(r->meet_rate);
                span.push_back(r->avg_makespan_ms);
            }
            try {
                out.push_back(CellSummary{k, m, mean_ci(meet), mean_ci(span)});
            } catch (const Error& e) {
                throw Error(e.code(), describe(k) + " method=" + m + ": " + e.detail());
            }
        }
    }
    return out;
}

std::vector<DeltaSummary> paired_deltas(const std::vector<RunRow>& rows) {
    const Grouped g = group(rows);
    std::vector<DeltaSummary> out;
    for (const auto& k : g.cells) {
        const auto& ms = g.methods.at(k);
        for (std::size_t i = 0; i < ms.size(); ++i) {
            for (std::size_t j = i + 1; j < ms.size(); ++j) {
                std::map<std::uint64_t, const RunRow*> by_seed;
                for (const RunRow* r : g.runs.at({k, ms[j]})) {
                    by_seed[r->seed] = r;
                }
                std::vector<double> meet;
                std::vector<double> span;
                for (const RunRow* a : g.runs.at({k, ms[i]})) {
                    if (auto it = by_seed.find(a->seed); it != by_seed.end()) {
                        meet.push_back(a->meet_rate - it->second->meet_rate);
                        span.push_back(a->avg_makespan_ms - it->second->avg_makespan_ms);
                    }
                }
                if (meet.size() < 2) {
                    continue;   // unpaired methods carry no delta
                }
                out.push_back(DeltaSummary{k, ms[i], ms[j], mean_ci(meet), mean_ci(span)});
            }
        }
    }
    return out;
}

std::string format_report(const std::vector<CellSummary>& cells,
                          const std::vector<DeltaSummary>& deltas) {
    std::ostringstream out;
    char line[256];
    std::snprintf(line, sizeof line, "%-28s %8s %5s %6s %-10s %4s %20s %26s\n", "scenario",
                  "requests", "mix", "degree", "method", "n", "meet_rate", "avg_makespan_ms");
    out << line;
    for (const auto& c : cells) {
        std::snprintf(line, sizeof line, "%-28s %8zu %5.2f %6d %-10s %4zu %9.4f +/- %6.4f %12.1f +/- %8.1f\n",
                      c.cell.scenario.c_str(), c.cell.requests, c.cell.mix, c.cell.degree,
                      c.method.c_str(), c.meet_rate.n, c.meet_rate.mean, c.meet_rate.half_width,
                      c.makespan_ms.mean, c.makespan_ms.half_width);
        out << line;
    }
    if (!deltas.empty()) {
        out << "\npaired deltas (a - b, matched by seed)\n";
        std::snprintf(line, sizeof line, "%-28s %8s %5s %6s %-21s %4s %20s %26s\n", "scenario",
                      "requests", "mix", "degree", "a - b", "n", "meet_rate", "avg_makespan_ms");
        out << line;
        for (const auto& d : deltas) {
            const std::string pair = d.method_a + " - " + d.method_b;
            std::snprintf(line, sizeof line,
                          "%-28s %8zu %5.2f %6d %-21s %4zu %+9.4f +/- %6.4f %+12.1f +/- %8.1f\n",
                          d.cell.scenario.c_str(), d.cell.requests, d.cell.mix, d.cell.degree,
                          pair.c_str(), d.meet_rate.n, d.meet_rate.mean, d.meet_rate.half_width,
                          d.makespan_ms.mean, d.makespan_ms.half_width);
            out << line;
        }
    }
    return out.str();
}

void write_summary_csv(std::ostream& out, const std::vector<CellSummary>& cells,
                       const std::vector<DeltaSummary>& deltas) {
    out << "kind,scenario,requests,mix,degree,method,n,meet_rate_mean,meet_rate_ci,"
           "makespan_mean_ms,makespan_ci_ms\n";
    for (const auto& c : cells) {
        out << "cell," << c.cell.scenario << ',' << c.cell.requests << ',' << fixed(c.cell.mix, 4)
            << ',' << c.cell.degree << ',' << c.method << ',' << c.meet_rate.n << ','
            << fixed(c.meet_rate.mean, 6) << ',' << fixed(c.meet_rate.half_width, 6) << ','
            << fixed(c.makespan_ms.mean, 3) << ',' << fixed(c.makespan_ms.half_width, 3) << '\n';
    }
    for (const auto& d : deltas) {
        out << "delta," << d.cell.scenario << ',' << d.cell.requests << ',' << fixed(d.cell.mix, 4)
            << ',' << d.cell.degree << ',' << d.method_a << '-' << d.method_b << ','
            << d.meet_rate.n << ',' << fixed(d.meet_rate.mean, 6) << ','
            << fixed(d.meet_rate.half_width, 6) << ',' << fixed(d.makespan_ms.mean, 3) << ','
            << fixed(d.makespan_ms.half_width, 3) << '\n';
    }
}

} // namespace fogfed
