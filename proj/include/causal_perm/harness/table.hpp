#ifndef CAUSAL_PERM_HARNESS_TABLE_HPP
#define CAUSAL_PERM_HARNESS_TABLE_HPP

#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "experiment.hpp"

namespace causal_perm::harness {

inline constexpr const char* kSchemaVersion = "0.1.0";
inline constexpr const char* kSchemaLine = "# causal-perm v0.1.0";

namespace detail {

inline std::string fmt_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += (c == '\n' || c == '\r') ? ' ' : c;
    }
    return out + "\"";
}

inline std::vector<std::string> csv_split(const std::string& line) {
    std::vector<std::string> cells;
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
            cells.push_back(std::move(cur));
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    cells.push_back(std::move(cur));
    return cells;
}

inline double parse_double(const std::string& s) {
    if (s == "nan" || s.empty()) return std::nan("");
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    return std::stod(s);
}

}  // namespace detail

inline const std::vector<std::string>& result_columns() {
    static const std::vector<std::string> cols{
        "experiment", "mode",      "family",     "algorithm",  "p",   "rho_expr",       "rho",
        "k",          "n",         "alpha",      "replicate",  "seed", "true_edges",    "est_edges",
        "edge_ratio", "exact_recovery", "tpr",   "fpr",        "shd", "steps",          "score_evals",
        "marginalizations", "entry_ops", "status", "error"};
    return cols;
}

/// Deterministic result CSV; wall time lives in the timing file.
inline void write_results(std::ostream& out, const ResultTable& rows) {
    out << kSchemaLine << '\n';
    const auto& cols = result_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << '\n';
    using detail::fmt_double;
    for (const auto& r : rows) {
        const auto& m = r.metrics;
        out << detail::csv_escape(r.experiment) << ',' << r.mode << ',' << r.family << ',' << r.algorithm << ','
            << r.p << ',' << detail::csv_escape(r.rho_expr) << ',' << fmt_double(r.rho) << ',' << r.k << ','
            << r.n << ',' << fmt_double(r.alpha) << ',' << r.replicate << ',' << r.seed << ',' << m.true_edges
            << ',' << m.estimated_edges << ',' << fmt_double(m.edge_ratio) << ',' << (m.exact_recovery ? 1 : 0)
            << ',' << fmt_double(m.tpr) << ',' << fmt_double(m.fpr) << ',' << m.shd << ',' << r.steps << ','
            << r.work.score_evals << ',' << r.work.marginalizations << ',' << r.work.entry_ops << ','
            << r.status << ',' << detail::csv_escape(r.error) << '\n';
    }
}

/// Row index and wall time, aligned with write_results() order.
inline void write_timing(std::ostream& out, const ResultTable& rows) {
    out << kSchemaLine << '\n' << "row,algorithm,p,replicate,wall_time\n";
    for (std::size_t i = 0; i < rows.size(); ++i)
        out << i << ',' << rows[i].algorithm << ',' << rows[i].p << ',' << rows[i].replicate << ','
            << detail::fmt_double(rows[i].metrics.wall_time) << '\n';
}

class TableError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline ResultTable read_results(std::istream& in) {
    std::string line;
    std::vector<std::string> header;
    ResultTable rows;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto cells = detail::csv_split(line);
        if (header.empty()) {
            header = std::move(cells);
            for (const auto& need : {"algorithm", "p"}) {
                if (std::find(header.begin(), header.end(), need) == header.end())
                    throw TableError(std::string("results table lacks column '") + need + "'");
            }
            continue;
        }
        if (cells.size() != header.size()) throw TableError("ragged row: " + line);
        std::map<std::string, std::string> f;
        for (std::size_t i = 0; i < header.size(); ++i) f[header[i]] = cells[i];
        auto str = [&f](const char* k) { return f.count(k) ? f[k] : std::string(); };
        auto num = [&f](const char* k) { return f.count(k) ? detail::parse_double(f[k]) : std::nan(""); };
        auto integer = [&f](const char* k) -> long long { return f.count(k) && !f[k].empty() ? std::stoll(f[k]) : 0; };
        ResultRow r;
        r.experiment = str("experiment");
        r.mode = str("mode");
        r.family = str("family");
        r.algorithm = str("algorithm");
        r.p = static_cast<int>(integer("p"));
        r.rho_expr = str("rho_expr");
        r.rho = num("rho");
        r.k = static_cast<int>(integer("k"));
        r.n = static_cast<long>(integer("n"));
        r.alpha = num("alpha");
        r.replicate = static_cast<int>(integer("replicate"));
        r.seed = f.count("seed") && !f["seed"].empty() ? std::stoull(f["seed"]) : 0;
        r.metrics.true_edges = static_cast<std::size_t>(integer("true_edges"));
        r.metrics.estimated_edges = static_cast<std::size_t>(integer("est_edges"));
        r.metrics.edge_ratio = num("edge_ratio");
        r.metrics.exact_recovery = integer("exact_recovery") != 0;
        r.metrics.tpr = num("tpr");
        r.metrics.fpr = num("fpr");
        r.metrics.shd = static_cast<std::size_t>(integer("shd"));
        r.metrics.wall_time = f.count("wall_time") ? num("wall_time") : std::nan("");
        r.steps = static_cast<std::size_t>(integer("steps"));
        r.work.score_evals = static_cast<std::uint64_t>(integer("score_evals"));
        r.work.marginalizations = static_cast<std::uint64_t>(integer("marginalizations"));
        r.work.entry_ops = static_cast<std::uint64_t>(integer("entry_ops"));
        r.status = f.count("status") ? f["status"] : "ok";
        r.error = str("error");
        rows.push_back(std::move(r));
    }
    if (header.empty()) throw TableError("results table has no header");
    return rows;
}

/// Attaches wall times from a timing file written alongside the table.
inline void merge_timing(ResultTable& rows, std::istream& in) {
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (header) {
            header = false;
            continue;
        }
        const auto cells = detail::csv_split(line);
        if (cells.size() != 5) throw TableError("bad timing row: " + line);
        const auto idx = std::stoull(cells[0]);
        if (idx >= rows.size() || rows[idx].algorithm != cells[1])
            throw TableError("timing file does not match results table");
        rows[idx].metrics.wall_time = detail::parse_double(cells[4]);
    }
}

/// Mean and standard error of one metric over a group.
struct Stat {
    std::size_t count = 0;
    double mean = std::nan("");
    double se = std::nan("");
};

inline Stat summarize(const std::vector<double>& xs) {
    Stat s;
    std::vector<double> v;
    for (double x : xs)
        if (std::isfinite(x)) v.push_back(x);
    s.count = v.size();
    if (v.empty()) return s;
    double sum = 0;
    for (double x : v) sum += x;
    s.mean = sum / static_cast<double>(v.size());
    if (v.size() > 1) {
        double ss = 0;
        for (double x : v) ss += (x - s.mean) * (x - s.mean);
        s.se = std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
    } else {
        s.se = 0.0;
    }
    return s;
}

struct GroupKey {
    std::string algorithm;
    std::string family;
    std::string rho_expr;
    int p = 0;
    int k = 0;
    long n = 0;
    double alpha = 0.0;

    friend auto operator<=>(const GroupKey&, const GroupKey&) = default;
};

struct GroupSummary {
    GroupKey key;
    std::size_t rows = 0;
    std::size_t failures = 0;
    Stat edge_ratio, tpr, fpr, shd, entry_ops, wall_time;
};

/// Aggregates successful rows per (algorithm, coordinate); ordered by key.
inline std::vector<GroupSummary> aggregate(const ResultTable& rows) {
    std::map<GroupKey, std::vector<const ResultRow*>> groups;
    for (const auto& r : rows) groups[{r.algorithm, r.family, r.rho_expr, r.p, r.k, r.n, r.alpha}].push_back(&r);
    std::vector<GroupSummary> out;
    for (const auto& [key, members] : groups) {
        GroupSummary g;
        g.key = key;
        g.rows = members.size();
        std::vector<double> er, tpr, fpr, shd, ops, time;
        for (const auto* r : members) {
            if (r->status != "ok") {
                ++g.failures;
                continue;
            }
            // An edgeless truth recovered exactly counts as ratio 1.
            er.push_back(r->metrics.exact_recovery ? 1.0 : r->metrics.edge_ratio);
            tpr.push_back(r->metrics.tpr);
            fpr.push_back(r->metrics.fpr);
            shd.push_back(static_cast<double>(r->metrics.shd));
            ops.push_back(static_cast<double>(r->work.entry_ops));
            time.push_back(r->metrics.wall_time);
        }
        g.edge_ratio = summarize(er);
        g.tpr = summarize(tpr);
        g.fpr = summarize(fpr);
        g.shd = summarize(shd);
        g.entry_ops = summarize(ops);
        g.wall_time = summarize(time);
        out.push_back(std::move(g));
    }
    return out;
}

/// Deterministic summary (timing columns omitted unless requested).
inline void write_summary(std::ostream& out, const std::vector<GroupSummary>& groups, bool with_time = false) {
    using detail::fmt_double;
    out << kSchemaLine << '\n'
        << "algorithm,family,rho_expr,p,k,n,alpha,rows,failures,edge_ratio_mean,edge_ratio_se,tpr_mean,tpr_se,"
           "fpr_mean,fpr_se,shd_mean,shd_se,entry_ops_mean,entry_ops_se";
    if (with_time) out << ",wall_time_mean,wall_time_se";
    out << '\n';
    for (const auto& g : groups) {
        out << g.key.algorithm << ',' << g.key.family << ',' << detail::csv_escape(g.key.rho_expr) << ','
            << g.key.p << ',' << g.key.k << ',' << g.key.n << ',' << fmt_double(g.key.alpha) << ',' << g.rows
            << ',' << g.failures;
        for (const Stat* s : {&g.edge_ratio, &g.tpr, &g.fpr, &g.shd, &g.entry_ops})
            out << ',' << fmt_double(s->mean) << ',' << fmt_double(s->se);
        if (with_time) out << ',' << fmt_double(g.wall_time.mean) << ',' << fmt_double(g.wall_time.se);
        out << '\n';
    }
}

inline void write_scaling(std::ostream& out, const std::vector<ScalingFit>& fits) {
    out << kSchemaLine << '\n' << "algorithm,p_values,mean_entry_ops,ops_slope\n";
    for (const auto& f : fits) {
        std::string ps, ops;
        for (std::size_t i = 0; i < f.p.size(); ++i) {
            ps += (i ? ";" : "") + std::to_string(f.p[i]);
            ops += (i ? ";" : "") + detail::fmt_double(f.mean_ops[i]);
        }
        out << f.algorithm << ',' << ps << ',' << ops << ',' << detail::fmt_double(f.ops_slope) << '\n';
    }
}

}  // namespace causal_perm::harness

#endif
