#include "cfpath/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace cfpath {

namespace {

void require_comparable(const RunRecord& run, const RunRecord& baseline) {
    if (run.task_id != baseline.task_id) {
        throw ContractError("ratio: runs belong to different tasks (" + std::to_string(run.task_id) +
                            " vs " + std::to_string(baseline.task_id) + ")");
    }
    if (!run.found || !baseline.found) {
        throw ContractError("ratio: task " + std::to_string(run.task_id) + " was not solved");
    }
}

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

} // namespace

double cost_ratio(const RunRecord& run, const RunRecord& baseline) {
    require_comparable(run, baseline);
    if (baseline.cost == 0.0) {
        throw ContractError("cost_ratio: task " + std::to_string(run.task_id) +
                            " has a zero-cost baseline (start == goal)");
    }
    return run.cost / baseline.cost;
}

double exp_ratio(const RunRecord& run, const RunRecord& baseline) {
    require_comparable(run, baseline);
    if (baseline.expansions == 0) {
        throw ContractError("exp_ratio: task " + std::to_string(run.task_id) +
                            " has zero baseline expansions (start == goal)");
    }
    return static_cast<double>(run.expansions) / static_cast<double>(baseline.expansions);
}

bool optimal_found(const RunRecord& run, double optimal_cost) {
    return run.found && std::abs(run.cost - optimal_cost) <= kOptimalTolerance;
}

double j_objective(double f1, double f2, double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw ContractError("j_objective: lambda must lie in [0, 1]");
    }
    return (1.0 - lambda) * f1 + lambda * f2;
}

MeanStd mean_std(const std::vector<double>& values) {
    if (values.empty()) {
        return {};
    }
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    const double mean = sum / static_cast<double>(values.size());
    double sq = 0.0;
    for (double v : values) {
        sq += (v - mean) * (v - mean);
    }
    return {mean, std::sqrt(sq / static_cast<double>(values.size()))};
}

namespace {

// Indexes a run list by task id and checks it covers exactly 0..n-1.
std::vector<const RunRecord*> index_runs(const std::vector<RunRecord>& runs, std::size_t n,
                                         const std::string& label) {
    std::vector<const RunRecord*> by_task(n, nullptr);
    std::vector<std::size_t> extra;
    for (const auto& r : runs) {
        if (r.task_id >= n) {
            extra.push_back(r.task_id);
        } else if (by_task[r.task_id] != nullptr) {
            throw TaskSetMismatch(label + ": task " + std::to_string(r.task_id) + " appears twice");
        } else {
            by_task[r.task_id] = &r;
        }
    }
    std::string missing;
    std::size_t missing_count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (by_task[i] == nullptr) {
            if (missing_count < 50) {
                missing += (missing.empty() ? "" : " ") + std::to_string(i);
            }
            ++missing_count;
        }
    }
    if (missing_count > 0 || !extra.empty()) {
        std::string msg = label + ": task set mismatch;";
        if (missing_count > 0) {
            msg += " missing ids: " + missing + (missing_count > 50 ? " ..." : "") + ";";
        }
        if (!extra.empty()) {
            msg += " unknown ids:";
            for (std::size_t i = 0; i < std::min<std::size_t>(extra.size(), 50); ++i) {
                msg += " " + std::to_string(extra[i]);
            }
        }
        throw TaskSetMismatch(msg);
    }
    return by_task;
}

SolverSummary summarize(const std::string& solver, const std::string& group,
                        const std::vector<std::size_t>& ids, const std::vector<const RunRecord*>& runs,
                        const std::vector<const RunRecord*>& base, const std::vector<TaskRecord>& tasks) {
    SolverSummary s;
    s.solver = solver;
    s.group = group;
    s.tasks = ids.size();
    std::size_t optimal = 0;
    std::vector<double> cost_pct;
    std::vector<double> exp_pct;
    for (std::size_t id : ids) {
        const RunRecord& r = *runs[id];
        const RunRecord& b = *base[id];
        if (optimal_found(r, tasks[id].optimal_cost)) {
            ++optimal;
        }
        if (!r.found || !b.found || b.cost == 0.0 || b.expansions == 0) {
            ++s.excluded;
            continue;
        }
        const double f1 = cost_ratio(r, b);
        const double f2 = exp_ratio(r, b);
        s.f1.push_back(f1);
        s.f2.push_back(f2);
        cost_pct.push_back(100.0 * f1);
        exp_pct.push_back(100.0 * f2);
    }
    s.optimal_found_pct = s.tasks == 0 ? 0.0 : 100.0 * static_cast<double>(optimal) / static_cast<double>(s.tasks);
    s.cost_ratio_pct = mean_std(cost_pct);
    s.exp_ratio_pct = mean_std(exp_pct);
    return s;
}

} // namespace

AggregateReport aggregate(const std::vector<std::vector<RunRecord>>& runs,
                          const std::vector<RunRecord>& baseline, const std::vector<TaskRecord>& tasks) {
    const std::size_t n = tasks.size();
    const auto base = index_runs(baseline, n, "baseline");

    std::vector<std::size_t> all(n);
    std::map<std::string, std::vector<std::size_t>> by_topology;
    for (std::size_t i = 0; i < n; ++i) {
        all[i] = i;
        by_topology[topology_of(tasks[i])].push_back(i);
    }

    AggregateReport report;
    for (const auto& list : runs) {
        if (list.empty() && n > 0) {
            throw TaskSetMismatch("run list is empty");
        }
        const std::string solver = list.empty() ? "?" : list.front().solver;
        const auto idx = index_runs(list, n, solver);
        report.overall.push_back(summarize(solver, "all", all, idx, base, tasks));
        for (const auto& [topology, ids] : by_topology) {
            report.per_topology.push_back(summarize(solver, topology, ids, idx, base, tasks));
        }
    }
    return report;
}

std::vector<LambdaRow> sweep_lambda(const std::vector<SolverSummary>& summaries,
                                    const std::vector<double>& lambdas) {
    std::vector<LambdaRow> rows;
    for (const auto& s : summaries) {
        for (double lambda : lambdas) {
            double sum = 0.0;
            for (std::size_t i = 0; i < s.f1.size(); ++i) {
                sum += j_objective(s.f1[i], s.f2[i], lambda);
            }
            const double mean = s.f1.empty() ? 0.0 : sum / static_cast<double>(s.f1.size());
            rows.push_back({s.solver, lambda, mean});
        }
    }
    return rows;
}

std::vector<Crossover> crossovers(const std::vector<SolverSummary>& summaries) {
    std::vector<Crossover> out;
    for (std::size_t a = 0; a < summaries.size(); ++a) {
        for (std::size_t b = a + 1; b < summaries.size(); ++b) {
            const auto& sa = summaries[a];
            const auto& sb = summaries[b];
            const double d1 = mean_std(sa.f1).mean - mean_std(sb.f1).mean; // difference at lambda = 0
            const double d2 = mean_std(sa.f2).mean - mean_std(sb.f2).mean; // difference at lambda = 1
            Crossover c{sa.solver, sb.solver, false, 0.0, ""};
            // d(lambda) = (1 - lambda) d1 + lambda d2 vanishes at d1 / (d1 - d2).
            // Lines that only touch at an endpoint do not count as crossing.
            if ((d1 < 0.0 && d2 > 0.0) || (d1 > 0.0 && d2 < 0.0)) {
                c.crosses = true;
                c.lambda = d1 / (d1 - d2);
                c.better_below = d1 < 0.0 ? sa.solver : sb.solver;
            }
            out.push_back(c);
        }
    }
    return out;
}

// --- CSV ---------------------------------------------------------------------

namespace {

std::string sanitize(std::string s) {
    std::replace(s.begin(), s.end(), ',', ';');
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
}

std::vector<std::string> split(const std::string& line, char sep = ',') {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

constexpr const char* kRunsHeader =
    "task_id,solver,found,cost,expansions,predict_seconds,search_seconds,status";

} // namespace

std::string format_runs_csv(const std::vector<RunRecord>& runs) {
    std::string out = std::string(kRunsHeader) + "\n";
    for (const auto& r : runs) {
        out += std::to_string(r.task_id) + "," + sanitize(r.solver) + "," + (r.found ? "1" : "0") + "," +
               (r.found ? fmt("%.9f", r.cost) : std::string("inf")) + "," + std::to_string(r.expansions) +
               "," + fmt("%.9f", r.predict_seconds) + "," + fmt("%.9f", r.search_seconds) + "," +
               sanitize(r.status) + "\n";
    }
    return out;
}

std::vector<RunRecord> parse_runs_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    std::vector<RunRecord> runs;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (lineno == 1) {
            if (line != kRunsHeader) {
                throw ParseError(1, "unexpected runs file header");
            }
            continue;
        }
        if (line.empty()) {
            continue;
        }
        const auto f = split(line);
        if (f.size() != 8) {
            throw ParseError(lineno, "expected 8 fields, found " + std::to_string(f.size()));
        }
        try {
            RunRecord r;
            r.task_id = static_cast<std::size_t>(std::stoull(f[0]));
            r.solver = f[1];
            r.found = f[2] == "1";
            r.cost = f[3] == "inf" ? kInfinity : std::stod(f[3]);
            r.expansions = std::stoull(f[4]);
            r.predict_seconds = std::stod(f[5]);
            r.search_seconds = std::stod(f[6]);
            r.status = f[7];
            runs.push_back(std::move(r));
        } catch (const std::logic_error&) {
            throw ParseError(lineno, "malformed runs record");
        }
    }
    return runs;
}

std::vector<RunRecord> load_runs(const std::string& path) {
    try {
        return parse_runs_csv(read_file(path));
    } catch (const ParseError& e) {
        throw ParseError(e.line(), e.detail() + " (in " + path + ")");
    }
}

void save_runs(const std::string& path, const std::vector<RunRecord>& runs) {
    write_file(path, format_runs_csv(runs));
}

std::string format_summary_csv(const std::vector<SolverSummary>& rows) {
    std::string out =
        "solver,group,tasks,excluded,optimal_found_pct,cost_ratio_mean_pct,cost_ratio_std_pct,"
        "exp_ratio_mean_pct,exp_ratio_std_pct\n";
    for (const auto& s : rows) {
        out += sanitize(s.solver) + "," + sanitize(s.group) + "," + std::to_string(s.tasks) + "," +
               std::to_string(s.excluded) + "," + fmt("%.6f", s.optimal_found_pct) + "," +
               fmt("%.6f", s.cost_ratio_pct.mean) + "," + fmt("%.6f", s.cost_ratio_pct.std) + "," +
               fmt("%.6f", s.exp_ratio_pct.mean) + "," + fmt("%.6f", s.exp_ratio_pct.std) + "\n";
    }
    return out;
}

std::string format_summary_table(const std::vector<SolverSummary>& rows) {
    std::string out = "| Solver | Optimal Found Ratio (%) | Cost Ratio (%) | Exp Ratio (%) |\n"
                      "|---|---|---|---|\n";
    for (const auto& s : rows) {
        const auto with_std = [](const MeanStd& m) {
            return m.std == 0.0 ? fmt("%.1f", m.mean) : fmt("%.1f", m.mean) + "±" + fmt("%.1f", m.std);
        };
        out += "| " + s.solver + " | " + fmt("%.2f", s.optimal_found_pct) + " | " +
               with_std(s.cost_ratio_pct) + " | " + with_std(s.exp_ratio_pct) + " |\n";
    }
    return out;
}

std::string format_lambda_csv(const std::vector<LambdaRow>& rows, const std::vector<double>& lambdas) {
    std::string out = "solver";
    for (double l : lambdas) {
        out += ",lambda=" + fmt("%.4f", l);
    }
    out += "\n";
    std::vector<std::string> order;
    for (const auto& r : rows) {
        if (std::find(order.begin(), order.end(), r.solver) == order.end()) {
            order.push_back(r.solver);
        }
    }
    for (const auto& solver : order) {
        out += sanitize(solver);
        for (double l : lambdas) {
            for (const auto& r : rows) {
                if (r.solver == solver && r.lambda == l) {
                    out += "," + fmt("%.9f", r.mean_j);
                    break;
                }
            }
        }
        out += "\n";
    }
    return out;
}

std::string format_crossovers_csv(const std::vector<Crossover>& rows) {
    std::string out = "first,second,crosses,lambda,better_below\n";
    for (const auto& c : rows) {
        out += sanitize(c.first) + "," + sanitize(c.second) + "," + (c.crosses ? "1" : "0") + "," +
               (c.crosses ? fmt("%.9f", c.lambda) : std::string("")) + "," + sanitize(c.better_below) +
               "\n";
    }
    return out;
}

std::string format_runtime_csv(const std::vector<RuntimeRow>& rows) {
    std::string out = "solver,batch_size,predict_seconds,search_seconds,total_seconds\n";
    for (const auto& r : rows) {
        out += sanitize(r.solver) + "," + std::to_string(r.batch_size) + "," + fmt("%.9f", r.predict_seconds) +
               "," + fmt("%.9f", r.search_seconds) + "," + fmt("%.9f", r.total_seconds) + "\n";
    }
    return out;
}

std::vector<RuntimeRow> parse_runtime_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    std::vector<RuntimeRow> rows;
    while (std::getline(in, line)) {
        ++lineno;
        if (lineno == 1 || line.empty()) {
            continue;
        }
        const auto f = split(line);
        if (f.size() != 5) {
            throw ParseError(lineno, "expected 5 fields");
        }
        try {
            rows.push_back({f[0], std::stoi(f[1]), std::stod(f[2]), std::stod(f[3]), std::stod(f[4])});
        } catch (const std::logic_error&) {
            throw ParseError(lineno, "malformed runtime record");
        }
    }
    return rows;
}

// --- SVG ---------------------------------------------------------------------

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                          "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        switch (ch) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out.push_back(ch);
        }
    }
    return out;
}

struct Frame {
    double left = 60, top = 20, width = 520, height = 300;
    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    double sx(double x) const { return left + (x - xmin) / (xmax - xmin) * width; }
    double sy(double y) const { return top + height - (y - ymin) / (ymax - ymin) * height; }
};

std::string axes(const Frame& f, const std::string& xlabel, const std::string& ylabel) {
    std::string s;
    s += "<rect x=\"" + fmt("%.1f", f.left) + "\" y=\"" + fmt("%.1f", f.top) + "\" width=\"" +
         fmt("%.1f", f.width) + "\" height=\"" + fmt("%.1f", f.height) +
         "\" fill=\"none\" stroke=\"#333\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double y = f.ymin + (f.ymax - f.ymin) * i / 4.0;
        s += "<text x=\"" + fmt("%.1f", f.left - 6) + "\" y=\"" + fmt("%.1f", f.sy(y) + 4) +
             "\" font-size=\"10\" text-anchor=\"end\">" + fmt("%.3g", y) + "</text>\n";
    }
    s += "<text x=\"" + fmt("%.1f", f.left + f.width / 2) + "\" y=\"" + fmt("%.1f", f.top + f.height + 34) +
         "\" font-size=\"12\" text-anchor=\"middle\">" + escape(xlabel) + "</text>\n";
    s += "<text x=\"14\" y=\"" + fmt("%.1f", f.top + f.height / 2) +
         "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 14 " +
         fmt("%.1f", f.top + f.height / 2) + ")\">" + escape(ylabel) + "</text>\n";
    return s;
}

} // namespace

std::string render_tradeoff_svg(const std::vector<LambdaRow>& rows) {
    std::vector<std::string> solvers;
    double lo = kInfinity;
    double hi = -kInfinity;
    for (const auto& r : rows) {
        if (std::find(solvers.begin(), solvers.end(), r.solver) == solvers.end()) {
            solvers.push_back(r.solver);
        }
        lo = std::min(lo, r.mean_j);
        hi = std::max(hi, r.mean_j);
    }
    if (rows.empty()) {
        lo = 0.0;
        hi = 1.0;
    }
    if (hi - lo < 1e-9) {
        lo -= 0.05;
        hi += 0.05;
    }
    Frame f;
    f.ymin = lo - 0.05 * (hi - lo);
    f.ymax = hi + 0.05 * (hi - lo);
    std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"760\" height=\"370\">\n";
    s += axes(f, "lambda", "mean J(lambda)");
    for (int i = 0; i <= 4; ++i) {
        const double x = i / 4.0;
        s += "<text x=\"" + fmt("%.1f", f.sx(x)) + "\" y=\"" + fmt("%.1f", f.top + f.height + 14) +
             "\" font-size=\"10\" text-anchor=\"middle\">" + fmt("%.2f", x) + "</text>\n";
    }
    for (std::size_t k = 0; k < solvers.size(); ++k) {
        const char* color = kPalette[k % 10];
        std::string points;
        for (const auto& r : rows) {
            if (r.solver == solvers[k]) {
                points += fmt("%.2f", f.sx(r.lambda)) + "," + fmt("%.2f", f.sy(r.mean_j)) + " ";
            }
        }
        s += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"2\" points=\"" +
             points + "\"/>\n";
        const double ly = f.top + 14.0 * static_cast<double>(k) + 10;
        s += "<rect x=\"600\" y=\"" + fmt("%.1f", ly - 8) + "\" width=\"10\" height=\"10\" fill=\"" + color +
             "\"/>\n<text x=\"616\" y=\"" + fmt("%.1f", ly) + "\" font-size=\"11\">" + escape(solvers[k]) +
             "</text>\n";
    }
    s += "</svg>\n";
    return s;
}

std::string render_runtime_svg(const std::vector<RuntimeRow>& rows) {
    std::vector<std::string> solvers;
    std::vector<int> batches;
    double hi = 0.0;
    for (const auto& r : rows) {
        if (std::find(solvers.begin(), solvers.end(), r.solver) == solvers.end()) {
            solvers.push_back(r.solver);
        }
        if (std::find(batches.begin(), batches.end(), r.batch_size) == batches.end()) {
            batches.push_back(r.batch_size);
        }
        hi = std::max(hi, r.total_seconds);
    }
    std::sort(batches.begin(), batches.end());
    if (hi <= 0.0) {
        hi = 1.0;
    }
    Frame f;
    f.ymax = hi * 1.05;
    std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"760\" height=\"370\">\n";
    s += axes(f, "batch size", "total runtime (s)");
    const double group_w = f.width / static_cast<double>(std::max<std::size_t>(batches.size(), 1));
    const double bar_w = group_w * 0.8 / static_cast<double>(std::max<std::size_t>(solvers.size(), 1));
    for (std::size_t b = 0; b < batches.size(); ++b) {
        const double gx = f.left + group_w * static_cast<double>(b) + group_w * 0.1;
        s += "<text x=\"" + fmt("%.1f", gx + group_w * 0.4) + "\" y=\"" + fmt("%.1f", f.top + f.height + 14) +
             "\" font-size=\"10\" text-anchor=\"middle\">" + std::to_string(batches[b]) + "</text>\n";
        for (std::size_t k = 0; k < solvers.size(); ++k) {
            for (const auto& r : rows) {
                if (r.solver != solvers[k] || r.batch_size != batches[b]) {
                    continue;
                }
                const double x = gx + bar_w * static_cast<double>(k);
                const double y_search = f.sy(r.search_seconds);
                const double y_total = f.sy(r.total_seconds);
                // search part at the bottom, prediction stacked on top (lighter)
                s += "<rect x=\"" + fmt("%.2f", x) + "\" y=\"" + fmt("%.2f", y_search) + "\" width=\"" +
                     fmt("%.2f", bar_w * 0.9) + "\" height=\"" + fmt("%.2f", f.sy(0) - y_search) +
                     "\" fill=\"" + kPalette[k % 10] + "\"/>\n";
                s += "<rect x=\"" + fmt("%.2f", x) + "\" y=\"" + fmt("%.2f", y_total) + "\" width=\"" +
                     fmt("%.2f", bar_w * 0.9) + "\" height=\"" + fmt("%.2f", y_search - y_total) +
                     "\" fill=\"" + kPalette[k % 10] + "\" fill-opacity=\"0.4\"/>\n";
            }
        }
    }
    for (std::size_t k = 0; k < solvers.size(); ++k) {
        const double ly = f.top + 14.0 * static_cast<double>(k) + 10;
        s += "<rect x=\"600\" y=\"" + fmt("%.1f", ly - 8) + "\" width=\"10\" height=\"10\" fill=\"" +
             kPalette[k % 10] + "\"/>\n<text x=\"616\" y=\"" + fmt("%.1f", ly) + "\" font-size=\"11\">" +
             escape(solvers[k]) + "</text>\n";
    }
    s += "</svg>\n";
    return s;
}

} // namespace cfpath
