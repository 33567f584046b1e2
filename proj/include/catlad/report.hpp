#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "catlad/common.hpp"
#include "catlad/csv.hpp"
#include "catlad/evaluation.hpp"
#include "catlad/experiment.hpp"

namespace catlad {

// ---------------------------------------------------------------------------
// Self-contained SVG plots. All coordinates are formatted with a fixed
// precision, so rendering is byte-stable.

namespace svg {

inline std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    return buf;
}

inline const std::vector<std::string>& palette() {
    static const std::vector<std::string> colors = {
        "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
        "#9467bd", "#8c564b", "#17becf", "#7f7f7f",
    };
    return colors;
}

struct Frame {
    double width = 860, height = 520;
    double left = 72, right = 190, top = 46, bottom = 56;
    double x_min = 0, x_max = 1, y_min = 0, y_max = 1;

    double px(double x) const {
        const double span = x_max > x_min ? x_max - x_min : 1.0;
        return left + (x - x_min) / span * (width - left - right);
    }
    double py(double y) const {
        const double span = y_max > y_min ? y_max - y_min : 1.0;
        return height - bottom - (y - y_min) / span * (height - top - bottom);
    }
};

inline void open_canvas(std::ofstream& out, const Frame& f, const std::string& title) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << num(f.width) << ' '
        << num(f.height) << "\" font-family=\"Helvetica, Arial, sans-serif\">\n"
        << "<rect width=\"" << num(f.width) << "\" height=\"" << num(f.height)
        << "\" fill=\"white\"/>\n"
        << "<text x=\"" << num(f.width / 2) << "\" y=\"24\" text-anchor=\"middle\" "
           "font-size=\"16\">" << title << "</text>\n";
}

inline void axes(std::ofstream& out, const Frame& f, const std::string& xlabel,
                 const std::string& ylabel) {
    const double x0 = f.left, x1 = f.width - f.right;
    const double y0 = f.height - f.bottom, y1 = f.top;
    out << "<line x1=\"" << num(x0) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(x1)
        << "\" y2=\"" << num(y0) << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << num(x0) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(x0)
        << "\" y2=\"" << num(y1) << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double fx = f.x_min + (f.x_max - f.x_min) * i / 4.0;
        const double fy = f.y_min + (f.y_max - f.y_min) * i / 4.0;
        out << "<line x1=\"" << num(f.px(fx)) << "\" y1=\"" << num(y0) << "\" x2=\""
            << num(f.px(fx)) << "\" y2=\"" << num(y0 + 5) << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << num(f.px(fx)) << "\" y=\"" << num(y0 + 19)
            << "\" text-anchor=\"middle\" font-size=\"11\">" << num(fx) << "</text>\n"
            << "<line x1=\"" << num(x0 - 5) << "\" y1=\"" << num(f.py(fy)) << "\" x2=\""
            << num(x0) << "\" y2=\"" << num(f.py(fy)) << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << num(x0 - 8) << "\" y=\"" << num(f.py(fy) + 4)
            << "\" text-anchor=\"end\" font-size=\"11\">" << num(fy) << "</text>\n";
    }
    out << "<text x=\"" << num((x0 + x1) / 2) << "\" y=\"" << num(f.height - 14)
        << "\" text-anchor=\"middle\" font-size=\"13\">" << xlabel << "</text>\n"
        << "<text x=\"18\" y=\"" << num((y0 + y1) / 2) << "\" text-anchor=\"middle\" "
           "font-size=\"13\" transform=\"rotate(-90 18 " << num((y0 + y1) / 2) << ")\">"
        << ylabel << "</text>\n";
}

struct Series {
    std::string name;
    std::vector<double> xs;
    std::vector<double> ys;
};

inline void write_line_plot(const std::string& path, const std::string& title,
                            const std::string& xlabel, const std::string& ylabel,
                            const std::vector<Series>& series) {
    std::ofstream out(path);
    if (!out) throw config_error("cannot write: " + path);
    Frame f;
    bool any = false;
    for (const Series& s : series)
        for (std::size_t i = 0; i < s.xs.size(); ++i) {
            if (!std::isfinite(s.ys[i])) continue;
            if (!any) {
                f.x_min = f.x_max = s.xs[i];
                f.y_min = f.y_max = s.ys[i];
                any = true;
            }
            f.x_min = std::min(f.x_min, s.xs[i]);
            f.x_max = std::max(f.x_max, s.xs[i]);
            f.y_min = std::min(f.y_min, s.ys[i]);
            f.y_max = std::max(f.y_max, s.ys[i]);
        }
    if (!any) {
        f.x_min = 0; f.x_max = 1; f.y_min = 0; f.y_max = 1;
    }
    const double pad = (f.y_max - f.y_min) * 0.05;
    f.y_min -= pad;
    f.y_max += pad + (pad == 0.0 ? 1.0 : 0.0);

    open_canvas(out, f, title);
    axes(out, f, xlabel, ylabel);
    for (std::size_t k = 0; k < series.size(); ++k) {
        const std::string& color = palette()[k % palette().size()];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.6\" points=\"";
        for (std::size_t i = 0; i < series[k].xs.size(); ++i) {
            if (!std::isfinite(series[k].ys[i])) continue;
            out << num(f.px(series[k].xs[i])) << ',' << num(f.py(series[k].ys[i])) << ' ';
        }
        out << "\"/>\n";
        const double ly = f.top + 16 + 18 * static_cast<double>(k);
        out << "<line x1=\"" << num(f.width - f.right + 12) << "\" y1=\"" << num(ly)
            << "\" x2=\"" << num(f.width - f.right + 34) << "\" y2=\"" << num(ly)
            << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
            << "<text x=\"" << num(f.width - f.right + 40) << "\" y=\"" << num(ly + 4)
            << "\" font-size=\"12\">" << series[k].name << "</text>\n";
    }
    out << "</svg>\n";
}

inline void write_box_plot(const std::string& path, const std::string& title,
                           const std::string& ylabel, const std::vector<std::string>& labels,
                           const std::vector<Summary>& boxes) {
    if (labels.size() != boxes.size()) throw config_error("box plot labels/boxes mismatch");
    std::ofstream out(path);
    if (!out) throw config_error("cannot write: " + path);
    Frame f;
    f.right = 40;
    f.x_min = 0;
    f.x_max = static_cast<double>(boxes.size());
    bool any = false;
    for (const Summary& b : boxes) {
        double lo = b.whisker_lo, hi = b.whisker_hi;
        for (double v : b.outliers) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        if (!any) {
            f.y_min = lo;
            f.y_max = hi;
            any = true;
        }
        f.y_min = std::min(f.y_min, lo);
        f.y_max = std::max(f.y_max, hi);
    }
    if (!any) {
        f.y_min = 0;
        f.y_max = 1;
    }
    const double pad = (f.y_max - f.y_min) * 0.08;
    f.y_min -= pad;
    f.y_max += pad + (pad == 0.0 ? 1.0 : 0.0);

    open_canvas(out, f, title);
    // Y axis only; x positions are categorical.
    const double y0 = f.height - f.bottom;
    out << "<line x1=\"" << num(f.left) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(f.left)
        << "\" y2=\"" << num(f.top) << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double fy = f.y_min + (f.y_max - f.y_min) * i / 4.0;
        out << "<line x1=\"" << num(f.left - 5) << "\" y1=\"" << num(f.py(fy)) << "\" x2=\""
            << num(f.left) << "\" y2=\"" << num(f.py(fy)) << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << num(f.left - 8) << "\" y=\"" << num(f.py(fy) + 4)
            << "\" text-anchor=\"end\" font-size=\"11\">" << num(fy) << "</text>\n";
    }
    out << "<text x=\"18\" y=\"" << num((y0 + f.top) / 2) << "\" text-anchor=\"middle\" "
           "font-size=\"13\" transform=\"rotate(-90 18 " << num((y0 + f.top) / 2) << ")\">"
        << ylabel << "</text>\n";

    for (std::size_t k = 0; k < boxes.size(); ++k) {
        const Summary& b = boxes[k];
        const std::string& color = palette()[k % palette().size()];
        const double cx = f.px(static_cast<double>(k) + 0.5);
        const double half = std::min(28.0, (f.width - f.left - f.right) /
                                               (2.2 * static_cast<double>(boxes.size())));
        out << "<line x1=\"" << num(cx) << "\" y1=\"" << num(f.py(b.whisker_lo)) << "\" x2=\""
            << num(cx) << "\" y2=\"" << num(f.py(b.q1)) << "\" stroke=\"black\"/>\n"
            << "<line x1=\"" << num(cx) << "\" y1=\"" << num(f.py(b.q3)) << "\" x2=\"" << num(cx)
            << "\" y2=\"" << num(f.py(b.whisker_hi)) << "\" stroke=\"black\"/>\n"
            << "<line x1=\"" << num(cx - half / 2) << "\" y1=\"" << num(f.py(b.whisker_lo))
            << "\" x2=\"" << num(cx + half / 2) << "\" y2=\"" << num(f.py(b.whisker_lo))
            << "\" stroke=\"black\"/>\n"
            << "<line x1=\"" << num(cx - half / 2) << "\" y1=\"" << num(f.py(b.whisker_hi))
            << "\" x2=\"" << num(cx + half / 2) << "\" y2=\"" << num(f.py(b.whisker_hi))
            << "\" stroke=\"black\"/>\n"
            << "<rect x=\"" << num(cx - half) << "\" y=\"" << num(f.py(b.q3)) << "\" width=\""
            << num(2 * half) << "\" height=\"" << num(f.py(b.q1) - f.py(b.q3))
            << "\" fill=\"" << color << "\" fill-opacity=\"0.35\" stroke=\"black\"/>\n"
            << "<line x1=\"" << num(cx - half) << "\" y1=\"" << num(f.py(b.median)) << "\" x2=\""
            << num(cx + half) << "\" y2=\"" << num(f.py(b.median))
            << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
        for (double v : b.outliers)
            out << "<circle cx=\"" << num(cx) << "\" cy=\"" << num(f.py(v))
                << "\" r=\"2.4\" fill=\"none\" stroke=\"" << color << "\"/>\n";
        out << "<text x=\"" << num(cx) << "\" y=\"" << num(y0 + 19)
            << "\" text-anchor=\"middle\" font-size=\"11\">" << labels[k] << "</text>\n";
    }
    out << "</svg>\n";
}

}  // namespace svg

// ---------------------------------------------------------------------------
// JSON round trip for reports, used by the `report` subcommand to re-render
// saved runs.

// JSON has no literal for NaN (it serializes as null), so numeric fields are
// read through these decoders.
inline double json_num(const nlohmann::json& v) {
    return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
}

inline std::vector<double> json_num_vec(const nlohmann::json& arr) {
    std::vector<double> out;
    out.reserve(arr.size());
    for (const auto& v : arr) out.push_back(json_num(v));
    return out;
}

inline nlohmann::json summary_to_json(const Summary& s) {
    return {{"mean", s.mean},       {"median", s.median},           {"q1", s.q1},
            {"q3", s.q3},           {"whisker_lo", s.whisker_lo},   {"whisker_hi", s.whisker_hi},
            {"outliers", s.outliers}, {"count", s.count}};
}

inline Summary summary_from_json(const nlohmann::json& j) {
    Summary s;
    s.mean = json_num(j.at("mean"));
    s.median = json_num(j.at("median"));
    s.q1 = json_num(j.at("q1"));
    s.q3 = json_num(j.at("q3"));
    s.whisker_lo = json_num(j.at("whisker_lo"));
    s.whisker_hi = json_num(j.at("whisker_hi"));
    s.outliers = json_num_vec(j.at("outliers"));
    s.count = j.at("count");
    return s;
}

inline nlohmann::json echo_to_json(const std::vector<std::pair<std::string, std::string>>& echo) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [k, v] : echo) arr.push_back({{"key", k}, {"value", v}});
    return arr;
}

inline std::vector<std::pair<std::string, std::string>> echo_from_json(const nlohmann::json& j) {
    std::vector<std::pair<std::string, std::string>> echo;
    for (const auto& e : j) echo.emplace_back(e.at("key"), e.at("value"));
    return echo;
}

inline nlohmann::json report_to_json(const ExperimentReport& rep) {
    nlohmann::json cells = nlohmann::json::array();
    for (const CellAggregate& c : rep.cells) {
        cells.push_back({{"loss", c.loss},
                         {"alpha", c.alpha},
                         {"has_alpha", c.has_alpha},
                         {"mean_risk", c.mean_risk},
                         {"final_risk_mean", c.final_risk_mean},
                         {"pred_logs", c.pred_logs},
                         {"mean_pred", c.mean_pred_raw},
                         {"pred_summary", summary_to_json(c.pred_summary)},
                         {"failures", c.failures}});
    }
    nlohmann::json deltas = nlohmann::json::array();
    for (const auto& [a, b, v] : rep.deltas)
        deltas.push_back({{"reference", a}, {"compared", b}, {"delta", v}});
    return {{"kind", "experiment"},
            {"model", rep.model_name},
            {"noise", rep.noise_name},
            {"shape", rep.shape},
            {"replications", rep.replications},
            {"steps", rep.steps},
            {"horizon", rep.horizon},
            {"risk_grid", rep.risk_grid},
            {"cells", cells},
            {"deltas", deltas},
            {"config", echo_to_json(rep.config_echo)}};
}

inline ExperimentReport report_from_json(const nlohmann::json& j) {
    ExperimentReport rep;
    rep.model_name = j.at("model");
    rep.noise_name = j.at("noise");
    rep.shape = json_num(j.at("shape"));
    rep.replications = j.at("replications");
    rep.steps = j.at("steps");
    rep.horizon = j.at("horizon");
    rep.risk_grid = j.at("risk_grid").get<std::vector<std::size_t>>();
    for (const auto& jc : j.at("cells")) {
        CellAggregate c;
        c.loss = jc.at("loss");
        c.alpha = json_num(jc.at("alpha"));
        c.has_alpha = jc.at("has_alpha");
        c.mean_risk = json_num_vec(jc.at("mean_risk"));
        c.final_risk_mean = json_num(jc.at("final_risk_mean"));
        c.pred_logs = json_num_vec(jc.at("pred_logs"));
        c.mean_pred_raw = json_num(jc.at("mean_pred"));
        c.pred_summary = summary_from_json(jc.at("pred_summary"));
        c.failures = jc.at("failures");
        rep.cells.push_back(std::move(c));
    }
    for (const auto& jd : j.at("deltas"))
        rep.deltas.emplace_back(jd.at("reference"), jd.at("compared"), json_num(jd.at("delta")));
    rep.config_echo = echo_from_json(j.at("config"));
    return rep;
}

inline nlohmann::json report_to_json(const RealDataReport& rep) {
    nlohmann::json cells = nlohmann::json::array();
    for (const RealCellResult& c : rep.cells) {
        nlohmann::json jc = {{"loss", c.loss},
                             {"alpha", c.alpha},
                             {"has_alpha", c.has_alpha},
                             {"pred_errors", c.pred_errors},
                             {"risks", c.risks},
                             {"mean_pred", c.mean_pred}};
        if (c.penalty_drop_step) jc["penalty_drop_step"] = *c.penalty_drop_step;
        cells.push_back(std::move(jc));
    }
    nlohmann::json deltas = nlohmann::json::array();
    for (const DeltaSeries& d : rep.deltas)
        deltas.push_back({{"reference", d.reference},
                          {"compared", d.compared},
                          {"per_checkpoint", d.per_checkpoint},
                          {"of_means", d.of_means}});
    return {{"kind", "real_data"},
            {"checkpoints", rep.checkpoints},
            {"cells", cells},
            {"deltas", deltas},
            {"config", echo_to_json(rep.config_echo)}};
}

inline RealDataReport real_report_from_json(const nlohmann::json& j) {
    RealDataReport rep;
    rep.checkpoints = j.at("checkpoints").get<std::vector<std::size_t>>();
    for (const auto& jc : j.at("cells")) {
        RealCellResult c;
        c.loss = jc.at("loss");
        c.alpha = json_num(jc.at("alpha"));
        c.has_alpha = jc.at("has_alpha");
        c.pred_errors = json_num_vec(jc.at("pred_errors"));
        c.risks = json_num_vec(jc.at("risks"));
        c.mean_pred = json_num(jc.at("mean_pred"));
        if (jc.count("penalty_drop_step"))
            c.penalty_drop_step = jc.at("penalty_drop_step").get<std::size_t>();
        rep.cells.push_back(std::move(c));
    }
    for (const auto& jd : j.at("deltas")) {
        DeltaSeries d;
        d.reference = jd.at("reference");
        d.compared = jd.at("compared");
        d.per_checkpoint = json_num_vec(jd.at("per_checkpoint"));
        d.of_means = json_num(jd.at("of_means"));
        rep.deltas.push_back(std::move(d));
    }
    rep.config_echo = echo_from_json(j.at("config"));
    return rep;
}

// ---------------------------------------------------------------------------
// Rendering to files.

inline std::string cell_alpha_field(bool has_alpha, double alpha) {
    return has_alpha ? format_double_brief(alpha) : "";
}

inline void save_report_json(const nlohmann::json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw config_error("cannot write: " + path);
    out << j.dump(1) << '\n';
    if (!out) throw config_error("write failed: " + path);
}

inline nlohmann::json load_report_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw config_error(path + ": bad report JSON: " + e.what());
    }
    return j;
}

struct RenderFormats {
    bool csv = true;
    bool svg = true;
    bool json = true;
};

inline void render_report(const ExperimentReport& rep, const std::string& dir,
                          const RenderFormats& fmt = {}) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    const auto path = [&](const char* name) { return (fs::path(dir) / name).string(); };

    if (fmt.csv) {
        std::vector<std::vector<std::string>> rows;
        for (const CellAggregate& c : rep.cells)
            for (std::size_t g = 0; g < rep.risk_grid.size(); ++g)
                rows.push_back({std::to_string(rep.risk_grid[g]), c.loss,
                                cell_alpha_field(c.has_alpha, c.alpha),
                                format_double(c.mean_risk[g])});
        write_csv(path("risk_trajectories.csv"), "step,loss,alpha,mean_risk", rows);

        rows.clear();
        for (const CellAggregate& c : rep.cells)
            rows.push_back({c.loss, cell_alpha_field(c.has_alpha, c.alpha),
                            format_double(c.pred_summary.mean), format_double(c.pred_summary.median),
                            format_double(c.pred_summary.q1), format_double(c.pred_summary.q3)});
        write_csv(path("prediction_errors.csv"), "loss,alpha,mean_log10,median_log10,q1,q3", rows);

        rows.clear();
        for (const CellAggregate& c : rep.cells)
            rows.push_back({rep.model_name, rep.noise_name, format_double_brief(rep.shape),
                            cell_alpha_field(c.has_alpha, c.alpha), c.loss,
                            format_double(c.final_risk_mean), format_double(c.pred_summary.mean)});
        write_csv(path("table.csv"), "model,noise,shape,alpha,loss,mean_risk,mean_log_pred_err",
                  rows);

        rows.clear();
        for (const CellAggregate& c : rep.cells)
            rows.push_back({c.loss, cell_alpha_field(c.has_alpha, c.alpha),
                            std::to_string(c.failures)});
        write_csv(path("failures.csv"), "loss,alpha,failures", rows);

        rows.clear();
        for (const auto& [a, b, v] : rep.deltas) rows.push_back({a, b, format_double(v)});
        write_csv(path("deltas.csv"), "reference,compared,delta", rows);
    }

    if (fmt.svg) {
        std::vector<svg::Series> series;
        for (const CellAggregate& c : rep.cells) {
            svg::Series s;
            s.name = cell_label(c.loss, c.has_alpha, c.alpha);
            for (std::size_t g = 0; g < rep.risk_grid.size(); ++g) {
                s.xs.push_back(static_cast<double>(rep.risk_grid[g]));
                s.ys.push_back(c.mean_risk[g]);
            }
            series.push_back(std::move(s));
        }
        svg::write_line_plot(path("risk_mean.svg"),
                             rep.model_name + " / " + rep.noise_name + "(" +
                                 format_double_brief(rep.shape) + "): mean empirical risk",
                             "step", "mean l1 risk", series);

        std::vector<std::string> labels;
        std::vector<Summary> boxes;
        for (const CellAggregate& c : rep.cells) {
            if (c.pred_logs.empty()) continue;
            labels.push_back(cell_label(c.loss, c.has_alpha, c.alpha));
            boxes.push_back(c.pred_summary);
        }
        svg::write_box_plot(path("pred_box.svg"),
                            rep.model_name + " / " + rep.noise_name + "(" +
                                format_double_brief(rep.shape) + "): forecast error",
                            "log10 prediction error", labels, boxes);
    }

    if (fmt.json) save_report_json(report_to_json(rep), path("report.json"));
}

inline void render_report(const RealDataReport& rep, const std::string& dir,
                          const RenderFormats& fmt = {}) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    const auto path = [&](const char* name) { return (fs::path(dir) / name).string(); };

    if (fmt.csv) {
        std::vector<std::vector<std::string>> rows;
        for (const RealCellResult& c : rep.cells)
            for (std::size_t g = 0; g < rep.checkpoints.size(); ++g)
                rows.push_back({std::to_string(rep.checkpoints[g]), c.loss,
                                cell_alpha_field(c.has_alpha, c.alpha), format_double(c.risks[g])});
        write_csv(path("risk_trajectories.csv"), "step,loss,alpha,mean_risk", rows);

        rows.clear();
        for (const RealCellResult& c : rep.cells) {
            std::vector<double> logs;
            for (double v : c.pred_errors) logs.push_back(log10_floored(v));
            const Summary s = aggregate(logs);
            rows.push_back({c.loss, cell_alpha_field(c.has_alpha, c.alpha), format_double(s.mean),
                            format_double(s.median), format_double(s.q1), format_double(s.q3)});
        }
        write_csv(path("prediction_errors.csv"), "loss,alpha,mean_log10,median_log10,q1,q3", rows);

        rows.clear();
        for (const RealCellResult& c : rep.cells)
            for (std::size_t g = 0; g < rep.checkpoints.size(); ++g)
                rows.push_back({std::to_string(rep.checkpoints[g]), c.loss,
                                cell_alpha_field(c.has_alpha, c.alpha),
                                format_double(c.pred_errors[g])});
        write_csv(path("checkpoint_errors.csv"), "step,loss,alpha,pred_err", rows);

        rows.clear();
        for (const DeltaSeries& d : rep.deltas)
            for (std::size_t g = 0; g < rep.checkpoints.size(); ++g)
                rows.push_back({std::to_string(rep.checkpoints[g]), d.reference, d.compared,
                                format_double(d.per_checkpoint[g])});
        write_csv(path("deltas.csv"), "step,reference,compared,delta", rows);
    }

    if (fmt.svg) {
        std::vector<svg::Series> risk_series, err_series;
        for (const RealCellResult& c : rep.cells) {
            svg::Series r, e;
            r.name = e.name = cell_label(c.loss, c.has_alpha, c.alpha);
            for (std::size_t g = 0; g < rep.checkpoints.size(); ++g) {
                const double x = static_cast<double>(rep.checkpoints[g]);
                r.xs.push_back(x);
                r.ys.push_back(c.risks[g]);
                e.xs.push_back(x);
                e.ys.push_back(c.pred_errors[g]);
            }
            risk_series.push_back(std::move(r));
            err_series.push_back(std::move(e));
        }
        svg::write_line_plot(path("risk_mean.svg"), "empirical risk at checkpoints", "step",
                             "l1 risk", risk_series);
        svg::write_line_plot(path("pred_errors.svg"), "forecast error at checkpoints", "step",
                             "prediction error", err_series);
    }

    if (fmt.json) save_report_json(report_to_json(rep), path("report.json"));
}

}  // namespace catlad
