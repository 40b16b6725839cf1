#include <algorithm>
#include <cstdio>
#include <sstream>

#include "fallacy/error.hpp"
#include "fallacy/evaluator.hpp"
#include "fallacy/text.hpp"
#include "json.hpp"

namespace fallacy {

using nlohmann::ordered_json;

namespace {

ordered_json report_object(const EvalReport& r) {
    ordered_json obj;
    obj["dataset"] = r.dataset;
    obj["mode"] = std::string(to_string(r.mode));
    obj["macro_average"] = std::string(to_string(r.macro_average));
    obj["n_predictions"] = r.n_predictions;
    obj["accuracy"] = r.accuracy;
    obj["macro_f1"] = r.macro_f1;
    obj["n_failed_requests"] = r.n_failed_requests;
    obj["n_out_of_scheme"] = r.n_out_of_scheme;
    obj["n_case_insensitive_recoverable"] = r.n_case_insensitive_recoverable;
    ordered_json classes = ordered_json::array();
    for (const auto& c : r.per_class) {
        ordered_json row;
        row["label"] = c.label;
        row["precision"] = c.precision;
        row["recall"] = c.recall;
        row["f1"] = c.f1;
        row["support"] = c.support;
        row["predicted"] = c.predicted;
        classes.push_back(std::move(row));
    }
    obj["per_class"] = std::move(classes);
    ordered_json conf;
    conf["labels"] = r.confusion.labels;
    auto columns = r.confusion.labels;
    columns.emplace_back(kOutOfScheme);
    conf["columns"] = columns;
    conf["cells"] = r.confusion.cells;
    obj["confusion"] = std::move(conf);
    return obj;
}

EvalReport report_from_object(const nlohmann::json& obj) {
    EvalReport r;
    r.dataset = obj.at("dataset").get<std::string>();
    auto mode = parse_match_mode(obj.at("mode").get<std::string>());
    auto average = parse_macro_average(obj.at("macro_average").get<std::string>());
    if (!mode || !average) throw ParseError("report: unknown mode or macro_average");
    r.mode = *mode;
    r.macro_average = *average;
    r.n_predictions = obj.at("n_predictions").get<std::size_t>();
    r.accuracy = obj.at("accuracy").get<double>();
    r.macro_f1 = obj.at("macro_f1").get<double>();
    r.n_failed_requests = obj.at("n_failed_requests").get<std::size_t>();
    r.n_out_of_scheme = obj.at("n_out_of_scheme").get<std::size_t>();
    r.n_case_insensitive_recoverable = obj.value("n_case_insensitive_recoverable", std::size_t{0});
    for (const auto& row : obj.at("per_class")) {
        r.per_class.push_back({row.at("label").get<std::string>(), row.at("precision").get<double>(),
                               row.at("recall").get<double>(), row.at("f1").get<double>(),
                               row.at("support").get<std::size_t>(), row.value("predicted", std::size_t{0})});
    }
    r.confusion.labels = obj.at("confusion").at("labels").get<std::vector<std::string>>();
    r.confusion.cells = obj.at("confusion").at("cells").get<std::vector<std::vector<std::size_t>>>();
    return r;
}

std::string fixed4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

using Table = std::vector<std::vector<std::string>>;

// First column left-aligned, the rest right-aligned.
std::string emit(const Table& rows, TableFormat format) {
    std::ostringstream out;
    if (format == TableFormat::Delimited) {
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "\t" : "") << row[i];
            out << '\n';
        }
        return out.str();
    }
    std::vector<std::size_t> widths;
    for (const auto& row : rows) {
        widths.resize(std::max(widths.size(), row.size()), 0);
        for (std::size_t i = 0; i < row.size(); ++i) widths[i] = std::max(widths[i], text::char_count(row[i]));
    }
    for (const auto& row : rows) {
        std::string line;
        for (std::size_t i = 0; i < row.size(); ++i) {
            const std::string pad(widths[i] - text::char_count(row[i]), ' ');
            if (i > 0) line += "  ";
            line += i == 0 ? row[i] + pad : pad + row[i];
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out << line << '\n';
    }
    return out.str();
}

}  // namespace

std::string report_to_json(const EvalReport& report) { return report_object(report).dump(2) + "\n"; }

std::string reports_to_json(const std::vector<EvalReport>& reports) {
    ordered_json doc;
    ordered_json list = ordered_json::array();
    for (const auto& r : reports) list.push_back(report_object(r));
    doc["reports"] = std::move(list);
    return doc.dump(2) + "\n";
}

std::vector<EvalReport> reports_from_json(std::string_view json_text) {
    try {
        const auto doc = nlohmann::json::parse(json_text);
        std::vector<EvalReport> out;
        if (doc.contains("reports")) {
            for (const auto& obj : doc.at("reports")) out.push_back(report_from_object(obj));
        } else {
            out.push_back(report_from_object(doc));
        }
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("report: ") + e.what());
    }
}

std::string per_class_table(const EvalReport& report, TableFormat format) {
    Table rows{{"label", "precision", "recall", "f1", "support"}};
    for (const auto& c : report.per_class) {
        rows.push_back({c.label, fixed4(c.precision), fixed4(c.recall), fixed4(c.f1), std::to_string(c.support)});
    }
    std::string out = emit(rows, format);
    if (format == TableFormat::Aligned) {
        out += "accuracy " + fixed4(report.accuracy) + "  macro_f1 " + fixed4(report.macro_f1) + " (" +
               std::string(to_string(report.macro_average)) + ")  n " + std::to_string(report.n_predictions) +
               "  out_of_scheme " + std::to_string(report.n_out_of_scheme) + "  failed " +
               std::to_string(report.n_failed_requests) + "\n";
    }
    return out;
}

std::string confusion_grid(const ConfusionMatrix& matrix, TableFormat format) {
    Table rows;
    std::vector<std::string> header{"gold\\predicted"};
    header.insert(header.end(), matrix.labels.begin(), matrix.labels.end());
    header.emplace_back(kOutOfScheme);
    rows.push_back(std::move(header));
    for (std::size_t r = 0; r < matrix.labels.size(); ++r) {
        std::vector<std::string> row{matrix.labels[r]};
        for (auto c : matrix.cells[r]) row.push_back(std::to_string(c));
        rows.push_back(std::move(row));
    }
    return emit(rows, format);
}

std::string contingency_table(const KappaResult& kappa, TableFormat format) {
    Table rows;
    std::vector<std::string> header{"A\\B"};
    header.insert(header.end(), kappa.labels.begin(), kappa.labels.end());
    rows.push_back(std::move(header));
    for (std::size_t r = 0; r < kappa.labels.size(); ++r) {
        std::vector<std::string> row{kappa.labels[r]};
        for (auto c : kappa.contingency[r]) row.push_back(std::to_string(c));
        rows.push_back(std::move(row));
    }
    return emit(rows, format);
}

}  // namespace fallacy
