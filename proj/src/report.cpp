#include "revlab/report.hpp"

#include <filesystem>
#include <fstream>

#include "revlab/errors.hpp"
#include "revlab/util.hpp"

namespace revlab {

namespace {
std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}
}  // namespace

CsvTable::CsvTable(std::vector<std::string> columns, std::string comment)
    : comment_(std::move(comment)), columns_(std::move(columns)) {}

void CsvTable::add_row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_.size())
        throw validation_error("CsvTable: row width does not match the header");
    rows_.push_back(cells);
}

std::string CsvTable::cell(double v) { return fmt_double(v); }
std::string CsvTable::cell(long v) { return std::to_string(v); }

std::string CsvTable::str() const {
    std::string out;
    if (!comment_.empty()) out += "# " + comment_ + "\n";
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        if (i) out += ",";
        out += csv_quote(columns_[i]);
    }
    out += "\n";
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ",";
            out += csv_quote(row[i]);
        }
        out += "\n";
    }
    return out;
}

SvgCanvas::SvgCanvas(double xmin, double xmax, double ymin, double ymax, int width, int height)
    : xmin_(xmin), xmax_(xmax), ymin_(ymin), ymax_(ymax), width_(width), height_(height) {}

double SvgCanvas::px(double x) const {
    return (x - xmin_) / (xmax_ - xmin_) * (width_ - 40) + 20;
}
double SvgCanvas::py(double y) const {
    return height_ - 20 - (y - ymin_) / (ymax_ - ymin_) * (height_ - 40);
}

namespace {
std::string coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}
}  // namespace

void SvgCanvas::polyline(const std::vector<std::pair<double, double>>& pts,
                         const std::string& color, double stroke_width) {
    std::string e = "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"" +
                    coord(stroke_width) + "\" points=\"";
    for (const auto& [x, y] : pts) e += coord(px(x)) + "," + coord(py(y)) + " ";
    e += "\"/>";
    elements_.push_back(e);
}

void SvgCanvas::line(double x1, double y1, double x2, double y2, const std::string& color,
                     double stroke_width) {
    elements_.push_back("<line x1=\"" + coord(px(x1)) + "\" y1=\"" + coord(py(y1)) +
                        "\" x2=\"" + coord(px(x2)) + "\" y2=\"" + coord(py(y2)) +
                        "\" stroke=\"" + color + "\" stroke-width=\"" + coord(stroke_width) +
                        "\"/>");
}

void SvgCanvas::circle(double x, double y, double radius_px, const std::string& color,
                       bool filled) {
    elements_.push_back("<circle cx=\"" + coord(px(x)) + "\" cy=\"" + coord(py(y)) +
                        "\" r=\"" + coord(radius_px) + "\" " +
                        (filled ? "fill=\"" + color + "\""
                                : "fill=\"none\" stroke=\"" + color + "\"") +
                        "/>");
}

void SvgCanvas::rect(double x1, double y1, double x2, double y2, const std::string& fill) {
    const double ax = std::min(px(x1), px(x2)), ay = std::min(py(y1), py(y2));
    const double w = std::abs(px(x2) - px(x1)), h = std::abs(py(y2) - py(y1));
    elements_.push_back("<rect x=\"" + coord(ax) + "\" y=\"" + coord(ay) + "\" width=\"" +
                        coord(w) + "\" height=\"" + coord(h) + "\" fill=\"" + fill + "\"/>");
}

void SvgCanvas::text(double x, double y, const std::string& s, int size_px) {
    elements_.push_back("<text x=\"" + coord(px(x)) + "\" y=\"" + coord(py(y)) +
                        "\" font-size=\"" + std::to_string(size_px) +
                        "\" font-family=\"monospace\">" + s + "</text>");
}

std::string SvgCanvas::str() const {
    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
                      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
                      std::to_string(width_) + "\" height=\"" + std::to_string(height_) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (const std::string& e : elements_) out += e + "\n";
    out += "</svg>\n";
    return out;
}

std::string json_str(const json& j) { return j.dump(2) + "\n"; }

void ReportBundle::add_file(const std::string& name, const std::string& bytes) {
    files_.emplace_back(name, bytes);
}

void ReportBundle::add_note(const std::string& note) { notes_.push_back(note); }

std::vector<std::string> ReportBundle::write(const json& config_echo) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir_, ec);
    if (ec) throw validation_error("output directory not writable: " + out_dir_);

    std::vector<std::string> written;
    json manifest;
    manifest["tool"] = "revlab";
    manifest["version"] = "1.0";
    manifest["schema"] = "v1";
    manifest["config"] = config_echo;
    json files = json::array();
    for (const auto& [name, bytes] : files_) {
        const fs::path path = fs::path(out_dir_) / name;
        std::ofstream os(path, std::ios::binary);
        if (!os) throw validation_error("cannot write " + path.string());
        os.write(bytes.data(), std::streamsize(bytes.size()));
        os.close();
        files.push_back({{"name", name}, {"bytes", bytes.size()}, {"digest", fnv1a_hex(bytes)}});
        written.push_back(path.string());
    }
    manifest["files"] = files;
    manifest["notes"] = notes_;

    const fs::path mpath = fs::path(out_dir_) / "manifest.json";
    std::ofstream os(mpath, std::ios::binary);
    const std::string mbytes = json_str(manifest);
    os.write(mbytes.data(), std::streamsize(mbytes.size()));
    written.push_back(mpath.string());
    return written;
}

}  // namespace revlab
