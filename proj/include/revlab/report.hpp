// Deterministic report emission: CSV tables (RFC-4180 quoting), JSON
// documents with stable key order, minimal SVG figures, and a manifest with
// content digests. Identical inputs produce identical bytes.
#ifndef REVLAB_REPORT_HPP
#define REVLAB_REPORT_HPP

#include <string>
#include <vector>

#include <json.hpp>

namespace revlab {

using json = nlohmann::json;

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> columns, std::string comment = "");
    void add_row(const std::vector<std::string>& cells);
    std::string str() const;
    std::size_t rows() const { return rows_.size(); }

    static std::string cell(double v);
    static std::string cell(long v);
    static std::string cell(int v) { return cell(long(v)); }
    static std::string cell(const std::string& s) { return s; }

private:
    std::string comment_;
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

// Minimal SVG 1.1 canvas with data-space coordinates.
class SvgCanvas {
public:
    SvgCanvas(double xmin, double xmax, double ymin, double ymax, int width = 640,
              int height = 480);
    void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& color,
                  double stroke_width = 1.0);
    void line(double x1, double y1, double x2, double y2, const std::string& color,
              double stroke_width = 1.0);
    void circle(double x, double y, double radius_px, const std::string& color,
                bool filled = true);
    void rect(double x1, double y1, double x2, double y2, const std::string& fill);
    void text(double x, double y, const std::string& s, int size_px = 12);
    std::string str() const;

private:
    double px(double x) const;
    double py(double y) const;
    double xmin_, xmax_, ymin_, ymax_;
    int width_, height_;
    std::vector<std::string> elements_;
};

// A report bundle: files staged in memory, then written together with a
// manifest carrying a digest per payload file.
class ReportBundle {
public:
    explicit ReportBundle(std::string out_dir) : out_dir_(std::move(out_dir)) {}
    void add_file(const std::string& name, const std::string& bytes);
    void add_note(const std::string& note);
    // Writes all files plus manifest.json; returns the list of paths written.
    std::vector<std::string> write(const json& config_echo);
    const std::string& out_dir() const { return out_dir_; }

private:
    std::string out_dir_;
    std::vector<std::pair<std::string, std::string>> files_;
    std::vector<std::string> notes_;
};

std::string json_str(const json& j);

}  // namespace revlab

#endif
