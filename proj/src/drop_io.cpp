// SPDX-License-Identifier: Apache-2.0

#include "sparsechan/drop_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace sparsechan::io {

namespace {

[[noreturn]] void fail(const std::string& name, const std::string& field,
                       const std::string& what) {
    throw std::runtime_error(name + ": field '" + field + "': " + what);
}

std::string expect_kv(std::istream& is, const std::string& name, const std::string& key) {
    std::string k, v;
    if (!(is >> k)) fail(name, key, "missing");
    if (k != key) fail(name, key, "expected key, found '" + k + "'");
    if (!(is >> v)) fail(name, key, "missing value");
    return v;
}

std::uint64_t parse_u64(const std::string& name, const std::string& field, const std::string& s) {
    try {
        std::size_t pos = 0;
        const std::uint64_t v = std::stoull(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        fail(name, field, "not an unsigned integer: '" + s + "'");
    }
}

double parse_double(const std::string& name, const std::string& field, const std::string& s) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        fail(name, field, "not a number: '" + s + "'");
    }
}

void skip_comments(std::istream& is) {
    while (is >> std::ws, is.peek() == '#') {
        std::string line;
        std::getline(is, line);
    }
}

}  // namespace

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_drop(std::ostream& os, const DropRecord& drop) {
    const ChannelRealization& r = drop.realization;
    os << "# sparsechan drop file\n";
    os << "format 1\n";
    os << "seed " << r.seed << "\n";
    os << "drop " << drop.drop_index << "\n";
    os << "band " << to_string(r.band) << "\n";
    os << "mode " << to_string(r.mode) << "\n";
    os << "has_los " << (r.has_los ? 1 : 0) << "\n";
    os << "rays " << r.rays.size() << "\n";
    os << "# delay_s power aoa_az_deg aoa_el_deg is_los\n";
    for (const Ray& ray : r.rays) {
        os << format_double(ray.delay_s) << ' ' << format_double(ray.power) << ' '
           << format_double(ray.aoa_az_deg) << ' ' << format_double(ray.aoa_el_deg) << ' '
           << (ray.is_los ? 1 : 0) << "\n";
    }
}

void write_drop_file(const std::filesystem::path& path, const DropRecord& drop) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
    write_drop(os, drop);
    if (!os) throw std::runtime_error("write failed: " + path.string());
}

DropRecord read_drop(std::istream& is, const std::string& name) {
    skip_comments(is);
    const std::string version = expect_kv(is, name, "format");
    if (version != "1") fail(name, "format", "unsupported version '" + version + "'");

    DropRecord out;
    ChannelRealization& r = out.realization;
    r.seed = parse_u64(name, "seed", expect_kv(is, name, "seed"));
    out.drop_index = parse_u64(name, "drop", expect_kv(is, name, "drop"));
    try {
        r.band = band_from_string(expect_kv(is, name, "band"));
    } catch (const std::invalid_argument& e) {
        fail(name, "band", e.what());
    }
    try {
        r.mode = mode_from_string(expect_kv(is, name, "mode"));
    } catch (const std::invalid_argument& e) {
        fail(name, "mode", e.what());
    }
    const std::string has_los = expect_kv(is, name, "has_los");
    if (has_los != "0" && has_los != "1") fail(name, "has_los", "expected 0 or 1");
    r.has_los = has_los == "1";
    const std::uint64_t n = parse_u64(name, "rays", expect_kv(is, name, "rays"));
    if (n == 0) fail(name, "rays", "must be positive");

    skip_comments(is);
    r.rays.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        std::string delay, power, az, el, los;
        if (!(is >> delay >> power >> az >> el >> los))
            fail(name, "ray " + std::to_string(i), "truncated record");
        if (los != "0" && los != "1") fail(name, "ray " + std::to_string(i), "is_los not 0/1");
        Ray ray{parse_double(name, "ray delay", delay), parse_double(name, "ray power", power),
                parse_double(name, "ray aoa_az", az), parse_double(name, "ray aoa_el", el),
                los == "1"};
        r.rays.push_back(ray);
    }
    try {
        validate(r);
    } catch (const std::invalid_argument& e) {
        fail(name, "rays", e.what());
    }
    return out;
}

DropRecord read_drop_file(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open: " + path.string());
    return read_drop(is, path.filename().string());
}

void write_samples_csv(std::ostream& os, const std::vector<SampleRow>& rows) {
    os << "band,mode,variant,drop_index,gini\n";
    for (const SampleRow& row : rows) {
        os << to_string(row.band) << ',' << to_string(row.sample.mode) << ','
           << to_string(row.sample.variant) << ',' << row.sample.drop_index << ','
           << format_double(row.sample.value) << "\n";
    }
}

std::vector<SampleRow> read_samples_csv(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open: " + path.string());
    const std::string name = path.filename().string();
    std::string line;
    if (!std::getline(is, line)) fail(name, "header", "empty file");
    if (line != "band,mode,variant,drop_index,gini") fail(name, "header", "unexpected: " + line);

    std::vector<SampleRow> rows;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string band, mode, variant, drop, gini;
        if (!std::getline(ss, band, ',') || !std::getline(ss, mode, ',') ||
            !std::getline(ss, variant, ',') || !std::getline(ss, drop, ',') ||
            !std::getline(ss, gini))
            fail(name, "line " + std::to_string(lineno), "short row");
        SampleRow row;
        try {
            row.band = band_from_string(band);
            row.sample.mode = mode_from_string(mode);
            row.sample.variant = variant_from_string(variant);
        } catch (const std::invalid_argument& e) {
            fail(name, "line " + std::to_string(lineno), e.what());
        }
        row.sample.drop_index = parse_u64(name, "drop_index", drop);
        row.sample.value = parse_double(name, "gini", gini);
        rows.push_back(row);
    }
    return rows;
}

void write_cdf_csv(std::ostream& os, const std::vector<std::pair<double, double>>& series) {
    os << "gini,cdf\n";
    for (const auto& [v, f] : series) os << format_double(v) << ',' << format_double(f) << "\n";
}

std::string summary_json(const std::vector<mc::PercentileReport>& reports,
                         std::uint64_t master_seed, const std::string& treatment_note) {
    nlohmann::json j;
    j["seed"] = master_seed;
    if (!treatment_note.empty()) j["specular_treatment"] = treatment_note;
    j["runs"] = nlohmann::json::array();
    bool all_pass = true;
    for (const mc::PercentileReport& r : reports) {
        nlohmann::json run;
        run["band"] = to_string(r.band);
        run["mode"] = to_string(r.mode);
        run["variant"] = to_string(r.variant);
        run["n_drops"] = r.n_drops;
        run["p20"] = r.p20;
        run["p50"] = r.p50;
        run["p80"] = r.p80;
        if (r.reference_table) run["reference_table"] = mc::to_string(*r.reference_table);
        if (r.reference) {
            run["reference"] = {{"p20", r.reference->p20},
                                {"p50", r.reference->p50},
                                {"p80", r.reference->p80}};
        }
        if (r.deltas) {
            run["delta"] = {{"p20", r.deltas->p20},
                            {"p50", r.deltas->p50},
                            {"p80", r.deltas->p80}};
        }
        run["gated"] = r.gated;
        run["pass"] = r.pass;
        if (!r.pass) all_pass = false;
        j["runs"].push_back(run);
    }
    j["all_gates_pass"] = all_pass;
    return j.dump(2) + "\n";
}

std::string cdf_svg(const std::vector<std::pair<double, double>>& series,
                    const std::string& title) {
    constexpr int width = 480, height = 360;
    constexpr int ml = 50, mr = 15, mt = 30, mb = 40;
    const double plot_w = width - ml - mr;
    const double plot_h = height - mt - mb;
    const auto x_of = [&](double v) { return ml + v * plot_w; };
    const auto y_of = [&](double f) { return mt + (1.0 - f) * plot_h; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << width / 2 << "\" y=\"18\" text-anchor=\"middle\" font-size=\"13\">"
        << title << "</text>\n";
    for (int i = 0; i <= 5; ++i) {
        const double v = i / 5.0;
        svg << "<line x1=\"" << x_of(v) << "\" y1=\"" << mt + plot_h << "\" x2=\"" << x_of(v)
            << "\" y2=\"" << mt + plot_h + 5 << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << x_of(v) << "\" y=\"" << mt + plot_h + 18
            << "\" text-anchor=\"middle\" font-size=\"10\">" << v << "</text>\n";
        svg << "<line x1=\"" << ml - 5 << "\" y1=\"" << y_of(v) << "\" x2=\"" << ml << "\" y2=\""
            << y_of(v) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << ml - 8 << "\" y=\"" << y_of(v) + 3
            << "\" text-anchor=\"end\" font-size=\"10\">" << v << "</text>\n";
    }
    svg << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << plot_w << "\" height=\""
        << plot_h << "\" fill=\"none\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << ml + plot_w / 2 << "\" y=\"" << height - 6
        << "\" text-anchor=\"middle\" font-size=\"11\">Gini index</text>\n";
    svg << "<polyline fill=\"none\" stroke=\"#c0392b\" stroke-width=\"1.5\" points=\"";
    for (const auto& [v, f] : series) svg << x_of(v) << ',' << y_of(f) << ' ';
    svg << "\"/>\n</svg>\n";
    return svg.str();
}

}  // namespace sparsechan::io
