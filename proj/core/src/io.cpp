#include "kernid/io.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>
#include <system_error>

#include "json.hpp"

#include "kernid/errors.hpp"

namespace kernid {

namespace {

using nlohmann::json;

json parse_json(const std::string& text) {
    json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded()) throw ParseError("invalid JSON document");
    return doc;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

double require_number(const json& doc, const std::string& key) {
    if (!doc.contains(key)) throw ParseError("missing key: " + key);
    if (!doc[key].is_number()) throw ParseError("key must be a number: " + key);
    return doc[key].get<double>();
}

void reject_unknown_keys(const json& doc, std::initializer_list<const char*> allowed) {
    for (const auto& item : doc.items()) {
        bool known = false;
        for (const char* key : allowed) {
            if (item.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) throw ParseError("unknown key: " + item.key());
    }
}

Design design_from_json(const json& doc) {
    if (!doc.is_object()) throw ParseError("design document must be a JSON object");
    if (!doc.contains("dim") || !doc["dim"].is_number_integer()) {
        throw ParseError("design needs an integer \"dim\"");
    }
    const int dim = doc["dim"].get<int>();
    if (dim < 1) throw ParseError("\"dim\" must be positive");
    if (!doc.contains("points") || !doc["points"].is_array() || doc["points"].empty()) {
        throw ParseError("design needs a nonempty \"points\" array");
    }

    std::vector<std::vector<double>> points;
    points.reserve(doc["points"].size());
    for (const json& row : doc["points"]) {
        if (row.is_number()) {
            // Bare numbers are accepted for 1-d designs.
            if (dim != 1) throw ParseError("scalar point in a design with dim > 1");
            points.push_back({row.get<double>()});
            continue;
        }
        if (!row.is_array()) throw ParseError("each point must be an array of numbers");
        std::vector<double> coords;
        coords.reserve(row.size());
        for (const json& c : row) {
            if (!c.is_number()) throw ParseError("point coordinates must be numbers");
            coords.push_back(c.get<double>());
        }
        if (static_cast<int>(coords.size()) != dim) {
            throw ParseError("ragged points: expected " + std::to_string(dim) + " coordinates");
        }
        points.push_back(std::move(coords));
    }

    if (doc.contains("labels")) {
        if (!doc["labels"].is_array() || doc["labels"].size() != points.size()) {
            throw ParseError("\"labels\" must be an array matching the number of points");
        }
    }

    try {
        return Design(dim, std::move(points));
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
}

} // namespace

Design parse_design(const std::string& text) {
    const json doc = parse_json(text);
    reject_unknown_keys(doc, {"dim", "points", "labels"});
    return design_from_json(doc);
}

Design load_design_file(const std::string& path) { return parse_design(read_file(path)); }

LoadedParams parse_params(const std::string& text) {
    const json doc = parse_json(text);
    if (!doc.is_object()) throw ParseError("params document must be a JSON object");
    if (!doc.contains("variant") || !doc["variant"].is_string()) {
        throw ParseError("params need a string \"variant\"");
    }
    const std::string variant = doc["variant"].get<std::string>();
    double noise_var = 0.0;
    if (doc.contains("noise_var")) noise_var = require_number(doc, "noise_var");

    try {
        if (variant == "rbf_periodic") {
            reject_unknown_keys(doc, {"variant", "sigma", "ell", "tau", "s", "p", "noise_var"});
            RbfParams rbf(require_number(doc, "sigma"), require_number(doc, "ell"));
            PeriodicParams periodic(require_number(doc, "tau"), require_number(doc, "s"),
                                    require_number(doc, "p"));
            return {MixedKernelSpec::rbf_periodic(rbf, periodic, noise_var), false};
        }
        if (variant == "two_rbf") {
            reject_unknown_keys(doc,
                                {"variant", "sigma1", "ell1", "sigma2", "ell2", "noise_var"});
            RbfParams a(require_number(doc, "sigma1"), require_number(doc, "ell1"));
            RbfParams b(require_number(doc, "sigma2"), require_number(doc, "ell2"));
            bool reordered = false;
            MixedKernelSpec spec = MixedKernelSpec::two_rbf_canonical(a, b, noise_var, &reordered);
            return {std::move(spec), reordered};
        }
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
    throw ParseError("unknown variant: " + variant + " (expected rbf_periodic or two_rbf)");
}

LoadedParams load_params_file(const std::string& path) { return parse_params(read_file(path)); }

Dataset parse_dataset(const std::string& text) {
    const json doc = parse_json(text);
    reject_unknown_keys(doc, {"dim", "points", "labels", "responses"});
    Design design = design_from_json(doc);
    if (!doc.contains("responses") || !doc["responses"].is_array()) {
        throw ParseError("dataset needs a \"responses\" array");
    }
    Eigen::VectorXd y(static_cast<Eigen::Index>(doc["responses"].size()));
    Eigen::Index i = 0;
    for (const json& v : doc["responses"]) {
        if (!v.is_number()) throw ParseError("responses must be numbers");
        y[i++] = v.get<double>();
    }
    try {
        return Dataset(std::move(design), std::move(y));
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
}

Dataset load_dataset_file(const std::string& path) { return parse_dataset(read_file(path)); }

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_csv_matrix(std::ostream& os, const Eigen::MatrixXd& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j > 0) os << ',';
            os << format_double(m(i, j));
        }
        os << '\n';
    }
}

std::string csv_matrix_string(const Eigen::MatrixXd& m) {
    std::ostringstream os;
    write_csv_matrix(os, m);
    return os.str();
}

Eigen::MatrixXd parse_csv_matrix(std::istream& is) {
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        std::size_t pos = 0;
        while (pos <= line.size()) {
            const std::size_t comma = line.find(',', pos);
            const std::size_t end = comma == std::string::npos ? line.size() : comma;
            double value = 0.0;
            const auto res = std::from_chars(line.data() + pos, line.data() + end, value);
            if (res.ec != std::errc() || res.ptr != line.data() + end) {
                throw ParseError("invalid CSV number: " + line.substr(pos, end - pos));
            }
            row.push_back(value);
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw ParseError("ragged CSV rows");
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError("empty CSV matrix");
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows.front().size(); ++j) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
    }
    return m;
}

} // namespace kernid
