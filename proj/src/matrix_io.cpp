#include "sjq/matrix_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sjq/errors.hpp"

namespace sjq {

using nlohmann::json;

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MalformedInput("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file: " + path);
    out << content;
}

MatrixXd read_matrix_csv(const std::string& path) {
    std::istringstream in(read_text_file(path));
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<double> row;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw MalformedInput("bad CSV cell '" + cell + "' in " + path);
            }
        }
        if (!row.empty()) rows.push_back(std::move(row));
    }
    if (rows.empty()) throw MalformedInput("empty CSV matrix in " + path);
    const std::size_t cols = rows[0].size();
    MatrixXd m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols) {
            throw MalformedInput("ragged CSV rows in " + path);
        }
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
    }
    return m;
}

void write_matrix_csv(const std::string& path, const MatrixXd& m) {
    std::ostringstream out;
    out.precision(17);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c > 0) out << ",";
            out << m(r, c);
        }
        out << "\n";
    }
    write_text_file(path, out.str());
}

namespace {

MatrixXd matrix_from_json(const json& j, const std::string& what) {
    if (!j.is_array() || j.empty()) throw MalformedInput(what + " must be a nonempty array");
    const std::size_t rows = j.size();
    const std::size_t cols = j[0].size();
    MatrixXd m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        if (!j[r].is_array() || j[r].size() != cols) {
            throw MalformedInput(what + " has ragged rows");
        }
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = j[r][c].get<double>();
    }
    return m;
}

json matrix_to_json(const MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

json parse_json_file(const std::string& path) {
    try {
        return json::parse(read_text_file(path));
    } catch (const json::parse_error& e) {
        throw MalformedInput("invalid JSON in " + path + ": " + e.what());
    }
}

}  // namespace

MatrixEnvelope read_matrix_json(const std::string& path) {
    json j = parse_json_file(path);
    if (!j.contains("matrix")) throw MalformedInput("matrix envelope missing 'matrix' in " + path);
    MatrixEnvelope env;
    env.matrix = matrix_from_json(j["matrix"], "matrix");
    const int dim = j.contains("dim") ? j["dim"].get<int>() : static_cast<int>(env.matrix.rows());
    if (dim != env.matrix.rows() || env.matrix.rows() != env.matrix.cols()) {
        throw MalformedInput("matrix envelope dimension mismatch in " + path);
    }
    if (j.contains("gram")) {
        env.space = InnerProductSpace::with_gram(matrix_from_json(j["gram"], "gram"));
        if (env.space.dim != dim) throw MalformedInput("gram dimension mismatch in " + path);
    } else {
        env.space = InnerProductSpace::standard(dim);
    }
    return env;
}

void write_matrix_json(const std::string& path, const MatrixXd& m, const MatrixXd* gram) {
    json j;
    j["dim"] = m.rows();
    j["matrix"] = matrix_to_json(m);
    if (gram != nullptr) j["gram"] = matrix_to_json(*gram);
    write_text_file(path, j.dump(2) + "\n");
}

CausalSet read_causal_set_json(const std::string& path) {
    json j = parse_json_file(path);
    if (!j.contains("n")) throw MalformedInput("causal set missing 'n' in " + path);
    CausalSet c;
    c.n = j["n"].get<int>();
    if (c.n < 0) throw MalformedInput("negative element count in " + path);
    c.rel.assign(static_cast<std::size_t>(c.n) * c.n, 0);
    if (j.contains("relations")) {
        for (const auto& pair : j["relations"]) {
            const int a = pair.at(0).get<int>();
            const int b = pair.at(1).get<int>();
            if (a < 0 || b < 0 || a >= c.n || b >= c.n) {
                throw MalformedInput("relation index out of range in " + path);
            }
            c.set(a, b);
        }
    }
    if (j.contains("coords")) {
        std::vector<std::array<double, 2>> coords;
        for (const auto& pt : j["coords"]) {
            coords.push_back({pt.at(0).get<double>(), pt.at(1).get<double>()});
        }
        if (static_cast<int>(coords.size()) != c.n) {
            throw MalformedInput("coords length mismatch in " + path);
        }
        c.coords = std::move(coords);
    }
    transitive_close(c);
    return c;
}

void write_causal_set_json(const std::string& path, const CausalSet& c) {
    json j;
    j["n"] = c.n;
    json rels = json::array();
    for (int x = 0; x < c.n; ++x) {
        for (int y = 0; y < c.n; ++y) {
            if (c.precedes(x, y)) rels.push_back(json::array({x, y}));
        }
    }
    j["relations"] = std::move(rels);
    if (c.coords) {
        json coords = json::array();
        for (const auto& pt : *c.coords) coords.push_back(json::array({pt[0], pt[1]}));
        j["coords"] = std::move(coords);
    }
    write_text_file(path, j.dump(2) + "\n");
}

void write_fock_operator_json(const std::string& path, const FockOperator& op) {
    json j;
    j["trunc"] = {{"modes", op.trunc.modes}, {"cutoff", op.trunc.cutoff}};
    j["valid_degree"] = op.valid_degree;
    json entries = json::array();
    for (Eigen::Index r = 0; r < op.matrix.rows(); ++r) {
        for (Eigen::Index c = 0; c < op.matrix.cols(); ++c) {
            entries.push_back(json::array({op.matrix(r, c).real(), op.matrix(r, c).imag()}));
        }
    }
    j["matrix"] = std::move(entries);
    write_text_file(path, j.dump(2) + "\n");
}

FockOperator read_fock_operator_json(const std::string& path) {
    json j = parse_json_file(path);
    FockOperator op;
    op.trunc.modes = j.at("trunc").at("modes").get<int>();
    op.trunc.cutoff = j.at("trunc").at("cutoff").get<int>();
    op.valid_degree = j.value("valid_degree", 0);
    const long d = op.trunc.dim();
    const auto& entries = j.at("matrix");
    if (static_cast<long>(entries.size()) != d * d) {
        throw MalformedInput("operator entry count mismatch in " + path);
    }
    op.matrix.resize(d, d);
    long idx = 0;
    for (long r = 0; r < d; ++r) {
        for (long c = 0; c < d; ++c, ++idx) {
            op.matrix(r, c) = {entries[idx].at(0).get<double>(), entries[idx].at(1).get<double>()};
        }
    }
    return op;
}

void write_fock_operator_csv(const std::string& path, const FockOperator& op) {
    std::ostringstream out;
    out.precision(17);
    out << "# modes=" << op.trunc.modes << " cutoff=" << op.trunc.cutoff << "\n";
    for (Eigen::Index r = 0; r < op.matrix.rows(); ++r) {
        for (Eigen::Index c = 0; c < op.matrix.cols(); ++c) {
            if (c > 0) out << ",";
            out << op.matrix(r, c).real() << "," << op.matrix(r, c).imag();
        }
        out << "\n";
    }
    write_text_file(path, out.str());
}

std::vector<VectorXd> read_covector_rows_csv(const std::string& path) {
    MatrixXd m = read_matrix_csv(path);
    std::vector<VectorXd> rows;
    for (Eigen::Index r = 0; r < m.rows(); ++r) rows.push_back(m.row(r).transpose());
    return rows;
}

}  // namespace sjq
