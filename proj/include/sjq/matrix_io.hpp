#ifndef SJQ_MATRIX_IO_HPP
#define SJQ_MATRIX_IO_HPP

#include <string>

#include "sjq/causet.hpp"
#include "sjq/fock.hpp"
#include "sjq/kahler.hpp"

namespace sjq {

// Row-major decimal CSV.
MatrixXd read_matrix_csv(const std::string& path);
void write_matrix_csv(const std::string& path, const MatrixXd& m);

// JSON envelope {"dim": n, "matrix": [[...], ...], "gram": [[...], ...]?};
// a missing gram means the identity.
struct MatrixEnvelope {
    InnerProductSpace space;
    MatrixXd matrix;
};
MatrixEnvelope read_matrix_json(const std::string& path);
void write_matrix_json(const std::string& path, const MatrixXd& m,
                       const MatrixXd* gram = nullptr);

// {"n": ..., "relations": [[i, j], ...], "coords": [[t, x], ...]?}
CausalSet read_causal_set_json(const std::string& path);
void write_causal_set_json(const std::string& path, const CausalSet& c);

// {"trunc": {"modes": N, "cutoff": c}, "matrix": [[re, im], ...] row-major}
void write_fock_operator_json(const std::string& path, const FockOperator& op);
FockOperator read_fock_operator_json(const std::string& path);
void write_fock_operator_csv(const std::string& path, const FockOperator& op);

// one covector per row, 2N ambient components
std::vector<VectorXd> read_covector_rows_csv(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace sjq

#endif
