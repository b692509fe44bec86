#include "ergokit/io.hpp"

#include <cinttypes>
#include <fstream>

namespace ergokit::io {

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& columns)
    : path_(path), ncols_(columns.size()) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    f_ = std::fopen(path.string().c_str(), "wb");
    if (f_ == nullptr) throw validation_error("CsvWriter: cannot open " + path.string());
    std::string header;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i > 0) header += ',';
        header += columns[i];
    }
    header += '\n';
    std::fwrite(header.data(), 1, header.size(), f_);
}

CsvWriter::~CsvWriter() {
    if (f_ != nullptr) std::fclose(f_);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void CsvWriter::row(const std::vector<double>& values) {
    if (values.size() != ncols_)
        throw validation_error("CsvWriter: row width does not match header");
    std::string line;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) line += ',';
        line += format_double(values[i]);
    }
    line += '\n';
    std::fwrite(line.data(), 1, line.size(), f_);
}

void CsvWriter::raw_row(const std::string& line) {
    std::string l = line;
    l += '\n';
    std::fwrite(l.data(), 1, l.size(), f_);
}

spectral::HermitianOperator load_hermitian(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("dim") || !j.contains("entries"))
        throw validation_error("load_hermitian: expected {dim, entries}");
    const int n = j.at("dim").get<int>();
    const auto& e = j.at("entries");
    if (!e.is_array() || e.size() != static_cast<std::size_t>(n) * n)
        throw validation_error("load_hermitian: entries must hold dim^2 [re, im] pairs");
    spectral::MatrixXc H(n, n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            const auto& cell = e.at(static_cast<std::size_t>(r) * n + c);
            if (!cell.is_array() || cell.size() != 2)
                throw validation_error("load_hermitian: each entry must be a [re, im] pair");
            H(r, c) = spectral::Complex(cell.at(0).get<double>(), cell.at(1).get<double>());
        }
    }
    return spectral::HermitianOperator(H);
}

spectral::HermitianOperator load_hermitian_file(const std::filesystem::path& path) {
    return load_hermitian(read_json_file(path));
}

std::vector<double> load_real_vector(const nlohmann::json& j) {
    if (!j.is_array()) throw validation_error("load_real_vector: expected a JSON array");
    std::vector<double> v;
    v.reserve(j.size());
    for (const auto& x : j) v.push_back(x.get<double>());
    return v;
}

std::vector<double> load_real_vector_file(const std::filesystem::path& path) {
    return load_real_vector(read_json_file(path));
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw validation_error("invalid JSON in " + path.string() + ": " + e.what());
    }
    return j;
}

void write_json_file(const std::filesystem::path& path, const nlohmann::json& j) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw validation_error("cannot open " + path.string());
    out << j.dump(2) << '\n';
}

} // namespace ergokit::io
