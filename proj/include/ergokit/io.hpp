#pragma once

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "ergokit/errors.hpp"
#include "ergokit/spectral.hpp"

namespace ergokit::io {

// CSV writer with stable formatting: %.17g, fixed column order, '\n' endings.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& columns);
    ~CsvWriter();
    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

    void row(const std::vector<double>& values);
    void raw_row(const std::string& line);
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
    std::FILE* f_ = nullptr;
    std::size_t ncols_ = 0;
};

std::string format_double(double v); // %.17g

// Hermitian matrix from JSON: {"dim": n, "entries": [[re, im], ...]} row-major.
spectral::HermitianOperator load_hermitian(const nlohmann::json& j);
spectral::HermitianOperator load_hermitian_file(const std::filesystem::path& path);

// Real vector from a JSON array.
std::vector<double> load_real_vector(const nlohmann::json& j);
std::vector<double> load_real_vector_file(const std::filesystem::path& path);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);

} // namespace ergokit::io
