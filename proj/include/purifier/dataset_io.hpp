#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "purifier/types.hpp"

namespace purifier {

// Dataset CSV format: header `id,label,f0,...,f{d-1}`, label in
// {0=Normal, 1=Anomalous, -1=Unknown}, floats with 17 significant digits so
// a written file reads back value-identical. UTF-8, LF line endings.

void write_dataset_csv(const Dataset& dataset, std::ostream& out);
void write_dataset_csv(const Dataset& dataset,
                       const std::filesystem::path& path);

Dataset read_dataset_csv(std::istream& in, DatasetRole role,
                         const std::string& source_name = "<stream>");
Dataset read_dataset_csv(const std::filesystem::path& path, DatasetRole role);

// 17-significant-digit float form used across CSV artifacts.
std::string format_double(double value);

}  // namespace purifier
