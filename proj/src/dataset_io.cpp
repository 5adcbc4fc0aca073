#include "purifier/dataset_io.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "purifier/error.hpp"

namespace purifier {

std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] =
        std::to_chars(buf, buf + sizeof(buf), value,
                      std::chars_format::general, 17);
    return std::string(buf, ptr);
}

namespace {

int label_to_int(Label label) { return static_cast<int>(label); }

Label label_from_int(long long v, const std::string& where) {
    switch (v) {
        case 0: return Label::Normal;
        case 1: return Label::Anomalous;
        case -1: return Label::Unknown;
        default:
            throw ConfigError(where + ": label must be 0, 1 or -1, got " +
                              std::to_string(v));
    }
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

template <typename T>
T parse_number(const std::string& field, const std::string& where) {
    T value{};
    const char* begin = field.data();
    const char* end = begin + field.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end || field.empty()) {
        throw ConfigError(where + ": cannot parse '" + field + "'");
    }
    return value;
}

}  // namespace

void write_dataset_csv(const Dataset& dataset, std::ostream& out) {
    out << "id,label";
    for (std::size_t c = 0; c < dataset.dim(); ++c) out << ",f" << c;
    out << "\n";
    for (const Sample& s : dataset.samples()) {
        out << s.id << ',' << label_to_int(s.label);
        for (double v : s.features) out << ',' << format_double(v);
        out << "\n";
    }
}

void write_dataset_csv(const Dataset& dataset,
                       const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);  // binary keeps LF endings
    if (!out) {
        throw ConfigError("cannot open '" + path.string() + "' for writing");
    }
    write_dataset_csv(dataset, out);
    if (!out) {
        throw ConfigError("failed while writing '" + path.string() + "'");
    }
}

Dataset read_dataset_csv(std::istream& in, DatasetRole role,
                         const std::string& source_name) {
    std::string line;
    if (!std::getline(in, line)) {
        throw ConfigError(source_name + ": empty file, expected a header");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();

    const std::vector<std::string> header = split_csv_line(line);
    if (header.size() < 3 || header[0] != "id" || header[1] != "label") {
        throw ConfigError(source_name +
                          ": line 1: header must be id,label,f0,...");
    }
    const std::size_t dim = header.size() - 2;
    for (std::size_t c = 0; c < dim; ++c) {
        if (header[c + 2] != "f" + std::to_string(c)) {
            throw ConfigError(source_name + ": line 1: feature column " +
                              std::to_string(c + 3) + " must be named f" +
                              std::to_string(c));
        }
    }

    std::vector<Sample> samples;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::string where =
            source_name + ": line " + std::to_string(line_no);
        const std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != dim + 2) {
            throw ConfigError(where + ": expected " + std::to_string(dim + 2) +
                              " fields, got " + std::to_string(fields.size()));
        }
        Sample s;
        s.id = parse_number<std::int64_t>(fields[0], where + ", field 1");
        s.label = label_from_int(
            parse_number<long long>(fields[1], where + ", field 2"), where);
        s.features.resize(dim);
        for (std::size_t c = 0; c < dim; ++c) {
            s.features[c] = parse_number<double>(
                fields[c + 2], where + ", field " + std::to_string(c + 3));
        }
        samples.push_back(std::move(s));
    }
    if (samples.empty()) {
        throw ConfigError(source_name + ": no data rows");
    }
    try {
        return Dataset(std::move(samples), role);
    } catch (const InvalidDataset& e) {
        throw ConfigError(source_name + ": " + e.what());
    }
}

Dataset read_dataset_csv(const std::filesystem::path& path, DatasetRole role) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open '" + path.string() + "' for reading");
    }
    return read_dataset_csv(in, role, path.string());
}

}  // namespace purifier
