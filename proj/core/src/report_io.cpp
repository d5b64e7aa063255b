#include "ramannli/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "ramannli/errors.hpp"

namespace ramannli {

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.8e", value);
    // snprintf honours LC_NUMERIC; pin the separator.
    for (char* c = buf; *c; ++c) {
        if (*c == ',') *c = '.';
    }
    return buf;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error(ErrorClass::Validation, "cannot open output file " + path.string());
    os << content;
    if (!os) throw Error(ErrorClass::Validation, "failed writing output file " + path.string());
}

}  // namespace ramannli
