#ifndef KERNELLAB_LAB_CSV_HPP
#define KERNELLAB_LAB_CSV_HPP

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace kernellab::lab {

// 17 significant digits: enough to round-trip any double, so rerunning an
// experiment with the same seed reproduces the file byte for byte.
inline std::string csv_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string csv_num(int v) { return std::to_string(v); }

// Minimal CSV emitter. Fields are written as-is; numeric fields go through
// csv_num and the few string fields we emit (family names, error codes)
// never contain commas, quotes, or newlines.
class CsvFile {
 public:
  CsvFile(const std::string& path, const std::vector<std::string>& header)
      : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot open " + path + " for writing");
    row(header);
  }

  void row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out_ << ',';
      out_ << fields[i];
    }
    out_ << '\n';
  }

  void close() {
    out_.close();
    if (!out_) throw std::runtime_error("failed writing CSV output");
  }

 private:
  std::ofstream out_;
};

}  // namespace kernellab::lab

#endif
