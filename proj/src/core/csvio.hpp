#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace owu {

// Deterministic CSV writer: fixed number formatting so identical runs
// produce byte-identical files.
class CsvWriter {
  public:
    explicit CsvWriter(std::vector<std::string> header);

    void row(const std::vector<std::string>& cells);
    const std::string& text() const { return text_; }
    void save(const std::string& path) const;

    static std::string num(double v);
    static std::string num(std::int64_t v);

  private:
    std::size_t columns_;
    std::string text_;
};

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);
void ensure_directory(const std::string& path);

} // namespace owu
