// Licensed under the Apache License, Version 2.0 (the "License"); you
// may not use this file except in compliance with the License.  You
// may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
// implied.  See the License for the specific language governing
// permissions and limitations under the License.

#ifndef RITZ_IO_HPP
#define RITZ_IO_HPP

#include <filesystem>
#include <string>
#include <vector>

namespace ritz {

/// Shortest decimal string that round-trips the exact double value.
/// Used everywhere a number ends up in a CSV/JSONL artifact so reruns are
/// byte-identical.
std::string format_double(double value);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& content);

/// Minimal CSV assembly; header is pinned by golden tests.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);
    void add_row(const std::vector<std::string>& cells);
    const std::string& text() const { return text_; }
    void save(const std::filesystem::path& path) const;

private:
    std::string text_;
    std::size_t columns_;
};

} // namespace ritz

#endif // RITZ_IO_HPP
