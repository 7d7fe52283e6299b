// Copyright 2026 The gumbel-waves Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef GUMBEL_IO_HPP
#define GUMBEL_IO_HPP

#include <map>
#include <string>
#include <string_view>

namespace gumbel {

/// Shortest decimal string that parses back to the same double.
std::string format_double(double v);
/// Exact inverse of format_double; throws std::invalid_argument.
double parse_double(std::string_view s);
long long parse_int(std::string_view s);

/// Flat key=value text with [section] headers. Keys before any header live
/// in section "". '#' starts a comment line.
class ConfigFile {
 public:
  using Section = std::map<std::string, std::string>;

  static ConfigFile parse(std::string_view text);
  static ConfigFile load(const std::string& path);

  std::string serialize() const;

  bool has_section(const std::string& name) const { return sections_.count(name) != 0; }
  const Section& section(const std::string& name) const;
  Section& section(const std::string& name) { return sections_[name]; }
  const std::map<std::string, Section>& sections() const { return sections_; }

 private:
  std::map<std::string, Section> sections_;
};

}  // namespace gumbel

#endif  // GUMBEL_IO_HPP
