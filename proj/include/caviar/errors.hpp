// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef CAVIAR_ERRORS_HPP
#define CAVIAR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace caviar
{
    // Invalid configuration; the message starts with the offending field path.
    class ConfigError : public std::runtime_error
    {
    public:
        ConfigError(const std::string &field_path, const std::string &what)
            : std::runtime_error(field_path + ": " + what), field_path_(field_path) {}

        const std::string &field_path() const { return field_path_; }

    private:
        std::string field_path_;
    };

    class IoError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // Malformed or inconsistent file content.
    class FormatError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };
} // namespace caviar

#endif
