// Licensed to the Apache Software Foundation (ASF) under one
// or more contributor license agreements.  See the NOTICE file
// distributed with this work for additional information
// regarding copyright ownership.  The ASF licenses this file
// to you under the Apache License, Version 2.0 (the
// "License"); you may not use this file except in compliance
// with the License.  You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef __PSDSF_CLI_HPP__
#define __PSDSF_CLI_HPP__

#include <ostream>
#include <string>
#include <vector>

namespace psdsf {
namespace cli {

constexpr int kExitSuccess = 0;
constexpr int kExitFailure = 1;
constexpr int kExitInputError = 2;

// Runs one command line, excluding the program name. Returns the exit
// status: 0 on success, 1 when a verification or property check fails and
// 2 on malformed input.
int execute(
    const std::vector<std::string>& args,
    std::ostream& out,
    std::ostream& err);

} // namespace cli {
} // namespace psdsf {

#endif // __PSDSF_CLI_HPP__
