// Copyright 2026 The ctt Authors.
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

#pragma once

namespace ctt {

inline constexpr const char* kLibraryVersion = "1.0.0";
// Text document kinds and the versions this build writes.
inline constexpr const char* kFormatVersions = "params v1; bundle v1; secrets v1; config v1; report v1; scheme v1";

}  // namespace ctt
