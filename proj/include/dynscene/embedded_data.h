// Copyright 2026 The dynscene Authors
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

#ifndef DYNSCENE_EMBEDDED_DATA_H_
#define DYNSCENE_EMBEDDED_DATA_H_

#include <string_view>

// Contents of the files under data/, compiled into the library so the
// binaries do not depend on the source tree at run time.
namespace dynscene::embedded {

std::string_view DescriptionTemplates();
std::string_view DefaultSamplingRanges();

}  // namespace dynscene::embedded

#endif  // DYNSCENE_EMBEDDED_DATA_H_
