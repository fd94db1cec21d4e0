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

#ifndef DYNSCENE_ERRORS_H_
#define DYNSCENE_ERRORS_H_

#include <stdexcept>
#include <string>

namespace dynscene {

// Base of every error the library throws. Each subclass corresponds to one
// failure category of the public operations; callers that only care about
// "this input is bad" can catch Error.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define DYNSCENE_DEFINE_ERROR(Name)     \
  class Name : public Error {           \
   public:                              \
    using Error::Error;                 \
  }

// Malformed YAML document.
DYNSCENE_DEFINE_ERROR(SyntaxError);
// Missing, unknown or wrongly shaped field.
DYNSCENE_DEFINE_ERROR(SchemaError);
// Value outside its legal domain (negative mass, tau <= 0, ...).
DYNSCENE_DEFINE_ERROR(DomainError);
// Missing or unbalanced <think>/<answer> tags.
DYNSCENE_DEFINE_ERROR(TagError);
// Parameter vector inconsistent with its layout descriptor.
DYNSCENE_DEFINE_ERROR(LayoutError);
// Invalid configuration handed to the simulator or search.
DYNSCENE_DEFINE_ERROR(ConfigError);
// Simulation blew up.
DYNSCENE_DEFINE_ERROR(DivergenceError);
// Image or field dimensions disagree.
DYNSCENE_DEFINE_ERROR(ShapeError);
// Object multisets differ, so per-parameter errors are undefined.
DYNSCENE_DEFINE_ERROR(CompositionError);
// Event references an object that is not in the configuration.
DYNSCENE_DEFINE_ERROR(MismatchError);
// Filesystem or file-format failure.
DYNSCENE_DEFINE_ERROR(IoError);

#undef DYNSCENE_DEFINE_ERROR

}  // namespace dynscene

#endif  // DYNSCENE_ERRORS_H_
