// Copyright 2026 The juntalab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// JSON for structures, CSV for samples and check reports. Loaders validate
// the schema and name the offending field path in their errors.

#ifndef JUNTALAB_IO_H_
#define JUNTALAB_IO_H_

#include <string>

#include "json.hpp"
#include "juntalab/boolfour.h"
#include "juntalab/detect.h"
#include "juntalab/junta.h"
#include "juntalab/learn.h"
#include "juntalab/setfn.h"
#include "juntalab/verify.h"

namespace juntalab {

using nlohmann::json;

// Raised for malformed input; `path` is e.g. "params.edges[2].w".
class SchemaError : public JuntaError {
 public:
  SchemaError(const std::string& path, const std::string& what)
      : JuntaError("field '" + path + "': " + what), path(path) {}
  std::string path;
};

json to_json(const FamilySpec& s);
FamilySpec family_spec_from_json(const json& j);

json to_json(const FourierTable& t);
FourierTable fourier_from_json(const json& j);

json to_json(const JuntaModel& m);
JuntaModel junta_model_from_json(const json& j);

json to_json(const PolynomialModel& m);
PolynomialModel polynomial_from_json(const json& j);

json to_json(const PmacTree& t);
PmacTree pmac_tree_from_json(const json& j);

json to_json(const DetectionResult& d);
DetectionResult detection_from_json(const json& j);

// CSV with header "mask,label".
std::string samples_to_csv(const SampleSet& s);
SampleSet samples_from_csv(const std::string& text, int n,
                           SampleSource source = SampleSource::kUniform);

// CSV with header "check,instance,n,slack,violations,runtime_ms"; the
// violations column holds the count.
std::string report_to_csv(const CheckReport& r);

// Parses JSON text; syntax errors become SchemaError at path "$".
json parse_json(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace juntalab

#endif  // JUNTALAB_IO_H_
