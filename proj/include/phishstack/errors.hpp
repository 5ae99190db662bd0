/*
 * Copyright 2026 The PhishStack Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef PHISHSTACK_ERRORS_HPP
#define PHISHSTACK_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace phishstack {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define PHISHSTACK_ERROR_TYPE(Name)                         \
  class Name : public Error {                               \
   public:                                                  \
    explicit Name(const std::string& msg) : Error(msg) {}   \
  }

// Dataset loading / partitioning.
PHISHSTACK_ERROR_TYPE(MissingColumnError);
PHISHSTACK_ERROR_TYPE(NonNumericCellError);
PHISHSTACK_ERROR_TYPE(UnknownLabelValueError);
PHISHSTACK_ERROR_TYPE(EmptyDatasetError);
PHISHSTACK_ERROR_TYPE(TooFewSamplesPerClassError);
PHISHSTACK_ERROR_TYPE(FoldIndexOutOfRangeError);

// Learners.
PHISHSTACK_ERROR_TYPE(SingleClassTrainingError);
PHISHSTACK_ERROR_TYPE(DimensionMismatchError);

// Feature selection.
PHISHSTACK_ERROR_TYPE(IndexOutOfRangeError);

// Metrics.
PHISHSTACK_ERROR_TYPE(LengthMismatchError);
PHISHSTACK_ERROR_TYPE(SingleClassEvaluationError);

// Meta-learner.
PHISHSTACK_ERROR_TYPE(NonFiniteLossError);

// Model persistence.
PHISHSTACK_ERROR_TYPE(VersionMismatchError);
PHISHSTACK_ERROR_TYPE(SchemaHashMismatchError);
PHISHSTACK_ERROR_TYPE(CorruptPayloadError);

// Configuration / IO.
PHISHSTACK_ERROR_TYPE(ConfigError);
PHISHSTACK_ERROR_TYPE(IoError);

#undef PHISHSTACK_ERROR_TYPE

}  // namespace phishstack

#endif  // PHISHSTACK_ERRORS_HPP
