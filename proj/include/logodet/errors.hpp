// Copyright 2026 The logodet Authors
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

#include <stdexcept>
#include <string>

namespace logodet {

// Base class for all library errors so callers can catch everything at once.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

struct ZeroVector : Error {
  using Error::Error;
};

struct NotNormalized : Error {
  using Error::Error;
};

struct InsufficientData : Error {
  using Error::Error;
};

struct DegenerateCovariance : Error {
  using Error::Error;
};

struct InsufficientClasses : Error {
  using Error::Error;
};

struct InsufficientPositives : Error {
  using Error::Error;
};

struct DegenerateQuad : Error {
  using Error::Error;
};

struct OutOfFrame : Error {
  using Error::Error;
};

struct EmptyCrop : Error {
  using Error::Error;
};

struct EmptyInput : Error {
  using Error::Error;
};

struct NoPositives : Error {
  using Error::Error;
};

struct EmptyQuerySet : Error {
  using Error::Error;
};

struct MissingFeatureMap : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

struct FormatError : Error {
  using Error::Error;
};

struct CorruptPayload : Error {
  using Error::Error;
};

}  // namespace logodet
