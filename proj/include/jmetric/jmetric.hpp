// Copyright 2026 The jmetric Authors
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

#include "jmetric/bloch.hpp"
#include "jmetric/channels.hpp"
#include "jmetric/error.hpp"
#include "jmetric/linalg.hpp"
#include "jmetric/metric.hpp"
#include "jmetric/random.hpp"
#include "jmetric/states.hpp"
