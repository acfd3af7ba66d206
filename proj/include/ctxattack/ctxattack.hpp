/* Copyright 2026 The ctxattack Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef CTXATTACK_CTXATTACK_HPP_
#define CTXATTACK_CTXATTACK_HPP_

#include "ctxattack/backends.hpp"
#include "ctxattack/candidates.hpp"
#include "ctxattack/config.hpp"
#include "ctxattack/core_types.hpp"
#include "ctxattack/errors.hpp"
#include "ctxattack/harness.hpp"
#include "ctxattack/importance.hpp"
#include "ctxattack/refinement.hpp"
#include "ctxattack/remote_target.hpp"
#include "ctxattack/search.hpp"
#include "ctxattack/stub_backends.hpp"
#include "ctxattack/stub_suite.hpp"
#include "ctxattack/text.hpp"

#endif  // CTXATTACK_CTXATTACK_HPP_
