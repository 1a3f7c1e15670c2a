// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "hints/attester.hpp"    // IWYU pragma: export
#include "hints/canonical.hpp"   // IWYU pragma: export
#include "hints/certified.hpp"   // IWYU pragma: export
#include "hints/certs.hpp"       // IWYU pragma: export
#include "hints/chain.hpp"       // IWYU pragma: export
#include "hints/date.hpp"        // IWYU pragma: export
#include "hints/digest.hpp"      // IWYU pragma: export
#include "hints/errors.hpp"      // IWYU pragma: export
#include "hints/histname.hpp"    // IWYU pragma: export
#include "hints/historian.hpp"   // IWYU pragma: export
#include "hints/journal.hpp"     // IWYU pragma: export
#include "hints/keyarchive.hpp"  // IWYU pragma: export
#include "hints/server.hpp"      // IWYU pragma: export
#include "hints/service.hpp"     // IWYU pragma: export
#include "hints/signature.hpp"   // IWYU pragma: export
#include "hints/transport.hpp"   // IWYU pragma: export
#include "hints/verify.hpp"      // IWYU pragma: export
