// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace relaysim {

inline constexpr const char* kVersion = "0.1.0";

/// Build identifier recorded in run manifests. The build system passes the
/// source revision when one is known.
inline const char* build_id() {
#ifdef RELAYSIM_BUILD_ID
    return RELAYSIM_BUILD_ID;
#else
    return "unversioned";
#endif
}

}  // namespace relaysim
