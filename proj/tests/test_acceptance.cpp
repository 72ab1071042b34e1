// SPDX-License-Identifier: Apache-2.0
//
// Full verification suite as a plain executable: one PASS/FAIL line per
// check, nonzero exit if any check fails. Budgeted for a few minutes on a
// single core; see each check in relaysim/verify.hpp for its pinned seed,
// grid, and trial count.

#include <cstdio>

#include "relaysim/verify.hpp"

int main() {
    const relaysim::VerifyReport report = relaysim::run_full_checks();
    relaysim::print_report(report, stdout);
    return report.all_passed() ? 0 : 1;
}
