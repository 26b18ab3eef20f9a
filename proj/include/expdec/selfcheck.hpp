#pragma once

namespace expdec::selfcheck {

// invariant suites behind the `verify` CLI subcommand; prints one line per
// suite and returns overall success
bool run(bool full = true);

}  // namespace expdec::selfcheck
