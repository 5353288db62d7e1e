#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace lexiclass::textnorm {

/// Ordered sequence of lowercase, accent-free tokens made of letters and
/// digits only.
using TokenSeq = std::vector<std::string>;

/// Normalizes UTF-8 text: lowercases, strips accents (canonical decomposition
/// with combining marks deleted), replaces every non letter/digit/space
/// character with a single space, collapses space runs and trims.
///
/// Accent folding covers Latin-1 Supplement and Latin Extended-A; code points
/// outside those ranges are treated as punctuation. Idempotent.
std::string normalize(std::string_view text);

/// Splits normalized text on spaces; empty tokens are discarded.
TokenSeq tokenize(std::string_view normalized);

/// Removes every digit character from every token; tokens emptied by the
/// removal are dropped. Order preserved.
TokenSeq strip_digits(const TokenSeq& tokens);

}  // namespace lexiclass::textnorm
