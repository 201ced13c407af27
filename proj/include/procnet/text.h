#ifndef PROCNET_TEXT_H_
#define PROCNET_TEXT_H_

#include <string>
#include <string_view>
#include <vector>

namespace procnet {

// Lowercases ASCII, Latin-1 and Latin Extended-A letters of a UTF-8 string.
// Other code points are copied unchanged. Invalid byte sequences are copied
// byte by byte.
std::string utf8_lower(std::string_view text);

// Decodes one code point starting at `pos`, advancing `pos`. Returns
// U+FFFD for an invalid sequence and skips one byte.
char32_t utf8_next(std::string_view text, size_t &pos);

void utf8_append(std::string &out, char32_t cp);

// True for code points that may appear inside a word: letters, digits and
// the underscore. Letters outside the Latin blocks are approximated by
// "not a known punctuation/symbol range".
bool is_word_char(char32_t cp);

std::string join(const std::vector<std::string> &parts, std::string_view sep);

}  // namespace procnet

#endif  // PROCNET_TEXT_H_
