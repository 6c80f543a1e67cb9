#include "factscope/text.hpp"

#include <array>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace factscope {
namespace {

// Latin-1 supplement and Latin Extended-A folding to ASCII base letters.
const char* fold_codepoint(char32_t cp) {
    switch (cp) {
        case U'à': case U'á': case U'â': case U'ã': case U'ä': case U'å':
        case U'À': case U'Á': case U'Â': case U'Ã': case U'Ä': case U'Å':
        case U'ā': case U'ă': case U'ą': case U'Ā': case U'Ă': case U'Ą':
            return "a";
        case U'è': case U'é': case U'ê': case U'ë':
        case U'È': case U'É': case U'Ê': case U'Ë':
        case U'ē': case U'ĕ': case U'ė': case U'ę': case U'ě':
        case U'Ē': case U'Ĕ': case U'Ė': case U'Ę': case U'Ě':
            return "e";
        case U'ì': case U'í': case U'î': case U'ï':
        case U'Ì': case U'Í': case U'Î': case U'Ï':
        case U'ĩ': case U'ī': case U'ĭ': case U'į': case U'ı':
            return "i";
        case U'ò': case U'ó': case U'ô': case U'õ': case U'ö': case U'ø':
        case U'Ò': case U'Ó': case U'Ô': case U'Õ': case U'Ö': case U'Ø':
        case U'ō': case U'ŏ': case U'ő': case U'Ō': case U'Ŏ': case U'Ő':
            return "o";
        case U'ù': case U'ú': case U'û': case U'ü':
        case U'Ù': case U'Ú': case U'Û': case U'Ü':
        case U'ũ': case U'ū': case U'ŭ': case U'ů': case U'ű': case U'ų':
            return "u";
        case U'ý': case U'ÿ': case U'Ý': return "y";
        case U'ñ': case U'Ñ': case U'ń': case U'ň': case U'ņ': return "n";
        case U'ç': case U'Ç': case U'ć': case U'č': case U'ĉ': return "c";
        case U'š': case U'ś': case U'ş': case U'Š': case U'Ś': case U'Ş': return "s";
        case U'ž': case U'ź': case U'ż': case U'Ž': case U'Ź': case U'Ż': return "z";
        case U'ł': case U'Ł': return "l";
        case U'ď': case U'đ': return "d";
        case U'ť': return "t";
        case U'ř': case U'ŕ': return "r";
        case U'ğ': case U'Ğ': return "g";
        case U'ß': return "ss";
        case U'æ': case U'Æ': return "ae";
        case U'œ': case U'Œ': return "oe";
        default: return nullptr;
    }
}

// Decodes one UTF-8 codepoint starting at i; advances i. Invalid bytes are
// treated as single-byte separators.
char32_t next_codepoint(std::string_view s, std::size_t& i) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    if (c < 0x80) { ++i; return c; }
    int len = 0;
    char32_t cp = 0;
    if ((c & 0xE0) == 0xC0) { len = 2; cp = c & 0x1F; }
    else if ((c & 0xF0) == 0xE0) { len = 3; cp = c & 0x0F; }
    else if ((c & 0xF8) == 0xF0) { len = 4; cp = c & 0x07; }
    else { ++i; return U' '; }
    if (i + len > s.size()) { ++i; return U' '; }
    for (int j = 1; j < len; ++j) {
        unsigned char cc = static_cast<unsigned char>(s[i + j]);
        if ((cc & 0xC0) != 0x80) { ++i; return U' '; }
        cp = (cp << 6) | (cc & 0x3F);
    }
    i += len;
    return cp;
}

void append_codepoint_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    std::size_t i = 0;
    auto flush = [&] {
        if (!current.empty()) {
            tokens.push_back(current);
            current.clear();
        }
    };
    while (i < text.size()) {
        char32_t cp = next_codepoint(text, i);
        if (cp < 0x80) {
            char c = static_cast<char>(cp);
            if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
            if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) {
                current += c;
            } else {
                flush();
            }
        } else if (const char* folded = fold_codepoint(cp)) {
            current += folded;
        } else if (cp == 0xA0 || (cp >= 0x2000 && cp <= 0x206F)) {
            flush();  // Unicode spaces and general punctuation
        } else {
            append_codepoint_utf8(current, cp);
        }
    }
    flush();
    return tokens;
}

std::string normalize(std::string_view text) {
    std::string out;
    for (const auto& tok : tokenize(text)) {
        if (!out.empty()) out += ' ';
        out += tok;
    }
    return out;
}

StopwordSet StopwordSet::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open stopword file: " + path);
    StopwordSet set;
    std::string line;
    while (std::getline(in, line)) {
        auto toks = tokenize(line);
        for (const auto& t : toks) set.insert(t);
    }
    return set;
}

StopwordSet StopwordSet::builtin_english() {
    static const std::array<const char*, 48> words = {
        "a",    "an",    "and",   "are",  "as",    "at",    "be",    "between",
        "but",  "by",    "did",   "do",   "does",  "for",   "from",  "had",
        "has",  "have",  "how",   "in",   "into",  "is",    "it",    "its",
        "of",   "on",    "or",    "over", "that",  "the",   "their", "there",
        "this", "to",    "under", "was",  "were",  "what",  "when",  "where",
        "which", "while", "who",  "whom", "whose", "why",   "will",  "with"};
    StopwordSet set;
    for (const char* w : words) set.insert(w);
    return set;
}

void StopwordSet::insert(std::string_view word) { words_.emplace(word); }

bool StopwordSet::contains(std::string_view word) const {
    return words_.find(std::string(word)) != words_.end();
}

}  // namespace factscope
