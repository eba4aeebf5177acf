#pragma once

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace kvforge {

// Raised on malformed textual payloads; the CLI maps it to exit code 2.
struct parse_error : std::runtime_error {
    explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

namespace io {

inline std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

inline std::vector<std::string> split_on(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

// "key=value" token accessor for header lines.
inline std::string header_field(const std::vector<std::string>& tokens, const std::string& key) {
    const std::string prefix = key + "=";
    for (const auto& t : tokens)
        if (t.rfind(prefix, 0) == 0) return t.substr(prefix.size());
    throw parse_error("missing header field " + key);
}

inline int parse_int(const std::string& s) {
    try {
        std::size_t pos = 0;
        int v = std::stoi(s, &pos);
        if (pos != s.size()) throw parse_error("trailing characters in integer: " + s);
        return v;
    } catch (const parse_error&) {
        throw;
    } catch (const std::exception&) {
        throw parse_error("bad integer: " + s);
    }
}

// Sequential reader over payload lines. Blank lines are skipped so
// concatenated payloads may be separated for readability.
class LineCursor {
  public:
    explicit LineCursor(const std::string& text) {
        std::istringstream ss(text);
        std::string line;
        while (std::getline(ss, line)) {
            while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
            if (!line.empty()) lines_.push_back(line);
        }
    }

    bool done() const { return pos_ >= lines_.size(); }
    const std::string& peek() const {
        if (done()) throw parse_error("unexpected end of payload");
        return lines_[pos_];
    }
    std::string next() {
        if (done()) throw parse_error("unexpected end of payload");
        return lines_[pos_++];
    }

  private:
    std::vector<std::string> lines_;
    std::size_t pos_ = 0;
};

}  // namespace io
}  // namespace kvforge
