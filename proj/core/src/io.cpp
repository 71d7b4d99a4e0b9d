#include "fraisse/io.hpp"

#include <fstream>
#include <sstream>

#include "fraisse/error.hpp"

namespace fraisse {

namespace {

int parse_int(const std::string& tok) {
    try {
        std::size_t used = 0;
        int v = std::stoi(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::logic_error&) {
        throw Error("parse-error", "expected integer, got '" + tok + "'");
    }
}

}  // namespace

std::vector<std::vector<std::string>> tokenize_lines(std::string_view text) {
    std::vector<std::vector<std::string>> lines;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::vector<std::string> toks;
        for (std::string tok; ls >> tok;) toks.push_back(tok);
        if (!toks.empty()) lines.push_back(std::move(toks));
    }
    return lines;
}

Signature parse_signature_tokens(const std::vector<std::string>& tokens) {
    std::vector<Symbol> syms;
    for (std::size_t i = 1; i < tokens.size(); ++i) {
        auto colon = tokens[i].rfind(':');
        if (colon == std::string::npos) throw Error("parse-error", "symbol without arity: " + tokens[i]);
        syms.push_back({tokens[i].substr(0, colon), parse_int(tokens[i].substr(colon + 1))});
    }
    try {
        return Signature(std::move(syms));
    } catch (const std::invalid_argument& e) {
        throw Error("parse-error", e.what());
    }
}

std::string format_signature(const Signature& sig) {
    std::string out = "signature";
    for (const auto& s : sig.symbols()) out += " " + s.name + ":" + std::to_string(s.arity);
    return out;
}

Structure parse_structure(std::string_view text) {
    auto lines = tokenize_lines(text);
    if (lines.size() < 2 || lines[0][0] != "signature" || lines[1][0] != "size" || lines[1].size() != 2)
        throw Error("parse-error", "structure must start with 'signature' and 'size' lines");
    Structure s(parse_signature_tokens(lines[0]), parse_int(lines[1][1]));
    for (std::size_t i = 2; i < lines.size(); ++i) {
        const auto& l = lines[i];
        if (l[0] != "rel" || l.size() < 2) throw Error("parse-error", "unexpected line starting with " + l[0]);
        auto sym = s.signature().find(l[1]);
        if (!sym) throw Error("parse-error", "unknown symbol " + l[1]);
        Tuple t;
        for (std::size_t j = 2; j < l.size(); ++j) t.push_back(parse_int(l[j]));
        try {
            s.add(*sym, std::move(t));
        } catch (const std::invalid_argument& e) {
            throw Error("parse-error", e.what());
        }
    }
    return s;
}

std::string format_structure(const Structure& s) {
    std::ostringstream out;
    out << format_signature(s.signature()) << "\nsize " << s.size() << "\n";
    for (std::size_t sym = 0; sym < s.signature().size(); ++sym)
        for (const auto& t : s.tuples(sym)) {
            out << "rel " << s.signature()[sym].name;
            for (Elem e : t) out << ' ' << e;
            out << '\n';
        }
    return out.str();
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("io-error", "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Structure read_structure_file(const std::filesystem::path& path) { return parse_structure(read_text_file(path)); }

void write_structure_file(const std::filesystem::path& path, const Structure& s) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("io-error", "cannot write " + path.string());
    out << format_structure(s);
}

std::vector<std::vector<Elem>> parse_map_list(std::string_view text) {
    std::vector<std::vector<Elem>> maps;
    for (const auto& line : tokenize_lines(text)) {
        std::vector<Elem> m;
        for (const auto& tok : line) m.push_back(parse_int(tok));
        maps.push_back(std::move(m));
    }
    return maps;
}

std::string format_map(const std::vector<Elem>& map) {
    std::string out;
    for (std::size_t i = 0; i < map.size(); ++i) {
        if (i) out += ' ';
        out += std::to_string(map[i]);
    }
    return out;
}

std::string format_map_list(const std::vector<std::vector<Elem>>& maps) {
    std::string out;
    for (const auto& m : maps) out += format_map(m) + "\n";
    return out;
}

}  // namespace fraisse
