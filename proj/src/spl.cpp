#include "adme/spl.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <memory>
#include <variant>

#include "adme/error.hpp"
#include "adme/text.hpp"

namespace adme {

const char* to_string(TagKind kind) {
    switch (kind) {
        case TagKind::Title: return "title";
        case TagKind::Paragraph: return "paragraph";
        case TagKind::Item: return "item";
    }
    return "paragraph";
}

namespace {

struct XmlNode;
using XmlChild = std::variant<std::unique_ptr<XmlNode>, std::string>;

struct XmlNode {
    std::string name;
    std::vector<std::pair<std::string, std::string>> attrs;
    std::vector<XmlChild> children;

    const std::string* attr(std::string_view key) const {
        for (const auto& [k, v] : attrs)
            if (k == key) return &v;
        return nullptr;
    }
};

// Minimal non-validating XML reader; enough for SPL documents. The parse_spl
// contract assumes well-formed input, so errors report position and bail.
class XmlReader {
  public:
    explicit XmlReader(std::string_view src) : src_(src) {}

    std::unique_ptr<XmlNode> parse_document() {
        skip_misc();
        auto root = parse_element();
        skip_misc();
        if (pos_ != src_.size()) fail("trailing content after document element");
        return root;
    }

  private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError("XML parse error: " + msg, static_cast<long>(pos_));
    }

    bool eof() const { return pos_ >= src_.size(); }
    char peek() const { return src_[pos_]; }
    bool starts(std::string_view s) const { return src_.compare(pos_, s.size(), s) == 0; }

    void skip_ws() {
        while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
    }

    // Prolog, comments, processing instructions, doctype.
    void skip_misc() {
        for (;;) {
            skip_ws();
            if (starts("<?")) {
                auto end = src_.find("?>", pos_);
                if (end == std::string_view::npos) fail("unterminated processing instruction");
                pos_ = end + 2;
            } else if (starts("<!--")) {
                auto end = src_.find("-->", pos_);
                if (end == std::string_view::npos) fail("unterminated comment");
                pos_ = end + 3;
            } else if (starts("<!")) {
                auto end = src_.find('>', pos_);
                if (end == std::string_view::npos) fail("unterminated declaration");
                pos_ = end + 1;
            } else {
                return;
            }
        }
    }

    std::string parse_name() {
        std::size_t start = pos_;
        while (!eof()) {
            char c = peek();
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == ':' || c == '-' ||
                c == '.')
                ++pos_;
            else
                break;
        }
        if (pos_ == start) fail("expected name");
        return std::string(src_.substr(start, pos_ - start));
    }

    std::string decode_entities(std::string_view raw) {
        std::string out;
        out.reserve(raw.size());
        for (std::size_t i = 0; i < raw.size();) {
            if (raw[i] != '&') {
                out.push_back(raw[i++]);
                continue;
            }
            auto semi = raw.find(';', i);
            if (semi == std::string_view::npos) fail("unterminated entity reference");
            std::string_view ent = raw.substr(i + 1, semi - i - 1);
            if (ent == "amp") out.push_back('&');
            else if (ent == "lt") out.push_back('<');
            else if (ent == "gt") out.push_back('>');
            else if (ent == "quot") out.push_back('"');
            else if (ent == "apos") out.push_back('\'');
            else if (!ent.empty() && ent[0] == '#') {
                long code = 0;
                if (ent.size() > 1 && (ent[1] == 'x' || ent[1] == 'X'))
                    code = std::strtol(std::string(ent.substr(2)).c_str(), nullptr, 16);
                else
                    code = std::strtol(std::string(ent.substr(1)).c_str(), nullptr, 10);
                append_utf8(out, code);
            } else {
                fail("unknown entity &" + std::string(ent) + ";");
            }
            i = semi + 1;
        }
        return out;
    }

    static void append_utf8(std::string& out, long code) {
        if (code < 0x80) {
            out.push_back(static_cast<char>(code));
        } else if (code < 0x800) {
            out.push_back(static_cast<char>(0xC0 | (code >> 6)));
            out.push_back(static_cast<char>(0x80 | (code & 0x3F)));
        } else if (code < 0x10000) {
            out.push_back(static_cast<char>(0xE0 | (code >> 12)));
            out.push_back(static_cast<char>(0x80 | ((code >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (code & 0x3F)));
        } else {
            out.push_back(static_cast<char>(0xF0 | (code >> 18)));
            out.push_back(static_cast<char>(0x80 | ((code >> 12) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | ((code >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (code & 0x3F)));
        }
    }

    std::unique_ptr<XmlNode> parse_element() {
        if (eof() || peek() != '<') fail("expected element");
        ++pos_;
        auto node = std::make_unique<XmlNode>();
        node->name = parse_name();
        for (;;) {
            skip_ws();
            if (eof()) fail("unterminated start tag <" + node->name);
            if (peek() == '>') {
                ++pos_;
                break;
            }
            if (starts("/>")) {
                pos_ += 2;
                return node;
            }
            std::string key = parse_name();
            skip_ws();
            if (eof() || peek() != '=') fail("expected '=' in attribute " + key);
            ++pos_;
            skip_ws();
            if (eof() || (peek() != '"' && peek() != '\'')) fail("expected quoted attribute value");
            char quote = peek();
            ++pos_;
            auto end = src_.find(quote, pos_);
            if (end == std::string_view::npos) fail("unterminated attribute value");
            node->attrs.emplace_back(std::move(key), decode_entities(src_.substr(pos_, end - pos_)));
            pos_ = end + 1;
        }
        parse_content(*node);
        return node;
    }

    void parse_content(XmlNode& node) {
        std::string text;
        auto flush_text = [&] {
            if (!text.empty()) {
                node.children.emplace_back(std::move(text));
                text.clear();
            }
        };
        for (;;) {
            if (eof()) fail("unterminated element <" + node.name + ">");
            if (peek() == '<') {
                if (starts("</")) {
                    flush_text();
                    pos_ += 2;
                    std::string name = parse_name();
                    if (name != node.name)
                        fail("mismatched end tag </" + name + "> for <" + node.name + ">");
                    skip_ws();
                    if (eof() || peek() != '>') fail("malformed end tag");
                    ++pos_;
                    return;
                }
                if (starts("<!--")) {
                    auto end = src_.find("-->", pos_);
                    if (end == std::string_view::npos) fail("unterminated comment");
                    pos_ = end + 3;
                    continue;
                }
                if (starts("<![CDATA[")) {
                    auto end = src_.find("]]>", pos_);
                    if (end == std::string_view::npos) fail("unterminated CDATA section");
                    text.append(src_.substr(pos_ + 9, end - pos_ - 9));
                    pos_ = end + 3;
                    continue;
                }
                if (starts("<?")) {
                    auto end = src_.find("?>", pos_);
                    if (end == std::string_view::npos) fail("unterminated processing instruction");
                    pos_ = end + 2;
                    continue;
                }
                flush_text();
                node.children.emplace_back(parse_element());
            } else {
                auto next = src_.find_first_of("<&", pos_);
                if (next == std::string_view::npos) fail("unterminated element <" + node.name + ">");
                if (src_[next] == '&') {
                    auto semi = src_.find(';', next);
                    if (semi == std::string_view::npos) fail("unterminated entity reference");
                    text.append(decode_entities(src_.substr(pos_, semi + 1 - pos_)));
                    pos_ = semi + 1;
                } else {
                    text.append(src_.substr(pos_, next - pos_));
                    pos_ = next;
                }
            }
        }
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

bool is_segment_root(const XmlNode& n) {
    return n.name == "title" || n.name == "paragraph" || n.name == "item";
}

TagKind kind_of(const XmlNode& n) {
    if (n.name == "title") return TagKind::Title;
    if (n.name == "item") return TagKind::Item;
    return TagKind::Paragraph;
}

// Segment text = descendant text excluding nested segment roots, which are
// emitted as their own segments after the enclosing one (document order).
void emit_segment_roots(const XmlNode& el, std::vector<RawSegment>& out) {
    std::string buf;
    std::vector<const XmlNode*> nested;
    auto gather = [&](const XmlNode& n, auto&& self) -> void {
        for (const auto& child : n.children) {
            if (std::holds_alternative<std::string>(child)) {
                buf += std::get<std::string>(child);
            } else {
                const XmlNode& c = *std::get<std::unique_ptr<XmlNode>>(child);
                if (is_segment_root(c))
                    nested.push_back(&c);
                else
                    self(c, self);
            }
        }
    };
    gather(el, gather);
    std::string text = normalize_whitespace(buf);
    if (!text.empty()) out.push_back({kind_of(el), std::move(text)});
    for (const XmlNode* n : nested) emit_segment_roots(*n, out);
}

const std::string* section_code(const XmlNode& section) {
    for (const auto& child : section.children) {
        if (std::holds_alternative<std::unique_ptr<XmlNode>>(child)) {
            const XmlNode& c = *std::get<std::unique_ptr<XmlNode>>(child);
            if (c.name == "code") return c.attr("code");
        }
    }
    return nullptr;
}

// Collects segments under a coded section. Uncoded nested sections contribute
// to the enclosing coded section; coded nested sections are handled by the
// outer document walk.
void collect_section_segments(const XmlNode& node, std::vector<RawSegment>& out) {
    for (const auto& child : node.children) {
        if (!std::holds_alternative<std::unique_ptr<XmlNode>>(child)) continue;
        const XmlNode& c = *std::get<std::unique_ptr<XmlNode>>(child);
        if (is_segment_root(c)) {
            emit_segment_roots(c, out);
        } else if (c.name == "section") {
            if (section_code(c) == nullptr) collect_section_segments(c, out);
        } else if (c.name != "code") {
            collect_section_segments(c, out);
        }
    }
}

void walk_sections(const XmlNode& node, SplDocument& doc) {
    for (const auto& child : node.children) {
        if (!std::holds_alternative<std::unique_ptr<XmlNode>>(child)) continue;
        const XmlNode& c = *std::get<std::unique_ptr<XmlNode>>(child);
        if (c.name == "section") {
            if (const std::string* code = section_code(c)) {
                SplSection section;
                section.code = *code;
                collect_section_segments(c, section.segments);
                doc.sections.push_back(std::move(section));
            }
            walk_sections(c, doc);
        } else {
            walk_sections(c, doc);
        }
    }
}

const XmlNode* find_first(const XmlNode& node, std::string_view name) {
    for (const auto& child : node.children) {
        if (!std::holds_alternative<std::unique_ptr<XmlNode>>(child)) continue;
        const XmlNode& c = *std::get<std::unique_ptr<XmlNode>>(child);
        if (c.name == name) return &c;
        if (const XmlNode* found = find_first(c, name)) return found;
    }
    return nullptr;
}

bool looks_like_application_number(std::string_view s) {
    std::size_t i = 0;
    while (i < s.size() && std::isalpha(static_cast<unsigned char>(s[i]))) ++i;
    if (i == 0 || i == s.size()) return false;
    for (std::size_t j = i; j < s.size(); ++j)
        if (!std::isdigit(static_cast<unsigned char>(s[j]))) return false;
    return true;
}

}  // namespace

SplDocument parse_spl(std::string_view xml) {
    XmlReader reader(xml);
    std::unique_ptr<XmlNode> root = reader.parse_document();

    SplDocument doc;
    const XmlNode* set_id = find_first(*root, "setId");
    const std::string* set_id_root = set_id ? set_id->attr("root") : nullptr;
    if (set_id_root == nullptr || set_id_root->empty())
        throw ParseError("SPL document is missing its setId");
    doc.set_id = *set_id_root;

    if (const XmlNode* ver = find_first(*root, "versionNumber")) {
        if (const std::string* value = ver->attr("value")) {
            try {
                doc.version = std::max(1, std::stoi(*value));
            } catch (const std::exception&) {
                throw ParseError("invalid versionNumber value '" + *value + "'");
            }
        }
    }

    if (const XmlNode* approval = find_first(*root, "approval")) {
        if (const XmlNode* id = find_first(*approval, "id")) {
            if (const std::string* ext = id->attr("extension")) {
                if (looks_like_application_number(*ext)) doc.application_number = *ext;
            }
        }
    }

    walk_sections(*root, doc);
    return doc;
}

std::vector<RawSegment> extract_pk_section(const SplDocument& doc) {
    std::vector<RawSegment> out;
    for (const SplSection& section : doc.sections) {
        if (section.code == kPkLoinc)
            out.insert(out.end(), section.segments.begin(), section.segments.end());
    }
    return out;
}

std::vector<RawSegment> segment_paragraphs(const std::vector<RawSegment>& segments) {
    std::vector<RawSegment> out;
    std::string pending;
    TagKind pending_kind = TagKind::Paragraph;
    for (const RawSegment& seg : segments) {
        if (seg.kind == TagKind::Title) {
            out.push_back(seg);
            continue;
        }
        if (pending.empty()) pending_kind = seg.kind;
        std::string text = pending.empty() ? seg.text : pending + " " + seg.text;
        if (!text.empty() && text.back() == '.') {
            out.push_back({seg.kind, std::move(text)});
            pending.clear();
        } else {
            pending = std::move(text);
        }
    }
    if (!pending.empty()) out.push_back({pending_kind, std::move(pending)});
    return out;
}

std::vector<SplDocument> select_labels(const std::vector<LabelIndexEntry>& entries,
                                       const std::map<std::string, SplDocument>& docs) {
    // Highest version per application number, NDA-numbered labels only.
    std::map<std::string, const SplDocument*> best;
    std::vector<std::string> order;
    for (const LabelIndexEntry& entry : entries) {
        auto it = docs.find(entry.set_id);
        if (it == docs.end()) continue;
        const SplDocument& doc = it->second;
        if (doc.application_number.rfind("NDA", 0) != 0) continue;
        if (extract_pk_section(doc).empty()) continue;
        auto [slot, inserted] = best.try_emplace(doc.application_number, &doc);
        if (inserted)
            order.push_back(doc.application_number);
        else if (doc.version > slot->second->version)
            slot->second = &doc;
    }
    std::vector<SplDocument> out;
    out.reserve(order.size());
    for (const std::string& app : order) out.push_back(*best.at(app));
    return out;
}

}  // namespace adme
