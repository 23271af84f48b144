#include "seqc/xml.hpp"

#include <expat.h>

#include <algorithm>
#include <memory>

#include "seqc/error.hpp"

namespace seqc::xml {

std::optional<std::string> Element::attr(std::string_view key) const {
    for (const auto& [k, v] : attributes)
        if (k == key) return v;
    return std::nullopt;
}

std::string Element::required_attr(std::string_view key) const {
    if (auto v = attr(key)) return *v;
    throw Error(ErrorCode::XmlSyntax,
                "line " + std::to_string(line) + ": <" + name + "> is missing attribute '" +
                    std::string(key) + "'",
                {name}, line);
}

void Element::expect_children(std::initializer_list<std::string_view> allowed) const {
    for (const auto& child : children) {
        if (std::find(allowed.begin(), allowed.end(), child.name) == allowed.end())
            throw Error(ErrorCode::XmlSyntax,
                        "line " + std::to_string(child.line) + ": unexpected element <" +
                            child.name + "> inside <" + name + ">",
                        {child.name}, child.line);
    }
}

namespace {

struct ParseState {
    XML_Parser parser = nullptr;
    std::vector<Element*> open;
    Element root;
    bool seen_root = false;
};

bool is_blank(std::string_view s) {
    return std::all_of(s.begin(), s.end(),
                       [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; });
}

void on_start(void* data, const XML_Char* name, const XML_Char** attrs) {
    auto* st = static_cast<ParseState*>(data);
    Element el;
    el.name = name;
    el.line = static_cast<int>(XML_GetCurrentLineNumber(st->parser));
    for (int i = 0; attrs[i] != nullptr; i += 2) el.attributes.emplace_back(attrs[i], attrs[i + 1]);

    if (st->open.empty()) {
        st->root = std::move(el);
        st->seen_root = true;
        st->open.push_back(&st->root);
    } else {
        auto& siblings = st->open.back()->children;
        siblings.push_back(std::move(el));
        st->open.push_back(&siblings.back());
    }
}

void on_end(void* data, const XML_Char*) {
    auto* st = static_cast<ParseState*>(data);
    Element* el = st->open.back();
    if (is_blank(el->text)) el->text.clear();
    st->open.pop_back();
}

void on_text(void* data, const XML_Char* s, int len) {
    auto* st = static_cast<ParseState*>(data);
    if (!st->open.empty()) st->open.back()->text.append(s, static_cast<size_t>(len));
}

struct ParserDeleter {
    void operator()(XML_ParserStruct* p) const { XML_ParserFree(p); }
};

}  // namespace

Element parse(std::string_view text) {
    std::unique_ptr<XML_ParserStruct, ParserDeleter> parser(XML_ParserCreate("UTF-8"));
    if (!parser) throw Error(ErrorCode::Io, "failed to allocate XML parser");

    ParseState st;
    st.parser = parser.get();
    XML_SetUserData(parser.get(), &st);
    XML_SetElementHandler(parser.get(), on_start, on_end);
    XML_SetCharacterDataHandler(parser.get(), on_text);

    // Child vectors may reallocate while siblings are appended, which would
    // invalidate the open-element stack; depth-first order means only the
    // innermost open element ever gains children, so pointers stay valid.
    if (XML_Parse(parser.get(), text.data(), static_cast<int>(text.size()), XML_TRUE) ==
        XML_STATUS_ERROR) {
        int line = static_cast<int>(XML_GetCurrentLineNumber(parser.get()));
        throw Error(ErrorCode::XmlSyntax,
                    "line " + std::to_string(line) + ": " +
                        XML_ErrorString(XML_GetErrorCode(parser.get())),
                    {}, line);
    }
    if (!st.seen_root) throw Error(ErrorCode::XmlSyntax, "document has no root element", {}, 1);
    return std::move(st.root);
}

std::string escape(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    for (char c : raw) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\n': out += "&#10;"; break;
            case '\t': out += "&#9;"; break;
            case '\r': out += "&#13;"; break;
            default: out += c;
        }
    }
    return out;
}

Writer::Writer() : out_("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n") {}

void Writer::start_tag(std::string_view name) {
    out_.append(stack_.size() * 2, ' ');
    out_ += '<';
    out_ += name;
}

void Writer::attribute(std::string_view key, std::string_view value) {
    out_ += ' ';
    out_ += key;
    out_ += "=\"";
    out_ += escape(value);
    out_ += '"';
}

void Writer::open(std::string_view name,
                  std::initializer_list<std::pair<std::string_view, std::string_view>> attrs) {
    start_tag(name);
    for (const auto& [k, v] : attrs) attribute(k, v);
    out_ += ">\n";
    stack_.emplace_back(name);
}

void Writer::open(std::string_view name,
                  const std::vector<std::pair<std::string, std::string>>& attrs) {
    start_tag(name);
    for (const auto& [k, v] : attrs) attribute(k, v);
    out_ += ">\n";
    stack_.emplace_back(name);
}

void Writer::empty(std::string_view name,
                   std::initializer_list<std::pair<std::string_view, std::string_view>> attrs) {
    start_tag(name);
    for (const auto& [k, v] : attrs) attribute(k, v);
    out_ += "/>\n";
}

void Writer::empty(std::string_view name,
                   const std::vector<std::pair<std::string, std::string>>& attrs) {
    start_tag(name);
    for (const auto& [k, v] : attrs) attribute(k, v);
    out_ += "/>\n";
}

void Writer::close() {
    std::string name = std::move(stack_.back());
    stack_.pop_back();
    out_.append(stack_.size() * 2, ' ');
    out_ += "</" + name + ">\n";
}

std::string Writer::str() const { return out_; }

}  // namespace seqc::xml
